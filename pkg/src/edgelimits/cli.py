"""Command-line runner: ``python -m edgelimits <subcommand> ...``.

Every subcommand writes one JSON report (stdout, or ``--out``). Reports
carry the seed and the full tolerance set. Exit statuses: 0 ok, 2 parse
error, 3 budget exceeded, 4 precondition violated.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as eio
from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, ParseError, PreconditionError, ShapeError
from .experiments import FAMILIES, converge_models
from .graphon import cut_distance_aligned, cut_seminorm, tau
from .graphs import named_graph
from .hilbert import CutProducts, FiniteSet, RankOneBall, SymTensor
from .orbit import GroupSpec, orbit_distance
from .regularity import greedy_decompose, verify_energy_identity
from .vertex_model import ENGINES, EdgeModel, elimination_order, partition_function

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_PRECONDITION = 0, 2, 3, 4

# flag defaults, applied after a --config file has filled in what the flags left unset
DEFAULTS = {"engine": "contract", "group": "perm", "seed": 0, "k": 4,
            "family": "perturb", "graphs": "K2,P3,K3", "dim": 2, "max_order": 2,
            "samples": 256, "refine": 100, "verbose": False}


class CliParseError(Exception):
    pass


def _tolerances(pairs) -> Tolerances:
    tol = DEFAULT_TOL
    for item in pairs or []:
        key, _, value = item.partition("=")
        if key not in tol.as_dict():
            raise ParseError("--tol", key, f"unknown tolerance; expected one of {sorted(tol.as_dict())}")
        try:
            tol = tol.updated(**{key: float(value)})
        except ValueError as exc:
            raise ParseError("--tol", key, str(exc)) from exc
    return tol


def _dictionary(choice, x: SymTensor):
    """``--dict`` is a file path or one of ``basis``, ``rank1``, ``cut``."""
    if choice in (None, "basis"):
        if x.order != 1:
            raise PreconditionError("the basis dictionary needs an order-1 tensor")
        return FiniteSet.standard_basis(x.dim)
    if choice == "rank1":
        return RankOneBall(x.order, x.dim)
    if choice == "cut":
        return CutProducts.uniform(x.dim)
    return eio.load(choice, "dictionary")


def _load_any(path):
    doc = eio.read_document(path)
    kind = eio.sniff_kind(doc)
    if kind not in ("tensor", "model"):
        raise ParseError(str(path), "<document>", "expected a tensor or an edge model")
    return eio.from_document(doc, kind, str(path))


def _graph(name):
    if Path(name).exists():
        return eio.load(name, "graph")
    try:
        return named_graph(name)
    except ShapeError as exc:
        raise ParseError(name, "<graph>", "neither a file nor a known graph name") from exc


def _require(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise ParseError("<arguments>", n, "required (as argument or in --config)")


def cmd_decompose(args, tol):
    _require(args, "tensor")
    x = eio.load(args.tensor, "tensor")
    d = _dictionary(args.dict, x)
    dec = greedy_decompose(x, d, args.k, tol)
    return {"decomposition": dec.to_dict(),
            "energy_report": verify_energy_identity(dec, d, tol).to_dict()}


def cmd_pf(args, tol):
    _require(args, "model", "graph")
    model = eio.load(args.model, "model")
    F = _graph(args.graph)
    out = {"value": partition_function(model, F, args.engine), "engine": args.engine}
    if args.verbose and args.engine == "contract":
        out["contraction_order"] = elimination_order(F)
    return out


def cmd_tau(args, tol):
    _require(args, "graphon", "graph")
    return {"value": tau(eio.load(args.graphon, "graphon"), _graph(args.graph))}


def cmd_cutnorm(args, tol):
    _require(args, "graphon")
    sv = cut_seminorm(eio.load(args.graphon, "graphon"))
    S, T = sv.locator
    return {"value": sv.value, "S": list(S), "T": list(T)}


def cmd_cutdist(args, tol):
    _require(args, "graphon", "other")
    res = cut_distance_aligned(eio.load(args.graphon, "graphon"), eio.load(args.other, "graphon"))
    return {"value": res.value, "permutation": list(res.permutation),
            "S": list(res.cut[0]), "T": list(res.cut[1]), "kind": "upper_bound_on_orbit_distance"}


def cmd_orbitdist(args, tol):
    _require(args, "x", "y")
    x, y = _load_any(args.x), _load_any(args.y)
    if type(x) is not type(y):
        raise PreconditionError("x and y must both be tensors or both be models")
    group = GroupSpec(args.group, x.dim, sample_count=args.samples,
                      refine_steps=args.refine, seed=args.seed)
    if args.dict in (None, "hilbert"):
        metric = "hilbert"
    elif isinstance(x, EdgeModel):
        metric = {k: (FiniteSet((SymTensor(1.0, dim=x.dim),)) if k == 0 else RankOneBall(k, x.dim))
                  for k in range(len(x))}
    else:
        metric = _dictionary(args.dict, x)
    res = orbit_distance(x, y, group, metric, tol)
    return {"value": res.value, "kind": res.kind, "witness": np.asarray(res.witness).tolist(),
            "group": args.group, "metric": "hilbert" if metric == "hilbert" else str(args.dict)}


def cmd_converge(args, tol):
    names = args.graphs if isinstance(args.graphs, list) else [g for g in args.graphs.split(",") if g]
    graphs = {g: _graph(g) for g in names}
    try:
        sizes = [int(s) for s in str(args.sizes).split(",")] if args.sizes else None
    except ValueError as exc:
        raise ParseError("--sizes", "sizes", str(exc)) from exc
    # without --i-max, a size list sets the number of indices
    i_max = args.i_max if args.i_max is not None else (len(sizes) if sizes else 8)
    rep = converge_models(args.family, graphs, i_max, dim=args.dim,
                          max_order=args.max_order, sizes=sizes, seed=args.seed,
                          engine=args.engine, tol=tol)
    out = rep.to_dict()
    if args.out:
        Path(args.out).with_suffix(".csv").write_text(rep.to_csv())
    return out


COMMANDS = {"decompose": cmd_decompose, "pf": cmd_pf, "tau": cmd_tau, "cutnorm": cmd_cutnorm,
            "cutdist": cmd_cutdist, "orbitdist": cmd_orbitdist, "converge": cmd_converge}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliParseError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with option values; flags win")
    common.add_argument("--engine", choices=ENGINES)
    common.add_argument("--group", choices=("perm", "signed_perm", "orthogonal"))
    common.add_argument("--dict", help="dictionary file, or basis / rank1 / cut / hilbert")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE")
    common.add_argument("-v", "--verbose", action="store_true", default=None)

    p = _Parser(prog="edgelimits", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("decompose", parents=[common])
    s.add_argument("tensor", nargs="?")
    s.add_argument("--k", type=int)
    s = sub.add_parser("pf", parents=[common])
    s.add_argument("model", nargs="?")
    s.add_argument("graph", nargs="?", help="graph file or name such as K3, C4, P3")
    s = sub.add_parser("tau", parents=[common])
    s.add_argument("graphon", nargs="?")
    s.add_argument("graph", nargs="?")
    s = sub.add_parser("cutnorm", parents=[common])
    s.add_argument("graphon", nargs="?")
    s = sub.add_parser("cutdist", parents=[common])
    s.add_argument("graphon", nargs="?")
    s.add_argument("other", nargs="?")
    s = sub.add_parser("orbitdist", parents=[common])
    s.add_argument("x", nargs="?")
    s.add_argument("y", nargs="?")
    s.add_argument("--samples", type=int)
    s.add_argument("--refine", type=int)
    s = sub.add_parser("converge", parents=[common])
    s.add_argument("--family", choices=FAMILIES)
    s.add_argument("--graphs", help="comma-separated graph names or files")
    s.add_argument("--i-max", dest="i_max", type=int)
    s.add_argument("--dim", type=int)
    s.add_argument("--max-order", dest="max_order", type=int)
    s.add_argument("--sizes", help="comma-separated graph sizes for the graphon family")
    return p


def _merge_config(args):
    if args.config:
        cfg = eio.read_document(args.config)
        if not isinstance(cfg, dict):
            raise ParseError(args.config, "<document>", "expected a JSON object")
        for key, value in cfg.items():
            if key in ("kind", "command"):
                continue
            if not hasattr(args, key):
                raise ParseError(args.config, key, "not an option of this subcommand")
            if getattr(args, key) is None:
                setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _merge_config(build_parser().parse_args(argv))
        tol = _tolerances(args.tol)
        body = COMMANDS[args.command](args, tol)
    except (CliParseError, ParseError) as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return EXIT_BUDGET
    except (PreconditionError, ShapeError) as exc:
        print(f"precondition violated: {exc}", file=stderr)
        return EXIT_PRECONDITION
    report = {"command": args.command, "seed": args.seed, "tolerances": tol.as_dict(), **body}
    text = eio.dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
