"""Convergent model families and their partition-function traces.

Three built-in families, indexed by ``i = 1..i_max``:

``perturb``
    ``h^i = ball_project(h + 2^-i * noise)`` level by level, around a random
    base model ``h`` in the unit ball. Each row carries the observed gap
    ``|pi(h^i)(F) - pi(h)(F)|`` and the telescoping upper bound on it.
``embed``
    the ``perturb`` iterates zero-padded to ``dim + i`` colours; the limit is
    still ``pi(h)``.
``graphon``
    ``tau(G_i, F)`` for Erdos-Renyi graphs ``G_i ~ G(n_i, p)``, against the
    limit ``p^|E(F)|``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, PreconditionError
from .graphon import graph_to_graphon, tau
from .graphs import SimpleGraph, random_graph
from .hilbert import RankOneBall, hilbert_norm, seminorm, symmetrize
from .vertex_model import EdgeModel, ball_project, partition_function, telescoping_upper_bound

FAMILIES = ("perturb", "embed", "graphon")


def tail_start(i_max: int) -> int:
    """First index of the tail window: the last ``ceil(i_max / 4)`` indices."""
    return i_max - math.ceil(i_max / 4) + 1


@dataclass
class ConvergenceReport:
    family: str
    graph_names: List[str]
    rows: List[dict] = field(default_factory=list)
    limit: Dict[str, float] = field(default_factory=dict)
    oscillation: Dict[str, float] = field(default_factory=dict)
    tail_from: int = 1
    params: dict = field(default_factory=dict)
    incomplete: Optional[str] = None

    def summarize(self):
        tail = [r for r in self.rows if r["i"] >= self.tail_from]
        for name in self.graph_names:
            vals = [r["values"][name] for r in tail]
            self.oscillation[name] = (max(vals) - min(vals)) if vals else None

    def bound_dominates(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(r["gap"][g] <= r["bound"][g] + tol.atol
                   for r in self.rows if r.get("bound") for g in self.graph_names)

    def to_dict(self) -> dict:
        return {"family": self.family, "graphs": self.graph_names, "rows": self.rows,
                "limit": self.limit, "oscillation": self.oscillation,
                "tail_from": self.tail_from, "params": self.params,
                "incomplete": self.incomplete}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "graph", "value", "limit", "gap", "bound", "step_distance"])
        for r in self.rows:
            for g in self.graph_names:
                bound = r["bound"][g] if r.get("bound") else ""
                step = "" if r.get("step_distance") is None else repr(r["step_distance"])
                w.writerow([r["i"], g, repr(r["values"][g]), repr(self.limit[g]),
                            repr(r["gap"][g]), bound if bound == "" else repr(bound), step])
        return buf.getvalue()


def _model_step_distance(a: EdgeModel, b: EdgeModel) -> float:
    # sum over levels of the R_k seminorm; levels k >= 3 contribute lower bounds
    total = abs(float(a[0].values) - float(b[0].values))
    for k in range(1, len(a)):
        total += seminorm(a[k] - b[k], RankOneBall(k, a.dim)).value
    return total


def _perturb_iterates(dim, max_order, i_max, noise, rng):
    base = EdgeModel.random(dim, max_order, rng)
    directions = []
    for k in range(max_order + 1):
        t = symmetrize(rng.standard_normal(dim ** k), k, dim)
        directions.append(t * (noise / hilbert_norm(t)) if noise else t * 0.0)
    iterates = []
    for i in range(1, i_max + 1):
        eps = 2.0 ** -i
        iterates.append(EdgeModel([ball_project(base[k] + eps * directions[k])
                                   for k in range(max_order + 1)]))
    return base, iterates


def converge_models(family: str, graphs: Dict[str, SimpleGraph], i_max: int, *,
                    dim: int = 2, max_order: int = 2, noise: float = 1.0,
                    sizes: Optional[Sequence[int]] = None, p: float = 0.5,
                    samples: int = 1, seed: int = 0, engine: str = "contract",
                    tol: Tolerances = DEFAULT_TOL) -> ConvergenceReport:
    """Evaluate a built-in family on ``graphs`` for ``i = 1..i_max``.

    For ``graphon`` the ``i``-th graph has ``sizes[i-1]`` vertices (default
    ``10 * 2^(i-1)``) and each value averages ``samples`` independent draws.
    A budget overflow ends the run early with ``incomplete`` set.
    """
    if family not in FAMILIES:
        raise PreconditionError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if i_max < 1:
        raise PreconditionError("i_max must be at least 1")
    if sizes is not None and len(sizes) < i_max:
        raise PreconditionError(f"need {i_max} graph sizes, got {len(sizes)}")
    rng = np.random.default_rng(seed)
    names = list(graphs)
    report = ConvergenceReport(family, names, tail_from=tail_start(i_max),
                               params={"i_max": i_max, "seed": seed, "dim": dim,
                                       "max_order": max_order, "noise": noise, "p": p,
                                       "samples": samples, "engine": engine})
    try:
        if family in ("perturb", "embed"):
            base, iterates = _perturb_iterates(dim, max_order, i_max, noise, rng)
            report.limit = {g: partition_function(base, F, engine) for g, F in graphs.items()}
            prev = None
            for i, h in enumerate(iterates, start=1):
                model, ref = (h, base) if family == "perturb" else \
                    (h.padded(dim + i), base.padded(dim + i))
                values = {g: partition_function(model, F, engine) for g, F in graphs.items()}
                report.rows.append({
                    "i": i, "dim": model.dim, "values": values,
                    "gap": {g: abs(values[g] - report.limit[g]) for g in names},
                    "bound": {g: telescoping_upper_bound(model, ref, F, tol)
                              for g, F in graphs.items()},
                    "step_distance": None if prev is None else _model_step_distance(h, prev),
                })
                prev = h
        else:
            if sizes is None:
                sizes = [10 * 2 ** (i - 1) for i in range(1, i_max + 1)]
            report.params["sizes"] = list(sizes)
            report.limit = {g: p ** F.n_edges for g, F in graphs.items()}
            for i in range(1, i_max + 1):
                ws = [graph_to_graphon(random_graph(sizes[i - 1], p, rng)) for _ in range(samples)]
                values = {g: float(np.mean([tau(w, F) for w in ws])) for g, F in graphs.items()}
                report.rows.append({
                    "i": i, "n": sizes[i - 1], "values": values,
                    "gap": {g: abs(values[g] - report.limit[g]) for g in names},
                    "bound": None, "step_distance": None,
                })
    except BudgetExceeded as exc:
        report.incomplete = f"stopped at i={len(report.rows) + 1}: {exc}"
    report.summarize()
    return report
