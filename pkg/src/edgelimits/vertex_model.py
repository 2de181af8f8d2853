"""Edge-colouring models and their partition functions.

For a model ``h = (h_0, ..., h_K)`` over ``n`` colours and a simple graph
``F`` the partition function is::

    pi(h)(F) = sum_{phi: E(F) -> [n]} prod_v h_{deg v}(phi(delta(v)))

Two engines evaluate it. ``brute`` enumerates all ``n^|E|`` colourings in
chunks. ``contract`` treats vertices as tensors and edges as bonds and sums
edges out one at a time in greedy min-fill order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, PreconditionError, ShapeError
from .graphs import SimpleGraph
from .hilbert import (EXACT, Dictionary, FiniteSet, RankOneBall, SymTensor,
                      hilbert_norm, seminorm, symmetrize)

BRUTE_BUDGET = 10**8
CONTRACT_BUDGET = 10**7
_CHUNK = 1 << 16

ENGINES = ("brute", "contract")


class EdgeModel:
    """Finite sequence ``(h_0, ..., h_K)``; ``h_k`` is an order-``k`` symmetric tensor."""

    __slots__ = ("tensors", "dim")

    def __init__(self, tensors: Sequence[SymTensor]):
        tensors = list(tensors)
        if not tensors:
            raise ShapeError("an edge model needs at least h_0")
        dims = {t.dim for t in tensors[1:]}
        if len(dims) > 1:
            raise ShapeError(f"levels disagree on the number of colours: {sorted(dims)}")
        n = dims.pop() if dims else tensors[0].dim
        for k, t in enumerate(tensors):
            if t.order != k:
                raise ShapeError(f"level {k} holds a tensor of order {t.order}")
        if tensors[0].dim != n:
            tensors[0] = SymTensor(tensors[0].values, dim=n)
        self.tensors = tuple(tensors)
        self.dim = n

    @property
    def max_order(self) -> int:
        return len(self.tensors) - 1

    def __getitem__(self, k: int) -> SymTensor:
        return self.tensors[k]

    def __len__(self):
        return len(self.tensors)

    def __repr__(self):
        return f"EdgeModel(dim={self.dim}, K={self.max_order})"

    def in_ball(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        return all(hilbert_norm(t) <= 1.0 + tol.atol for t in self.tensors)

    def map(self, fn) -> "EdgeModel":
        return EdgeModel([fn(t) for t in self.tensors])

    def padded(self, new_dim: int) -> "EdgeModel":
        """Embed into ``new_dim >= dim`` colours; new entries are zero."""
        if new_dim < self.dim:
            raise ShapeError("cannot pad to fewer colours")
        out = []
        for t in self.tensors:
            arr = np.zeros((new_dim,) * t.order)
            arr[(slice(0, self.dim),) * t.order] = t.values
            out.append(SymTensor(arr, dim=new_dim))
        return EdgeModel(out)

    @classmethod
    def random(cls, dim: int, max_order: int, rng: np.random.Generator,
               radius: Optional[float] = None) -> "EdgeModel":
        """Gaussian symmetric levels rescaled to lie in the unit ball.

        Each level gets norm ``radius`` or, if None, a uniform draw in ``(0, 1]``.
        """
        out = []
        for k in range(max_order + 1):
            t = symmetrize(rng.standard_normal(dim ** k), k, dim)
            r = rng.uniform(0.05, 1.0) if radius is None else radius
            nrm = hilbert_norm(t)
            out.append(t * (r / nrm) if nrm > 0 else t)
        return cls(out)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "tensors": [t.to_dict() for t in self.tensors]}

    @classmethod
    def from_dict(cls, doc: dict) -> "EdgeModel":
        n = int(doc["dim"])
        ts = [SymTensor.from_dict(t) for t in doc["tensors"]]
        if ts and ts[0].order == 0:
            ts[0] = SymTensor(ts[0].values, dim=n)
        return cls(ts)


# ---------------------------------------------------------------------------
# evaluation engines


def _brute(tensors: Sequence[np.ndarray], F: SimpleGraph, n: int,
           budget: int = BRUTE_BUDGET) -> float:
    m = F.n_edges
    if m == 0:
        return float(np.prod([float(t) for t in tensors]))
    if n ** m > budget:
        raise BudgetExceeded(f"{n}^{m} colourings exceed the brute-force budget {budget}")
    total = n ** m
    shape = (n,) * m
    scalar = 1.0
    active = []
    for v, t in enumerate(tensors):
        if F.degree(v) == 0:
            scalar *= float(t)
        else:
            active.append((F.incidence[v], t))
    partial = []
    for start in range(0, total, _CHUNK):
        colours = np.unravel_index(np.arange(start, min(start + _CHUNK, total)), shape)
        prod = np.ones(colours[0].shape)
        for inc, t in active:
            prod *= t[tuple(colours[e] for e in inc)]
        partial.append(prod.sum())
    return scalar * float(np.sum(partial))


def _einsum_merge(factors, drop: int):
    labels = sorted(set().union(*(lab for lab, _ in factors)))
    local = {lab: i for i, lab in enumerate(labels)}
    out = [lab for lab in labels if lab != drop]
    args = []
    for lab, arr in factors:
        args.extend([arr, [local[x] for x in lab]])
    args.append([local[x] for x in out])
    return tuple(out), np.einsum(*args, optimize=False)


def elimination_order(F: SimpleGraph) -> List[int]:
    """Greedy min-fill order on the edges of ``F``; ties go to the lowest edge id."""
    scopes = [set(F.incidence[v]) for v in range(F.n_vertices) if F.degree(v) > 0]
    remaining = set(range(F.n_edges))
    order = []
    while remaining:
        best = None
        for e in sorted(remaining):
            touching = [s for s in scopes if e in s]
            nbrs = sorted(set().union(*touching) - {e})
            fill = sum(1 for a, b in itertools.combinations(nbrs, 2)
                       if not any(a in s and b in s for s in scopes))
            if best is None or fill < best[0]:
                best = (fill, e)
        e = best[1]
        touching = [s for s in scopes if e in s]
        merged = set().union(*touching) - {e}
        scopes = [s for s in scopes if e not in s] + [merged]
        remaining.discard(e)
        order.append(e)
    return order


def _contract(tensors: Sequence[np.ndarray], F: SimpleGraph, n: int,
              order: Optional[Sequence[int]] = None,
              budget: int = CONTRACT_BUDGET) -> float:
    factors = [(tuple(F.incidence[v]), np.asarray(t)) for v, t in enumerate(tensors)]
    if order is None:
        order = elimination_order(F)
    for e in order:
        touching = [f for f in factors if e in f[0]]
        rest = [f for f in factors if e not in f[0]]
        width = len(set().union(*(lab for lab, _ in touching))) - 1
        if n ** width > budget:
            raise BudgetExceeded(f"intermediate tensor with {n}^{width} entries exceeds {budget}")
        factors = rest + [_einsum_merge(touching, e)]
    return float(np.prod([float(arr) for _, arr in factors]))


def _evaluate(tensors, F: SimpleGraph, n: int, engine: str) -> float:
    if engine == "brute":
        return _brute(tensors, F, n)
    if engine == "contract":
        return _contract(tensors, F, n)
    raise ValueError(f"unknown engine {engine!r}; expected one of {ENGINES}")


def partition_function(model: EdgeModel, F: SimpleGraph, engine: str = "contract") -> float:
    """``pi(model)(F)``.

    Raises:
        PreconditionError: a vertex degree exceeds the model's top order.
        BudgetExceeded: the chosen engine would exceed its size budget.
    """
    if F.max_degree > model.max_order:
        raise PreconditionError(f"graph has a vertex of degree {F.max_degree} but the model "
                                f"stops at order {model.max_order}")
    tensors = [model[F.degree(v)].values for v in range(F.n_vertices)]
    return _evaluate(tensors, F, model.dim, engine)


def _check_assignment(assignment: Sequence[SymTensor], F: SimpleGraph, exact_orders=True) -> int:
    if len(assignment) != F.n_vertices:
        raise ShapeError(f"{len(assignment)} tensors for {F.n_vertices} vertices")
    dims = {t.dim for t, d in zip(assignment, F.degrees) if t.order > 0}
    if len(dims) > 1:
        raise ShapeError(f"vertex tensors disagree on the number of colours: {sorted(dims)}")
    for v, t in enumerate(assignment):
        d = F.degree(v)
        if (t.order != d) if exact_orders else (t.order < d):
            raise ShapeError(f"vertex {v} has degree {d} but its tensor has order {t.order}")
    return dims.pop() if dims else (assignment[0].dim if assignment else 1)


def pi_F(assignment: Sequence[SymTensor], F: SimpleGraph, engine: str = "contract") -> float:
    """Partition function with an individual tensor ``h_v`` (order ``deg v``) at each vertex."""
    n = _check_assignment(assignment, F)
    return _evaluate([t.values for t in assignment], F, n, engine)


@dataclass
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool
    detail: dict = field(default_factory=dict)


def cs_bound_check(assignment: Sequence[SymTensor], F: SimpleGraph,
                   tol: Tolerances = DEFAULT_TOL) -> BoundCheck:
    """``sum_phi prod_v ||h_v(phi(delta v))|| <= prod_v ||h_v||``.

    Tensor orders may exceed degrees; ``h_v(c_1..c_l)`` is then the slice
    fixing the first ``l`` indices, and its norm is taken over the rest.
    """
    n = _check_assignment(assignment, F, exact_orders=False)
    slice_norms = []
    for v, t in enumerate(assignment):
        free = tuple(range(F.degree(v), t.order))
        slice_norms.append(np.sqrt(np.sum(t.values ** 2, axis=free)))
    lhs = _brute(slice_norms, F, n)
    rhs = float(np.prod([hilbert_norm(t) for t in assignment]))
    return BoundCheck(lhs, rhs, lhs <= rhs + tol.atol)


def default_dictionaries(dim: int, degrees) -> Dict[int, Dictionary]:
    """``R_d`` for each degree: the unit scalar for ``d = 0``, the rank-one ball otherwise."""
    out: Dict[int, Dictionary] = {}
    for d in sorted(set(degrees)):
        out[d] = FiniteSet((SymTensor(1.0, dim=dim),)) if d == 0 else RankOneBall(d, dim)
    return out


def lipschitz_bound_check(g: Sequence[SymTensor], h: Sequence[SymTensor], F: SimpleGraph,
                          dicts: Optional[Mapping[int, Dictionary]] = None,
                          engine: str = "contract",
                          tol: Tolerances = DEFAULT_TOL) -> BoundCheck:
    """``|pi_F(g) - pi_F(h)| <= sum_u ||g_u - h_u||_{R_deg(u)}``.

    The left side is split by swapping one vertex tensor at a time; the
    intermediate values ``pi_F(q^u)`` are returned in ``detail["telescoping"]``.

    Raises:
        PreconditionError: a tensor lies outside the unit ball, or the
            dictionary for some occurring degree only gives lower bounds.
    """
    n = _check_assignment(g, F)
    if _check_assignment(h, F) != n:
        raise ShapeError("g and h use different numbers of colours")
    for t in list(g) + list(h):
        if hilbert_norm(t) > 1.0 + tol.atol:
            raise PreconditionError("every vertex tensor must lie in the unit ball")
    dicts = dict(default_dictionaries(n, F.degrees) if dicts is None else dicts)
    for d in set(F.degrees):
        if d not in dicts:
            raise PreconditionError(f"no dictionary supplied for degree {d}")
        if dicts[d].kind != EXACT:
            raise PreconditionError(f"dictionary for degree {d} only yields lower bounds; "
                                    "the bound check would be unsound")
    N = F.n_vertices
    telescoping = []
    for u in range(N + 1):
        q = [g[i] if i < u else h[i] for i in range(N)]
        telescoping.append(pi_F(q, F, engine))
    terms = [seminorm(g[u] - h[u], dicts[F.degree(u)], tol).value for u in range(N)]
    lhs = abs(telescoping[-1] - telescoping[0])
    rhs = math.fsum(terms)
    return BoundCheck(lhs, rhs, lhs <= rhs + tol.atol,
                      {"telescoping": telescoping, "terms": terms})


def ball_project(t: SymTensor) -> SymTensor:
    nrm = hilbert_norm(t)
    return t if nrm <= 1.0 else t / nrm


def telescoping_upper_bound(g: EdgeModel, h: EdgeModel, F: SimpleGraph,
                            tol: Tolerances = DEFAULT_TOL) -> float:
    """Sound upper bound on ``|pi(g)(F) - pi(h)(F)|`` for models in the unit ball.

    Uses the exact ``R_d`` seminorm for degrees up to 2 and the Hilbert norm,
    which dominates it, for higher degrees.
    """
    if not (g.in_ball(tol) and h.in_ball(tol)):
        raise PreconditionError("both models must lie in the unit ball")
    if g.dim != h.dim:
        raise ShapeError("models use different numbers of colours")
    dicts = default_dictionaries(g.dim, range(3))
    per_degree = {}
    for d in set(F.degrees):
        diff = g[d] - h[d]
        per_degree[d] = seminorm(diff, dicts[d], tol).value if d <= 2 else hilbert_norm(diff)
    return math.fsum(per_degree[d] for d in F.degrees)
