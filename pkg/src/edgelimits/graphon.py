"""Step graphons, homomorphism densities and the cut seminorm.

A step kernel on ``q`` blocks with measures ``mu`` takes value ``vals[i, j]``
on block ``i`` times block ``j``. A step graphon is a step kernel with
values in ``[0, 1]``. For step functions the cut seminorm is attained on
unions of blocks, so it reduces to a finite maximization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import BudgetExceeded, PreconditionError, ShapeError
from .graphs import SimpleGraph
from .hilbert import EXACT, SeminormValue, best_cut, cut_atom

TAU_BUDGET = 10**8
MAX_ALIGN_BLOCKS = 8
_CHUNK = 1 << 16


class StepKernel:
    """Symmetric real step function; differences of graphons live here."""

    __slots__ = ("mu", "vals")

    def __init__(self, mu, vals):
        mu = np.array(mu, dtype=float)
        vals = np.array(vals, dtype=float)
        q = mu.size
        if mu.ndim != 1 or q < 1:
            raise ShapeError("mu must be a nonempty 1-d array")
        if vals.shape != (q, q):
            raise ShapeError(f"vals must be {q}x{q}, got {vals.shape}")
        if np.any(mu <= 0):
            raise PreconditionError("block measures must be positive")
        if abs(math.fsum(mu) - 1.0) > 1e-12:
            raise PreconditionError(f"block measures sum to {math.fsum(mu)!r}, not 1")
        if not np.array_equal(vals, vals.T):
            raise PreconditionError("vals must be symmetric")
        if not np.all(np.isfinite(vals)):
            raise PreconditionError("vals must be finite")
        mu.setflags(write=False)
        vals.setflags(write=False)
        self.mu = mu
        self.vals = vals

    @property
    def q(self) -> int:
        return self.mu.size

    def _check_same_blocks(self, other: "StepKernel"):
        if not np.array_equal(self.mu, other.mu):
            raise ShapeError("step functions live on different block partitions")

    def __sub__(self, other: "StepKernel") -> "StepKernel":
        self._check_same_blocks(other)
        return StepKernel(self.mu, self.vals - other.vals)

    def __add__(self, other: "StepKernel") -> "StepKernel":
        self._check_same_blocks(other)
        return StepKernel(self.mu, self.vals + other.vals)

    def permuted(self, perm) -> "StepKernel":
        """Relabel blocks: block ``i`` of the result is block ``perm[i]`` of ``self``."""
        perm = np.asarray(perm, dtype=int)
        if sorted(perm.tolist()) != list(range(self.q)):
            raise ShapeError(f"{perm.tolist()} is not a permutation of range({self.q})")
        return type(self)(self.mu[perm], self.vals[np.ix_(perm, perm)])

    def __repr__(self):
        return f"{type(self).__name__}(q={self.q})"

    def to_dict(self) -> dict:
        return {"q": self.q, "mu": self.mu.tolist(), "vals": self.vals.tolist()}

    @classmethod
    def from_dict(cls, doc: dict):
        q = int(doc["q"])
        mu = np.asarray(doc["mu"], dtype=float)
        if mu.size != q:
            raise ShapeError(f"q={q} but mu has {mu.size} entries")
        return cls(mu, doc["vals"])


class StepGraphon(StepKernel):
    __slots__ = ()

    def __init__(self, mu, vals):
        super().__init__(mu, vals)
        if np.any(self.vals < 0) or np.any(self.vals > 1):
            raise PreconditionError("graphon values must lie in [0, 1]")

    @classmethod
    def constant(cls, p: float) -> "StepGraphon":
        return cls([1.0], [[p]])

    @classmethod
    def uniform(cls, vals) -> "StepGraphon":
        vals = np.asarray(vals, dtype=float)
        return cls(np.full(vals.shape[0], 1.0 / vals.shape[0]), vals)


def tau(w: StepKernel, F: SimpleGraph, budget: int = TAU_BUDGET) -> float:
    """Homomorphism density ``t(F, w)``, summed exactly over block assignments."""
    q, nv = w.q, F.n_vertices
    if nv == 0:
        return 1.0
    if q ** nv > budget:
        raise BudgetExceeded(f"{q}^{nv} block assignments exceed the budget {budget}")
    total = q ** nv
    shape = (q,) * nv
    partial = []
    for start in range(0, total, _CHUNK):
        blocks = np.unravel_index(np.arange(start, min(start + _CHUNK, total)), shape)
        prod = np.ones(blocks[0].shape)
        for b in blocks:
            prod *= w.mu[b]
        for u, v in F.edges:
            prod *= w.vals[blocks[u], blocks[v]]
        partial.append(prod.sum())
    return float(np.sum(partial))


def graph_to_graphon(G: SimpleGraph) -> StepGraphon:
    """Adjacency matrix as a step graphon on ``|V(G)|`` equal blocks."""
    if G.n_vertices == 0:
        raise ShapeError("the empty graph has no graphon")
    return StepGraphon.uniform(G.adjacency())


def cut_seminorm(w: StepKernel) -> SeminormValue:
    """``max_{S,T} |sum_{i in S, j in T} mu_i mu_j vals[i, j]|``; ``locator`` is ``(S, T)``."""
    value, S, T = best_cut(w.mu, w.vals)
    return SeminormValue(value, EXACT, cut_atom(w.mu, S, T), (S, T))


@dataclass(frozen=True)
class AlignedDistance:
    value: float
    permutation: Tuple[int, ...]
    cut: Tuple[tuple, tuple]


def cut_distance_aligned(w1: StepKernel, w2: StepKernel) -> AlignedDistance:
    """``min_sigma ||w1 - sigma.w2||_cut`` over block permutations ``sigma``.

    An upper bound on the cut distance modulo all measure-preserving maps.
    Requires equal, uniform block measures so relabelling preserves measure.
    Ties go to the lexicographically first permutation.
    """
    if w1.q != w2.q:
        raise PreconditionError(f"block counts differ: {w1.q} vs {w2.q}")
    q = w1.q
    uniform = np.full(q, 1.0 / q)
    if not (np.allclose(w1.mu, uniform, rtol=0, atol=1e-15)
            and np.allclose(w2.mu, uniform, rtol=0, atol=1e-15)):
        raise PreconditionError("alignment requires uniform block measures")
    if q > MAX_ALIGN_BLOCKS:
        raise BudgetExceeded(f"{q}! permutations; alignment limited to q <= {MAX_ALIGN_BLOCKS}")
    best = None
    for perm in itertools.permutations(range(q)):
        p = np.asarray(perm)
        diff = w1.vals - w2.vals[np.ix_(p, p)]
        value, S, T = best_cut(uniform, diff)
        if best is None or value < best.value:
            best = AlignedDistance(value, perm, (S, T))
    return best
