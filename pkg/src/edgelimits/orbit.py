"""Orthogonal group actions on tensors and quotient pseudometrics.

``g`` acts on an order-``k`` tensor by applying ``g`` along every mode, and
on an edge model level by level. The quotient distance is::

    (d/G)(x, y) = inf_{g in G} d(x, g.y)

For finite groups (permutation and signed permutation matrices) the
infimum is computed exactly by enumeration. For the full orthogonal group
it is searched by random starts plus Givens-rotation descent, giving an
upper bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, PreconditionError, ShapeError
from .graphs import SimpleGraph
from .hilbert import Dictionary, SymTensor, hilbert_norm, seminorm
from .vertex_model import EdgeModel, partition_function

MAX_PERM_DIM = 8
MAX_SIGNED_DIM = 6
REFINE_STARTS = 8  # best-scoring random starts that get the descent

EXACT = "exact"
UPPER_BOUND = "upper_bound"


def check_orthogonal(g: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {g.shape}")
    defect = float(np.max(np.abs(g.T @ g - np.eye(g.shape[0]))))
    if defect > tol.ortho_atol:
        raise PreconditionError(f"matrix is not orthogonal (|g^T g - I| = {defect:.3g})")
    return g


def _act_array(g: np.ndarray, arr: np.ndarray) -> np.ndarray:
    out = arr
    for _ in range(arr.ndim):
        # contracting the leading mode and appending the new one cycles through all modes
        out = np.tensordot(out, g, axes=([0], [1]))
    return out


def act(g, t: Union[SymTensor, EdgeModel], tol: Tolerances = DEFAULT_TOL):
    """Apply ``g`` along every mode of ``t`` (every level, for an edge model)."""
    g = check_orthogonal(g, tol)
    if isinstance(t, EdgeModel):
        return EdgeModel([act(g, level, tol) for level in t.tensors])
    if t.order > 0 and g.shape[0] != t.dim:
        raise ShapeError(f"{g.shape[0]}x{g.shape[0]} matrix cannot act on dim {t.dim}")
    if t.order == 0:
        return t
    return SymTensor(_act_array(g, t.values), tol=tol)


@dataclass(frozen=True)
class GroupSpec:
    """``variant`` is ``"perm"``, ``"signed_perm"`` or ``"orthogonal"``."""
    variant: str
    n: int
    sample_count: int = 256
    refine_steps: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.variant not in ("perm", "signed_perm", "orthogonal"):
            raise ShapeError(f"unknown group variant {self.variant!r}")
        if self.variant == "perm" and self.n > MAX_PERM_DIM:
            raise BudgetExceeded(f"permutation group enumerable only for n <= {MAX_PERM_DIM}")
        if self.variant == "signed_perm" and self.n > MAX_SIGNED_DIM:
            raise BudgetExceeded(f"signed permutation group enumerable only for n <= {MAX_SIGNED_DIM}")

    @property
    def enumerable(self) -> bool:
        return self.variant != "orthogonal"

    def elements(self) -> Iterator[np.ndarray]:
        """Group elements in a fixed order, identity first."""
        if not self.enumerable:
            raise ValueError("the orthogonal group is not enumerable")
        eye = np.eye(self.n)
        signs = [(1.0,) * self.n] if self.variant == "perm" else \
            list(itertools.product((1.0, -1.0), repeat=self.n))
        for perm in itertools.permutations(range(self.n)):
            for s in signs:
                yield eye[list(perm)] * np.asarray(s)[:, None]


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix)."""
    z = rng.standard_normal((n, n))
    qm, r = np.linalg.qr(z)
    return qm * np.sign(np.diag(r))


def givens(n: int, i: int, j: int, theta: float) -> np.ndarray:
    g = np.eye(n)
    c, s = math.cos(theta), math.sin(theta)
    g[i, i] = g[j, j] = c
    g[i, j], g[j, i] = -s, s
    return g


def golden_section(f, lo: float, hi: float, iters: int = 40):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _givens_descent(dist, g: np.ndarray, value: float, steps: int):
    """Sweep over coordinate planes, rotating in each by the best angle found."""
    n = g.shape[0]
    searches = 0
    for _ in range(steps):
        improved = False
        for i, j in itertools.combinations(range(n), 2):
            def along(theta, g=g, i=i, j=j):
                return dist(givens(n, i, j, theta) @ g)
            # coarse scan first: the angle profile is periodic, not unimodal
            grid = np.linspace(-math.pi, math.pi, 16, endpoint=False)
            t0 = grid[int(np.argmin([along(t) for t in grid]))]
            theta, val = golden_section(along, t0 - math.pi / 8, t0 + math.pi / 8)
            searches += 1
            if val < value - 1e-12 * max(1.0, value):
                g, value, improved = givens(n, i, j, theta) @ g, val, True
        if not improved:
            break
    return g, value, searches


Metric = Union[str, Dictionary, Mapping[int, Dictionary]]


def _distance(x, y, metric: Metric, tol: Tolerances) -> float:
    if isinstance(x, EdgeModel):
        if len(x) != len(y) or x.dim != y.dim:
            raise ShapeError("edge models differ in shape")
        if metric == "hilbert":
            return math.sqrt(math.fsum(hilbert_norm(a - b) ** 2 for a, b in zip(x.tensors, y.tensors)))
        # sup over the product dictionary splits into a sum over levels
        return math.fsum(seminorm(a - b, metric[k], tol).value
                         for k, (a, b) in enumerate(zip(x.tensors, y.tensors)))
    if metric == "hilbert":
        return hilbert_norm(x - y)
    return seminorm(x - y, metric, tol).value


@dataclass
class OrbitDistance:
    value: float
    kind: str
    witness: np.ndarray
    evaluations: int = 0  # distance evaluations, or line searches for the orthogonal search
    detail: dict = field(default_factory=dict)


def orbit_distance(x, y, group: GroupSpec, metric: Metric = "hilbert",
                   tol: Tolerances = DEFAULT_TOL) -> OrbitDistance:
    """``inf_g d(x, g.y)`` with the minimizing ``g``.

    ``metric`` is ``"hilbert"`` or a dictionary (a ``{level: dictionary}``
    mapping for edge models, where the level distances are summed). For an
    edge model the same ``g`` acts on every level. Enumerable groups give
    exact minima (first minimizer in enumeration order); the orthogonal
    group gives an upper bound.
    """
    n = x.dim
    if y.dim != n or (isinstance(x, SymTensor) and x.order != y.order):
        raise ShapeError("x and y differ in shape")
    if group.n != n:
        raise ShapeError(f"group acts on dim {group.n}, tensors have dim {n}")

    def moved(g):
        # search-internal: skip the orthogonality check and symmetry snapping
        if isinstance(y, EdgeModel):
            return EdgeModel([lvl if lvl.order == 0 else
                              SymTensor._trusted(_act_array(g, lvl.values), n) for lvl in y.tensors])
        return SymTensor._trusted(_act_array(g, y.values), n) if y.order else y

    def dist(g):
        return _distance(x, moved(g), metric, tol)

    if group.enumerable:
        best_val, best_g, count = math.inf, None, 0
        for g in group.elements():
            v = dist(g)
            count += 1
            if v < best_val:
                best_val, best_g = v, g
        return OrbitDistance(best_val, EXACT, best_g, count)

    rng = np.random.default_rng(group.seed)
    starts = [np.eye(n)] + [random_orthogonal(n, rng) for _ in range(group.sample_count)]
    scores = [dist(g) for g in starts]
    count = len(starts)
    best_val, best_g = math.inf, None
    # reflections are out of reach of rotations, so seed both determinant classes
    dets = np.array([np.linalg.det(g) for g in starts])
    ranked = np.argsort(scores, kind="stable")
    half = REFINE_STARTS // 2
    chosen = ([i for i in ranked if dets[i] > 0][:half] + [i for i in ranked if dets[i] < 0][:half])
    for i0 in sorted(chosen):
        g, v, searches = _givens_descent(dist, starts[i0], scores[i0], group.refine_steps)
        count += searches
        if v < best_val:
            best_val, best_g = v, g
    return OrbitDistance(best_val, UPPER_BOUND, best_g, count)


@dataclass
class InvarianceReport:
    max_relative: float
    per_graph: list
    passed: bool


def pi_invariance_check(model: EdgeModel, g, graphs: Sequence[SimpleGraph],
                        engine: str = "contract",
                        tol: Tolerances = DEFAULT_TOL) -> InvarianceReport:
    """``max_F |pi(g.h)(F) - pi(h)(F)| / (|pi(h)(F)| + 1)``."""
    moved = act(g, model, tol)
    rows = []
    worst = 0.0
    for F in graphs:
        a = partition_function(model, F, engine)
        b = partition_function(moved, F, engine)
        rel = abs(b - a) / (abs(a) + 1.0)
        rows.append((F.to_dict(), a, b, rel))
        worst = max(worst, rel)
    return InvarianceReport(worst, rows, worst <= tol.invariance_rtol)
