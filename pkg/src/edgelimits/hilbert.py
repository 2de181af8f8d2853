"""Dense symmetric tensors over a finite colour set and the dictionary seminorms.

A tensor of order ``k`` over ``n`` colours is an element of l2(C^k) with
``|C| = n``. Every tensor handled here is invariant under permutation of its
indices; the constructor enforces this exactly by snapping each entry to the
value stored at its sorted index tuple.

The seminorm attached to a set ``R`` of atoms is ``sup_{r in R} |<r, x>|``.
Three families of ``R`` are supported:

* :class:`FiniteSet` - an explicit list of atoms,
* :class:`RankOneBall` - all ``r_1 (x) ... (x) r_k`` with ``|r_i| <= 1``
  (the injective tensor norm),
* :class:`CutProducts` - weighted rectangle indicators on a ``q``-block
  step function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import BudgetExceeded, PreconditionError, ShapeError

MAX_ENTRIES = 10**7
MAX_CUT_BLOCKS = 14

EXACT = "exact"
LOWER_BOUND = "lower_bound"


def _adjacent_asymmetry(arr: np.ndarray) -> float:
    if arr.ndim < 2:
        return 0.0
    return max(float(np.max(np.abs(arr - np.swapaxes(arr, i, i + 1))))
               for i in range(arr.ndim - 1))


def _snap(arr: np.ndarray) -> np.ndarray:
    """Copy ``arr[sorted(idx)]`` into every ``arr[idx]``."""
    k = arr.ndim
    if k < 2:
        return arr.copy()
    idx = np.indices(arr.shape).reshape(k, -1)
    idx.sort(axis=0)
    flat = np.ravel_multi_index(tuple(idx), arr.shape)
    return arr.ravel()[flat].reshape(arr.shape)


class SymTensor:
    """Immutable dense symmetric tensor.

    Args:
        values: array of shape ``(n,) * k``; a scalar for order 0.
        dim: number of colours. Required only for order 0, where the
            shape carries no dimension (defaults to 1 there).
        tol: tolerances; ``sym_rtol`` bounds the accepted asymmetry.

    Raises:
        ShapeError: ragged shape, non-finite entries, more than
            ``MAX_ENTRIES`` entries, or asymmetry beyond tolerance.
    """

    __slots__ = ("_values", "_dim")

    def __init__(self, values, dim: Optional[int] = None, *, tol: Tolerances = DEFAULT_TOL):
        arr = np.array(values, dtype=float)
        if arr.ndim == 0:
            n = 1 if dim is None else int(dim)
        else:
            if len(set(arr.shape)) != 1:
                raise ShapeError(f"tensor axes must have equal length, got {arr.shape}")
            n = arr.shape[0]
            if dim is not None and dim != n:
                raise ShapeError(f"dim={dim} disagrees with shape {arr.shape}")
        if n < 1:
            raise ShapeError("dim must be >= 1")
        if arr.size > MAX_ENTRIES:
            raise ShapeError(f"{arr.size} entries exceeds the dense limit {MAX_ENTRIES}")
        if not np.all(np.isfinite(arr)):
            raise ShapeError("tensor entries must be finite")
        scale = max(1.0, float(np.max(np.abs(arr)))) if arr.size else 1.0
        asym = _adjacent_asymmetry(arr)
        if asym > tol.sym_rtol * scale:
            raise ShapeError(f"values are not symmetric (max deviation {asym:.3g}); "
                             "use symmetrize() for arbitrary arrays")
        arr = _snap(arr) if asym > 0 else arr
        arr.setflags(write=False)
        self._values = arr
        self._dim = n

    @classmethod
    def _trusted(cls, arr: np.ndarray, dim: int) -> "SymTensor":
        # arr is known to be exactly symmetric (e.g. a linear combination of SymTensors)
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=float)
        arr.setflags(write=False)
        obj._values = arr
        obj._dim = dim
        return obj

    @classmethod
    def zeros(cls, order: int, dim: int) -> "SymTensor":
        return cls._trusted(np.zeros((dim,) * order), dim)

    @property
    def order(self) -> int:
        return self._values.ndim

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self):
        return self._values.shape

    def __repr__(self):
        return f"SymTensor(order={self.order}, dim={self.dim})"

    def _check_compatible(self, other: "SymTensor"):
        if not isinstance(other, SymTensor):
            raise TypeError(f"expected SymTensor, got {type(other).__name__}")
        if self.order != other.order or (self.order > 0 and self.dim != other.dim):
            raise ShapeError(f"shape mismatch: order {self.order}/dim {self.dim} "
                             f"vs order {other.order}/dim {other.dim}")

    def __add__(self, other):
        self._check_compatible(other)
        return SymTensor._trusted(self._values + other._values, self._dim)

    def __sub__(self, other):
        self._check_compatible(other)
        return SymTensor._trusted(self._values - other._values, self._dim)

    def __mul__(self, scalar):
        return SymTensor._trusted(self._values * float(scalar), self._dim)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return SymTensor._trusted(self._values / float(scalar), self._dim)

    def __neg__(self):
        return SymTensor._trusted(-self._values, self._dim)

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self.order == other.order and self.dim == other.dim
                and np.array_equal(self._values, other._values))

    __hash__ = None

    def to_dict(self) -> dict:
        return {"order": self.order, "dim": self.dim,
                "values": [float(v) for v in self._values.ravel()]}

    @classmethod
    def from_dict(cls, doc: dict) -> "SymTensor":
        k, n = int(doc["order"]), int(doc["dim"])
        flat = np.asarray(doc["values"], dtype=float)
        if flat.size != n ** k:
            raise ShapeError(f"expected {n ** k} values for order {k}, dim {n}; got {flat.size}")
        return cls(flat.reshape((n,) * k), dim=n)


def symmetrize(values, order: int, dim: int) -> SymTensor:
    """Average every entry over its index-permutation orbit.

    Exactly symmetric input is returned unchanged, so the map is idempotent.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size != dim ** order:
        raise ShapeError(f"expected {dim ** order} values for order {order}, dim {dim}; got {arr.size}")
    arr = arr.reshape((dim,) * order)
    if _adjacent_asymmetry(arr) == 0.0:
        return SymTensor._trusted(arr.copy(), dim)
    acc = np.zeros_like(arr)
    perms = list(itertools.permutations(range(order)))
    for p in perms:
        acc += np.transpose(arr, p)
    return SymTensor._trusted(_snap(acc / len(perms)), dim)


def inner(x: SymTensor, y: SymTensor) -> float:
    x._check_compatible(y)
    return float(np.dot(x.values.ravel(), y.values.ravel()))


def hilbert_norm(x: SymTensor) -> float:
    return math.sqrt(max(inner(x, x), 0.0))


def outer_power(u, k: int) -> SymTensor:
    """``u (x) u (x) ... (x) u`` (k factors)."""
    u = np.asarray(u, dtype=float)
    out = np.array(1.0)
    for _ in range(k):
        out = np.multiply.outer(out, u)
    return SymTensor._trusted(_snap(out), u.size)


# ---------------------------------------------------------------------------
# dictionaries


@dataclass(frozen=True)
class FiniteSet:
    atoms: tuple

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise PreconditionError("FiniteSet needs at least one atom")
        first = atoms[0]
        for a in atoms:
            first._check_compatible(a)
            if hilbert_norm(a) > 1.0 + DEFAULT_TOL.atol:
                raise PreconditionError("FiniteSet atoms must lie in the unit ball")

    kind = EXACT

    @property
    def order(self):
        return self.atoms[0].order

    @property
    def dim(self):
        return self.atoms[0].dim

    @classmethod
    def standard_basis(cls, dim: int) -> "FiniteSet":
        return cls(tuple(SymTensor(row) for row in np.eye(dim)))

    def to_dict(self):
        return {"variant": "finite", "atoms": [a.to_dict() for a in self.atoms]}


@dataclass(frozen=True)
class RankOneBall:
    """Products ``r_1 (x) ... (x) r_k`` of vectors in the unit ball.

    For ``order >= 3`` the sup is searched by alternating maximization with
    ``restarts`` random starts; results are then lower bounds.
    """
    order: int
    dim: int
    restarts: int = 32
    max_iter: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise PreconditionError("RankOneBall needs order >= 1")
        if self.dim < 1:
            raise PreconditionError("RankOneBall needs dim >= 1")
        if self.restarts < 1 or self.max_iter < 1:
            raise PreconditionError("search budget must be positive")

    @property
    def kind(self):
        return EXACT if self.order <= 2 else LOWER_BOUND

    def to_dict(self):
        return {"variant": "rank_one", "order": self.order, "dim": self.dim,
                "restarts": self.restarts, "max_iter": self.max_iter, "seed": self.seed}


@dataclass(frozen=True)
class CutProducts:
    """Rectangle indicators ``chi_S x chi_T`` on a ``q``-block step function.

    A symmetric ``q x q`` tensor ``x`` is read as the step function taking
    value ``x[i, j]`` on block ``i`` times block ``j``; block ``i`` has
    measure ``mu[i]``. In these coordinates the atom for ``(S, T)`` is the
    symmetrized matrix ``mu_i mu_j [i in S][j in T]``.
    """
    mu: tuple

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        object.__setattr__(self, "mu", mu)
        if not mu:
            raise PreconditionError("CutProducts needs at least one block")
        if min(mu) <= 0:
            raise PreconditionError("block measures must be positive")
        if abs(math.fsum(mu) - 1.0) > 1e-12:
            raise PreconditionError(f"block measures sum to {math.fsum(mu)!r}, not 1")

    kind = EXACT
    order = 2

    @property
    def dim(self):
        return len(self.mu)

    @classmethod
    def uniform(cls, q: int) -> "CutProducts":
        return cls((1.0 / q,) * q)

    def to_dict(self):
        return {"variant": "cut", "mu": list(self.mu)}


Dictionary = Union[FiniteSet, RankOneBall, CutProducts]


def dictionary_from_dict(doc: dict) -> Dictionary:
    variant = doc["variant"]
    if variant == "finite":
        return FiniteSet(tuple(SymTensor.from_dict(a) for a in doc["atoms"]))
    if variant == "rank_one":
        keys = ("restarts", "max_iter", "seed")
        return RankOneBall(int(doc["order"]), int(doc["dim"]),
                           **{k: int(doc[k]) for k in keys if k in doc})
    if variant == "cut":
        return CutProducts(tuple(doc["mu"]))
    raise ShapeError(f"unknown dictionary variant {variant!r}")


@dataclass(frozen=True)
class SeminormValue:
    value: float
    kind: str
    witness: SymTensor
    locator: object = field(default=None, compare=False)


# ---------------------------------------------------------------------------
# seminorm evaluation


def _check_dict_shape(x: SymTensor, d: Dictionary):
    if x.order != d.order or (x.order > 0 and x.dim != d.dim):
        raise ShapeError(f"tensor of order {x.order}, dim {x.dim} does not fit "
                         f"dictionary of order {d.order}, dim {d.dim}")


def _finite_sup(x: SymTensor, d: FiniteSet) -> SeminormValue:
    stack = np.stack([a.values.ravel() for a in d.atoms])
    scores = np.abs(stack @ x.values.ravel())
    i = int(np.argmax(scores))
    return SeminormValue(abs(inner(d.atoms[i], x)), EXACT, d.atoms[i], i)


def best_cut(mu, vals):
    """Exact ``max_{S,T} |sum_{i in S, j in T} mu_i mu_j vals[i, j]|``.

    For each row set ``S`` the optimal ``T`` collects either all positive or
    all negative column sums, so only ``2^q`` row sets are enumerated.
    Ties go to the smallest ``(S, T)`` in bitmask order.

    Returns:
        (value, S, T) with ``S`` and ``T`` sorted tuples of block indices.
    """
    mu = np.asarray(mu, dtype=float)
    vals = np.asarray(vals, dtype=float)
    q = mu.size
    if q > MAX_CUT_BLOCKS:
        raise BudgetExceeded(f"exact cut enumeration limited to q <= {MAX_CUT_BLOCKS}, got {q}")
    weighted = np.outer(mu, mu) * vals
    masks = np.arange(1 << q)
    bits = ((masks[:, None] >> np.arange(q)) & 1).astype(float)
    col = bits @ weighted
    pos = np.where(col > 0, col, 0.0).sum(axis=1)
    neg = -np.where(col < 0, col, 0.0).sum(axis=1)
    weights = 1 << np.arange(q)
    t_pos = ((col > 0) * weights).sum(axis=1)
    t_neg = ((col < 0) * weights).sum(axis=1)
    use_neg = (neg > pos) | ((neg == pos) & (t_neg < t_pos))
    best = np.where(use_neg, neg, pos)
    s = int(np.argmax(best))
    t = int(t_neg[s] if use_neg[s] else t_pos[s])
    S = tuple(i for i in range(q) if s >> i & 1)
    T = tuple(j for j in range(q) if t >> j & 1)
    return float(best[s]), S, T


def cut_atom(mu, S, T) -> SymTensor:
    mu = np.asarray(mu, dtype=float)
    a = np.zeros(mu.size)
    b = np.zeros(mu.size)
    a[list(S)] = 1.0
    b[list(T)] = 1.0
    rect = np.outer(a, b)
    return SymTensor._trusted(np.outer(mu, mu) * (rect + rect.T) / 2.0, mu.size)


def _cut_sup(x: SymTensor, d: CutProducts) -> SeminormValue:
    _, S, T = best_cut(d.mu, x.values)
    w = cut_atom(d.mu, S, T)
    return SeminormValue(abs(inner(w, x)), EXACT, w, (S, T))


def _contract_except(arr: np.ndarray, vecs: Sequence[np.ndarray]) -> np.ndarray:
    out = arr
    for v in vecs:
        out = np.tensordot(v, out, axes=([0], [0]))
    return out


def _rank_one_sup(x: SymTensor, d: RankOneBall, tol: Tolerances) -> SeminormValue:
    k, n, arr = x.order, x.dim, x.values
    if k == 1:
        nrm = hilbert_norm(x)
        w = x / nrm if nrm > 0 else SymTensor._trusted(np.eye(n)[0], n)
        return SeminormValue(abs(inner(w, x)), EXACT, w)
    if k == 2:
        lam, vec = np.linalg.eigh(arr)
        i = int(np.argmax(np.abs(lam)))
        w = outer_power(vec[:, i], 2)
        return SeminormValue(abs(inner(w, x)), EXACT, w)

    rng = np.random.default_rng(d.seed)
    best_val, best_w = -1.0, None
    for restart in range(d.restarts):
        if restart == 0:
            # leading left singular vector of the mode-0 unfolding
            u = np.linalg.svd(arr.reshape(n, -1), full_matrices=False)[0][:, 0]
            factors = [u.copy() for _ in range(k)]
        else:
            factors = [v / np.linalg.norm(v) for v in rng.standard_normal((k, n))]
        prev = -np.inf
        for _ in range(d.max_iter):
            for j in range(k):
                g = _contract_except(arr, factors[:j] + factors[j + 1:])
                gn = np.linalg.norm(g)
                if gn > 0:
                    factors[j] = g / gn
            val = float(np.dot(_contract_except(arr, factors[1:]), factors[0]))
            if abs(val) - prev <= tol.als_tol * max(1.0, abs(val)):
                break
            prev = abs(val)
        candidates = [outer_power(u, k) for u in factors]
        prod = np.array(1.0)
        for u in factors:
            prod = np.multiply.outer(prod, u)
        candidates.append(symmetrize(prod, k, n))
        for w in candidates:
            v = abs(inner(w, x))
            if v > best_val:
                best_val, best_w = v, w
    return SeminormValue(best_val, LOWER_BOUND, best_w)


def seminorm(x: SymTensor, d: Dictionary, tol: Tolerances = DEFAULT_TOL) -> SeminormValue:
    """``sup_{r in R} |<r, x>|`` together with an attaining atom.

    ``kind`` is ``"lower_bound"`` only for rank-one balls of order >= 3.
    The returned witness always satisfies ``|inner(witness, x)| == value``.
    """
    _check_dict_shape(x, d)
    if isinstance(d, FiniteSet):
        return _finite_sup(x, d)
    if isinstance(d, CutProducts):
        return _cut_sup(x, d)
    if isinstance(d, RankOneBall):
        return _rank_one_sup(x, d, tol)
    raise TypeError(f"unsupported dictionary {type(d).__name__}")
