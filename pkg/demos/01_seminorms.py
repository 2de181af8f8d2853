"""
Seminorms from dictionaries
===========================

A dictionary is a set of unit-ball vectors; the seminorm of ``x`` is the
largest correlation of ``x`` with a dictionary element. Three built-in
dictionaries are compared on the same data.
"""

import numpy as np

from edgelimits import CutProducts, FiniteSet, RankOneBall, SymTensor, hilbert_norm, seminorm

rng = np.random.default_rng(0)

# coordinates: the seminorm is the largest absolute coordinate
x = SymTensor([3.0, -4.0, 1.0])
sv = seminorm(x, FiniteSet.standard_basis(3))
print("basis seminorm of", x.values, "=", sv.value, "at coordinate", sv.locator)

# rank-one ball on matrices: the spectral norm, never above the Frobenius norm
m = rng.standard_normal((4, 4))
M = SymTensor((m + m.T) / 2)
print("rank-one seminorm", seminorm(M, RankOneBall(2, 4)).value, "<= norm", hilbert_norm(M))

# cut dictionary: best weighted rectangle S x T over the block structure
sv = seminorm(SymTensor(np.eye(2)), CutProducts.uniform(2))
print("cut seminorm of the 2x2 identity:", sv.value, "on", sv.locator)

# order 3 has no closed form; the alternating search gives a certified lower bound
t = SymTensor(np.einsum("i,j,k->ijk", *[np.array([0.6, 0.8])] * 3) * 0.5)
sv = seminorm(t, RankOneBall(3, 2))
print("order-3 rank-one seminorm of 0.5 u^3:", round(sv.value, 12), sv.kind)
