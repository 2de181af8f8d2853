"""
Distances up to symmetry
========================

Rotating the colour space changes the tensors of a model but not its
partition function. Orbit distances measure how far apart two objects are
once such symmetries are factored out.
"""

import math

import numpy as np

from edgelimits import (EdgeModel, GroupSpec, SymTensor, act, all_graphs, orbit_distance,
                        pi_invariance_check)

rng = np.random.default_rng(4)

# swapping coordinates brings (0, 2) within distance 1 of (1, 0)
res = orbit_distance(SymTensor([1.0, 0.0]), SymTensor([0.0, 2.0]), GroupSpec("perm", 2))
print("permutation orbit distance:", res.value, "witness\n", res.witness)

# over all rotations two symmetric matrices are as close as their sorted spectra
x = SymTensor(np.diag([1.0, 0.2, -0.5]))
q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
y = act(q, SymTensor(np.diag([0.9, 0.3, -0.5])))
res = orbit_distance(x, y, GroupSpec("orthogonal", 3, sample_count=64, refine_steps=50))
print(f"sampled O(3) distance {res.value:.6f} ({res.kind}); spectral optimum {math.sqrt(0.02):.6f}")

# the partition function does not see rotations
model = EdgeModel.random(2, 3, rng)
theta = 0.7
g = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
rep = pi_invariance_check(model, g, list(all_graphs(4)))
print("max relative change of pi under rotation:", rep.max_relative)
