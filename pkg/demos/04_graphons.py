"""
Step graphons and the cut norm
==============================

A finite graph is a step graphon with one block per vertex. Homomorphism
densities become block sums, and the cut norm is an exact enumeration of
row sets.
"""

import numpy as np

from edgelimits import (StepGraphon, complete_graph, cut_distance_aligned, cut_seminorm,
                        cycle_graph, graph_to_graphon, tau)

c5 = graph_to_graphon(cycle_graph(5))
print("edge density of C5:", tau(c5, complete_graph(2)))
print("triangle density of C5:", tau(c5, complete_graph(3)))

# cut norm of the difference between two block graphons
a = StepGraphon.uniform([[0.9, 0.1], [0.1, 0.9]])
b = StepGraphon.uniform(np.full((2, 2), 0.5))
sv = cut_seminorm(a - b)
print("cut norm of a - b:", sv.value, "attained on", sv.locator)

# relabelling blocks does not change the aligned distance
rng = np.random.default_rng(3)
v = rng.random((4, 4))
w = StepGraphon.uniform((v + v.T) / 2)
res = cut_distance_aligned(w, w.permuted([2, 0, 3, 1]))
print("aligned distance to a relabelled copy:", res.value, "via", res.permutation)
