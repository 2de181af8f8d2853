"""
Convergent sequences
====================

Three families with a known limit: a model perturbed by shrinking noise,
the same model embedded into more and more colours, and random graphs of
growing size viewed as graphons.
"""

from edgelimits import complete_graph, cycle_graph, path_graph
from edgelimits.experiments import converge_models

graphs = {"K2": complete_graph(2), "P3": path_graph(3), "K3": complete_graph(3),
          "C4": cycle_graph(4)}

rep = converge_models("perturb", graphs, 10, seed=0)
print("perturbation family, triangle:")
for r in rep.rows:
    print(f"  i={r['i']:2d}  gap {r['gap']['K3']:.2e}  bound {r['bound']['K3']:.2e}")
print("bound dominates at every index:", rep.bound_dominates())

rep = converge_models("embed", graphs, 4, seed=0)
print("embedding family dims:", [r["dim"] for r in rep.rows], "tail oscillation:", rep.oscillation)

rep = converge_models("graphon", {"K2": complete_graph(2), "K3": complete_graph(3)}, 4,
                      sizes=[10, 20, 40, 80], samples=3, seed=0)
for r in rep.rows:
    print(f"  n={r['n']:3d}  edge density {r['values']['K2']:.4f}  triangle {r['values']['K3']:.4f}")
print("limits:", rep.limit)
