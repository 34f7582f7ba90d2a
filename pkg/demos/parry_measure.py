"""
The Parry measure of a tree graph
=================================

The maximal-entropy Markov chain on the graph walks every closed path of
length n at the root with probability rho**-n, and conditioned on starting at
the root it is exactly the pushforward of the derived Bernoulli measure.
"""
import math

import numpy as np

from fractree import FractalTreeSpec, build_parry, cycle_probability, graph_from_tree, measure_entropy
from fractree.graph import closed_walks
from fractree.parry import parry_cylinder, pushforward_max_error

golden = FractalTreeSpec(2, ["0", "10"])
pm = build_parry(graph_from_tree(golden))
print("rho", pm.rho)
print("right eigenvector", pm.right, " left", pm.left)
print("transition matrix\n", pm.transition_matrix)
print("stationary", pm.stationary, " entropy", measure_entropy(pm), "log2 rho", math.log2(pm.rho))

# closed walks at the root
for n in range(1, 7):
    probs = [cycle_probability(pm, w) for w in closed_walks(pm.graph, n)]
    print(f"n={n} walks={len(probs):2d} prob={probs[0]:.6f} rho^-n={pm.rho ** -n:.6f}")

# cylinders of terminal nodes carry rho**-|tau|
tree4 = FractalTreeSpec(2, ["00", "01", "10", "110"])
pf = build_parry(graph_from_tree(tree4))
for t in tree4.terminal_nodes:
    print("".join(map(str, t)), parry_cylinder(pf, t), pf.rho ** -len(t))

# largest gap between the two measures over coded cylinders of depth <= 5
print("max gap", pushforward_max_error(tree4, 5))

# P is row stochastic and pi P = pi
P = pf.transition_matrix
print(np.allclose(P.sum(axis=1), 1), np.allclose(pf.stationary @ P, pf.stationary))
