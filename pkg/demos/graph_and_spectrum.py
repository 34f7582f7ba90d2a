"""
Pointed graphs and their spectrum
=================================

Every tree gives a right-resolving pointed graph whose first-return cycles at
the root spell the terminal nodes.  Its characteristic polynomial can be read
off the depth profile.
"""
import math

import numpy as np

from fractree import FractalTreeSpec, charpoly_leverrier, graph_from_tree, perron_eigenvalue, tree_from_graph
from fractree.graph import count_blocks, entropy_estimate
from fractree.tree import depth_profile

tree4 = FractalTreeSpec(2, ["00", "01", "10", "110"])
g = graph_from_tree(tree4)
print(g.to_dot())
print(g.adjacency)

cp = charpoly_leverrier(g.adjacency)     # exact integer arithmetic
print("charpoly", cp, " depth profile", depth_profile(tree4))

rho = perron_eigenvalue(cp)
print("rho", rho, "numpy max |eig|", max(abs(np.linalg.eigvals(g.adjacency))))
print("log2 rho", math.log2(rho), "closed form", math.log2(2 * math.cos(math.pi / 9)))

# going back: first-return cycles at the root recover the tree
back = tree_from_graph(g)
print("recovered terminal nodes", [''.join(map(str, t)) for t in back.terminal_nodes])

# block counting approaches the entropy from above
golden = graph_from_tree(FractalTreeSpec(2, ["0", "10"]))
phi = (1 + math.sqrt(5)) / 2
for n in (5, 10, 15, 20, 25):
    h_all, h_init = entropy_estimate(golden, n)
    print(f"n={n:2d}  N_n={count_blocks(golden, n):6d}  h={h_init:.5f}  gap={h_init - math.log2(phi):.5f}")
