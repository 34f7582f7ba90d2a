"""
Dimension traces with pluggable complexity
==========================================

Complexity ratios are traced along prefixes of a point of the fractal.  The
ratio at a parse point equals the similarity dimension times the ratio of
the coded sequence measured against the derived measure, whatever backend
supplies the complexity.
"""
import random

import numpy as np

from fractree import FractalTreeSpec, decode, dimension_trace, lz78_backend, sandwich_check, table_backend
from fractree.dimension import ideal_mu_backend, transfer_identity

golden = FractalTreeSpec(2, ["0", "10"])
rng = random.Random(1)
y = [rng.randrange(golden.k) for _ in range(300)]
x = decode(golden, y)

# LZ78 as a rough stand-in for prefix-free complexity
C = lz78_backend(golden.m)
trace = dimension_trace(C, x, golden.m)
print("lz78 trace: last ratios", np.round(trace.ratios[-5:], 4), "tail window", trace.lower, trace.upper)

# the ideal code length of a uniform coin is n bits, so every ratio is 1
uniform = ideal_mu_backend([0.5, 0.5])
print("uniform", set(np.round(dimension_trace(uniform, x[:40], 2).ratios, 12)))

# both sides of the transfer identity at the first few parse points
for row in transfer_identity(golden, C, x)[:6]:
    print(f"j={row.j:2d} n_j={row.n_j:2d} lhs={row.lhs:.6f} rhs={row.rhs:.6f}")

# a random lookup table behaves the same way
table = table_backend({x[:n]: rng.uniform(0, 3 * n) for n in range(len(x) + 1)})
rows = transfer_identity(golden, table, x)
print("max |lhs - rhs| over", len(rows), "parse points:", max(abs(r.lhs - r.rhs) for r in rows))

# cut-point extremes sit inside the all-prefix extremes
rep = sandwich_check(golden, C, x)
print(rep, rep.holds)
