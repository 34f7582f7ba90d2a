"""
Channel capacity, similarity dimension and the coding map
=========================================================

A prefix-free set of terminal nodes fixes both a self-similar fractal and a
cost for each code symbol.  The two exponents that come out of it agree.
"""
import math

import numpy as np

from fractree import FractalTreeSpec, LengthFunction, channel_capacity, decode, encode, similarity_dimension
from fractree.coding import derived_measure, measure_of_coded_word

# the golden-mean tree: terminal nodes 0 and 10
golden = FractalTreeSpec(2, ["0", "10"])
lf = LengthFunction.from_spec(golden)
cap = channel_capacity(lf)
print("costs", lf.costs, "alpha", cap.alpha, "r", cap.r)   # r + r^2 = 1

# the similarity dimension comes from its own solver in base m
beta = similarity_dimension(golden)
print("sdim", beta, "alpha / log2 m", cap.alpha / math.log2(golden.m))

# a ternary tree for comparison
ternary = FractalTreeSpec(3, ["0", "1", "20"])
print("ternary sdim", similarity_dimension(ternary), "=", -math.log(math.sqrt(2) - 1, 3))

# the derived Bernoulli measure puts r**cost on each symbol
dm = derived_measure(cap, lf)
print("symbol probs", dm.symbol_probs, "sum", sum(dm.symbol_probs))
mu, bits = measure_of_coded_word(dm, (0, 1, 1))
print("mu(011) =", mu, " -log2 mu =", bits, "= alpha * cost =", cap.alpha * lf.of((0, 1, 1)))

# coding: a point of the fractal parses into terminal-node blocks
x = decode(golden, [1, 0, 0, 1, 1])
tseq, rest = encode(golden, x)
print("x =", "".join(map(str, x)), "cuts", tseq.cut_points, "code", tseq.code_symbols, "rest", rest)

# masses of all coded words of a fixed length add to one
words = np.array(list(np.ndindex(*(golden.k,) * 8)))
masses = np.array([dm.of(tuple(w)) for w in words])
print(len(words), "coded words of length 8, total mass", masses.sum())
rng = np.random.default_rng(0)
for trial in range(3):
    y = tuple(rng.integers(0, golden.k, size=6).tolist())
    print("y", y, "mu", dm.of(y), "decoded length", len(decode(golden, y)))
