"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""
import math
import random
import time
from collections import Counter

import pytest
import sympy

from conftest import PHI
from fractree.coding import LengthFunction, channel_capacity, decode, encode, similarity_dimension
from fractree.dimension import sandwich_check, table_backend, transfer_identity
from fractree.graph import (
    charpoly_leverrier,
    closed_walks,
    count_blocks,
    graph_from_tree,
    isomorphic,
    perron_eigenvalue,
    tree_from_graph,
)
from fractree.parry import (
    build_parry,
    cycle_probability,
    measure_entropy,
    pushforward_max_error,
    verify_parry_pushforward,
)
from fractree.samples import FOUR_LEAF, FULL_BINARY, GOLDEN, random_specs, regression_specs

ACCEPTANCE_SEED = 20240611


@pytest.fixture(scope="module")
def corpus():
    specs = random_specs(100, seed=ACCEPTANCE_SEED, ms=(2, 3), k_range=(2, 12), max_depth=8)
    assert all(2 <= s.k <= 12 and max(map(len, s.terminal_nodes)) <= 8 for s in specs)
    assert {s.alphabet_size for s in specs} == {2, 3}
    return specs


@pytest.fixture(scope="module")
def regression():
    return regression_specs()


def test_criterion_1_charpoly_is_depth_profile(corpus, report):
    start = time.perf_counter()
    bad = 0
    for spec in corpus:
        cp = charpoly_leverrier(graph_from_tree(spec).adjacency)
        depths = Counter(len(t) for t in spec.terminal_nodes)
        expected = [depths.get(i, 0) for i in range(1, cp.degree + 1)]
        got = [-c for c in cp.coeffs]
        if got != expected or not all(isinstance(c, int) for c in cp.coeffs):
            bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 5.0
    report(1, ok, f"{bad}/100 mismatches, {elapsed:.2f}s")
    assert ok


def test_criterion_2_three_solvers_agree(corpus, report):
    start = time.perf_counter()
    worst_rho = worst_beta = 0.0
    for spec in corpus:
        alpha = channel_capacity(LengthFunction.from_spec(spec)).alpha
        beta = similarity_dimension(spec)
        rho = perron_eigenvalue(charpoly_leverrier(graph_from_tree(spec).adjacency))
        worst_rho = max(worst_rho, abs(math.log2(rho) - alpha))
        worst_beta = max(worst_beta, abs(alpha - math.log2(spec.alphabet_size) * beta))
    elapsed = time.perf_counter() - start
    ok = worst_rho <= 1e-9 and worst_beta <= 1e-9 and elapsed < 10.0
    report(2, ok, f"max |log2 rho - alpha| {worst_rho:.1e}, max |alpha - log2 m beta| {worst_beta:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_golden_anchor(report):
    g = graph_from_tree(GOLDEN)
    rho = perron_eigenvalue(charpoly_leverrier(g.adjacency))
    alpha = channel_capacity(LengthFunction.from_spec(GOLDEN)).alpha
    pm = build_parry(g)
    h = measure_entropy(pm)
    trans = {(e.source, e.target): p for e, p in zip(g.edges, pm.transitions)}
    got = [trans[0, 0], trans[0, 1], trans[1, 0]]
    checks = [
        abs(rho - 1.6180339887) <= 1e-9,
        abs(rho - PHI) <= 1e-12,
        abs(alpha - 0.6942419136) <= 1e-9,
        all(abs(a - b) <= 1e-6 for a, b in zip(got, (0.618034, 0.381966, 1.0))),
        abs(h - alpha) <= 1e-9,
    ]
    report(3, all(checks), f"rho {rho:.10f}, alpha {alpha:.10f}, h {h:.10f}")
    assert all(checks)


def test_criterion_4_four_leaf_anchor(report):
    g = graph_from_tree(FOUR_LEAF)
    cp = charpoly_leverrier(g.adjacency)
    z = sympy.Symbol("z")
    oracle = sympy.Matrix(g.adjacency.tolist()).charpoly(z).as_expr()
    exact = cp.full == [1, 0, -3, -1, 0] and sympy.expand(oracle - (z**4 - 3 * z**2 - z)) == 0
    rho = perron_eigenvalue(cp)
    err = pushforward_max_error(FOUR_LEAF, 4)
    ok = exact and abs(rho - 1.8793852416) <= 1e-8 and err <= 1e-9 and verify_parry_pushforward(FOUR_LEAF, 4, 1e-9)
    report(4, ok, f"charpoly {cp}, rho {rho:.10f}, depth-4 error {err:.1e}")
    assert ok


def test_criterion_5_cycle_probabilities(regression, report):
    start = time.perf_counter()
    worst, walks = 0.0, 0
    for spec in regression:
        g = graph_from_tree(spec)
        pm = build_parry(g)
        for n in range(1, 9):
            target = pm.rho**-n
            for walk in closed_walks(g, n):
                walks += 1
                worst = max(worst, abs(cycle_probability(pm, walk) - target) / target)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0 and walks > 0
    report(5, ok, f"{walks} closed walks, max rel err {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_criterion_6_pushforward_equals_parry(regression, report):
    worst = max(pushforward_max_error(spec, 5) for spec in regression)
    ok = worst <= 1e-9
    report(6, ok, f"{len(regression)} specs, max err {worst:.1e}")
    assert ok


def test_criterion_7_transfer_identity(regression, report):
    rng = random.Random(ACCEPTANCE_SEED)
    worst, violations, rows = 0.0, 0, 0
    for spec in regression:
        for _ in range(50):
            x = decode(spec, [rng.randrange(spec.k) for _ in range(30)])
            C = table_backend({x[:n]: rng.uniform(0.0, 3.0 * max(n, 1)) for n in range(len(x) + 1)})
            for row in transfer_identity(spec, C, x):
                rows += 1
                worst = max(worst, abs(row.lhs - row.rhs))
            violations += not sandwich_check(spec, C, x).holds
    ok = worst <= 1e-9 and violations == 0
    report(7, ok, f"{rows} parse points, max err {worst:.1e}, {violations} sandwich violations")
    assert ok


def test_criterion_8_block_entropy(report):
    g = graph_from_tree(GOLDEN)
    target = math.log2(PHI)
    gaps = [abs(math.log2(count_blocks(g, n)) / n - target) for n in (5, 10, 15, 20)]
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    full = graph_from_tree(FULL_BINARY)
    full_exact = all(math.log2(count_blocks(full, n)) / n == 1.0 for n in range(1, 21))
    ok = gaps[-1] <= 0.02 and monotone and full_exact
    report(8, ok, "gaps " + ", ".join(f"{x:.4f}" for x in gaps) + f"; full shift exact: {full_exact}")
    assert ok


def test_criterion_9_roundtrips(report):
    rng = random.Random(ACCEPTANCE_SEED)
    specs = random_specs(1000, seed=ACCEPTANCE_SEED + 1, ms=(2, 3), k_range=(2, 12), max_depth=8)
    code_fail = graph_fail = 0
    for spec in specs:
        y = tuple(rng.randrange(spec.k) for _ in range(rng.randrange(0, 40)))
        tseq, rest = encode(spec, decode(spec, y))
        code_fail += tseq.code_symbols != y or rest != ()
        g = graph_from_tree(spec)
        back = tree_from_graph(g)
        graph_fail += set(back.terminal_nodes) != set(spec.terminal_nodes)
        graph_fail += not isomorphic(graph_from_tree(back), g)
    ok = code_fail == 0 and graph_fail == 0
    report(9, ok, f"1000 instances, {code_fail} coding failures, {graph_fail} graph failures")
    assert ok
