import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FOUR_LEAF_RHO, PHI
from fractree.coding import LengthFunction, channel_capacity, decode, derived_measure
from fractree.errors import NoSuchWalk, NotAClosedWalk
from fractree.graph import PointedGraph, closed_walks, graph_from_tree
from fractree.parry import (
    build_parry,
    cycle_probability,
    measure_entropy,
    parry_cylinder,
    pushforward_max_error,
    verify_parry_pushforward,
)
from fractree.tree import is_prefix, random_spec


def tree_eigvecs(spec, rho):
    """Closed-form Perron vectors of a tree graph.

    right[sigma] = sum of rho**(|sigma| - |tau|) over terminal descendants tau,
    left[sigma] proportional to rho**-|sigma|.
    """
    nodes = spec.nodes.non_terminal
    right = np.array([
        sum(rho ** (len(s) - len(t)) for t in spec.terminal_nodes if is_prefix(s, t)) for s in nodes
    ])
    left = np.array([rho ** -len(s) for s in nodes])
    return right, left / (left @ right)


def test_golden_parry(golden):
    pm = build_parry(graph_from_tree(golden))
    assert pm.rho == pytest.approx(PHI, abs=1e-12)
    assert pm.right == pytest.approx([1.0, 1 / PHI], abs=1e-10)
    by_edge = {(e.source, e.target, e.label): p for e, p in zip(pm.graph.edges, pm.transitions)}
    assert by_edge[0, 0, 0] == pytest.approx(0.618034, abs=1e-6)
    assert by_edge[0, 1, 1] == pytest.approx(0.381966, abs=1e-6)
    assert by_edge[1, 0, 0] == pytest.approx(1.0, abs=1e-12)
    assert pm.stationary == pytest.approx([PHI**2 / (PHI**2 + 1), 1 / (PHI**2 + 1)], abs=1e-10)


def test_full_shift_parry(full_binary):
    pm = build_parry(graph_from_tree(full_binary))
    assert pm.transitions == pytest.approx([0.5, 0.5])
    assert measure_entropy(pm) == pytest.approx(1.0, abs=1e-12)


def test_periodic_graph_converges():
    # every cycle has even length: plain power iteration on A would oscillate
    g = PointedGraph(2, ((0, 1, 0), (1, 0, 0), (1, 0, 1)), 2)
    pm = build_parry(g)
    assert pm.rho == pytest.approx(math.sqrt(2), abs=1e-12)


def test_eigvecs_match_closed_form(four_leaf):
    pm = build_parry(graph_from_tree(four_leaf))
    right, left = tree_eigvecs(four_leaf, FOUR_LEAF_RHO)
    assert pm.right == pytest.approx(right, rel=1e-10)
    assert pm.left == pytest.approx(left, rel=1e-10)


def test_cycle_probability_examples(golden):
    g = graph_from_tree(golden)
    pm = build_parry(g)
    loop = [i for i, e in enumerate(g.edges) if e == (0, 0, 0)]
    assert cycle_probability(pm, loop) == pytest.approx(1 / PHI, abs=1e-12)
    two = [g.step(0, 1), g.step(1, 0)]
    assert cycle_probability(pm, two) == pytest.approx(PHI**-2, abs=1e-12)
    with pytest.raises(NotAClosedWalk):
        cycle_probability(pm, [g.step(0, 1)])
    with pytest.raises(NotAClosedWalk):
        cycle_probability(pm, [g.step(1, 0)])


def test_parry_cylinder(golden):
    pm = build_parry(graph_from_tree(golden))
    assert parry_cylinder(pm, "10") == pytest.approx(0.381966, abs=1e-6)
    assert parry_cylinder(pm, "") == 1.0
    with pytest.raises(NoSuchWalk):
        parry_cylinder(pm, "11")
    assert parry_cylinder(pm, "", conditional=False) == pytest.approx(pm.stationary[0])


def test_measure_entropy_examples(golden, four_leaf):
    assert measure_entropy(build_parry(graph_from_tree(golden))) == pytest.approx(math.log2(PHI), abs=1e-12)
    assert measure_entropy(build_parry(graph_from_tree(four_leaf))) == pytest.approx(
        math.log2(FOUR_LEAF_RHO), abs=1e-12
    )


def test_pushforward_examples(golden, full_binary, four_leaf):
    pm = build_parry(graph_from_tree(golden))
    assert parry_cylinder(pm, decode(golden, "1")) == pytest.approx(0.381966, abs=1e-6)
    assert verify_parry_pushforward(golden, 5)
    assert verify_parry_pushforward(full_binary, 5)
    assert verify_parry_pushforward(four_leaf, 4, tol=1e-9)


specs = st.builds(
    lambda seed, m, k: random_spec(random.Random(seed), m, k, 6),
    st.integers(0, 10**6),
    st.sampled_from([2, 3]),
    st.integers(2, 8),
)


@settings(max_examples=40, deadline=None)
@given(specs)
def test_parry_invariants(spec):
    g = graph_from_tree(spec)
    pm = build_parry(g)
    A = g.adjacency.astype(float)
    assert A @ pm.right == pytest.approx(pm.rho * pm.right, rel=1e-10)
    assert pm.left @ A == pytest.approx(pm.rho * pm.left, rel=1e-10)
    P = pm.transition_matrix
    assert P.sum(axis=1) == pytest.approx(np.ones(g.n), abs=1e-10)
    assert pm.stationary @ P == pytest.approx(pm.stationary, abs=1e-10)
    assert pm.stationary.sum() == pytest.approx(1.0, abs=1e-10)
    right, left = tree_eigvecs(spec, pm.rho)
    assert pm.right == pytest.approx(right, rel=1e-9)
    alpha = channel_capacity(LengthFunction.from_spec(spec)).alpha
    assert measure_entropy(pm) == pytest.approx(math.log2(pm.rho), abs=1e-9)
    assert math.log2(pm.rho) == pytest.approx(alpha, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(specs, st.floats(0.01, 100.0))
def test_transitions_scale_invariant(spec, scale):
    g = graph_from_tree(spec)
    pm = build_parry(g)
    r = pm.right * scale
    trans = [r[e.target] / (r[e.source] * pm.rho) for e in g.edges]
    assert trans == pytest.approx(list(pm.transitions), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(specs)
def test_terminal_cylinders(spec):
    pm = build_parry(graph_from_tree(spec))
    lf = LengthFunction.from_spec(spec)
    dm = derived_measure(channel_capacity(lf), lf)
    for i, t in enumerate(spec.terminal_nodes):
        p = parry_cylinder(pm, t)
        assert p == pytest.approx(pm.rho ** -len(t), rel=1e-9)
        assert p == pytest.approx(dm.symbol_probs[i], rel=1e-9)


def test_cycle_fact_four_leaf(four_leaf):
    g = graph_from_tree(four_leaf)
    pm = build_parry(g)
    for n in range(1, 9):
        for walk in closed_walks(g, n):
            assert cycle_probability(pm, walk) == pytest.approx(pm.rho**-n, rel=1e-9)


def test_pushforward_error_small(regression_set):
    for spec in regression_set[:4]:
        assert pushforward_max_error(spec, 3) <= 1e-12
