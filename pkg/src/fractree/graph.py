"""Pointed directed multigraphs presenting self-similar fractal trees.

Vertices are numbered ``0..n-1`` internally with the distinguished vertex at
``root`` (``0`` for graphs built from trees).  The JSON and DOT exports use
1-based vertex numbers ``v1..vn``.
"""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .coding import LengthFunction, channel_capacity
from .errors import (
    BlockLengthTooLarge,
    CycleAvoidsRoot,
    GraphFormatError,
    MultipleEdgeNotToRoot,
    NonConvergence,
    NoRootInBracket,
    NotIrreducible,
    NotRightResolving,
)
from .tree import SYMBOLS, FractalTreeSpec, as_word, depth_profile, validate_spec

MAX_BLOCK_LENGTH = 30
_INT64_SAFE = 2**62


class Edge(NamedTuple):
    source: int
    target: int
    label: int


@dataclass(frozen=True)
class PointedGraph:
    """Edge-labelled directed multigraph with a distinguished vertex.

    Parallel edges between a fixed ordered pair of vertices must carry
    distinct labels.  Right-resolution is *not* required here; see
    :func:`check_right_resolving`.
    """

    n: int
    edges: tuple
    alphabet_size: int
    root: int = 0
    _out: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError("a graph needs at least one vertex")
        if not 0 <= self.root < self.n:
            raise GraphFormatError(f"root {self.root} is not a vertex")
        edges = tuple(Edge(int(a), int(b), int(c)) for a, b, c in self.edges)
        seen = set()
        out = [[] for _ in range(self.n)]
        for idx, e in enumerate(edges):
            if not (0 <= e.source < self.n and 0 <= e.target < self.n):
                raise GraphFormatError(f"edge {e} references a missing vertex")
            if not 0 <= e.label < self.alphabet_size:
                raise GraphFormatError(f"edge {e} has a label outside the alphabet")
            if e in seen:
                raise GraphFormatError(
                    f"parallel edges {e.source}->{e.target} repeat label {e.label}"
                )
            seen.add(e)
            out[e.source].append(idx)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))

    def out_edges(self, vertex: int) -> tuple:
        """Indices into ``edges`` of the edges leaving ``vertex``."""
        return self._out[vertex]

    def step(self, vertex: int, label: int) -> Optional[int]:
        """Index of the edge leaving ``vertex`` with ``label`` (first match), or None."""
        for idx in self._out[vertex]:
            if self.edges[idx].label == label:
                return idx
        return None

    @cached_property
    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for e in self.edges:
            A[e.source, e.target] += 1
        A.setflags(write=False)
        return A

    def to_json(self) -> dict:
        return {
            "schema": "fractree/1",
            "n": self.n,
            "root": self.root + 1,
            "alphabet_size": self.alphabet_size,
            "edges": [[e.source + 1, e.target + 1, SYMBOLS[e.label]] for e in self.edges],
        }

    @classmethod
    def from_json(cls, data) -> "PointedGraph":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        try:
            n = int(data["n"])
            root = int(data.get("root", 1)) - 1
            raw = [(int(a) - 1, int(b) - 1, as_word(str(lab))) for a, b, lab in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphFormatError(f"malformed graph JSON: {exc}") from None
        if any(len(lab) != 1 for _, _, lab in raw):
            raise GraphFormatError("edge labels must be single symbols")
        edges = [(a, b, lab[0]) for a, b, lab in raw]
        m = data.get("alphabet_size")
        if m is None:
            m = max([2] + [lab + 1 for _, _, lab in edges])
        return cls(n, tuple(edges), int(m), root)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for v in range(self.n):
            shape = "doublecircle" if v == self.root else "circle"
            lines.append(f"  v{v + 1} [shape={shape}];")
        for e in self.edges:
            lines.append(f'  v{e.source + 1} -> v{e.target + 1} [label="{SYMBOLS[e.label]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def check_right_resolving(g: PointedGraph) -> bool:
    for v in range(g.n):
        labels = [g.edges[i].label for i in g.out_edges(v)]
        if len(labels) != len(set(labels)):
            return False
    return True


def _reachable(g: PointedGraph, start: int, reverse: bool = False) -> set:
    succ = defaultdict(list)
    for e in g.edges:
        if reverse:
            succ[e.target].append(e.source)
        else:
            succ[e.source].append(e.target)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def check_irreducible(g: PointedGraph) -> bool:
    """Strong connectivity: everything reaches the root and vice versa."""
    return len(_reachable(g, g.root)) == g.n and len(_reachable(g, g.root, reverse=True)) == g.n


def graph_from_tree(spec: FractalTreeSpec) -> PointedGraph:
    """Pointed graph whose walks from the root spell the points of ``F_T``.

    One vertex per non-terminal node (length-lexicographic, root first).
    Tree edges between non-terminals are kept; an edge into a terminal node
    is redirected to the root with the same label.
    """
    non_terminal = spec.nodes.non_terminal
    index = {node: i for i, node in enumerate(non_terminal)}
    edges = []
    for i, node in enumerate(non_terminal):
        for a in range(spec.alphabet_size):
            child = spec.child(node, a)
            if child is None:
                continue
            target = 0 if child in spec.nodes.terminal else index[child]
            edges.append((i, target, a))
    g = PointedGraph(len(non_terminal), tuple(edges), spec.alphabet_size, 0)
    assert check_right_resolving(g) and check_irreducible(g)
    return g


@dataclass(frozen=True)
class GraphConditions:
    right_resolving: bool
    irreducible: bool
    multiple_edges_end_at_root: bool
    cycles_through_root: bool
    notes: tuple = ()

    @property
    def presents_fractal_tree(self) -> bool:
        return (
            self.right_resolving
            and self.irreducible
            and self.multiple_edges_end_at_root
            and self.cycles_through_root
        )


def _has_cycle_avoiding(g: PointedGraph, vertex: int) -> bool:
    """Kahn's algorithm on the subgraph with ``vertex`` deleted."""
    keep = [v for v in range(g.n) if v != vertex]
    indeg = {v: 0 for v in keep}
    succ = defaultdict(list)
    for e in g.edges:
        if e.source != vertex and e.target != vertex:
            indeg[e.target] += 1
            succ[e.source].append(e.target)
    queue = [v for v in keep if indeg[v] == 0]
    removed = 0
    while queue:
        v = queue.pop()
        removed += 1
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return removed != len(keep)


def graph_conditions(g: PointedGraph) -> GraphConditions:
    """Evaluate the structural conditions needed to read a tree off ``g``."""
    multiplicity = defaultdict(int)
    for e in g.edges:
        multiplicity[e.source, e.target] += 1
    multi = [pair for pair, count in multiplicity.items() if count > 1]
    notes = []
    if any(src == g.root and dst == g.root for src, dst in multi):
        notes.append("multiple edge originates at the distinguished vertex")
    return GraphConditions(
        right_resolving=check_right_resolving(g),
        irreducible=check_irreducible(g),
        multiple_edges_end_at_root=all(dst == g.root for _, dst in multi),
        cycles_through_root=not _has_cycle_avoiding(g, g.root),
        notes=tuple(notes),
    )


def tree_from_graph(g: PointedGraph) -> FractalTreeSpec:
    """Recover the finite tree whose expansion is the path set of ``g``.

    The terminal nodes are the label words of the first-return cycles at the
    root.  When the root-deleted graph is a tree this inverts
    :func:`graph_from_tree` up to vertex renaming; when it is merely acyclic
    the shared suffixes are unfolded, which keeps the path set unchanged.
    """
    cond = graph_conditions(g)
    if not cond.right_resolving:
        raise NotRightResolving("some vertex has two out-edges with the same label")
    if not cond.irreducible:
        raise NotIrreducible("graph is not strongly connected")
    if not cond.multiple_edges_end_at_root:
        raise MultipleEdgeNotToRoot("a multiple edge ends away from the distinguished vertex")
    if not cond.cycles_through_root:
        raise CycleAvoidsRoot("a cycle avoids the distinguished vertex")
    terms = []
    stack = [(g.root, ())]
    while stack:
        v, word = stack.pop()
        for idx in g.out_edges(v):
            e = g.edges[idx]
            w = word + (e.label,)
            if e.target == g.root:
                terms.append(w)
            else:
                stack.append((e.target, w))
    return validate_spec(g.alphabet_size, terms)


def isomorphic(g: PointedGraph, h: PointedGraph) -> bool:
    """Label-preserving isomorphism of right-resolving pointed graphs."""
    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if not (check_right_resolving(g) and check_right_resolving(h)):
        raise NotRightResolving("isomorphism test needs right-resolving graphs")
    mapping = {g.root: h.root}
    stack = [g.root]
    while stack:
        v = stack.pop()
        w = mapping[v]
        gl = {g.edges[i].label: g.edges[i].target for i in g.out_edges(v)}
        hl = {h.edges[i].label: h.edges[i].target for i in h.out_edges(w)}
        if gl.keys() != hl.keys():
            return False
        for label, gt in gl.items():
            ht = hl[label]
            if gt in mapping:
                if mapping[gt] != ht:
                    return False
            else:
                mapping[gt] = ht
                stack.append(gt)
    return len(mapping) == g.n and len(set(mapping.values())) == h.n


# --- characteristic polynomial --------------------------------------------


@dataclass(frozen=True)
class CharPoly:
    """``p(z) = z**n + c_1 z**(n-1) + ... + c_n`` with integer ``c_i``."""

    coeffs: tuple
    row_sum_bound: Optional[int] = None

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def full(self) -> list:
        return [1, *self.coeffs]

    def __call__(self, z):
        acc = 1
        for c in self.coeffs:
            acc = acc * z + c
        return acc

    def __str__(self):
        n = self.degree
        parts = []
        for power, c in zip(range(n, -1, -1), self.full):
            if c == 0:
                continue
            mag = abs(c)
            if power == 0:
                body = f"{mag}"
            else:
                zp = "z" if power == 1 else f"z^{power}"
                body = zp if mag == 1 else f"{mag}{zp}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        if not parts:
            return "0"
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def charpoly_leverrier(A) -> CharPoly:
    """Exact characteristic polynomial by the Faddeev-Leverrier recurrence.

    ``M_k = A M_{k-1} + c_{k-1} I`` and ``c_k = -trace(A M_k) / k``, which
    expands to ``c_k = -(1/k) trace(A^k + c_1 A^(k-1) + ... + c_(k-1) A)``.
    Integer matrices are multiplied in int64 while a magnitude bound proves
    that no overflow can occur, and in Python integers otherwise.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    if not np.issubdtype(A.dtype, np.integer):
        if not all(float(a).is_integer() for a in A.flat):
            raise ValueError("matrix entries must be integers")
        A = A.astype(np.int64)
    n = A.shape[0]
    # |(A M)_ij| <= row_abs * max|M|
    row_abs = int(np.abs(A).sum(axis=1).max()) if n else 0
    A_obj = A.astype(object)
    A_fast = A.astype(np.int64)
    eye = np.eye(n, dtype=np.int64)
    M = np.zeros((n, n), dtype=np.int64)
    c_prev = 1
    coeffs = []
    for k in range(1, n + 1):
        M = _matmul_exact(A_fast, A_obj, M, row_abs)
        if M.dtype != object and abs(c_prev) >= _INT64_SAFE // 4:
            M = M.astype(object)
        M = M + c_prev * (eye if M.dtype != object else eye.astype(object))
        AM = _matmul_exact(A_fast, A_obj, M, row_abs)
        trace = int(sum(int(AM[i, i]) for i in range(n)))
        c = -Fraction(trace, k)
        if c.denominator != 1:
            raise ArithmeticError(f"Leverrier division by {k} was not exact")
        c_prev = int(c)
        coeffs.append(c_prev)
    row_sums = A.sum(axis=1)
    bound = int(row_sums.max()) if n and (A >= 0).all() else None
    return CharPoly(tuple(coeffs), bound)


def _matmul_exact(A_fast, A_obj, M, row_abs):
    if M.dtype != object:
        peak = int(np.abs(M).max()) if M.size else 0
        if (peak + 1) * max(row_abs, 1) < _INT64_SAFE // 4:
            return A_fast @ M
        M = M.astype(object)
    return A_obj.dot(M)


def perron_eigenvalue(cp: CharPoly, tol: float = 1e-12, grid: int = 2048) -> float:
    """Largest real root of ``cp`` on ``[1, 1 + max row sum]``.

    The interval is scanned downward from the upper end to find the first
    sign change, which belongs to the rightmost root, and that bracket is
    refined by bisection.  Without a known row-sum bound the Cauchy bound
    ``1 + max |c_i|`` is used.
    """
    coeffs = cp.full
    if cp.row_sum_bound is not None:
        hi = 1.0 + cp.row_sum_bound
    else:
        hi = 1.0 + max([abs(c) for c in cp.coeffs] + [1])
    lo = 1.0
    zs = np.linspace(hi, lo, grid + 1)
    vals = np.polyval(np.array(coeffs, dtype=float), zs)
    if vals[0] <= 0:
        raise NoRootInBracket(f"p({hi:g}) = {vals[0]:g} is not positive")
    nonpos = np.nonzero(vals <= 0)[0]
    if nonpos.size == 0:
        raise NoRootInBracket(f"no sign change of {cp} on [{lo:g}, {hi:g}]")
    i = int(nonpos[0])
    if vals[i] == 0:
        return float(zs[i])
    a, b = float(zs[i]), float(zs[i - 1])  # p(a) < 0 < p(b)
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        v = cp(mid)
        if v == 0:
            a = b = mid
            break
        if v < 0:
            a = mid
        else:
            b = mid
    rho = 0.5 * (a + b)
    scale = sum(abs(c) * rho ** (len(coeffs) - 1 - j) for j, c in enumerate(coeffs))
    if abs(cp(rho)) / scale > tol:
        raise NonConvergence(f"scaled residual {abs(cp(rho)) / scale:.3e} exceeds {tol:.1e}")
    return rho


def verify_charpoly_profile(spec: FractalTreeSpec) -> bool:
    """Leverrier coefficients equal negated terminal counts per depth."""
    cp = charpoly_leverrier(graph_from_tree(spec).adjacency)
    return [-c for c in cp.coeffs] == depth_profile(spec)


def verify_entropy_capacity(spec: FractalTreeSpec, tol: float = 1e-9) -> bool:
    """``log2`` of the Perron root equals the channel capacity of ``spec``."""
    rho = perron_eigenvalue(charpoly_leverrier(graph_from_tree(spec).adjacency))
    alpha = channel_capacity(LengthFunction.from_spec(spec)).alpha
    return abs(math.log2(rho) - alpha) <= tol


# --- walks and blocks -------------------------------------------------------


def closed_walks(g: PointedGraph, length: int, vertex: Optional[int] = None):
    """Yield closed walks of ``length`` at ``vertex`` as tuples of edge indices."""
    start = g.root if vertex is None else vertex

    def extend(v, walk):
        if len(walk) == length:
            if v == start:
                yield walk
            return
        for idx in g.out_edges(v):
            yield from extend(g.edges[idx].target, walk + (idx,))

    if length >= 1:
        yield from extend(start, ())


def first_return_words(g: PointedGraph, length: int) -> list:
    """Label words of closed walks at the root that meet it only at the ends."""
    words = []
    for walk in closed_walks(g, length):
        if all(g.edges[i].target != g.root for i in walk[:-1]):
            words.append(tuple(g.edges[i].label for i in walk))
    return words


def _live_vertices(g: PointedGraph) -> set:
    """Vertices from which an infinite walk starts (iteratively drop sinks)."""
    live = set(range(g.n))
    changed = True
    while changed:
        changed = False
        for v in list(live):
            if not any(g.edges[i].target in live for i in g.out_edges(v)):
                live.discard(v)
                changed = True
    return live


def _start_vertices(g: PointedGraph, initial_only: bool) -> set:
    live = _live_vertices(g)
    if initial_only:
        return {g.root} & live
    return _reachable(g, g.root) & live


def _check_length(n: int, max_length: int):
    if n < 1:
        raise ValueError("block length must be >= 1")
    if n > max_length:
        raise BlockLengthTooLarge(f"block length {n} exceeds the guard {max_length}")


def block_words(
    g: PointedGraph, n: int, initial_only: bool = True, max_length: int = MAX_BLOCK_LENGTH
) -> set:
    """Explicit set of length-``n`` label words, by breadth-first expansion."""
    _check_length(n, max_length)
    live = _live_vertices(g)
    frontier = {(): frozenset(_start_vertices(g, initial_only))}
    for _ in range(n):
        nxt = defaultdict(set)
        for word, verts in frontier.items():
            for v in verts:
                for idx in g.out_edges(v):
                    e = g.edges[idx]
                    if e.target in live:
                        nxt[word + (e.label,)].add(e.target)
        frontier = {w: frozenset(vs) for w, vs in nxt.items()}
    return set(frontier)


def count_blocks(
    g: PointedGraph, n: int, initial_only: bool = True, max_length: int = MAX_BLOCK_LENGTH
) -> int:
    """Number of distinct length-``n`` label words of walks.

    With ``initial_only`` the walks start at the distinguished vertex (initial
    blocks of the path set); otherwise they start anywhere in the shift
    closure.  Words are grouped by the set of vertices they can end in (the
    subset construction), and each group carries its word count, so distinct
    words are counted without being materialised.
    """
    _check_length(n, max_length)
    live = _live_vertices(g)
    step = [[0] * g.alphabet_size for _ in range(g.n)]
    for e in g.edges:
        if e.target in live:
            step[e.source][e.label] |= 1 << e.target
    start = 0
    for v in _start_vertices(g, initial_only):
        start |= 1 << v
    if not start:
        return 0
    counts = {start: 1}
    for _ in range(n):
        nxt = defaultdict(int)
        for state, cnt in counts.items():
            for label in range(g.alphabet_size):
                target = 0
                s, v = state, 0
                while s:
                    if s & 1:
                        target |= step[v][label]
                    s >>= 1
                    v += 1
                if target:
                    nxt[target] += cnt
        counts = nxt
    return sum(counts.values())


def entropy_estimate(g: PointedGraph, n_max: int, max_length: int = MAX_BLOCK_LENGTH):
    """Finite-length proxies ``(h_p, h_top)`` at block length ``n_max``.

    ``h_p = log2(N_n) / n`` over all blocks of the shift closure and
    ``h_top = log2(N_n^I) / n`` over initial blocks.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    all_blocks = count_blocks(g, n_max, initial_only=False, max_length=max_length)
    initial = count_blocks(g, n_max, initial_only=True, max_length=max_length)
    return math.log2(all_blocks) / n_max, math.log2(initial) / n_max


# short names used by the verification interface
verify_thm4 = verify_charpoly_profile
verify_thm5 = verify_entropy_capacity
