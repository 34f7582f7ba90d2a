"""Finite trees over an m-letter alphabet given by prefix-free terminal sets.

Words are stored as tuples of small integers.  For text I/O the symbol
``i`` is written as ``SYMBOLS[i]`` (digits, then lower-case letters), which
covers alphabets of size up to 36.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import (
    DegenerateTree,
    EmptyTerminal,
    FractreeError,
    LengthMismatch,
    NotPrefixFree,
    SymbolOutOfRange,
)

SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"

Word = tuple  # tuple[int, ...]
WordLike = Union[str, Sequence[int]]


def as_word(w: WordLike) -> Word:
    """Coerce a string like ``"0110"`` or a sequence of ints to a word tuple."""
    if isinstance(w, str):
        try:
            return tuple(SYMBOLS.index(c) for c in w.lower())
        except ValueError:
            bad = next(c for c in w.lower() if c not in SYMBOLS)
            raise SymbolOutOfRange(f"unknown symbol {bad!r}") from None
    return tuple(int(s) for s in w)


def format_word(w: Sequence[int]) -> str:
    return "".join(SYMBOLS[s] for s in w)


def length_lex_key(w: Sequence[int]):
    return (len(w), tuple(w))


def is_prefix(u: Sequence[int], v: Sequence[int]) -> bool:
    return len(u) <= len(v) and tuple(v[: len(u)]) == tuple(u)


@dataclass(frozen=True)
class TreeNodeSet:
    """Downward closure of a terminal set.

    ``nodes`` is in length-lexicographic order, so ``non_terminal[0]`` is the
    root.
    """

    nodes: tuple
    terminal: frozenset
    non_terminal: tuple

    @property
    def non_terminal_count(self) -> int:
        return len(self.non_terminal)

    def is_terminal(self, node) -> bool:
        return tuple(node) in self.terminal

    def __contains__(self, node) -> bool:
        return tuple(node) in self._node_set

    @cached_property
    def _node_set(self):
        return frozenset(self.nodes)


@dataclass(frozen=True)
class FractalTreeSpec:
    """A finite tree ``T`` over ``{0, ..., m-1}`` given by its terminal nodes.

    The order of ``terminal_nodes`` is the coding order: terminal node ``i``
    is coded by the symbol ``i``.  Constructing the dataclass directly keeps
    the supplied order; :func:`validate_spec` sorts length-lexicographically.
    """

    alphabet_size: int
    terminal_nodes: tuple
    _children: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        m = self.alphabet_size
        if not isinstance(m, int) or m < 2:
            raise SymbolOutOfRange(f"alphabet size must be an integer >= 2, got {m!r}")
        terms = tuple(as_word(t) for t in self.terminal_nodes)
        object.__setattr__(self, "terminal_nodes", terms)
        for t in terms:
            if not t:
                raise EmptyTerminal("terminal nodes must be non-empty")
            for s in t:
                if not 0 <= s < m:
                    raise SymbolOutOfRange(
                        f"symbol {s} in {format_word(t)!r} outside alphabet of size {m}"
                    )
        if len(terms) < 2:
            raise DegenerateTree(f"need at least 2 terminal nodes, got {len(terms)}")
        # a prefix of w sorts between w's prefix and w, so adjacent pairs suffice
        ordered = sorted(terms)
        for u, v in zip(ordered, ordered[1:]):
            if is_prefix(u, v):
                raise NotPrefixFree(format_word(u), format_word(v))
        children = {}
        for node in self.nodes.non_terminal:
            children[node] = {}
        for node in self.nodes.nodes[1:]:
            children[node[:-1]][node[-1]] = node
        object.__setattr__(self, "_children", children)

    @property
    def k(self) -> int:
        return len(self.terminal_nodes)

    @property
    def m(self) -> int:
        return self.alphabet_size

    @cached_property
    def nodes(self) -> TreeNodeSet:
        closure = {()}
        for t in self.terminal_nodes:
            for i in range(1, len(t) + 1):
                closure.add(t[:i])
        nodes = tuple(sorted(closure, key=length_lex_key))
        terminal = frozenset(self.terminal_nodes)
        non_terminal = tuple(v for v in nodes if v not in terminal)
        return TreeNodeSet(nodes, terminal, non_terminal)

    @cached_property
    def terminal_index(self) -> dict:
        return {t: i for i, t in enumerate(self.terminal_nodes)}

    def child(self, node, symbol):
        """Child of a non-terminal node along ``symbol``, or None."""
        return self._children[node].get(symbol)

    def to_json(self) -> dict:
        return {
            "alphabet_size": self.alphabet_size,
            "terminal_nodes": [format_word(t) for t in self.terminal_nodes],
        }

    @classmethod
    def from_json(cls, data, keep_order=False) -> "FractalTreeSpec":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        try:
            m = data["alphabet_size"]
            terms = data["terminal_nodes"]
        except (KeyError, TypeError) as exc:
            raise FractreeError(f"malformed tree JSON: {exc}") from None
        return validate_spec(m, terms, keep_order=keep_order)

    def __str__(self):
        terms = ", ".join(format_word(t) for t in self.terminal_nodes)
        return f"FractalTreeSpec(m={self.alphabet_size}, {{{terms}}})"


def validate_spec(
    alphabet_size: int, terminal_nodes: Iterable[WordLike], keep_order: bool = False
) -> FractalTreeSpec:
    """Validate a raw terminal set and return a spec.

    Unless ``keep_order`` is set the terminal nodes are put into
    length-lexicographic order, which fixes the coding bijection.
    """
    terms = [as_word(t) for t in terminal_nodes]
    if not keep_order:
        terms.sort(key=length_lex_key)
    return FractalTreeSpec(alphabet_size, tuple(terms))


def depth_profile(spec: FractalTreeSpec) -> list:
    """Number of terminal nodes at each depth ``1..n``.

    ``n`` is the number of non-terminal nodes; the deepest terminal node has
    depth at most ``n`` because its proper prefixes are distinct non-terminals.
    """
    n = spec.nodes.non_terminal_count
    counts = [0] * n
    for t in spec.terminal_nodes:
        counts[len(t) - 1] += 1
    return counts


def is_in_expansion(spec: FractalTreeSpec, sigma: WordLike) -> bool:
    """Whether ``sigma`` is a node of the self-similar expansion ``T*``."""
    node = ()
    for s in as_word(sigma):
        if not 0 <= s < spec.alphabet_size:
            return False
        node = spec.child(node, s)
        if node is None:
            return False
        if node in spec.nodes.terminal:
            node = ()
    return True


def metric_distance(x_prefix: WordLike, y_prefix: WordLike, m: int) -> Fraction:
    """``m**-j`` where ``j`` is the length of the longest common prefix."""
    x, y = as_word(x_prefix), as_word(y_prefix)
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} != {len(y)}")
    for j, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return Fraction(1, m**j)
    return Fraction(0)


def random_spec(rng: random.Random, m: int, k: int, max_depth: int = 8) -> FractalTreeSpec:
    """A random prefix-free terminal set with ``k`` words of length <= max_depth.

    Words are drawn one at a time and kept when they are prefix-incomparable
    with everything kept so far.
    """
    if k > m**max_depth:
        raise DegenerateTree(f"cannot fit {k} terminal nodes at depth <= {max_depth}")
    while True:
        chosen: list = []
        for _ in range(200 * k):
            if len(chosen) == k:
                break
            length = rng.randint(1, max_depth)
            w = tuple(rng.randrange(m) for _ in range(length))
            if all(not is_prefix(w, t) and not is_prefix(t, w) for t in chosen):
                chosen.append(w)
        if len(chosen) == k:
            return validate_spec(m, chosen)
