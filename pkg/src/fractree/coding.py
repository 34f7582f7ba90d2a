"""Length functions, channel capacity, similarity dimension and the coding map.

All logarithms are base 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import NonConvergence, NotInExpansion, SymbolOutOfRange
from .tree import FractalTreeSpec, Word, WordLike, as_word, format_word

DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class LengthFunction:
    """Per-symbol integer costs, ``costs[i] = |tau_i|`` when induced by a tree."""

    costs: tuple
    spec: Optional[FractalTreeSpec] = None

    def __post_init__(self):
        costs = tuple(int(c) for c in self.costs)
        if len(costs) < 2:
            raise ValueError("a length function needs at least two symbols")
        if min(costs) < 1:
            raise ValueError("costs must be positive integers")
        object.__setattr__(self, "costs", costs)

    @classmethod
    def from_spec(cls, spec: FractalTreeSpec) -> "LengthFunction":
        return cls(tuple(len(t) for t in spec.terminal_nodes), spec)

    @property
    def k(self) -> int:
        return len(self.costs)

    def of(self, word: WordLike) -> int:
        """Total cost of a coded word."""
        return sum(self.costs[s] for s in as_word(word))


@dataclass(frozen=True)
class CapacityResult:
    alpha: float
    r: float
    sdim: Optional[float]
    residual: float


@dataclass(frozen=True)
class DerivedMeasure:
    """Bernoulli measure on coded sequences with ``p_i = r**cost_i``."""

    symbol_probs: tuple
    costs: tuple
    alpha: float

    def of(self, word: WordLike) -> float:
        p = 1.0
        for s in as_word(word):
            p *= self.symbol_probs[s]
        return p

    def neg_log2(self, word: WordLike) -> float:
        return -sum(math.log2(self.symbol_probs[s]) for s in as_word(word))


@dataclass(frozen=True)
class TSequence:
    """Cut points ``n_0 = 0 < n_1 < ...`` and the code symbol of each block."""

    cut_points: tuple
    code_symbols: tuple

    def __post_init__(self):
        if len(self.cut_points) != len(self.code_symbols) + 1 or self.cut_points[0] != 0:
            raise ValueError("cut points must start at 0 and bracket every block")


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float, increasing: bool):
    """Bisection for a monotone ``f`` with a sign change on ``[lo, hi]``.

    Runs until the bracket stops shrinking in floating point (or the
    iteration cap), then requires ``|f| <= tol`` at the returned point.
    """
    sign = 1.0 if increasing else -1.0
    mid = 0.5 * (lo + hi)
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        value = f(mid)
        if value == 0.0:
            break
        if sign * value < 0:
            lo = mid
        else:
            hi = mid
    residual = abs(f(mid))
    if residual > tol:
        raise NonConvergence(f"bisection stopped with residual {residual:.3e} > {tol:.1e}")
    return mid, residual


def channel_capacity(lf: LengthFunction, tol: float = DEFAULT_TOL) -> CapacityResult:
    """Solve ``sum_i 2**(-alpha * cost_i) = 1`` for the channel capacity.

    Bisection is on ``f(r) = sum_i r**cost_i - 1`` over ``[0, 1]``, which is
    strictly increasing with ``f(0) = -1`` and ``f(1) = k - 1 > 0``.
    """
    costs = lf.costs

    def f(r):
        return sum(r**c for c in costs) - 1.0

    r, residual = _bisect(f, 0.0, 1.0, tol, increasing=True)
    alpha = -math.log2(r)
    sdim = alpha / math.log2(lf.spec.alphabet_size) if lf.spec is not None else None
    return CapacityResult(alpha=alpha, r=r, sdim=sdim, residual=residual)


def similarity_dimension(spec: FractalTreeSpec, tol: float = DEFAULT_TOL) -> float:
    """Solve ``sum_i m**(-beta * |tau_i|) = 1`` for ``beta``.

    Works directly in the exponent ``beta`` (base ``m``), independently of
    :func:`channel_capacity`.  The left side is decreasing in ``beta``, equal
    to ``k`` at 0 and at most ``k * m**-beta``, so ``[0, log_m k + 1]`` brackets it.
    """
    m = spec.alphabet_size
    depths = [len(t) for t in spec.terminal_nodes]

    def g(beta):
        return math.fsum(m ** (-beta * d) for d in depths) - 1.0

    hi = math.log(spec.k, m) + 1.0
    beta, _ = _bisect(g, 0.0, hi, tol, increasing=False)
    return beta


def derived_measure(cap: CapacityResult, lf: LengthFunction) -> DerivedMeasure:
    probs = tuple(cap.r**c for c in lf.costs)
    return DerivedMeasure(symbol_probs=probs, costs=lf.costs, alpha=cap.alpha)


def encode(spec: FractalTreeSpec, x_prefix: WordLike):
    """Parse a prefix of a point of the fractal into terminal-node blocks.

    Returns ``(TSequence, remainder)`` where ``remainder`` is the trailing
    proper prefix of a terminal node (possibly empty).  Raises
    :class:`NotInExpansion` with the 0-based position where parsing fails.
    """
    x = as_word(x_prefix)
    cuts = [0]
    symbols = []
    node = ()
    for pos, s in enumerate(x):
        nxt = spec.child(node, s) if 0 <= s < spec.alphabet_size else None
        if nxt is None:
            raise NotInExpansion(
                pos, f"{format_word(x)!r} leaves the tree at position {pos}"
            )
        if nxt in spec.nodes.terminal:
            symbols.append(spec.terminal_index[nxt])
            cuts.append(pos + 1)
            node = ()
        else:
            node = nxt
    return TSequence(tuple(cuts), tuple(symbols)), node


def decode(spec: FractalTreeSpec, y_prefix: WordLike) -> Word:
    """Concatenate the terminal nodes named by the coded word ``y_prefix``."""
    out: list = []
    for s in as_word(y_prefix):
        if not 0 <= s < spec.k:
            raise SymbolOutOfRange(f"code symbol {s} outside 0..{spec.k - 1}")
        out.extend(spec.terminal_nodes[s])
    return tuple(out)


def measure_of_coded_word(dm: DerivedMeasure, y_prefix: WordLike):
    """Return ``(mu(y), -log2 mu(y))``.

    The second value is ``alpha * cost(y)``; it is checked against the log of
    the symbol-probability product.
    """
    y = as_word(y_prefix)
    mu = dm.of(y)
    neg_log2_mu = dm.alpha * sum(dm.costs[s] for s in y)
    direct = dm.neg_log2(y)
    if abs(direct - neg_log2_mu) > 1e-9 * max(1.0, neg_log2_mu):
        raise AssertionError(
            f"-log2 mu = {direct!r} disagrees with alpha * cost = {neg_log2_mu!r}"
        )
    return mu, neg_log2_mu


def coded_words(k: int, length: int):
    """All words of ``length`` over ``{0..k-1}`` in lexicographic order."""
    if length == 0:
        yield ()
        return
    for head in coded_words(k, length - 1):
        for s in range(k):
            yield head + (s,)


def bernoulli_mass(dm: DerivedMeasure, words: Sequence) -> float:
    return math.fsum(dm.of(w) for w in words)
