"""Finite-scale effective-dimension traces over pluggable complexity functions.

Prefix-free Kolmogorov complexity is uncomputable, so every estimate here is
taken relative to a :class:`ComplexityFunction` backend.  Nothing in this
module claims to compute the dimension of an infinite sequence: liminf and
limsup are replaced by the min and max over a tail window of the trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .coding import (
    DerivedMeasure,
    LengthFunction,
    channel_capacity,
    decode,
    derived_measure,
    encode,
    similarity_dimension,
)
from .errors import IndexOutOfRange, TableMiss
from .tree import FractalTreeSpec, Word, WordLike, as_word, format_word


@dataclass(frozen=True)
class ComplexityFunction:
    """A deterministic map from finite words to non-negative reals."""

    name: str
    evaluate: Callable[[Word], float]
    alphabet_size: Optional[int] = None

    def __call__(self, word: WordLike) -> float:
        value = float(self.evaluate(as_word(word)))
        if value < 0 or math.isnan(value):
            raise ValueError(f"backend {self.name!r} returned {value!r}")
        return value


def table_backend(entries: Mapping, name: str = "table") -> ComplexityFunction:
    """Explicit finite lookup table; keys may be strings or symbol tuples."""
    table = {as_word(k): float(v) for k, v in entries.items()}

    def lookup(word):
        try:
            return table[word]
        except KeyError:
            raise TableMiss(f"{format_word(word)!r} is not in the table") from None

    return ComplexityFunction(name, lookup)


def table_from_json(data: Mapping) -> ComplexityFunction:
    """Backend from the ``{"entries": {"<word>": value}}`` file format."""
    return table_backend(data["entries"])


def lz78_phrase_count(word: Sequence[int]) -> int:
    """Number of phrases in the LZ78 incremental parse (a trailing partial
    phrase counts as one)."""
    phrases = set()
    current = ()
    count = 0
    for s in word:
        current = current + (s,)
        if current not in phrases:
            phrases.add(current)
            count += 1
            current = ()
    if current:
        count += 1
    return count


def lz78_backend(alphabet_size: int) -> ComplexityFunction:
    """Heuristic proxy ``c * log2(c + m)`` with ``c`` LZ78 phrases.

    Not a normative complexity estimate: it only orders compressible words
    below incompressible-looking ones.
    """

    def lz(word):
        c = lz78_phrase_count(word)
        return c * math.log2(c + alphabet_size) if c else 0.0

    return ComplexityFunction("lz78", lz, alphabet_size)


def _neg_log2_fn(measure) -> Callable[[Word], float]:
    if isinstance(measure, DerivedMeasure):
        return measure.neg_log2
    if callable(measure):
        return lambda w: -math.log2(measure(w))
    probs = tuple(float(p) for p in measure)
    logs = [-math.log2(p) for p in probs]
    return lambda w: math.fsum(logs[s] for s in w)


def ideal_mu_backend(measure) -> ComplexityFunction:
    """``C(w) = -log2 mu(w)``.

    ``measure`` is a :class:`DerivedMeasure`, a sequence of Bernoulli symbol
    probabilities, or a callable returning ``mu(w)``.
    """
    return ComplexityFunction("ideal-mu", _neg_log2_fn(measure))


BACKENDS = {
    "table": table_backend,
    "lz78": lz78_backend,
    "ideal-mu": ideal_mu_backend,
}


def builtin_backends() -> dict:
    """Backend factories by name."""
    return dict(BACKENDS)


@dataclass(frozen=True)
class DimensionTrace:
    """Complexity ratios along a prefix.

    ``lower`` / ``upper`` are the min / max of ``ratios[window_start:]``, the
    final half of the trace, and stand in for liminf / limsup.
    """

    indices: tuple
    ratios: tuple
    running_min: tuple
    running_max: tuple
    lower: float
    upper: float
    window_start: int


def _tail_window(ratios):
    start = len(ratios) // 2
    tail = ratios[start:]
    return min(tail), max(tail), start


def dimension_trace(
    C: ComplexityFunction,
    x_prefix: WordLike,
    m: int,
    indices: Optional[Sequence[int]] = None,
    measure=None,
) -> DimensionTrace:
    """Ratios ``C(x|n) / (n log2 m)`` at the given prefix lengths.

    When ``measure`` is given the denominator is ``-log2 mu(x|n)`` instead,
    which traces the dimension relative to that measure.
    """
    x = as_word(x_prefix)
    if indices is None:
        indices = range(1, len(x) + 1)
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise IndexOutOfRange("no indices to trace")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise IndexOutOfRange("indices must be strictly increasing")
    if indices[0] < 1 or indices[-1] > len(x):
        raise IndexOutOfRange(f"indices must lie in 1..{len(x)}")
    if measure is None:
        log_m = math.log2(m)

        def denom(n):
            return n * log_m

    else:
        neg_log2 = _neg_log2_fn(measure)

        def denom(n):
            return neg_log2(x[:n])

    ratios = tuple(C(x[:n]) / denom(n) for n in indices)
    run_min, run_max = [], []
    lo, hi = math.inf, -math.inf
    for v in ratios:
        lo, hi = min(lo, v), max(hi, v)
        run_min.append(lo)
        run_max.append(hi)
    lower, upper, start = _tail_window(ratios)
    return DimensionTrace(indices, ratios, tuple(run_min), tuple(run_max), lower, upper, start)


@dataclass(frozen=True)
class TransferRow:
    j: int
    n_j: int
    lhs: float
    rhs: float


def transfer_identity(spec: FractalTreeSpec, C_x: ComplexityFunction, x_prefix: WordLike) -> list:
    """Both sides of the length/measure transfer at every full parse point.

    With ``y = encode(x)`` and ``C_y(y|j) := C_x(x|n_j)``::

        C_x(x|n_j) / (n_j log2 m)  ==  sdim * C_y(y|j) / (-log2 mu_l(y|j))

    The identity is exact algebra, so only rounding separates the sides.
    """
    x = as_word(x_prefix)
    tseq, _ = encode(spec, x)
    lf = LengthFunction.from_spec(spec)
    dm = derived_measure(channel_capacity(lf), lf)
    sdim = similarity_dimension(spec)
    log_m = math.log2(spec.alphabet_size)
    y = tseq.code_symbols

    def C_y(word):
        return C_x(decode(spec, word))

    rows = []
    for j in range(1, len(y) + 1):
        n_j = tseq.cut_points[j]
        lhs = C_x(x[:n_j]) / (n_j * log_m)
        rhs = sdim * C_y(y[:j]) / dm.neg_log2(y[:j])
        rows.append(TransferRow(j, n_j, lhs, rhs))
    return rows


def transfer_identity_check(
    spec: FractalTreeSpec, C_x: ComplexityFunction, x_prefix: WordLike, tol: float = 1e-9
) -> bool:
    return all(abs(r.lhs - r.rhs) <= tol for r in transfer_identity(spec, C_x, x_prefix))


@dataclass(frozen=True)
class SandwichReport:
    min_all: float
    min_cuts: Optional[float]
    max_cuts: Optional[float]
    max_all: float

    @property
    def lower_gap(self) -> Optional[float]:
        return None if self.min_cuts is None else self.min_cuts - self.min_all

    @property
    def upper_gap(self) -> Optional[float]:
        return None if self.max_cuts is None else self.max_all - self.max_cuts

    @property
    def holds(self) -> bool:
        if self.min_cuts is None:
            return True
        return self.min_all <= self.min_cuts and self.max_cuts <= self.max_all


def sandwich_check(spec: FractalTreeSpec, C: ComplexityFunction, x_prefix: WordLike) -> SandwichReport:
    """Min/max of the ratio over all prefix lengths versus over cut points only."""
    x = as_word(x_prefix)
    tseq, _ = encode(spec, x)
    log_m = math.log2(spec.alphabet_size)
    ratio = {n: C(x[:n]) / (n * log_m) for n in range(1, len(x) + 1)}
    if not ratio:
        raise IndexOutOfRange("empty prefix")
    at_cuts = [ratio[n] for n in tseq.cut_points[1:]]
    return SandwichReport(
        min_all=min(ratio.values()),
        min_cuts=min(at_cuts) if at_cuts else None,
        max_cuts=max(at_cuts) if at_cuts else None,
        max_all=max(ratio.values()),
    )
