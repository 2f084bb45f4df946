"""
freelie.py - Truncated free Lie and free associative algebras over the rationals.

Lie elements are stored in the Lyndon basis: the Lyndon word w stands for its
standard bracketing P_w (split w = uv with v the longest proper Lyndon suffix,
P_w = [P_u, P_v]). Expanded in the associative algebra, P_w is w plus
lexicographically larger words of the same length, which makes conversion
back to the basis a triangular elimination.

Words are tuples of 0-based generator indices.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.functions.combinatorial.numbers import mobius
from sympy.ntheory import divisors

from .errors import (
    ConfigMismatchError,
    DegreeRangeError,
    MalformedInputError,
    NotLieElementError,
    ScalarPartError,
)

Word = Tuple[int, ...]
# A Lyndon word is a Word with the Lyndon property; see is_lyndon.
LyndonWord = Word


@dataclass(frozen=True)
class TruncationConfig:
    """
    Generator count and truncation degree shared by every value it tags.

    Args:
        n_generators: number of free generators
        max_degree: truncation degree N; words longer than N are dropped
        generator_names: display names (defaults to x, y, z for n <= 3,
            otherwise x1..xn)
    """

    n_generators: int
    max_degree: int
    generator_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.n_generators < 1:
            raise MalformedInputError(f"n_generators must be positive, got {self.n_generators}")
        if self.max_degree < 1:
            raise DegreeRangeError(f"truncation degree N must be >= 1, got {self.max_degree}")
        names = self.generator_names
        if names is None:
            names = default_names(self.n_generators)
        names = tuple(names)
        if len(names) != self.n_generators:
            raise MalformedInputError("one generator name per generator is required")
        if len(set(names)) != len(names):
            raise MalformedInputError(f"generator names must be distinct: {names}")
        object.__setattr__(self, "generator_names", names)

    def with_degree(self, max_degree: int) -> "TruncationConfig":
        return TruncationConfig(self.n_generators, max_degree, self.generator_names)

    def with_generators(self, n_generators: int) -> "TruncationConfig":
        """Same truncation on n_generators; custom names are kept, cut or extended with fresh ones."""
        if self.generator_names == default_names(self.n_generators):
            return TruncationConfig(n_generators, self.max_degree)
        names = list(self.generator_names[:n_generators])
        spare = default_names(n_generators) + tuple(f"x{i}" for i in range(1, 2 * n_generators + 1))
        for name in spare:
            if len(names) == n_generators:
                break
            if name not in names:
                names.append(name)
        return TruncationConfig(n_generators, self.max_degree, tuple(names))

    def word_text(self, word: Word) -> str:
        if not word:
            return "()"
        return ".".join(self.generator_names[i] for i in word)


def default_names(n: int) -> Tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i}" for i in range(1, n + 1))


def _check_same(a: Any, b: Any) -> None:
    if a.config != b.config:
        raise ConfigMismatchError(f"config mismatch: {a.config} vs {b.config}")


# ---------------------------------------------------------------------------
# Lyndon words
# ---------------------------------------------------------------------------

def is_lyndon(word: Sequence[int]) -> bool:
    """True if word is nonempty and strictly smaller than each proper suffix."""
    word = tuple(word)
    if not word:
        return False
    return all(word < word[i:] for i in range(1, len(word)))


@lru_cache(maxsize=None)
def lyndon_words(n: int, d: int) -> Tuple[Word, ...]:
    """All Lyndon words of length d over n letters, lexicographically sorted (Duval)."""
    words = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == d:
            words.append(tuple(w))
        m = len(w)
        while len(w) < d:
            w.append(w[-m])
        while w and w[-1] == n - 1:
            w.pop()
    return tuple(words)


def witt_dimension(n: int, d: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra on n generators."""
    return int(sum(mobius(d // e) * n ** e for e in divisors(d))) // d


def lyndon_basis(config: TruncationConfig, d: int) -> List[LyndonWord]:
    """
    Lyndon words of length d for the given config.

    Args:
        config: truncation config (n letters, degree bound N)
        d: degree, 1 <= d <= N

    Returns:
        list: lexicographically sorted Lyndon words
    """
    if not 1 <= d <= config.max_degree:
        raise DegreeRangeError(f"degree {d} outside 1..{config.max_degree}")
    return list(lyndon_words(config.n_generators, d))


@lru_cache(maxsize=None)
def standard_factorization(word: LyndonWord) -> Tuple[LyndonWord, LyndonWord]:
    """Split a Lyndon word of length >= 2 as uv with v its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise MalformedInputError(f"{word} has no standard factorization")


def _commutator_terms(p: Mapping[Word, Any], q: Mapping[Word, Any], limit: Optional[int] = None) -> Dict[Word, Any]:
    out: Dict[Word, Any] = {}
    for u, cu in p.items():
        for v, cv in q.items():
            if limit is not None and len(u) + len(v) > limit:
                continue
            c = cu * cv
            uv, vu = u + v, v + u
            out[uv] = out.get(uv, 0) + c
            out[vu] = out.get(vu, 0) - c
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def lyndon_polynomial(word: LyndonWord) -> Mapping[Word, int]:
    """Associative expansion of the standard bracketing of a Lyndon word."""
    if len(word) == 1:
        return MappingProxyType({word: 1})
    left, right = standard_factorization(word)
    return MappingProxyType(_commutator_terms(lyndon_polynomial(left), lyndon_polynomial(right)))


@lru_cache(maxsize=None)
def left_normed_polynomial(word: Word) -> Mapping[Word, int]:
    """Associative expansion of [...[[w1, w2], w3], ..., wd]."""
    terms: Dict[Word, int] = {word[:1]: 1}
    for letter in word[1:]:
        terms = _commutator_terms(terms, {(letter,): 1})
    return MappingProxyType(terms)


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

class _Series:
    """Sparse truncated series keyed by words; shared arithmetic."""

    __slots__ = ("config", "_terms")

    def __init__(self, config: TruncationConfig, terms: Optional[Mapping[Any, Any]] = None):
        clean: Dict[Any, Fraction] = {}
        for key, coeff in (terms or {}).items():
            key = self._normalize_key(config, tuple(key))
            if len(key) > config.max_degree:
                continue
            clean[key] = clean.get(key, Fraction(0)) + Fraction(coeff)
        self.config = config
        self._terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def _make(cls, config: TruncationConfig, terms: Dict[Any, Fraction]):
        obj = cls.__new__(cls)
        obj.config = config
        obj._terms = terms
        return obj

    def _normalize_key(self, config: TruncationConfig, word: Word) -> Word:
        if any(not 0 <= i < config.n_generators for i in word):
            raise MalformedInputError(f"word {word} uses letters outside 0..{config.n_generators - 1}")
        return word

    def _like(self, terms: Dict[Any, Fraction]):
        return self._make(self.config, terms)

    @property
    def terms(self) -> Mapping[Any, Fraction]:
        return MappingProxyType(self._terms)

    @classmethod
    def zero(cls, config: TruncationConfig):
        return cls._make(config, {})

    def coefficient(self, word: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(word), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.config == other.config and self._terms == other._terms

    __hash__ = None

    def __add__(self, other):
        _check_same(self, other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return self._like(out)

    def __neg__(self):
        return self._like({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        if not scalar:
            return self._like({})
        return self._like({w: c * scalar for w, c in self._terms.items()})

    __rmul__ = __mul__

    def degree_part(self, d: int):
        return self._like({w: c for w, c in self._terms.items() if len(w) == d})

    def homogeneous_parts(self) -> Dict[int, Any]:
        """Split into degree-homogeneous series, keyed by the degrees that occur."""
        parts: Dict[int, Dict[Any, Fraction]] = {}
        for w, c in self._terms.items():
            parts.setdefault(len(w), {})[w] = c
        return {d: self._like(parts[d]) for d in sorted(parts)}

    def truncate(self, max_degree: int):
        """Drop terms above max_degree and retag with the smaller config."""
        if max_degree > self.config.max_degree:
            raise ConfigMismatchError(f"cannot truncate N={self.config.max_degree} up to {max_degree}")
        return self._make(self.config.with_degree(max_degree),
                          {w: c for w, c in self._terms.items() if len(w) <= max_degree})

    def with_max_degree(self, max_degree: int):
        """Retag with another truncation degree, dropping terms that no longer fit."""
        return self._make(self.config.with_degree(max_degree),
                          {w: c for w, c in self._terms.items() if len(w) <= max_degree})

    def degree_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for w in self._terms:
            counts[len(w)] = counts.get(len(w), 0) + 1
        return counts

    def min_degree(self) -> Optional[int]:
        return min((len(w) for w in self._terms), default=None)

    def sorted_terms(self) -> List[Tuple[Any, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: (len(item[0]), item[0]))

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{self.config.word_text(w)}" for w, c in self.sorted_terms()) or "0"
        return f"{type(self).__name__}(n={self.config.n_generators}, N={self.config.max_degree}: {body})"


class LieSeries(_Series):
    """Element of the truncated free Lie algebra, keyed by Lyndon words."""

    __slots__ = ()

    def _normalize_key(self, config, word):
        word = super()._normalize_key(config, word)
        if not is_lyndon(word):
            raise MalformedInputError(f"{config.word_text(word)} is not a Lyndon word")
        return word


class AssocSeries(_Series):
    """Element of the truncated free associative algebra; the empty word is the unit."""

    __slots__ = ()

    @classmethod
    def one(cls, config: TruncationConfig) -> "AssocSeries":
        return cls._make(config, {(): Fraction(1)})

    def scalar(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def __mul__(self, other):
        if isinstance(other, AssocSeries):
            return assoc_mul(self, other)
        return super().__mul__(other)

    def __rmul__(self, scalar):
        return _Series.__mul__(self, scalar)


def generator(config: TruncationConfig, i: int) -> LieSeries:
    """The generator x_i (0-based) as a LieSeries."""
    if not 0 <= i < config.n_generators:
        raise MalformedInputError(f"generator index {i} out of range")
    return LieSeries._make(config, {(i,): Fraction(1)})


def generators(config: TruncationConfig) -> List[LieSeries]:
    return [generator(config, i) for i in range(config.n_generators)]


# ---------------------------------------------------------------------------
# Associative algebra
# ---------------------------------------------------------------------------

def assoc_mul(a: AssocSeries, b: AssocSeries) -> AssocSeries:
    _check_same(a, b)
    limit = a.config.max_degree
    out: Dict[Word, Fraction] = {}
    for u, cu in a._terms.items():
        room = limit - len(u)
        for v, cv in b._terms.items():
            if len(v) <= room:
                w = u + v
                out[w] = out.get(w, 0) + cu * cv
    return AssocSeries._make(a.config, {w: c for w, c in out.items() if c})


def exp_trunc(a: AssocSeries) -> AssocSeries:
    """Truncated exponential; a must have zero scalar part."""
    if a.scalar():
        raise ScalarPartError("exp_trunc needs a series with zero scalar part")
    result = AssocSeries.one(a.config)
    term = result
    for k in range(1, a.config.max_degree + 1):
        term = assoc_mul(term, a) * Fraction(1, k)
        if not term:
            break
        result = result + term
    return result


def log_trunc(g: AssocSeries) -> AssocSeries:
    """Truncated logarithm; g must have scalar part exactly 1."""
    if g.scalar() != 1:
        raise ScalarPartError(f"log_trunc needs scalar part 1, got {g.scalar()}")
    h = g - AssocSeries.one(g.config)
    result = AssocSeries.zero(g.config)
    power = h
    for k in range(1, g.config.max_degree + 1):
        if not power:
            break
        result = result + power * Fraction((-1) ** (k + 1), k)
        power = assoc_mul(power, h)
    return result


# ---------------------------------------------------------------------------
# Lie <-> associative
# ---------------------------------------------------------------------------

def embed(a: LieSeries) -> AssocSeries:
    """Expand a Lie series into the associative algebra."""
    out: Dict[Word, Fraction] = {}
    for w, c in a._terms.items():
        for v, k in lyndon_polynomial(w).items():
            out[v] = out.get(v, 0) + c * k
    return AssocSeries._make(a.config, {v: c for v, c in out.items() if c})


def to_lie(a: AssocSeries) -> LieSeries:
    """
    Express an associative Lie element in the Lyndon basis.

    Raises:
        NotLieElementError: if a is not a Lie element
    """
    work: Dict[Word, Fraction] = dict(a._terms)
    heap = list(work)
    heapq.heapify(heap)
    out: Dict[Word, Fraction] = {}
    while heap:
        w = heapq.heappop(heap)
        c = work.pop(w, 0)
        if not c:
            continue
        if not is_lyndon(w):
            raise NotLieElementError(f"term {a.config.word_text(w)} does not come from a Lie element")
        out[w] = c
        for v, k in lyndon_polynomial(w).items():
            if v == w:
                continue
            if v in work:
                work[v] -= c * k
            else:
                work[v] = -c * k
                heapq.heappush(heap, v)
    return LieSeries._make(a.config, out)


def dynkin_project(a: AssocSeries) -> LieSeries:
    """Map each degree-d word to its left-normed bracket divided by d."""
    if a.scalar():
        raise ScalarPartError("dynkin_project needs a series with zero scalar part")
    out: Dict[Word, Fraction] = {}
    for w, c in a._terms.items():
        scale = c / len(w)
        for v, k in left_normed_polynomial(w).items():
            out[v] = out.get(v, 0) + scale * k
    return to_lie(AssocSeries._make(a.config, {v: c for v, c in out.items() if c}))


def bracket(a: LieSeries, b: LieSeries) -> LieSeries:
    _check_same(a, b)
    if not a or not b:
        return LieSeries.zero(a.config)
    pa, pb = embed(a), embed(b)
    return to_lie(AssocSeries._make(a.config, _commutator_terms(pa._terms, pb._terms, a.config.max_degree)))


def bch(a: LieSeries, b: LieSeries) -> LieSeries:
    """log(exp(a) exp(b)) through the associative algebra."""
    _check_same(a, b)
    product = assoc_mul(exp_trunc(embed(a)), exp_trunc(embed(b)))
    return dynkin_project(log_trunc(product))


@lru_cache(maxsize=None)
def bch_series(max_degree: int) -> LieSeries:
    """The universal series bch(x, y) on two generators up to max_degree."""
    config = TruncationConfig(2, max_degree)
    x, y = generators(config)
    return bch(x, y)


def evaluate_lie_word(series: LieSeries, args: Sequence[Any], bracket_fn: Callable[[Any, Any], Any]) -> Any:
    """
    Substitute args for the generators of series inside an arbitrary Lie algebra.

    Args:
        series: Lie series on k generators
        args: k elements supporting +, scalar * and truth testing
        bracket_fn: the Lie bracket of the target algebra

    Returns:
        the image of series under the Lie map sending generator i to args[i]
    """
    if len(args) != series.config.n_generators:
        raise ConfigMismatchError(f"expected {series.config.n_generators} arguments, got {len(args)}")
    zero = args[0] * 0
    values: Dict[Word, Any] = {}

    def value(word: Word):
        if word in values:
            return values[word]
        if len(word) == 1:
            result = args[word[0]]
        else:
            left, right = standard_factorization(word)
            lv = value(left)
            rv = value(right) if lv else zero
            result = bracket_fn(lv, rv) if (lv and rv) else zero
        values[word] = result
        return result

    total = zero
    for word, c in series.sorted_terms():
        v = value(word)
        if v:
            total = total + v * c
    return total


def substitute(word: LieSeries, args: Sequence[LieSeries]) -> LieSeries:
    """Image of word under the Lie algebra map generator i -> args[i]."""
    if not args:
        raise ConfigMismatchError("substitute needs at least one argument")
    for arg in args[1:]:
        _check_same(args[0], arg)
    return evaluate_lie_word(word, args, bracket)


def bch_lie(a: Any, b: Any, bracket_fn: Callable[[Any, Any], Any], max_degree: int) -> Any:
    """bch(a, b) evaluated in any Lie algebra through the universal series."""
    return evaluate_lie_word(bch_series(max_degree), (a, b), bracket_fn)

