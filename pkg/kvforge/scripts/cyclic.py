"""
cyclic.py - Cyclic words, the trace map and one-variable power series.

A cyclic word is stored as its lexicographically minimal rotation (necklace).
OneVarSeries holds the Duflo-type series r(u) = sum_{d>=2} r_d u^d.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import ConfigMismatchError, MalformedInputError, ScalarPartError
from .freelie import (
    AssocSeries,
    LieSeries,
    TruncationConfig,
    Word,
    _Series,
    assoc_mul,
    bch_series,
    embed,
    generator,
)

Necklace = Word


@lru_cache(maxsize=None)
def necklace(word: Word) -> Necklace:
    """Minimal rotation of a nonempty word."""
    return min(word[i:] + word[:i] for i in range(len(word)))


@lru_cache(maxsize=None)
def necklaces(n: int, d: int) -> Tuple[Necklace, ...]:
    """All necklaces of length d over n letters, sorted."""
    found = set()
    stack: List[Word] = [()]
    while stack:
        w = stack.pop()
        if len(w) == d:
            found.add(necklace(w))
            continue
        stack.extend(w + (i,) for i in range(n))
    return tuple(sorted(found))


class CyclicSeries(_Series):
    """
    Truncated element of cyc_n, optionally modulo degree-1 necklaces.

    Args:
        config: truncation config
        terms: mapping word -> coefficient; words are rotated to necklaces
        quotient_linear: when True degree-1 necklaces are identified with 0
    """

    __slots__ = ("quotient_linear",)

    def __init__(self, config: TruncationConfig, terms: Optional[Mapping[Word, object]] = None,
                 quotient_linear: bool = False):
        super().__init__(config, terms)
        self.quotient_linear = quotient_linear
        if quotient_linear:
            self._terms = {w: c for w, c in self._terms.items() if len(w) != 1}

    def _normalize_key(self, config, word):
        word = super()._normalize_key(config, word)
        if not word:
            raise MalformedInputError("cyclic words are nonempty")
        return necklace(word)

    @classmethod
    def _make(cls, config, terms, quotient_linear: bool = False):
        obj = super()._make(config, terms)
        obj.quotient_linear = quotient_linear
        return obj

    @classmethod
    def zero(cls, config, quotient_linear: bool = False):
        return cls._make(config, {}, quotient_linear)

    def _like(self, terms):
        return self._make(self.config, terms, self.quotient_linear)

    def truncate(self, max_degree):
        out = super().truncate(max_degree)
        out.quotient_linear = self.quotient_linear
        return out

    def with_max_degree(self, max_degree):
        out = super().with_max_degree(max_degree)
        out.quotient_linear = self.quotient_linear
        return out

    def __add__(self, other):
        if not isinstance(other, CyclicSeries):
            return NotImplemented
        flag = self.quotient_linear or other.quotient_linear
        total = super().__add__(other)
        if flag:
            return quotient_linear(total)
        return total

    def __eq__(self, other):
        if not isinstance(other, CyclicSeries):
            return NotImplemented
        return super().__eq__(other) and self.quotient_linear == other.quotient_linear

    __hash__ = None


def trace(a: AssocSeries) -> CyclicSeries:
    """Project to cyclic words; the scalar part is discarded."""
    out: Dict[Necklace, Fraction] = {}
    for w, c in a.terms.items():
        if not w:
            continue
        key = necklace(w)
        out[key] = out.get(key, 0) + c
    return CyclicSeries._make(a.config, {k: c for k, c in out.items() if c})


def partial_i(a: AssocSeries, i: int) -> AssocSeries:
    """The part of a whose words end in x_i, with that final letter removed."""
    if not 0 <= i < a.config.n_generators:
        raise MalformedInputError(f"generator index {i} out of range")
    return AssocSeries._make(a.config, {w[:-1]: c for w, c in a.terms.items() if w and w[-1] == i})


def quotient_linear(c: CyclicSeries) -> CyclicSeries:
    """Identify degree-1 necklaces with zero."""
    return CyclicSeries._make(c.config, {w: v for w, v in c.terms.items() if len(w) != 1}, True)


class OneVarSeries:
    """
    Power series sum r_d u^d with 2 <= d <= max_degree.

    Args:
        max_degree: truncation degree N
        coefficients: mapping degree -> coefficient
    """

    __slots__ = ("max_degree", "_coefficients")

    def __init__(self, max_degree: int, coefficients: Optional[Mapping[int, object]] = None):
        clean: Dict[int, Fraction] = {}
        for d, c in (coefficients or {}).items():
            d = int(d)
            if d < 2:
                raise MalformedInputError(f"one-variable series start in degree 2, got degree {d}")
            if d > max_degree:
                continue
            c = Fraction(c)
            if c:
                clean[d] = c
        self.max_degree = max_degree
        self._coefficients = clean

    @property
    def coefficients(self) -> Mapping[int, Fraction]:
        return MappingProxyType(self._coefficients)

    def __getitem__(self, d: int) -> Fraction:
        return self._coefficients.get(d, Fraction(0))

    def _check(self, other: "OneVarSeries") -> None:
        if self.max_degree != other.max_degree:
            raise ConfigMismatchError(f"series truncations differ: {self.max_degree} vs {other.max_degree}")

    def __add__(self, other: "OneVarSeries") -> "OneVarSeries":
        self._check(other)
        keys = set(self._coefficients) | set(other._coefficients)
        return OneVarSeries(self.max_degree, {d: self[d] + other[d] for d in keys})

    def __neg__(self) -> "OneVarSeries":
        return OneVarSeries(self.max_degree, {d: -c for d, c in self._coefficients.items()})

    def __sub__(self, other: "OneVarSeries") -> "OneVarSeries":
        return self + (-other)

    def __mul__(self, scalar) -> "OneVarSeries":
        scalar = Fraction(scalar)
        return OneVarSeries(self.max_degree, {d: c * scalar for d, c in self._coefficients.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self._coefficients)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OneVarSeries):
            return NotImplemented
        return self.max_degree == other.max_degree and self._coefficients == other._coefficients

    __hash__ = None

    def truncate(self, max_degree: int) -> "OneVarSeries":
        return OneVarSeries(max_degree, {d: c for d, c in self._coefficients.items() if d <= max_degree})

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*u^{d}" for d, c in sorted(self._coefficients.items())) or "0"
        return f"OneVarSeries(N={self.max_degree}: {body})"


def eval_series(r: OneVarSeries, arg: AssocSeries) -> AssocSeries:
    """Substitute arg into r, truncated at arg's degree bound."""
    if arg.scalar():
        raise ScalarPartError("eval_series needs an argument with zero scalar part")
    result = AssocSeries.zero(arg.config)
    power = arg
    for d in range(2, arg.config.max_degree + 1):
        power = assoc_mul(power, arg)
        if not power:
            break
        if r[d]:
            result = result + power * r[d]
    return result


def _require_two(config: TruncationConfig) -> None:
    if config.n_generators != 2:
        raise ConfigMismatchError("Duflo combinations live in cyc_2")


def duflo_combination(r: OneVarSeries, config: TruncationConfig) -> CyclicSeries:
    """tr(r(x+y) - r(x) - r(y)) in cyc_2."""
    _require_two(config)
    x, y = embed(generator(config, 0)), embed(generator(config, 1))
    return trace(eval_series(r, x + y) - eval_series(r, x) - eval_series(r, y))


def bch_combination(sigma: OneVarSeries, config: TruncationConfig) -> CyclicSeries:
    """tr(sigma(bch(x,y)) - sigma(x) - sigma(y)) in cyc_2."""
    _require_two(config)
    z = embed(LieSeries._make(config, dict(bch_series(config.max_degree).terms)))
    x, y = embed(generator(config, 0)), embed(generator(config, 1))
    return trace(eval_series(sigma, z) - eval_series(sigma, x) - eval_series(sigma, y))


def hook_necklace(d: int) -> Necklace:
    """The necklace x^(d-1) y that pins down the degree-d Duflo coefficient."""
    return (0,) * (d - 1) + (1,)
