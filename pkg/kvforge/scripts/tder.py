"""
tder.py - Tangential derivations, the group TAut_n and the cosimplicial maps.

A tangential derivation u = (a_1, ..., a_n) acts on generators by
u(x_k) = [x_k, a_k] and extends to Lie, associative and cyclic words by the
Leibniz rule. The single-letter term x_k of a_k acts trivially, so it is
always stripped (canonical form); the stripped coefficients form the a_n part.

TAut_n elements are stored through their logarithm. compose(F, G) is the
automorphism "G first, then F".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclic import CyclicSeries, trace
from .errors import ConfigMismatchError, MalformedInputError
from .freelie import (
    AssocSeries,
    LieSeries,
    TruncationConfig,
    Word,
    bch_lie,
    bracket,
    embed,
    generator,
    lyndon_words,
    substitute,
    to_lie,
)


@dataclass(frozen=True)
class APart:
    """Coefficients of the central tuples (0, ..., x_i, ..., 0)."""

    coefficients: Tuple[Fraction, ...]

    @classmethod
    def zero(cls, n: int) -> "APart":
        return cls(tuple(Fraction(0) for _ in range(n)))

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    def __add__(self, other: "APart") -> "APart":
        if len(self.coefficients) != len(other.coefficients):
            raise ConfigMismatchError("a-parts of different arity")
        return APart(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "APart":
        return APart(tuple(-c for c in self.coefficients))

    def __bool__(self) -> bool:
        return any(self.coefficients)


class TangentialDerivation:
    """
    Tuple-form tangential derivation in canonical form.

    Args:
        config: truncation config; n_generators is the number of strands
        slots: one LieSeries per strand
    """

    __slots__ = ("config", "slots", "_images")

    def __init__(self, config: TruncationConfig, slots: Sequence[LieSeries]):
        slots = tuple(slots)
        if len(slots) != config.n_generators:
            raise ConfigMismatchError(f"expected {config.n_generators} slots, got {len(slots)}")
        for s in slots:
            if s.config != config:
                raise ConfigMismatchError("slot config differs from derivation config")
        self.config = config
        self.slots = tuple(_strip(s, k) for k, s in enumerate(slots))
        self._images = None

    @classmethod
    def zero(cls, config: TruncationConfig) -> "TangentialDerivation":
        return cls(config, [LieSeries.zero(config)] * config.n_generators)

    def _map(self, fn) -> "TangentialDerivation":
        return TangentialDerivation(self.config, [fn(s) for s in self.slots])

    def __add__(self, other: "TangentialDerivation") -> "TangentialDerivation":
        _check(self, other)
        return TangentialDerivation(self.config, [a + b for a, b in zip(self.slots, other.slots)])

    def __neg__(self) -> "TangentialDerivation":
        return self._map(lambda s: -s)

    def __sub__(self, other: "TangentialDerivation") -> "TangentialDerivation":
        return self + (-other)

    def __mul__(self, scalar) -> "TangentialDerivation":
        return self._map(lambda s: s * scalar)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return any(self.slots)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TangentialDerivation):
            return NotImplemented
        return self.config == other.config and self.slots == other.slots

    __hash__ = None

    def degree_part(self, d: int) -> "TangentialDerivation":
        return self._map(lambda s: s.degree_part(d))

    def truncate(self, max_degree: int) -> "TangentialDerivation":
        config = self.config.with_degree(max_degree)
        return TangentialDerivation(config, [s.truncate(max_degree) for s in self.slots])

    def with_max_degree(self, max_degree: int) -> "TangentialDerivation":
        config = self.config.with_degree(max_degree)
        return TangentialDerivation(config, [s.with_max_degree(max_degree) for s in self.slots])

    def degree_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for s in self.slots:
            for d, k in s.degree_counts().items():
                counts[d] = counts.get(d, 0) + k
        return counts

    def coordinates(self) -> Dict[Tuple[int, Word], Fraction]:
        return {(k, w): c for k, s in enumerate(self.slots) for w, c in s.terms.items()}

    def generator_images(self) -> List[AssocSeries]:
        """Associative images x_k A_k - A_k x_k of the generators."""
        if self._images is None:
            images = []
            for k, s in enumerate(self.slots):
                xk = AssocSeries._make(self.config, {(k,): Fraction(1)})
                ak = embed(s)
                images.append(xk * ak - ak * xk)
            self._images = images
        return self._images

    def __repr__(self) -> str:
        return f"TangentialDerivation({', '.join(repr(s) for s in self.slots)})"


def _strip(s: LieSeries, k: int) -> LieSeries:
    if (k,) not in s.terms:
        return s
    return LieSeries._make(s.config, {w: c for w, c in s.terms.items() if w != (k,)})


def _check(u, v) -> None:
    if u.config != v.config:
        raise ConfigMismatchError(f"config mismatch: {u.config} vs {v.config}")


def split_a_part(config: TruncationConfig, slots: Sequence[LieSeries]) -> Tuple[TangentialDerivation, APart]:
    """Separate an arbitrary tuple into its canonical derivation and a-part."""
    a = APart(tuple(s.coefficient((k,)) for k, s in enumerate(slots)))
    return TangentialDerivation(config, slots), a


# ---------------------------------------------------------------------------
# Actions
# ---------------------------------------------------------------------------

def apply_assoc(u: TangentialDerivation, a: AssocSeries) -> AssocSeries:
    """Leibniz extension of u to the associative algebra."""
    _check(u, a)
    images = u.generator_images()
    limit = u.config.max_degree
    out: Dict[Word, Fraction] = {}
    for w, c in a.terms.items():
        for p, letter in enumerate(w):
            image = images[letter]
            if not image:
                continue
            prefix, suffix = w[:p], w[p + 1:]
            room = limit - len(w) + 1
            for v, cv in image.terms.items():
                if len(v) <= room:
                    key = prefix + v + suffix
                    out[key] = out.get(key, 0) + c * cv
    return AssocSeries._make(u.config, {w: c for w, c in out.items() if c})


def apply(u: TangentialDerivation, a: LieSeries) -> LieSeries:
    """u(a) for a Lie series a."""
    _check(u, a)
    return to_lie(apply_assoc(u, embed(a)))


def apply_cyc(u: TangentialDerivation, c: CyclicSeries) -> CyclicSeries:
    """u acting on cyclic words through a representative word."""
    _check(u, c)
    image = trace(apply_assoc(u, AssocSeries._make(c.config, dict(c.terms))))
    if c.quotient_linear:
        return CyclicSeries._make(image.config, {w: v for w, v in image.terms.items() if len(w) != 1}, True)
    return image


def tder_bracket(u: TangentialDerivation, v: TangentialDerivation) -> TangentialDerivation:
    """
    Commutator u v - v u, slotwise u(b_k) - v(a_k) + [a_k, b_k].
    """
    _check(u, v)
    if not u or not v:
        return TangentialDerivation.zero(u.config)
    slots = []
    for a, b in zip(u.slots, v.slots):
        slots.append(apply(u, b) - apply(v, a) + bracket(a, b))
    return TangentialDerivation(u.config, slots)


# ---------------------------------------------------------------------------
# TAut_n
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TAutElement:
    """Element exp(log) of TAut_n."""

    config: TruncationConfig
    log: TangentialDerivation

    def __post_init__(self):
        if self.log.config != self.config:
            raise ConfigMismatchError("log config differs from element config")

    @classmethod
    def identity(cls, config: TruncationConfig) -> "TAutElement":
        return cls(config, TangentialDerivation.zero(config))

    @classmethod
    def exp_of(cls, u: TangentialDerivation) -> "TAutElement":
        return cls(u.config, u)

    def is_identity(self) -> bool:
        return not self.log

    def truncate(self, max_degree: int) -> "TAutElement":
        log = self.log.truncate(max_degree)
        return TAutElement(log.config, log)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TAutElement):
            return NotImplemented
        return self.log == other.log

    __hash__ = None


def exp_apply_assoc(F: TAutElement, a: AssocSeries) -> AssocSeries:
    """sum_k u^k(a)/k! on associative words."""
    total = a
    term = a
    for k in range(1, F.config.max_degree + 1):
        term = apply_assoc(F.log, term) * Fraction(1, k)
        if not term:
            break
        total = total + term
    return total


def exp_apply(F: TAutElement, a: LieSeries) -> LieSeries:
    """The automorphism F applied to a Lie series."""
    _check(F, a)
    return to_lie(exp_apply_assoc(F, embed(a)))


def exp_apply_cyc(F: TAutElement, c: CyclicSeries) -> CyclicSeries:
    """The automorphism F applied to cyclic words."""
    _check(F, c)
    total = c
    term = c
    for k in range(1, F.config.max_degree + 1):
        term = apply_cyc(F.log, term) * Fraction(1, k)
        if not term:
            break
        total = total + term
    return total


def compose(F: TAutElement, G: TAutElement) -> TAutElement:
    """The automorphism a -> F(G(a)); its log is bch(log F, log G)."""
    _check(F, G)
    if F.is_identity():
        return G
    if G.is_identity():
        return F
    log = bch_lie(F.log, G.log, tder_bracket, F.config.max_degree)
    return TAutElement(F.config, log)


def inverse(F: TAutElement) -> TAutElement:
    return TAutElement(F.config, -F.log)


def compose_all(elements: Iterable[TAutElement]) -> TAutElement:
    """Left-to-right product: compose_all([A, B, C]) = A o B o C."""
    elements = list(elements)
    result = elements[0]
    for e in elements[1:]:
        result = compose(result, e)
    return result


# ---------------------------------------------------------------------------
# Cosimplicial maps and t_n
# ---------------------------------------------------------------------------

def parse_coface_spec(spec: str, n: int, n_target: Optional[int] = None) -> List[Tuple[int, ...]]:
    """
    Parse a descriptor such as "2,3" or "1,23".

    Block i lists the (1-based) new strands that old strand i is sent to.

    Returns:
        list: one tuple of 0-based target strands per old strand
    """
    n_target = n + 1 if n_target is None else n_target
    blocks = [part.strip() for part in spec.split(",")]
    if len(blocks) != n or any(not b or not b.isdigit() for b in blocks):
        raise MalformedInputError(f"coface spec {spec!r} needs {n} nonempty digit blocks")
    parsed = [tuple(int(ch) - 1 for ch in b) for b in blocks]
    seen = set()
    for block in parsed:
        for j in block:
            if not 0 <= j < n_target or j in seen:
                raise MalformedInputError(f"coface spec {spec!r} is not a valid map into {n_target} strands")
            seen.add(j)
    return parsed


def coface(u: TangentialDerivation, spec: str, n_target: Optional[int] = None) -> TangentialDerivation:
    """
    Insert an empty strand or double a strand.

    Generator x_i becomes the sum of the new generators in block i; new slot j
    receives the substituted a_i when j belongs to block i and 0 otherwise.
    """
    n = u.config.n_generators
    blocks = parse_coface_spec(spec, n, n_target)
    target = u.config.with_generators(n + 1 if n_target is None else n_target)
    images = []
    for block in blocks:
        image = LieSeries.zero(target)
        for j in block:
            image = image + generator(target, j)
        images.append(image)
    slots = [LieSeries.zero(target) for _ in range(target.n_generators)]
    for i, block in enumerate(blocks):
        lifted = substitute(u.slots[i], images) if u.slots[i] else LieSeries.zero(target)
        for j in block:
            slots[j] = lifted
    return TangentialDerivation(target, slots)


def coface_element(F: TAutElement, spec: str, n_target: Optional[int] = None) -> TAutElement:
    return TAutElement.exp_of(coface(F.log, spec, n_target))


def t_embed(i: int, j: int, config: TruncationConfig) -> TangentialDerivation:
    """t^{i,j} (1-based): slot i holds x_j, slot j holds x_i."""
    n = config.n_generators
    if not 1 <= i < j <= n:
        raise MalformedInputError(f"t^{{{i},{j}}} needs 1 <= i < j <= {n}")
    slots = [LieSeries.zero(config) for _ in range(n)]
    slots[i - 1] = generator(config, j - 1)
    slots[j - 1] = generator(config, i - 1)
    return TangentialDerivation(config, slots)


def t_sum(pairs: Iterable[Tuple[int, int]], config: TruncationConfig) -> TangentialDerivation:
    total = TangentialDerivation.zero(config)
    for i, j in pairs:
        total = total + t_embed(i, j, config)
    return total


def tder_basis(config: TruncationConfig, d: int) -> List[TangentialDerivation]:
    """Canonical basis of the degree-d part of tder_n, ordered by slot then word."""
    basis = []
    n = config.n_generators
    for k in range(n):
        for w in lyndon_words(n, d):
            if w == (k,):
                continue
            slots = [LieSeries.zero(config) for _ in range(n)]
            slots[k] = LieSeries._make(config, {w: Fraction(1)})
            basis.append(TangentialDerivation(config, slots))
    return basis
