"""
divjac.py - Non-commutative divergence j, the Jacobian cocycle J and exp(J).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from .cyclic import CyclicSeries, necklace
from .errors import ConfigMismatchError
from .freelie import embed
from .tder import TAutElement, TangentialDerivation, apply_cyc


def divergence(u: TangentialDerivation) -> CyclicSeries:
    """
    j(u) = tr(sum_i d_i(a_i) x_i).

    d_i(a) x_i keeps exactly the words of a that end in x_i, so the sum is
    taken over those words directly.
    """
    out: Dict[tuple, Fraction] = {}
    for i, slot in enumerate(u.slots):
        for w, c in embed(slot).terms.items():
            if w[-1] == i:
                key = necklace(w)
                out[key] = out.get(key, 0) + c
    return CyclicSeries._make(u.config, {k: c for k, c in out.items() if c})


def jacobian(F: TAutElement) -> CyclicSeries:
    """J(e^u) = sum_{k>=0} u^k(j(u)) / (k+1)!, truncated."""
    u = F.log
    term = divergence(u)
    total = term
    for k in range(1, F.config.max_degree + 1):
        if not term:
            break
        term = apply_cyc(u, term) * Fraction(1, k + 1)
        total = total + term
    return total


@dataclass(frozen=True, eq=False)
class GroupLikeCyc:
    """exp(log) in the (abelian) group exp(cyc_n), stored additively."""

    log: CyclicSeries

    @classmethod
    def unit(cls, config) -> "GroupLikeCyc":
        return cls(CyclicSeries.zero(config))

    def __mul__(self, other: "GroupLikeCyc") -> "GroupLikeCyc":
        if self.log.config != other.log.config:
            raise ConfigMismatchError("group-like cyclic elements of different configs")
        return GroupLikeCyc(self.log + other.log)

    def inverse(self) -> "GroupLikeCyc":
        return GroupLikeCyc(-self.log)

    def is_unit(self) -> bool:
        return not self.log

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupLikeCyc):
            return NotImplemented
        return self.log == other.log

    __hash__ = None


def jac_exp(F: TAutElement) -> GroupLikeCyc:
    """The exponentiated Jacobian exp(J(F))."""
    return GroupLikeCyc(jacobian(F))


def cyc_group_power(g: GroupLikeCyc, q) -> GroupLikeCyc:
    """g^q for a rational exponent q."""
    return GroupLikeCyc(g.log * Fraction(q))
