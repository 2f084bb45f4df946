"""
grtbridge.py - The graded Grothendieck-Teichmueller Lie algebra and its map
into krv_2.

psi is a Lie series in x, y. Its equations:
    inversion   psi(x,y) + psi(y,x) = 0
    hexagon     psi(x,y) + psi(y,z) + psi(z,x) = 0 with z = -x-y
    pentagon    psi(t12, t2,34) + psi(t12,3, t34)
                  = psi(t23, t34) + psi(t1,23, t23,4) + psi(t12, t23)   in tder_4
"""

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import pandas as pd
from joblib import Parallel, delayed

from .cyclic import OneVarSeries
from .divjac import divergence
from .errors import ConfigMismatchError, MalformedInputError, PreconditionError
from .freelie import (
    LieSeries,
    TruncationConfig,
    evaluate_lie_word,
    generators,
    lyndon_words,
    substitute,
)
from .kvsolve import fit_duflo
from .linsolve import nullspace
from .report import DegreeReport
from .settings import log, n_jobs
from .tder import (
    TAutElement,
    TangentialDerivation,
    apply,
    coface,
    compose_all,
    inverse,
    t_sum,
    tder_bracket,
)

BUBBLE_FACTORS: Tuple[Tuple[str, int], ...] = (("12,3", 1), ("1,2", 1), ("2,3", -1), ("1,23", -1))


@dataclass(frozen=True, eq=False)
class GrtCandidate:
    """A grt_1 candidate psi(x, y); degree-1 terms are rejected."""

    psi: LieSeries

    def __post_init__(self):
        if self.psi.config.n_generators != 2:
            raise ConfigMismatchError("grt candidates are Lie series in two generators")
        if self.psi.degree_part(1):
            raise PreconditionError("grt candidates have no degree-1 terms")


@dataclass(frozen=True, eq=False)
class KrvLieElement:
    """u in krv_2 together with its divergence witness s."""

    u: TangentialDerivation
    s: OneVarSeries


class KrvLieCheck(NamedTuple):
    passed: bool
    witness: Optional[KrvLieElement]
    report: DegreeReport


class GrtSolveResult(NamedTuple):
    basis: Dict[int, List[LieSeries]]
    dimensions: pd.DataFrame


PsiLike = Union[GrtCandidate, LieSeries]


def _psi(obj: PsiLike) -> LieSeries:
    psi = obj.psi if isinstance(obj, GrtCandidate) else obj
    if psi.config.n_generators != 2:
        raise ConfigMismatchError("psi must be a Lie series in two generators")
    return psi


# ---------------------------------------------------------------------------
# The defining equations
# ---------------------------------------------------------------------------

def inversion_residual(psi: PsiLike) -> LieSeries:
    psi = _psi(psi)
    x, y = generators(psi.config)
    return substitute(psi, (y, x)) + psi


def hexagon_residual(psi: PsiLike) -> LieSeries:
    psi = _psi(psi)
    x, y = generators(psi.config)
    z = -(x + y)
    return psi + substitute(psi, (y, z)) + substitute(psi, (z, x))


def pentagon_arguments(config: TruncationConfig) -> List[Tuple[int, TangentialDerivation, TangentialDerivation]]:
    """(sign, A, B) for each term of the pentagon, evaluated in tder_4."""
    if config.n_generators != 4:
        raise ConfigMismatchError("the pentagon lives in tder_4")

    def t(*pairs):
        return t_sum(pairs, config)

    return [
        (1, t((1, 2)), t((2, 3), (2, 4))),
        (1, t((1, 3), (2, 3)), t((3, 4))),
        (-1, t((2, 3)), t((3, 4))),
        (-1, t((1, 2), (1, 3)), t((2, 4), (3, 4))),
        (-1, t((1, 2)), t((2, 3))),
    ]


def pentagon_residual(psi: PsiLike) -> TangentialDerivation:
    psi = _psi(psi)
    config = psi.config.with_generators(4)
    total = TangentialDerivation.zero(config)
    for sign, a, b in pentagon_arguments(config):
        total = total + evaluate_lie_word(psi, (a, b), tder_bracket) * sign
    return total


def check_grt(psi: PsiLike) -> DegreeReport:
    """Residuals of inversion, hexagon and pentagon per degree."""
    psi = _psi(psi)
    N = psi.config.max_degree
    return DegreeReport.merge([
        DegreeReport.from_residual("inversion", inversion_residual(psi), N),
        DegreeReport.from_residual("hexagon", hexagon_residual(psi), N),
        DegreeReport.from_residual("pentagon", pentagon_residual(psi), N),
    ])


def _equation_column(word: Tuple[int, ...], d: int) -> Dict[tuple, object]:
    psi = LieSeries._make(TruncationConfig(2, d), {word: 1})
    column = {}
    for w, c in inversion_residual(psi).terms.items():
        column[("inversion", w)] = c
    for w, c in hexagon_residual(psi).terms.items():
        column[("hexagon", w)] = c
    for (k, w), c in pentagon_residual(psi).coordinates().items():
        column[("pentagon", k, w)] = c
    return column


def solve_grt(N: int, min_degree: int = 2) -> GrtSolveResult:
    """
    Kernel of the grt_1 equations on the Lyndon basis, degree by degree.

    Returns:
        GrtSolveResult: basis vectors (as LieSeries at truncation N) per degree
        and a table of candidate-space and solution dimensions
    """
    if N < 1:
        raise MalformedInputError(f"N must be positive, got {N}")
    config = TruncationConfig(2, N)
    basis: Dict[int, List[LieSeries]] = {}
    records = []
    log(f"🚀 Solving grt_1 equations up to degree {N}")
    for d in range(max(min_degree, 1), N + 1):
        words = lyndon_words(2, d)
        columns = Parallel(n_jobs=n_jobs(), prefer="threads")(delayed(_equation_column)(w, d) for w in words)
        keys = sorted({k for col in columns for k in col}, key=repr)
        rows = [[col.get(k, 0) for col in columns] for k in keys]
        kernel = nullspace(rows, len(words))
        basis[d] = [LieSeries._make(config, {w: c for w, c in zip(words, vec) if c}) for vec in kernel]
        records.append({"degree": d, "candidates": len(words), "dimension": len(kernel)})
        log(f"🔧 degree {d}: {len(words)} candidates, dimension {len(kernel)}")
    dimensions = pd.DataFrame.from_records(records, columns=["degree", "candidates", "dimension"])
    return GrtSolveResult(basis, dimensions)


# ---------------------------------------------------------------------------
# rho and krv_2
# ---------------------------------------------------------------------------

def rho(psi: PsiLike) -> TangentialDerivation:
    """psi -> (psi(-x-y, x), psi(-x-y, y))."""
    psi = _psi(psi)
    x, y = generators(psi.config)
    z = -(x + y)
    return TangentialDerivation(psi.config, [substitute(psi, (z, x)), substitute(psi, (z, y))])


def as_tder(psi: PsiLike) -> TangentialDerivation:
    """The derivation (0, psi)."""
    psi = _psi(psi)
    return TangentialDerivation(psi.config, [LieSeries.zero(psi.config), psi])


def ihara_bracket(psi1: PsiLike, psi2: PsiLike) -> LieSeries:
    """Second slot of [(0, psi1), (0, psi2)]."""
    return tder_bracket(as_tder(psi1), as_tder(psi2)).slots[1]


def check_krv_lie(u: TangentialDerivation) -> KrvLieCheck:
    """
    u is in krv_2 iff u(x+y) = 0 and j(u) = tr(s(x+y) - s(x) - s(y)) for some s.

    Returns:
        KrvLieCheck: verdict, the witness (u, s) when it passes, and the report
    """
    config = u.config
    if config.n_generators != 2:
        raise ConfigMismatchError("krv_2 membership needs a derivation on two strands")
    x, y = generators(config)
    kill = apply(u, x + y)
    s, residual = fit_duflo(divergence(u), "krv")
    report = DegreeReport.merge([
        DegreeReport.from_residual("kill", kill, config.max_degree),
        DegreeReport.from_residual("div", residual, config.max_degree),
    ])
    witness = KrvLieElement(u, s) if report.passed else None
    return KrvLieCheck(report.passed, witness, report)


# ---------------------------------------------------------------------------
# Bubble identity
# ---------------------------------------------------------------------------

def bubble_sides(psi: PsiLike, orientation: str = "inverse",
                 factors: Sequence[Tuple[str, int]] = BUBBLE_FACTORS) -> Tuple[TAutElement, TAutElement]:
    """
    Both sides of the bubble identity in TAut_3.

    The left side is the product of the lifted factors alpha^{spec} (or their
    inverses for exponent -1) with alpha = exp(rho(psi)) for the "stated"
    orientation and exp(-rho(psi)) for "inverse". The right side is
    exp(psi(t12, t23)).
    """
    psi = _psi(psi)
    if orientation == "stated":
        alpha_log = rho(psi)
    elif orientation == "inverse":
        alpha_log = -rho(psi)
    else:
        raise MalformedInputError(f"orientation must be 'stated' or 'inverse', got {orientation!r}")
    config3 = psi.config.with_generators(3)
    lifted = []
    for spec, exponent in factors:
        if exponent not in (1, -1):
            raise MalformedInputError(f"factor exponent must be 1 or -1, got {exponent}")
        element = TAutElement.exp_of(coface(alpha_log, spec))
        lifted.append(element if exponent == 1 else inverse(element))
    lhs = compose_all(lifted) if lifted else TAutElement.identity(config3)
    t12, t23 = t_sum([(1, 2)], config3), t_sum([(2, 3)], config3)
    rhs = TAutElement.exp_of(evaluate_lie_word(psi, (t12, t23), tder_bracket))
    return lhs, rhs


def bubble_identity(psi: PsiLike, N: Optional[int] = None, orientation: str = "inverse",
                    factors: Sequence[Tuple[str, int]] = BUBBLE_FACTORS,
                    require_grt: bool = True) -> DegreeReport:
    """
    Residual of the bubble identity per degree.

    Args:
        psi: grt_1 element
        N: truncation degree (defaults to psi's)
        orientation: "inverse" (default) or "stated"
        factors: (coface spec, exponent) pairs of the left side
        require_grt: check the grt_1 equations first
    """
    psi = _psi(psi)
    if N is not None and N != psi.config.max_degree:
        psi = psi.with_max_degree(N)
    if require_grt:
        report = check_grt(psi)
        if not report.passed:
            raise PreconditionError("bubble_identity needs a grt_1 element:\n" + report.to_text())
    lhs, rhs = bubble_sides(psi, orientation, factors)
    return DegreeReport.from_residual("bubble", lhs.log - rhs.log, psi.config.max_degree)
