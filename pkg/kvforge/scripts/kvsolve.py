"""
kvsolve.py - SolKV, KV and KRV: membership checks, the degree-by-degree
solver, group actions and the correspondence with automorphism triples.

Conventions:
    * SolKV equation 1 is checked as bch(F(x), F(y)) = x + y, equation 2 as
      J(F) = tr(r(x+y) - r(x) - r(y)).
    * a . F = F o a^-1 with Duflo series r - sigma, and
      F . alpha = alpha^-1 o F with Duflo series r - s.
    * theta(G) = (exp(-n), -2 gamma) reverses products; theta_bar(G) =
      (exp(n), 2 gamma) preserves them, and theta o theta_inv is KRV inversion.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Tuple

import pandas as pd
from joblib import Parallel, delayed

from .cyclic import (
    CyclicSeries,
    OneVarSeries,
    bch_combination,
    duflo_combination,
    eval_series,
    hook_necklace,
    necklaces,
    quotient_linear,
    trace,
)
from .divjac import jacobian
from .errors import (
    ConfigMismatchError,
    DufloExtractionError,
    InfeasibleSystemError,
    MalformedInputError,
    PreconditionError,
)
from .freelie import LieSeries, TruncationConfig, bch, bch_series, embed, generators, lyndon_words
from .linsolve import rank, solve_affine
from .report import DegreeReport
from .settings import log, n_jobs
from .tder import (
    APart,
    TAutElement,
    TangentialDerivation,
    compose,
    exp_apply,
    exp_apply_cyc,
    inverse,
    tder_basis,
)

# "unit" is an alias of "named".
GAUGES = {"zero": Fraction(0), "named": Fraction(1), "unit": Fraction(1)}


def _require_two(config: TruncationConfig) -> None:
    if config.n_generators != 2:
        raise ConfigMismatchError("KV data lives on two generators")


def _require_degree(config: TruncationConfig, series: OneVarSeries) -> None:
    if series.max_degree != config.max_degree:
        raise ConfigMismatchError(f"truncations differ: N={config.max_degree} vs series N={series.max_degree}")


def _bch_xy(config: TruncationConfig) -> LieSeries:
    return LieSeries._make(config, dict(bch_series(config.max_degree).terms))


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KVCandidate:
    """A candidate (F, r) for SolKV; r may be missing before extraction."""

    F: TAutElement
    r: Optional[OneVarSeries] = None

    def __post_init__(self):
        _require_two(self.F.config)
        if self.r is not None:
            _require_degree(self.F.config, self.r)

    @property
    def config(self) -> TruncationConfig:
        return self.F.config

    def __eq__(self, other) -> bool:
        if not isinstance(other, KVCandidate):
            return NotImplemented
        return self.F == other.F and self.r == other.r

    __hash__ = None


@dataclass(frozen=True, eq=False)
class KRVElement:
    """(alpha, s) with alpha(x+y) = x+y and J(alpha) = tr(s(x+y) - s(x) - s(y))."""

    alpha: TAutElement
    s: OneVarSeries

    def __post_init__(self):
        _require_two(self.alpha.config)
        _require_degree(self.alpha.config, self.s)

    @property
    def config(self) -> TruncationConfig:
        return self.alpha.config

    @classmethod
    def identity(cls, config: TruncationConfig) -> "KRVElement":
        return cls(TAutElement.identity(config), OneVarSeries(config.max_degree))

    def __eq__(self, other) -> bool:
        if not isinstance(other, KRVElement):
            return NotImplemented
        return self.alpha == other.alpha and self.s == other.s

    __hash__ = None


@dataclass(frozen=True, eq=False)
class KVGroupElement:
    """(a, sigma) with a(e^x e^y) = e^x e^y and J(a) = tr(sigma(bch) - sigma(x) - sigma(y))."""

    a: TAutElement
    sigma: OneVarSeries

    def __post_init__(self):
        _require_two(self.a.config)
        _require_degree(self.a.config, self.sigma)

    @property
    def config(self) -> TruncationConfig:
        return self.a.config

    @classmethod
    def identity(cls, config: TruncationConfig) -> "KVGroupElement":
        return cls(TAutElement.identity(config), OneVarSeries(config.max_degree))

    def __eq__(self, other) -> bool:
        if not isinstance(other, KVGroupElement):
            return NotImplemented
        return self.a == other.a and self.sigma == other.sigma

    __hash__ = None


@dataclass(frozen=True, eq=False)
class AutArrowsElement:
    """
    Automorphism data (w, n, a, gamma): the vertex value e^w e^(n+a) and the
    cap value exp(tr gamma).
    """

    w: CyclicSeries
    n_part: TangentialDerivation
    a_part: APart
    gamma: OneVarSeries

    def __post_init__(self):
        config = self.n_part.config
        _require_two(config)
        if self.w.config != config:
            raise ConfigMismatchError("w and n_part carry different configs")
        if len(self.a_part.coefficients) != config.n_generators:
            raise ConfigMismatchError("a_part arity differs from n_part")
        _require_degree(config, self.gamma)

    @property
    def config(self) -> TruncationConfig:
        return self.n_part.config

    @classmethod
    def identity(cls, config: TruncationConfig) -> "AutArrowsElement":
        return cls(CyclicSeries.zero(config), TangentialDerivation.zero(config),
                   APart.zero(config.n_generators), OneVarSeries(config.max_degree))

    def is_v_small(self) -> bool:
        return not self.a_part

    def __eq__(self, other) -> bool:
        if not isinstance(other, AutArrowsElement):
            return NotImplemented
        return (self.w == other.w and self.n_part == other.n_part
                and self.a_part == other.a_part and self.gamma == other.gamma)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ExpansionValue:
    """Vertex value of an expansion: (b, nu, a) standing for e^b e^(nu + a)."""

    b: CyclicSeries
    nu: TangentialDerivation
    a_part: APart

    @property
    def config(self) -> TruncationConfig:
        return self.nu.config

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExpansionValue):
            return NotImplemented
        return self.b == other.b and self.nu == other.nu and self.a_part == other.a_part

    __hash__ = None


class KVSolveResult(NamedTuple):
    candidate: KVCandidate
    dimensions: pd.DataFrame


# ---------------------------------------------------------------------------
# Membership checks
# ---------------------------------------------------------------------------

def solkv_eq1_residual(F: TAutElement) -> LieSeries:
    x, y = generators(F.config)
    return bch(exp_apply(F, x), exp_apply(F, y)) - (x + y)


def check_solkv(c: KVCandidate) -> DegreeReport:
    """Residuals of both SolKV equations, degree by degree."""
    if c.r is None:
        raise PreconditionError("check_solkv needs a Duflo series r")
    N = c.config.max_degree
    eq1 = solkv_eq1_residual(c.F)
    eq2 = jacobian(c.F) - duflo_combination(c.r, c.config)
    return DegreeReport.merge([
        DegreeReport.from_residual("eq1", eq1, N),
        DegreeReport.from_residual("eq2", eq2, N),
    ])


def check_kv_group(g: KVGroupElement) -> DegreeReport:
    config = g.config
    x, y = generators(config)
    eq1 = bch(exp_apply(g.a, x), exp_apply(g.a, y)) - _bch_xy(config)
    eq2 = jacobian(g.a) - bch_combination(g.sigma, config)
    return DegreeReport.merge([
        DegreeReport.from_residual("eq1", eq1, config.max_degree),
        DegreeReport.from_residual("eq2", eq2, config.max_degree),
    ])


def check_krv_group(e: KRVElement) -> DegreeReport:
    config = e.config
    x, y = generators(config)
    eq1 = exp_apply(e.alpha, x + y) - (x + y)
    eq2 = jacobian(e.alpha) - duflo_combination(e.s, config)
    return DegreeReport.merge([
        DegreeReport.from_residual("eq1", eq1, config.max_degree),
        DegreeReport.from_residual("eq2", eq2, config.max_degree),
    ])


# ---------------------------------------------------------------------------
# Duflo extraction
# ---------------------------------------------------------------------------

def fit_duflo(c: CyclicSeries, kind: str = "solkv") -> Tuple[OneVarSeries, CyclicSeries]:
    """
    Best Duflo series for c, solved from the x^(d-1) y coefficients.

    Args:
        c: cyclic series over two generators
        kind: "solkv" or "krv" (tr(r(x+y) - r(x) - r(y))), "kv" (bch form)

    Returns:
        tuple: (r, c - combination(r)); the residual is zero iff c is in the image
    """
    if kind in ("solkv", "krv"):
        combination = duflo_combination
    elif kind == "kv":
        combination = bch_combination
    else:
        raise MalformedInputError(f"unknown Duflo kind {kind!r}")
    config = c.config
    _require_two(config)
    N = config.max_degree
    coeffs = {}
    for d in range(2, N + 1):
        current = combination(OneVarSeries(N, coeffs), config)
        gap = c.coefficient(hook_necklace(d)) - current.coefficient(hook_necklace(d))
        if gap:
            coeffs[d] = gap / d
    r = OneVarSeries(N, coeffs)
    return r, c - combination(r, config)


def duflo_from_cyclic(c: CyclicSeries, kind: str = "solkv") -> OneVarSeries:
    """
    The unique r with combination(r) = c.

    Raises:
        DufloExtractionError: c is not in the image
    """
    r, residual = fit_duflo(c, kind)
    if residual:
        raise DufloExtractionError(f"{len(residual)} Jacobian terms are outside the Duflo image")
    return r


def extract_duflo(F: TAutElement, kind: str = "solkv") -> OneVarSeries:
    """Duflo series of F read off its Jacobian."""
    return duflo_from_cyclic(jacobian(F), kind)


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------

def _kv_residual(base: TangentialDerivation, r_lower: dict, basis: Sequence[TangentialDerivation],
                 d: int, params: Sequence[Fraction]) -> List[Fraction]:
    work = base.config
    log_F = base
    for coeff, b in zip(params, basis):
        if coeff:
            log_F = log_F + b * coeff
    r = dict(r_lower)
    if d >= 2:
        r[d] = params[-1]
    F = TAutElement(work, log_F)
    eq1 = solkv_eq1_residual(F).degree_part(d + 1)
    eq2 = (jacobian(F) - duflo_combination(OneVarSeries(work.max_degree, r), work)).degree_part(d)
    return ([eq1.coefficient(w) for w in lyndon_words(2, d + 1)]
            + [eq2.coefficient(k) for k in necklaces(2, d)])


def solve_kv(N: int, gauge: str = "zero") -> KVSolveResult:
    """
    Solve the SolKV equations degree by degree.

    At degree d the unknowns are the degree-d part of log F (canonical basis)
    and r_d. Equation 1 is imposed at degree d+1, equation 2 at degree d;
    both are affine in the unknowns and solved jointly.

    Free parameters sit in the first slot of log F. In degree 1 the
    constraint is d - c = 1/2 for (c y, d x), so the zero gauge gives
    F = exp((0, x/2)) and the unit gauge gives F = exp((y, 3x/2)).

    Args:
        N: truncation degree of the result
        gauge: "zero", or "unit" (alias "named"), the value given to free parameters

    Returns:
        KVSolveResult: candidate and per-degree solution-space dimensions
    """
    if gauge not in GAUGES:
        raise MalformedInputError(f"unknown gauge {gauge!r}; expected one of {sorted(GAUGES)}")
    free_value = GAUGES[gauge]
    ext = TruncationConfig(2, N + 1)
    log_F = TangentialDerivation.zero(ext)
    r_coeffs = {}
    records = []
    jobs = n_jobs()
    log(f"🚀 Solving SolKV up to degree {N} (gauge={gauge})")
    for d in range(1, N + 1):
        work = TruncationConfig(2, d + 1)
        # Reversed so slot-2 coefficients pivot and slot-1 coefficients take the gauge value.
        basis = tder_basis(work, d)[::-1]
        n_unknowns = len(basis) + (1 if d >= 2 else 0)
        base = log_F.truncate(d + 1)
        zero_params = [Fraction(0)] * n_unknowns
        unit_params = []
        for j in range(n_unknowns):
            p = list(zero_params)
            p[j] = Fraction(1)
            unit_params.append(p)
        results = Parallel(n_jobs=jobs, prefer="threads")(
            delayed(_kv_residual)(base, r_coeffs, basis, d, p) for p in [zero_params] + unit_params
        )
        r0, columns = results[0], results[1:]
        n_rows = len(r0)
        rows = [[columns[j][i] - r0[i] for j in range(n_unknowns)] for i in range(n_rows)]
        rhs = [-v for v in r0]
        n_eq1 = len(lyndon_words(2, d + 1))
        eq1_dim = len(basis) - rank([row[:len(basis)] for row in rows[:n_eq1]], len(basis))
        joint_dim = n_unknowns - rank(rows, n_unknowns)
        try:
            solution = solve_affine(rows, rhs, n_unknowns, free_value)
        except InfeasibleSystemError:
            log(f"❌ SolKV system inconsistent at degree {d}")
            raise InfeasibleSystemError(f"SolKV equations have no solution at degree {d}")
        update = TangentialDerivation.zero(work)
        for coeff, b in zip(solution, basis):
            if coeff:
                update = update + b * coeff
        log_F = log_F + update.with_max_degree(N + 1)
        if d >= 2 and solution[-1]:
            r_coeffs[d] = solution[-1]
        records.append({"degree": d, "unknowns": n_unknowns, "eq1_dimension": eq1_dim, "joint_dimension": joint_dim})
        log(f"🔧 degree {d}: {n_unknowns} unknowns, eq1 dim {eq1_dim}, joint dim {joint_dim}")
    config = TruncationConfig(2, N)
    F = TAutElement(config, log_F.truncate(N))
    candidate = KVCandidate(F, OneVarSeries(N, r_coeffs))
    report = check_solkv(candidate)
    if not report.passed:
        raise InfeasibleSystemError("solver output fails the SolKV check:\n" + report.to_text())
    log(f"✅ SolKV solution found up to degree {N}")
    dimensions = pd.DataFrame.from_records(records, columns=["degree", "unknowns", "eq1_dimension", "joint_dimension"])
    return KVSolveResult(candidate, dimensions)


# ---------------------------------------------------------------------------
# Group laws and actions
# ---------------------------------------------------------------------------

def kv_compose(g: KVGroupElement, h: KVGroupElement) -> KVGroupElement:
    return KVGroupElement(compose(g.a, h.a), g.sigma + h.sigma)


def kv_inverse(g: KVGroupElement) -> KVGroupElement:
    return KVGroupElement(inverse(g.a), -g.sigma)


def krv_compose(e: KRVElement, f: KRVElement) -> KRVElement:
    """(e.alpha o f.alpha, e.s + f.s)."""
    return KRVElement(compose(e.alpha, f.alpha), e.s + f.s)


def krv_inverse(e: KRVElement) -> KRVElement:
    return KRVElement(inverse(e.alpha), -e.s)


def _require_pass(report: DegreeReport, what: str) -> None:
    if not report.passed:
        raise PreconditionError(f"{what} fails its membership check:\n{report.to_text()}")


def act_kv(g: KVGroupElement, c: KVCandidate) -> KVCandidate:
    """(a, sigma) . (F, r) = (F o a^-1, r - sigma)."""
    _require_pass(check_kv_group(g), "KV element")
    _require_pass(check_solkv(c), "SolKV candidate")
    return KVCandidate(compose(c.F, inverse(g.a)), c.r - g.sigma)


def act_krv(c: KVCandidate, e: KRVElement) -> KVCandidate:
    """(F, r) . (alpha, s) = (alpha^-1 o F, r - s)."""
    _require_pass(check_krv_group(e), "KRV element")
    _require_pass(check_solkv(c), "SolKV candidate")
    return KVCandidate(compose(inverse(e.alpha), c.F), c.r - e.s)


def t_conj(F: TAutElement, g: KVGroupElement) -> KRVElement:
    """T_F(a, sigma) = (F o a o F^-1, sigma)."""
    if solkv_eq1_residual(F):
        raise PreconditionError("t_conj needs F to satisfy SolKV equation 1")
    _require_pass(check_kv_group(g), "KV element")
    return KRVElement(compose(F, compose(g.a, inverse(F))), g.sigma)


def kv_element_between(c1: KVCandidate, c2: KVCandidate) -> KVGroupElement:
    """The KV element (F1^-1 o F2, r2 - r1) relating two solutions."""
    return KVGroupElement(compose(inverse(c1.F), c2.F), c2.r - c1.r)


# ---------------------------------------------------------------------------
# Automorphism triples
# ---------------------------------------------------------------------------

def _cap_terms(gamma: OneVarSeries, config: TruncationConfig):
    x, y = (embed(g) for g in generators(config))
    return (trace(eval_series(gamma, x + y)), trace(eval_series(gamma, x)), trace(eval_series(gamma, y)))


def check_aut_equations(G: AutArrowsElement) -> DegreeReport:
    """
    R4': e^n fixes x+y.  U': J(e^n) + 2w = 0.
    C': w + e^n.tr(gamma(x+y)) - tr(gamma(x)) - tr(gamma(y)) = 0 modulo degree 1.
    v-small: the a-part vanishes.
    """
    config = G.config
    N = config.max_degree
    x, y = generators(config)
    expn = TAutElement.exp_of(G.n_part)
    r4 = exp_apply(expn, x + y) - (x + y)
    u = jacobian(expn) + G.w * 2
    sum_term, x_term, y_term = _cap_terms(G.gamma, config)
    c = quotient_linear(G.w + exp_apply_cyc(expn, sum_term) - x_term - y_term)
    small = sum(1 for v in G.a_part.coefficients if v)
    return DegreeReport.merge([
        DegreeReport.from_residual("R4'", r4, N),
        DegreeReport.from_residual("U'", u, N),
        DegreeReport.from_residual("C'", c, N),
        DegreeReport.from_counts("v-small", {1: small}, 1),
    ])


def theta(G: AutArrowsElement) -> KRVElement:
    """(exp(-n), -2 gamma)."""
    _require_pass(check_aut_equations(G), "automorphism")
    return KRVElement(TAutElement.exp_of(-G.n_part), G.gamma * -2)


def theta_bar(G: AutArrowsElement) -> KRVElement:
    """(exp(n), 2 gamma); theta_bar(G) = krv_inverse(theta(G))."""
    _require_pass(check_aut_equations(G), "automorphism")
    return KRVElement(TAutElement.exp_of(G.n_part), G.gamma * 2)


def theta_inv(e: KRVElement) -> AutArrowsElement:
    """n = log alpha, w = -J(alpha)/2, gamma = s/2, a = 0."""
    _require_pass(check_krv_group(e), "KRV element")
    config = e.config
    return AutArrowsElement(jacobian(e.alpha) * Fraction(-1, 2), e.alpha.log,
                            APart.zero(config.n_generators), e.s * Fraction(1, 2))


def aut_multiply(G1: AutArrowsElement, G2: AutArrowsElement) -> AutArrowsElement:
    """Product of automorphism triples: (w1 + e^n1.w2, bch(n1, n2), a1 + a2, gamma1 + gamma2)."""
    n1, n2 = TAutElement.exp_of(G1.n_part), TAutElement.exp_of(G2.n_part)
    return AutArrowsElement(G1.w + exp_apply_cyc(n1, G2.w), compose(n1, n2).log,
                            G1.a_part + G2.a_part, G1.gamma + G2.gamma)


# ---------------------------------------------------------------------------
# Expansions
# ---------------------------------------------------------------------------

def expansion_from_solkv(F: TAutElement) -> ExpansionValue:
    """Vertex value (b, nu, 0) with b = -J(F^-1)/2 and nu = log F^-1."""
    _require_two(F.config)
    if not F.is_identity() and solkv_eq1_residual(F):
        raise PreconditionError("expansion_from_solkv needs F to satisfy SolKV equation 1")
    F_inv = inverse(F)
    return ExpansionValue(jacobian(F_inv) * Fraction(-1, 2), F_inv.log, APart.zero(2))


def solkv_from_expansion(V: ExpansionValue) -> TAutElement:
    """F = exp(nu)^-1."""
    return inverse(TAutElement.exp_of(V.nu))


def act_on_expansion(G: AutArrowsElement, V: ExpansionValue) -> ExpansionValue:
    """Post-compose an expansion with G: b' = b - (e^nu e^-n).w, nu' = bch(nu, -n)."""
    _require_pass(check_aut_equations(G), "automorphism")
    product = compose(TAutElement.exp_of(V.nu), TAutElement.exp_of(-G.n_part))
    return ExpansionValue(V.b - exp_apply_cyc(product, G.w), product.log, V.a_part + (-G.a_part))
