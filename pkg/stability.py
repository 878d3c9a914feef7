#!/usr/bin/env python3
"""
Hurwitz stability machinery.

Exact Hurwitz matrices and leading principal minors (fraction-free Bareiss
elimination over integers), the Routh-Hurwitz decision, a numeric root oracle
for quasi-stability, the coefficient-ratio classes W_n, W_n^alpha and V_n, and
certified enclosures of the constants alpha*, beta* and gamma*.
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Any, Callable, Dict, List, Optional, Tuple

from mpmath.ctx_mp import MPContext

from config import (
    CONSTANT_BRACKET,
    ENCLOSURE_REFINEMENTS,
    ENCLOSURE_WIDTH,
    ORACLE_BUDGET_GROWTH,
    ORACLE_MAX_STEPS,
    ORACLE_PRECISION_BITS,
    ORACLE_RETRIES,
    QUASI_TOLERANCE,
)
from errors import DegreeZero, EnclosureTooWide, NoConvergence, NotPositive
from poly_core import LambdaVector, Polynomial, lambdas, squarefree_factors
from utils import format_rational

logger = logging.getLogger(__name__)


class Verdict(Enum):
    STABLE = 'stable'
    QUASI_STABLE = 'quasi-stable'
    UNSTABLE = 'unstable'


class ConstantTag(Enum):
    ALPHA_STAR = 'AlphaStar'
    BETA_STAR = 'BetaStar'
    GAMMA_STAR = 'GammaStar'


# Membership flag names, in report order
MEMBERSHIP_KEYS = ['R_plus', 'W', 'W_alpha_star', 'W_beta_star', 'V']


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def to_dict(self) -> Dict[str, Any]:
        return {'lo': format_rational(self.lo), 'hi': format_rational(self.hi),
                'lo_float': float(self.lo), 'hi_float': float(self.hi)}


@dataclass(frozen=True)
class HurwitzMatrix:
    """H_f with entry (i, j), 1-indexed, equal to a_{n-2i+j}."""

    entries: Tuple[Tuple[Fraction, ...], ...]
    source: Polynomial

    def rows(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class CertifiedConstant:
    """An enclosure of alpha*, beta* or gamma* whose endpoints bracket a sign change."""

    defining_equation: ConstantTag
    value: Interval
    residual_bound: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            'constant': self.defining_equation.value,
            'enclosure': self.value.to_dict(),
            'residual_bound': format_rational(self.residual_bound),
        }


@dataclass
class StabilityReport:
    verdict: Verdict
    minors: List[Fraction]
    lambdas: Optional[LambdaVector] = None
    memberships: Dict[str, bool] = field(default_factory=dict)
    boundary_roots: List[complex] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict.value,
            'minors': [format_rational(m) for m in self.minors],
            'lambdas': self.lambdas.to_list() if self.lambdas is not None else None,
            'memberships': dict(self.memberships),
            'boundary_roots': [[r.real, r.imag] for r in self.boundary_roots],
        }


def hurwitz_matrix(f: Polynomial) -> HurwitzMatrix:
    """
    The n-by-n Hurwitz matrix of f.

    Raises:
        DegreeZero: If f is constant
    """
    n = f.degree
    if n < 1:
        raise DegreeZero("the Hurwitz matrix needs degree >= 1")
    entries = tuple(
        tuple(f[n - 2 * i + j] for j in range(1, n + 1))
        for i in range(1, n + 1)
    )
    return HurwitzMatrix(entries=entries, source=f)


def _bareiss_determinant(matrix: List[List[int]]) -> int:
    """Determinant of an integer matrix by Bareiss elimination with row swaps."""
    m = [row[:] for row in matrix]
    n = len(m)
    sign = 1
    previous = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // previous
        previous = m[k][k]
    return sign * m[n - 1][n - 1]


def _bareiss_leading_minors(matrix: List[List[int]]) -> List[int]:
    """
    All leading principal minors of an integer matrix.

    Without pivoting, the k-th Bareiss pivot is the k-th leading principal
    minor. A zero pivot breaks the recurrence, so the remaining minors are
    then computed one by one with pivoting.
    """
    m = [row[:] for row in matrix]
    n = len(m)
    minors: List[int] = []
    previous = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0 and k < n - 1:
            for size in range(k + 2, n + 1):
                minors.append(_bareiss_determinant([row[:size] for row in matrix[:size]]))
            return minors
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // previous
        previous = pivot
    return minors


def leading_principal_minors(f: Polynomial) -> List[Fraction]:
    """
    Exact Delta_1(f), ..., Delta_n(f).

    The rational Hurwitz matrix is scaled by the common denominator D of the
    coefficients, so Delta_k = (integer minor) / D^k.

    Raises:
        DegreeZero: If f is constant
    """
    h = hurwitz_matrix(f)
    scale = lcm(*(c.denominator for c in f.coeffs))
    integer_rows = [[int(entry * scale) for entry in row] for row in h.entries]
    minors = _bareiss_leading_minors(integer_rows)
    return [Fraction(minor, scale ** (k + 1)) for k, minor in enumerate(minors)]


def _normalized_sign(f: Polynomial) -> Optional[Polynomial]:
    """f with positive coefficients, or None if the signs are mixed or zero."""
    if all(c > 0 for c in f.coeffs):
        return f
    if all(c < 0 for c in f.coeffs):
        return Polynomial(tuple(-c for c in f.coeffs))
    return None


def is_hurwitz_stable(f: Polynomial) -> bool:
    """
    Exact Routh-Hurwitz decision.

    Coefficients must share a strict sign; then f is stable iff
    Delta_i > 0 for i = 1..n-1.

    Raises:
        DegreeZero: If f is constant
    """
    if f.degree < 1:
        raise DegreeZero("stability needs degree >= 1")
    positive = _normalized_sign(f)
    if positive is None:
        return False
    if positive.degree == 1:
        return True
    minors = leading_principal_minors(positive)
    return all(d > 0 for d in minors[:-1])


def _polyroots(f: Polynomial, precision: int, max_steps: int, retries: int) -> List[complex]:
    # Attempt k: ORACLE_BUDGET_GROWTH**k times the steps, 2**k times the guard bits.
    for attempt in range(retries + 1):
        ctx = MPContext()
        ctx.prec = precision
        descending = [ctx.mpf(c.numerator) / c.denominator for c in reversed(f.coeffs)]
        steps = max_steps * ORACLE_BUDGET_GROWTH ** attempt
        try:
            roots = ctx.polyroots(descending, maxsteps=steps,
                                  extraprec=precision << attempt)
        except ctx.NoConvergence as e:
            logger.debug("polyroots gave up on %s after %d steps", f, steps)
            failure = e
            continue
        return [complex(r) for r in roots]
    raise NoConvergence(f"root oracle did not converge for {f}: {failure}") from failure


def roots_oracle(f: Polynomial, precision: int = ORACLE_PRECISION_BITS,
                 max_steps: int = ORACLE_MAX_STEPS,
                 retries: int = ORACLE_RETRIES) -> List[complex]:
    """
    All n roots of f, repeated by multiplicity, sorted by (|Im z|, Re z).

    f is first split exactly into squarefree factors, so the Durand-Kerner
    iteration only ever sees simple roots.

    Args:
        f: Polynomial of degree >= 1
        precision: Working precision of the iteration in bits
        max_steps: Iteration budget of the first attempt
        retries: Further attempts with a larger budget

    Raises:
        DegreeZero: If f is constant
        NoConvergence: If every attempt exhausts its budget
    """
    if f.degree < 1:
        raise DegreeZero("a constant polynomial has no roots")
    roots: List[complex] = []
    for factor, multiplicity in squarefree_factors(f):
        roots.extend(_polyroots(factor, precision, max_steps, retries) * multiplicity)
    return sorted(roots, key=lambda z: (abs(z.imag), z.real))


def quasi_stability(f: Polynomial,
                    tolerance: float = QUASI_TOLERANCE) -> Tuple[Verdict, List[complex]]:
    """The stability verdict together with the boundary roots the oracle saw."""
    if is_hurwitz_stable(f):
        return Verdict.STABLE, []
    roots = roots_oracle(f)
    boundary = [r for r in roots if abs(r.real) <= tolerance]
    if boundary and all(r.real < tolerance for r in roots):
        return Verdict.QUASI_STABLE, boundary
    return Verdict.UNSTABLE, boundary


def is_quasi_stable(f: Polynomial, tolerance: float = QUASI_TOLERANCE) -> Verdict:
    """
    Stable if Routh-Hurwitz says so; otherwise QuasiStable when every oracle
    root has real part below `tolerance` and at least one lies on the
    boundary strip [-tolerance, tolerance]; otherwise Unstable.
    """
    verdict, _ = quasi_stability(f, tolerance)
    return verdict


# Certified constants

def _alpha_residual(x: Fraction) -> Fraction:
    return x * (1 + x) ** 2 - 1


def _beta_residual(x: Fraction) -> Fraction:
    return x * x * (1 + x * x) ** 2 - 1


def _gamma_residual(x: Fraction) -> Fraction:
    return x * (x - 1) ** 2 - (1 - 4 * x)


RESIDUALS: Dict[ConstantTag, Callable[[Fraction], Fraction]] = {
    ConstantTag.ALPHA_STAR: _alpha_residual,
    ConstantTag.BETA_STAR: _beta_residual,
    ConstantTag.GAMMA_STAR: _gamma_residual,
}

_constant_cache: Dict[Tuple[ConstantTag, Fraction], CertifiedConstant] = {}
_constant_lock = threading.Lock()


def _bisect(residual: Callable[[Fraction], Fraction], lo: Fraction, hi: Fraction,
            width: Fraction) -> Interval:
    """Exact dyadic bisection of an increasing residual with residual(lo) < 0 < residual(hi)."""
    while hi - lo > width:
        mid = (lo + hi) / 2
        value = residual(mid)
        if value < 0:
            lo = mid
        elif value > 0:
            hi = mid
        else:
            return Interval(mid, mid)
    return Interval(lo, hi)


def _compute_constant(which: ConstantTag, width: Fraction) -> CertifiedConstant:
    lo, hi = CONSTANT_BRACKET
    if which is ConstantTag.BETA_STAR:
        alpha = certified_constant(ConstantTag.ALPHA_STAR, width / 4).value
        low_root = _bisect(lambda x: x * x - alpha.lo, lo, hi, width / 4)
        high_root = _bisect(lambda x: x * x - alpha.hi, lo, hi, width / 4)
        enclosure = Interval(low_root.lo, high_root.hi)
    else:
        enclosure = _bisect(RESIDUALS[which], lo, hi, width)

    residual = RESIDUALS[which]
    bound = max(abs(residual(enclosure.lo)), abs(residual(enclosure.hi)))
    return CertifiedConstant(defining_equation=which, value=enclosure, residual_bound=bound)


def certified_constant(which: ConstantTag, width: Fraction = ENCLOSURE_WIDTH) -> CertifiedConstant:
    """
    Certified enclosure of alpha* (1 = a(1+a)^2), beta* = sqrt(alpha*) or
    gamma* (g(g-1)^2 = 1 - 4g), of width at most `width`.

    Endpoints are exact rationals, so the residual sign change across the
    enclosure is decided exactly. Results are memoized per (constant, width).
    """
    key = (which, Fraction(width))
    with _constant_lock:
        cached = _constant_cache.get(key)
    if cached is not None:
        return cached
    computed = _compute_constant(which, Fraction(width))
    with _constant_lock:
        return _constant_cache.setdefault(key, computed)


def below_constant(x: Fraction, which: ConstantTag) -> bool:
    """
    Decide x < constant, refining the enclosure while x falls inside it.

    Raises:
        EnclosureTooWide: If x still straddles the narrowest enclosure
    """
    for width in [ENCLOSURE_WIDTH] + ENCLOSURE_REFINEMENTS:
        enclosure = certified_constant(which, width).value
        if x <= enclosure.lo:
            return True
        if x >= enclosure.hi:
            return False
        logger.debug("refining %s enclosure below width %s for %s", which.value, width, x)
    raise EnclosureTooWide(f"{x} is within {ENCLOSURE_REFINEMENTS[-1]} of {which.value}")


# Stability classes

def in_w_alpha(f: Polynomial, alpha: Fraction) -> bool:
    """
    Membership in W_n^alpha for a rational alpha: all lambda_i(f) < alpha.
    For n in {1, 2} this is stability.
    """
    if not f.is_positive:
        return False
    if f.degree < 3:
        return is_hurwitz_stable(f)
    return lambdas(f).maximum < Fraction(alpha)


def _memberships(f: Polynomial, stable: bool) -> Tuple[Optional[LambdaVector], Dict[str, bool]]:
    if f.degree < 3:
        flags = {key: stable for key in MEMBERSHIP_KEYS}
        flags['R_plus'] = True
        return None, flags
    vector = lambdas(f)
    flags = {
        'R_plus': True,
        'W': vector.maximum < 1,
        'W_alpha_star': below_constant(vector.maximum, ConstantTag.ALPHA_STAR),
        'W_beta_star': below_constant(vector.maximum, ConstantTag.BETA_STAR),
        'V': vector.total < 1,
    }
    return vector, flags


def classify(f: Polynomial, tolerance: float = QUASI_TOLERANCE) -> StabilityReport:
    """
    Full report for a positive polynomial: verdict, minors, lambda ratios and
    memberships in R_n^+, W_n, W_n^{alpha*}, W_n^{beta*} and V_n.

    Raises:
        DegreeZero: If f is constant
        NotPositive: If f has a non-positive coefficient
    """
    if f.degree < 1:
        raise DegreeZero("classification needs degree >= 1")
    if not f.is_positive:
        raise NotPositive(f"{f} is not in R_n^+")
    verdict, boundary = quasi_stability(f, tolerance)
    vector, flags = _memberships(f, verdict is Verdict.STABLE)
    return StabilityReport(
        verdict=verdict,
        minors=leading_principal_minors(f),
        lambdas=vector,
        memberships=flags,
        boundary_roots=boundary,
    )


def check(f: Polynomial, tolerance: float = QUASI_TOLERANCE) -> StabilityReport:
    """
    Stability report for any polynomial of degree >= 1. Class memberships are
    filled only when the coefficients are positive.
    """
    if f.is_positive:
        return classify(f, tolerance)
    verdict, boundary = quasi_stability(f, tolerance)
    return StabilityReport(
        verdict=verdict,
        minors=leading_principal_minors(f),
        memberships={'R_plus': False},
        boundary_roots=boundary,
    )
