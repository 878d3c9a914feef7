#!/usr/bin/env python3
"""
Constructive procedures.

Stable extension by higher-degree terms, stable prepending of lower-degree
terms, polynomials with prescribed lambda ratios, the Hadamard exponent p*,
the sufficient factorization test, and the two stabilizers g with every
element of f•g stable.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from math import floor
from typing import Any, Dict, List, Optional, Sequence, Tuple

from mpmath.ctx_mp import MPContext

from config import (
    DEFAULT_LAMBDA_SEEDS,
    HALVING_BUDGET,
    LOG_PADDING,
    LOG_PRECISION_BITS,
    STABILIZE_MARGIN,
)
from errors import (
    BadDegree,
    BadEpsilon,
    NonPositiveSeed,
    NotInW,
    NotPositive,
    NotStableInput,
    SearchBudgetExhausted,
    VerificationFailed,
)
from poly_core import (
    GeneralizedProduct,
    Polynomial,
    Rational,
    all_ones,
    generalized_hadamard,
    hadamard_power,
    hadamard_product,
    lambdas,
    mpf_to_fraction,
    prepend,
    reversal,
    windows,
)
from stability import (
    ConstantTag,
    Interval,
    StabilityReport,
    Verdict,
    below_constant,
    certified_constant,
    classify,
    is_hurwitz_stable,
    leading_principal_minors,
)
from utils import format_rational, parse_rational

logger = logging.getLogger(__name__)


class StabilizationMethod(Enum):
    LAMBDA_UNIFORM = 'LambdaUniform'
    HADAMARD_FACTORIZED = 'HadamardFactorized'


@dataclass(frozen=True)
class ExtensionCertificate:
    """
    Proof object for a stable extension F = f + a_{n+1} s^{n+1} + ... + a_N s^N.

    step_witnesses[k] holds the leading principal minors of the polynomial
    after the (k+1)-th appended coefficient.
    """

    base: Polynomial
    appended: Tuple[Fraction, ...]
    epsilon: Fraction
    result: Polynomial
    step_witnesses: Tuple[Tuple[Fraction, ...], ...]

    def verify(self) -> bool:
        """Re-check the bounds, the reconstruction and stability after every step."""
        if self.result.coeffs != self.base.coeffs + self.appended:
            return False
        if not all(0 < a < self.epsilon for a in self.appended):
            return False
        if len(self.step_witnesses) != len(self.appended):
            return False
        for k, witness in enumerate(self.step_witnesses):
            step = Polynomial(self.base.coeffs + self.appended[:k + 1])
            if tuple(leading_principal_minors(step)) != witness:
                return False
            if not is_hurwitz_stable(step):
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'base': str(self.base),
            'appended': [format_rational(a) for a in self.appended],
            'epsilon': format_rational(self.epsilon),
            'result': str(self.result),
            'step_witnesses': [[format_rational(d) for d in w] for w in self.step_witnesses],
        }


@dataclass
class StabilizationResult:
    """
    A stabilizer g for f together with the verified product f•g.

    For the factorized method `factors` holds the Hadamard factorization
    witness, whose Hadamard product is exactly g.
    """

    g: Polynomial
    product: GeneralizedProduct
    method: StabilizationMethod
    parameters: Dict[str, Fraction]
    verification: List[StabilityReport]
    factors: Tuple[Polynomial, ...] = field(default_factory=tuple)

    def verify(self) -> bool:
        if not is_hurwitz_stable(self.g):
            return False
        if not all(is_hurwitz_stable(element) for element in self.product.elements):
            return False
        if self.factors:
            if reduce(hadamard_product, self.factors) != self.g:
                return False
            if not all(is_hurwitz_stable(factor) for factor in self.factors):
                return False
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'g': str(self.g),
            'method': self.method.value,
            'parameters': {k: format_rational(v) for k, v in self.parameters.items()},
            'product': self.product.to_dict(),
            'verification': [report.to_dict() for report in self.verification],
            'factors': [str(factor) for factor in self.factors],
        }


@dataclass(frozen=True)
class FactorizationTest:
    """Outcome of the sufficient Hadamard factorization test max lambda_i < gamma*."""

    sufficient: bool
    max_lambda: Fraction
    witness: Optional[Tuple[Polynomial, Polynomial]] = None
    witness_stable: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sufficient': self.sufficient,
            'max_lambda': format_rational(self.max_lambda),
            'witness': [str(w) for w in self.witness] if self.witness else None,
            'witness_stable': self.witness_stable,
        }


def _require_epsilon(epsilon: Rational) -> Fraction:
    value = parse_rational(epsilon)
    if value <= 0:
        raise BadEpsilon(f"epsilon must be positive, got {value}")
    return value


def _require_stable(f: Polynomial) -> None:
    if not (f.is_positive and is_hurwitz_stable(f)):
        raise NotStableInput(f"{f} is not a positive Hurwitz stable polynomial")


def extend_one(f: Polynomial, epsilon: Rational,
               budget: int = HALVING_BUDGET) -> Tuple[Fraction, Polynomial]:
    """
    Find a_{n+1} in (0, epsilon) with f + a_{n+1} s^{n+1} stable.

    Candidates start at epsilon/2 and are halved until the extension passes
    the Routh-Hurwitz test. Small enough coefficients always work.

    Args:
        f: Stable polynomial with positive coefficients
        epsilon: Exclusive upper bound for the new coefficient
        budget: Maximum number of halvings

    Returns:
        (a_{n+1}, extended polynomial)

    Raises:
        NotStableInput: If f is not stable with positive coefficients
        BadEpsilon: If epsilon <= 0
        SearchBudgetExhausted: If `budget` halvings did not succeed
    """
    _require_stable(f)
    candidate = _require_epsilon(epsilon) / 2
    for attempt in range(budget):
        extended = Polynomial(f.coeffs + (candidate,))
        if is_hurwitz_stable(extended):
            return candidate, extended
        logger.debug("extension of %s rejected %s (attempt %d)", f, candidate, attempt + 1)
        candidate /= 2
    raise SearchBudgetExhausted(f"no stable extension of {f} after {budget} halvings")


def extend_stable(f: Polynomial, degree: int, epsilon: Rational) -> ExtensionCertificate:
    """
    Extend a stable f to a stable polynomial of degree N = `degree`, one
    coefficient at a time, each appended coefficient in (0, epsilon).

    Returns:
        ExtensionCertificate with the base, the appended coefficients
        and the result

    Raises:
        BadDegree: If N <= deg f
        NotStableInput, BadEpsilon, SearchBudgetExhausted: As extend_one
    """
    if degree <= f.degree:
        raise BadDegree(f"target degree {degree} must exceed deg f = {f.degree}")
    eps = _require_epsilon(epsilon)
    _require_stable(f)

    current = f
    appended: List[Fraction] = []
    witnesses: List[Tuple[Fraction, ...]] = []
    while current.degree < degree:
        coefficient, current = extend_one(current, eps)
        appended.append(coefficient)
        witnesses.append(tuple(leading_principal_minors(current)))

    return ExtensionCertificate(
        base=f,
        appended=tuple(appended),
        epsilon=eps,
        result=current,
        step_witnesses=tuple(witnesses),
    )


def prepend_stable(f: Polynomial, k: int, epsilon: Rational) -> Tuple[Polynomial, Polynomial]:
    """
    Find p of degree k-1 with positive coefficients below epsilon such that
    p(s) + s^k f(s) is stable.

    Works on the reversal: a stable extension of f* reversed back is a stable
    prepend of f. Shrinking epsilon (1, 1/2, 1/3, ...) drives p to zero.

    Returns:
        (p, combined)

    Raises:
        BadDegree: If k < 1
        NotStableInput: If f is not stable with positive coefficients
    """
    if k < 1:
        raise BadDegree(f"prepend offset k must be >= 1, got {k}")
    _require_stable(f)
    certificate = extend_stable(reversal(f), f.degree + k, epsilon)
    combined = reversal(certificate.result)
    p = Polynomial(combined.coeffs[:k])
    if prepend(p, k, f) != combined:
        raise VerificationFailed(f"reversed extension of {f} does not end in f")
    return p, combined


def polynomial_from_lambdas(values: Sequence[Rational],
                            seeds: Sequence[Rational] = DEFAULT_LAMBDA_SEEDS) -> Polynomial:
    """
    The positive polynomial b_0 + ... + b_m s^m with lambda_i = values[i-2].

    Uses b_{k+2} = lambda_{k+1} b_{k+1} b_k / b_{k-1} from the seeds b_0, b_1, b_2.

    Raises:
        BadDegree: If no lambda values are given
        BadEpsilon: If a lambda value is not positive
        NonPositiveSeed: If a seed is not positive or there are not three seeds

    Examples:
        >>> str(polynomial_from_lambdas([Fraction(1, 4), Fraction(1, 4)]))
        '1 1 1 1/4 1/16'
    """
    targets = [parse_rational(v) for v in values]
    if not targets:
        raise BadDegree("at least one lambda value is needed (degree >= 3)")
    if any(v <= 0 for v in targets):
        raise BadEpsilon(f"lambda values must be positive, got {[str(v) for v in targets]}")
    b = [parse_rational(s) for s in seeds]
    if len(b) != 3 or any(s <= 0 for s in b):
        raise NonPositiveSeed(f"expected three positive seeds, got {[str(s) for s in b]}")

    for target in targets:
        b.append(target * b[-1] * b[-2] / b[-3])
    return Polynomial(tuple(b))


def lambda_uniform(m: int, epsilon: Rational,
                   seeds: Sequence[Rational] = DEFAULT_LAMBDA_SEEDS) -> Polynomial:
    """
    Degree-m positive polynomial with lambda_i = epsilon for i = 2..m-1.

    Args:
        m: Degree, at least 3
        epsilon: The common lambda value
        seeds: b_0, b_1, b_2

    Raises:
        BadDegree: If m < 3
        BadEpsilon: If epsilon <= 0
        NonPositiveSeed: If a seed is not positive
    """
    if m < 3:
        raise BadDegree(f"lambda_uniform needs m >= 3, got {m}")
    eps = _require_epsilon(epsilon)
    return polynomial_from_lambdas([eps] * (m - 2), seeds)


def p_star(f: Polynomial) -> Interval:
    """
    Enclosure of p* = log alpha* / log max lambda_i(f).

    Logarithms are evaluated at LOG_PRECISION_BITS and the enclosure is padded
    outward, so p* lies inside the returned interval.

    Returns:
        Interval [lo, hi] with lo <= p* <= hi

    Raises:
        DegreeTooSmall: If deg f < 3
        NotPositive: If f has a non-positive coefficient
        NotInW: If max lambda_i(f) >= 1
    """
    top = lambdas(f).maximum
    if top >= 1:
        raise NotInW(f"max lambda of {f} is {top}, p* needs it below 1")
    alpha = certified_constant(ConstantTag.ALPHA_STAR).value

    ctx = MPContext()
    ctx.prec = LOG_PRECISION_BITS

    def log(x: Fraction) -> Any:
        return ctx.log(ctx.mpf(x.numerator) / x.denominator)

    denominator = log(top)
    # log max lambda < 0, so the larger alpha endpoint gives the smaller p*
    lo = mpf_to_fraction(log(alpha.hi) / denominator)
    hi = mpf_to_fraction(log(alpha.lo) / denominator)
    pad = LOG_PADDING * (1 + abs(hi))
    return Interval(lo - pad, hi + pad)


def factorization_sufficient(f: Polynomial) -> FactorizationTest:
    """
    Sufficient test for a Hadamard factorization: max lambda_i(f) < gamma*.

    When the test passes, f^[1/2] ∘ f^[1/2] is the witness (exact up to the
    rounding of the square roots). A negative answer says nothing; every
    stable polynomial of degree 2 or 3 factorizes regardless.

    Raises:
        DegreeTooSmall: If deg f < 3
        NotPositive: If f has a non-positive coefficient
        EnclosureTooWide: If max lambda_i sits on gamma* beyond refinement
    """
    top = lambdas(f).maximum
    if not below_constant(top, ConstantTag.GAMMA_STAR):
        return FactorizationTest(sufficient=False, max_lambda=top)
    half = hadamard_power(f, Fraction(1, 2))
    return FactorizationTest(
        sufficient=True,
        max_lambda=top,
        witness=(half, half),
        witness_stable=is_hurwitz_stable(half),
    )


def _check_degree(f: Polynomial, m: int) -> None:
    if not f.is_positive:
        raise NotPositive(f"{f} must have all coefficients positive")
    if not 1 <= m <= f.degree:
        raise BadDegree(f"stabilizer degree m = {m} outside 1..{f.degree}")


def _verified(f: Polynomial, g: Polynomial, method: StabilizationMethod,
              parameters: Dict[str, Fraction],
              factors: Tuple[Polynomial, ...] = ()) -> StabilizationResult:
    product = generalized_hadamard(f, g)
    reports = [classify(element) for element in product.elements]
    result = StabilizationResult(
        g=g,
        product=product,
        method=method,
        parameters=parameters,
        verification=reports,
        factors=factors,
    )
    unstable = [str(e) for e, r in zip(product.elements, reports) if r.verdict is not Verdict.STABLE]
    if unstable or not result.verify():
        raise VerificationFailed(
            f"{method.value} stabilizer {g} for {f} failed; unstable elements: {unstable}")
    return result


def stabilize(f: Polynomial, m: int) -> StabilizationResult:
    """
    A stable g of degree m with every element of f•g stable, for any positive f.

    g has all lambda ratios equal to epsilon = alpha*_lo / (2 max(max lambda_i(f), 1)).
    Each lambda_i(F_j) = lambda_{i+j}(f) lambda_i(g) then stays below alpha*,
    and so does every lambda_i(g). For m in {1, 2} g is 1 + s + ... + s^m.

    Args:
        f: Positive polynomial of degree n
        m: Degree of g, 1 <= m <= n

    Returns:
        StabilizationResult with g, f•g and its verification reports

    Raises:
        NotPositive: If f has a non-positive coefficient
        BadDegree: If m is outside 1..deg f
        VerificationFailed: If the construction does not verify
    """
    _check_degree(f, m)
    if m <= 2:
        return _verified(f, all_ones(m), StabilizationMethod.LAMBDA_UNIFORM, {})

    alpha_lo = certified_constant(ConstantTag.ALPHA_STAR).value.lo
    top = lambdas(f).maximum
    epsilon = alpha_lo * STABILIZE_MARGIN / max(top, Fraction(1))
    g = lambda_uniform(m, epsilon)

    f_lambdas = lambdas(f)
    for j, element in enumerate(windows(f, m)):
        element_lambdas = lambdas(hadamard_product(element, g))
        for i in range(2, m):
            expected = f_lambdas.value(i + j) * epsilon
            value = element_lambdas.value(i)
            if value != expected or value >= alpha_lo:
                raise VerificationFailed(
                    f"lambda_{i}(F_{j}) = {value}, expected {expected} below {alpha_lo}")

    logger.debug("stabilize %s with m=%d, epsilon=%s", f, m, epsilon)
    return _verified(f, g, StabilizationMethod.LAMBDA_UNIFORM, {'epsilon': epsilon})


def stabilize_factorized(f: Polynomial, m: int) -> StabilizationResult:
    """
    A stabilizer with an explicit Hadamard factorization,
    g = f_0^[p] ∘ f_1^[p] ∘ ... ∘ f_{n-m}^[p].

    p is the smallest integer above every window's p*, so the powers and
    their product stay exact. For m = n the single window is f and the
    product is {f^[p+1]}.

    Returns:
        StabilizationResult with p in `parameters` and the powered
        windows in `factors`

    Raises:
        NotPositive: If f has a non-positive coefficient
        BadDegree: If m is outside 1..deg f
        NotInW: If max lambda_i(f) >= 1
        VerificationFailed: If the construction does not verify
    """
    _check_degree(f, m)
    if m <= 2:
        return _verified(f, all_ones(m), StabilizationMethod.HADAMARD_FACTORIZED, {})

    top = lambdas(f).maximum
    if top >= 1:
        raise NotInW(f"max lambda of {f} is {top}, factorized stabilizer needs it below 1")

    parts = windows(f, m)
    bound = max(p_star(part).hi for part in parts)
    p = floor(bound) + 1
    factors = tuple(hadamard_power(part, p) for part in parts)
    g = reduce(hadamard_product, factors)

    logger.debug("stabilize_factorized %s with m=%d, p=%d (p* <= %s)", f, m, p, float(bound))
    return _verified(f, g, StabilizationMethod.HADAMARD_FACTORIZED,
                     {'p': Fraction(p), 'p_star_upper': bound}, factors)
