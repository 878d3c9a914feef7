#!/usr/bin/env python3
"""
Polynomial data type and coefficientwise algebra.

Polynomials are immutable tuples of exact rationals in ascending powers:
f(s) = a_0 + a_1 s + ... + a_n s^n is stored as (a_0, ..., a_n). Everything
here is coefficientwise: reversal, windows, the Hadamard product f∘g, the
generalized Hadamard product f•g, Hadamard powers and the lambda ratios

    lambda_i(f) = a_{i-2} a_{i+1} / (a_i a_{i-1}),  i = 2, ..., n-1.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Tuple, Union

from mpmath.ctx_mp import MPContext

from config import POWER_PRECISION_BITS
from errors import (
    BadWindowDegree,
    DegreeOrder,
    DegreeOverlap,
    DegreeTooSmall,
    EmptyCoefficients,
    NonPositiveExponent,
    NotPositive,
    ZeroLeadingCoefficient,
)
from utils import (
    format_polynomial_text,
    format_rational,
    parse_polynomial_text,
    parse_rational,
)

Rational = Union[Fraction, int, float, str]


@dataclass(frozen=True)
class Polynomial:
    """A real polynomial with exact rational coefficients, ascending order."""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise EmptyCoefficients("a polynomial needs at least one coefficient")
        if self.coeffs[-1] == 0:
            raise ZeroLeadingCoefficient(
                f"leading coefficient of {format_polynomial_text(self.coeffs)} is zero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_positive(self) -> bool:
        """Membership in R_n^+: every coefficient strictly positive."""
        return all(c > 0 for c in self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        """a_k, with a_k = 0 outside 0..n."""
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __str__(self) -> str:
        return format_polynomial_text(self.coeffs)

    def to_dict(self) -> Dict[str, Any]:
        return {'coeffs': [format_rational(c) for c in self.coeffs], 'degree': self.degree}


@dataclass(frozen=True)
class LambdaVector:
    """lambda_2(f), ..., lambda_{n-1}(f) of a polynomial of degree n >= 3."""

    values: Tuple[Fraction, ...]

    def value(self, i: int) -> Fraction:
        """lambda_i, indexed as in the definition (first index is 2)."""
        if not 2 <= i < len(self.values) + 2:
            raise IndexError(f"lambda index {i} outside 2..{len(self.values) + 1}")
        return self.values[i - 2]

    @property
    def maximum(self) -> Fraction:
        return max(self.values)

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def to_list(self) -> List[str]:
        return [format_rational(v) for v in self.values]


@dataclass(frozen=True)
class GeneralizedProduct:
    """f•g = {F_0, ..., F_{n-m}} with F_j = f_j ∘ g."""

    f: Polynomial
    g: Polynomial
    window_polys: Tuple[Polynomial, ...]
    elements: Tuple[Polynomial, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'f': str(self.f),
            'g': str(self.g),
            'windows': [str(w) for w in self.window_polys],
            'elements': [str(e) for e in self.elements],
        }


def make_polynomial(coeffs: Iterable[Rational]) -> Polynomial:
    """
    Build a polynomial from ascending coefficients.

    Raises:
        EmptyCoefficients: If no coefficients are given
        ZeroLeadingCoefficient: If the last coefficient is zero

    Examples:
        >>> make_polynomial([10, 7, 3, 1]).degree
        3
        >>> make_polynomial(["1", "0", "1"]).is_positive
        False
    """
    return Polynomial(tuple(parse_rational(c) for c in coeffs))


def all_ones(m: int) -> Polynomial:
    """1 + s + ... + s^m, the identity of ∘ at degree m."""
    return Polynomial(tuple(Fraction(1) for _ in range(m + 1)))


def reversal(f: Polynomial) -> Polynomial:
    """
    The reciprocal polynomial f*(s) = s^n f(1/s).

    Leading zeros produced by a_0 = 0 are dropped, so reversal is an
    involution exactly when a_0 != 0.
    """
    coeffs = list(reversed(f.coeffs))
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return Polynomial(tuple(coeffs))


def _require_positive(f: Polynomial, name: str = 'f') -> None:
    if not f.is_positive:
        raise NotPositive(f"{name} = {f} must have all coefficients positive")


def hadamard_product(f: Polynomial, g: Polynomial) -> Polynomial:
    """
    f∘g: coefficientwise product up to m = deg g.

    Raises:
        DegreeOrder: If deg g > deg f
        NotPositive: If either factor has a non-positive coefficient
    """
    if g.degree > f.degree:
        raise DegreeOrder(f"deg g = {g.degree} exceeds deg f = {f.degree}")
    _require_positive(f, 'f')
    _require_positive(g, 'g')
    return Polynomial(tuple(a * b for a, b in zip(f.coeffs, g.coeffs)))


def windows(f: Polynomial, m: int) -> List[Polynomial]:
    """
    The windows f_j(s) = a_j + a_{j+1} s + ... + a_{j+m} s^m, j = 0..n-m.

    Args:
        f: Positive polynomial of degree n
        m: Window degree, 1 <= m <= n

    Returns:
        The n-m+1 windows in order of j

    Raises:
        BadWindowDegree: If m is outside 1..deg f
        NotPositive: If f has a non-positive coefficient
    """
    if not 1 <= m <= f.degree:
        raise BadWindowDegree(f"window degree {m} outside 1..{f.degree}")
    _require_positive(f)
    return [Polynomial(f.coeffs[j:j + m + 1]) for j in range(f.degree - m + 1)]


def generalized_hadamard(f: Polynomial, g: Polynomial) -> GeneralizedProduct:
    """
    The generalized Hadamard product f•g.

    Args:
        f: Positive polynomial of degree n
        g: Positive polynomial of degree m, 1 <= m <= n

    Returns:
        GeneralizedProduct holding the windows of f and the elements
        F_j = f_j ∘ g, j = 0..n-m

    Raises:
        DegreeOrder: If deg g > deg f
        BadWindowDegree: If deg g = 0
        NotPositive: If either polynomial has a non-positive coefficient
    """
    if g.degree > f.degree:
        raise DegreeOrder(f"deg g = {g.degree} exceeds deg f = {f.degree}")
    _require_positive(g, 'g')
    window_polys = windows(f, g.degree)
    elements = tuple(hadamard_product(w, g) for w in window_polys)
    return GeneralizedProduct(f=f, g=g, window_polys=tuple(window_polys), elements=elements)


def mpf_to_fraction(value: Any) -> Fraction:
    """The exact rational value of a finite mpmath mpf."""
    sign, man, exp, _ = value._mpf_
    man = -int(man) if sign else int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def hadamard_power(f: Polynomial, p: Rational,
                   precision: int = POWER_PRECISION_BITS) -> Polynomial:
    """
    f^[p](s) = a_0^p + a_1^p s + ... + a_n^p s^n.

    Integer exponents are computed exactly. Other exponents are evaluated in
    binary floating point with `precision` mantissa bits and each rounded
    value is re-embedded as the exact rational it represents.

    Args:
        f: Positive polynomial
        p: Exponent; anything parse_rational accepts
        precision: Mantissa bits for non-integer exponents

    Returns:
        f^[p] with exact rational coefficients

    Raises:
        NonPositiveExponent: If p <= 0
        NotPositive: If f has a non-positive coefficient
    """
    exponent = parse_rational(p)
    if exponent <= 0:
        raise NonPositiveExponent(f"Hadamard exponent must be positive, got {exponent}")
    _require_positive(f)

    if exponent.denominator == 1:
        k = exponent.numerator
        return Polynomial(tuple(a ** k for a in f.coeffs))

    ctx = MPContext()
    ctx.prec = precision
    p_mp = ctx.mpf(exponent.numerator) / exponent.denominator
    powered = []
    for a in f.coeffs:
        a_mp = ctx.mpf(a.numerator) / a.denominator
        powered.append(mpf_to_fraction(ctx.power(a_mp, p_mp)))
    return Polynomial(tuple(powered))


def lambdas(f: Polynomial) -> LambdaVector:
    """
    lambda_i(f) = a_{i-2} a_{i+1} / (a_i a_{i-1}) for i = 2..n-1, exactly.

    Returns:
        LambdaVector of the n-2 ratios

    Raises:
        DegreeTooSmall: If deg f < 3
        NotPositive: If f has a non-positive coefficient
    """
    if f.degree < 3:
        raise DegreeTooSmall(f"lambda ratios need degree >= 3, got {f.degree}")
    _require_positive(f)
    a = f.coeffs
    return LambdaVector(tuple(
        a[i - 2] * a[i + 1] / (a[i] * a[i - 1]) for i in range(2, f.degree)
    ))


def prepend(p: Polynomial, k: int, f: Polynomial) -> Polynomial:
    """
    p(s) + s^k f(s), with zero fill between deg p and k.

    Args:
        p: The low-order part, deg p < k
        k: Power of s that f is shifted by
        f: The high-order part

    Raises:
        DegreeOverlap: If k < 1 or deg p >= k
    """
    if k < 1 or p.degree >= k:
        raise DegreeOverlap(f"deg p = {p.degree} must be below k = {k}")
    gap = [Fraction(0)] * (k - len(p.coeffs))
    return Polynomial(tuple(p.coeffs) + tuple(gap) + tuple(f.coeffs))


def _trim(coeffs: List[Fraction]) -> List[Fraction]:
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs or [Fraction(0)]


def _derivative(coeffs: List[Fraction]) -> List[Fraction]:
    return _trim([k * coeffs[k] for k in range(1, len(coeffs))])


def _subtract(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    size = max(len(a), len(b))
    a = a + [Fraction(0)] * (size - len(a))
    b = b + [Fraction(0)] * (size - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _divmod(numerator: List[Fraction],
            divisor: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    remainder = list(numerator)
    quotient = [Fraction(0)] * max(len(numerator) - len(divisor) + 1, 1)
    lead = divisor[-1]
    for k in range(len(numerator) - len(divisor), -1, -1):
        coef = remainder[k + len(divisor) - 1] / lead
        quotient[k] = coef
        if coef:
            for i, c in enumerate(divisor):
                remainder[k + i] -= coef * c
    return _trim(quotient), _trim(remainder[:len(divisor) - 1])


def _monic_gcd(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    while not (len(b) == 1 and b[0] == 0):
        a, b = b, _divmod(a, b)[1]
    return [c / a[-1] for c in a]


def squarefree_factors(f: Polynomial) -> List[Tuple[Polynomial, int]]:
    """
    Exact squarefree decomposition f = c * a_1 a_2^2 ... a_k^k (Yun).

    Args:
        f: Any polynomial

    Returns:
        Pairs (a_i, i) for every non-constant a_i. Each a_i is monic and
        squarefree and the a_i are pairwise coprime, so the roots of a_i are
        exactly the roots of f of multiplicity i. A constant f gives [].

    Examples:
        >>> [(str(a), i) for a, i in squarefree_factors(make_polynomial([2, 5, 4, 1]))]
        [('2 1', 1), ('1 1', 2)]
    """
    if f.degree < 1:
        return []
    coeffs = list(f.coeffs)
    derivative = _derivative(coeffs)
    common = _monic_gcd(coeffs, derivative)
    b = _divmod(coeffs, common)[0]
    d = _subtract(_divmod(derivative, common)[0], _derivative(b))

    factors = []
    multiplicity = 1
    while len(b) > 1:
        a = _monic_gcd(b, d)
        b = _divmod(b, a)[0]
        d = _subtract(_divmod(d, a)[0], _derivative(b))
        if len(a) > 1:
            factors.append((Polynomial(tuple(a)), multiplicity))
        multiplicity += 1
    return factors


def polynomial_from_text(text: str) -> Polynomial:
    """Parse canonical text ('10 7 3 1') into a Polynomial."""
    return Polynomial(tuple(parse_polynomial_text(text)))
