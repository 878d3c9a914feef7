#!/usr/bin/env python3
"""
Fixture runner, random samplers and the property campaign.

Fixtures are rows of a CSV file (see FIXTURES.md), each stating one fact
about a polynomial together with its provenance tag. The campaign draws
random polynomials from known classes and checks the closure and
inclusion properties of the Hadamard products on every trial.
"""

import hashlib
import logging
import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from config import (
    CAMPAIGN_DEGREE_LIMITS,
    CAMPAIGN_DEGREES,
    CAMPAIGN_SEED,
    CAMPAIGN_TRIALS,
    CAMPAIGN_WORKERS,
    FIELD_ARGUMENT,
    FIELD_CHECK,
    FIELD_EXPECTED,
    FIELD_FIXTURE_ID,
    FIELD_POLYNOMIAL,
    FIELD_PROVENANCE,
    FIXTURE_FILE,
    LAMBDA_UPPER_ANY,
    LAMBDA_UPPER_W,
    LAMBDA_UPPER_W_ALPHA,
    LAMBDA_UPPER_W_BETA,
    ORACLE_STABLE_MARGIN,
    POWER_PRECISION_BITS,
    PROVENANCE_TAGS,
    QUASI_TOLERANCE,
    SAMPLER_DAMPING_GRID,
    SAMPLER_FREQUENCY_GRID,
    SAMPLER_LAMBDA_STEPS,
    SAMPLER_ROOT_GRID,
)
from constructors import (
    extend_one,
    extend_stable,
    factorization_sufficient,
    lambda_uniform,
    p_star,
    polynomial_from_lambdas,
    prepend_stable,
    stabilize,
    stabilize_factorized,
)
from errors import FixtureParse, HurwitzError, InvalidConfig, Mismatch
from poly_core import (
    Polynomial,
    generalized_hadamard,
    hadamard_power,
    hadamard_product,
    lambdas,
    polynomial_from_text,
    prepend,
    reversal,
    windows,
)
from stability import (
    ConstantTag,
    Verdict,
    below_constant,
    certified_constant,
    classify,
    hurwitz_matrix,
    in_w_alpha,
    is_hurwitz_stable,
    leading_principal_minors,
    quasi_stability,
    roots_oracle,
)
from utils import format_rational, parse_rational, read_fixture_rows, to_json

logger = logging.getLogger(__name__)

Seed = Union[int, random.Random]
Witnesses = Dict[str, str]


# Samplers

def _rng(seed: Seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _multiply(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _root_grid(count: int) -> List[Fraction]:
    """SAMPLER_ROOT_GRID, continued at its own spacing until it holds `count` values."""
    grid = list(SAMPLER_ROOT_GRID)
    step = grid[1] - grid[0]
    while len(grid) < count:
        grid.append(grid[-1] + step)
    return grid


def random_stable(n: int, seed: Seed) -> Polynomial:
    """
    A random Hurwitz stable polynomial of degree n.

    The polynomial is a product of distinct factors (s + r) and
    (s^2 + 2 zeta omega s + omega^2) with r, zeta, omega > 0 drawn from the
    sampler grids, expanded exactly. The root grid is extended when n asks
    for more distinct linear factors than it holds.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    rng = _rng(seed)
    quadratics = rng.randint(0, n // 2)
    linears = n - 2 * quadratics

    coeffs = [Fraction(1)]
    for r in rng.sample(_root_grid(linears), linears):
        coeffs = _multiply(coeffs, [r, Fraction(1)])
    pairs = rng.sample([(z, w) for z in SAMPLER_DAMPING_GRID for w in SAMPLER_FREQUENCY_GRID],
                       quadratics)
    for zeta, omega in pairs:
        coeffs = _multiply(coeffs, [omega * omega, 2 * zeta * omega, Fraction(1)])
    return Polynomial(tuple(coeffs))


def _random_seeds(rng: random.Random) -> Tuple[Fraction, Fraction, Fraction]:
    return (rng.choice(SAMPLER_ROOT_GRID), rng.choice(SAMPLER_ROOT_GRID),
            rng.choice(SAMPLER_ROOT_GRID))


def random_positive_lambda(n: int, seed: Seed, upper: Fraction) -> Polynomial:
    """
    A random positive polynomial of degree n >= 3 with every lambda_i
    strictly between 0 and `upper`, drawn from multiples of upper/steps.
    """
    rng = _rng(seed)
    values = [upper * rng.randint(1, SAMPLER_LAMBDA_STEPS - 1) / SAMPLER_LAMBDA_STEPS
              for _ in range(n - 2)]
    return polynomial_from_lambdas(values, _random_seeds(rng))


def _lambda_member(n: int, seed: Seed, upper: Fraction) -> Polynomial:
    # Below degree 3 every class coincides with H_n
    if n < 3:
        return random_stable(n, seed)
    return random_positive_lambda(n, seed, upper)


def random_w(n: int, seed: Seed) -> Polynomial:
    return _lambda_member(n, seed, LAMBDA_UPPER_W)


def random_w_alpha(n: int, seed: Seed) -> Polynomial:
    return _lambda_member(n, seed, LAMBDA_UPPER_W_ALPHA)


def random_w_beta(n: int, seed: Seed) -> Polynomial:
    return _lambda_member(n, seed, LAMBDA_UPPER_W_BETA)


def random_positive(n: int, seed: Seed) -> Polynomial:
    """Positive, usually unstable: lambda ratios up to LAMBDA_UPPER_ANY."""
    return _lambda_member(n, seed, LAMBDA_UPPER_ANY)


def random_v(n: int, seed: Seed) -> Polynomial:
    """A random member of V_n: lambda_2 + ... + lambda_{n-1} < 1."""
    if n < 3:
        return random_stable(n, seed)
    rng = _rng(seed)
    weights = [rng.randint(1, SAMPLER_LAMBDA_STEPS) for _ in range(n - 2)]
    slack = rng.randint(1, SAMPLER_LAMBDA_STEPS)
    total = sum(weights) + slack
    return polynomial_from_lambdas([Fraction(w, total) for w in weights], _random_seeds(rng))


# Fixtures

@dataclass
class FixtureOutcome:
    fixture_id: str
    check: str
    polynomial: str
    argument: str
    expected: str
    computed: str
    provenance: str
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'fixture_id': self.fixture_id,
            'check': self.check,
            'polynomial': self.polynomial,
            'argument': self.argument,
            'expected': self.expected,
            'computed': self.computed,
            'provenance': self.provenance,
            'passed': self.passed,
        }


@dataclass
class FixtureReport:
    source: str
    outcomes: List[FixtureOutcome] = field(default_factory=list)

    @property
    def failures(self) -> List[FixtureOutcome]:
        return [o for o in self.outcomes if not o.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def raise_for_mismatch(self) -> None:
        if self.failures:
            ids = ', '.join(f"{o.fixture_id}:{o.check}" for o in self.failures)
            raise Mismatch(f"{len(self.failures)} fixture fact(s) failed: {ids}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'source': self.source,
            'total': len(self.outcomes),
            'failed': len(self.failures),
            'outcomes': [o.to_dict() for o in self.outcomes],
        }


def _flag(value: bool) -> str:
    return 'true' if value else 'false'


def _split(argument: str, count: int) -> List[str]:
    parts = argument.split()
    if len(parts) != count:
        raise FixtureParse(f"expected {count} argument(s), got {argument!r}")
    return parts


def _power_argument(argument: str) -> Tuple[Fraction, int]:
    """'0.139' or '0.139@256' -> exponent and precision bits."""
    exponent, _, bits = argument.partition('@')
    return parse_rational(exponent), int(bits) if bits else POWER_PRECISION_BITS


def _membership(f: Polynomial, key: str) -> bool:
    flags = classify(f).memberships
    if key not in flags:
        raise FixtureParse(f"unknown class {key!r}")
    return flags[key]


def _verdict(f: Polynomial) -> str:
    verdict, _ = quasi_stability(f)
    return verdict.value


def _check_lambdas(f: Polynomial, argument: str) -> str:
    return ' '.join(lambdas(f).to_list())


def _check_minor(f: Polynomial, argument: str) -> str:
    return format_rational(leading_principal_minors(f)[int(argument) - 1])


def _check_minors(f: Polynomial, argument: str) -> str:
    return ' '.join(format_rational(d) for d in leading_principal_minors(f))


def _check_hurwitz_matrix(f: Polynomial, argument: str) -> str:
    return ';'.join(' '.join(format_rational(e) for e in row) for row in hurwitz_matrix(f).entries)


def _check_verdict(f: Polynomial, argument: str) -> str:
    return _verdict(f)


def _check_rh(f: Polynomial, argument: str) -> str:
    return _flag(is_hurwitz_stable(f))


def _check_membership(f: Polynomial, argument: str) -> str:
    return _flag(_membership(f, argument))


def _check_w_alpha(f: Polynomial, argument: str) -> str:
    return _flag(in_w_alpha(f, parse_rational(argument)))


def _window(f: Polynomial, argument: str) -> Polynomial:
    m, j = (int(x) for x in _split(argument, 2)[:2])
    return windows(f, m)[j]


def _check_window(f: Polynomial, argument: str) -> str:
    return str(_window(f, argument))


def _check_window_minor(f: Polynomial, argument: str) -> str:
    m, j, k = (int(x) for x in _split(argument, 3))
    return format_rational(leading_principal_minors(windows(f, m)[j])[k - 1])


def _check_window_verdict(f: Polynomial, argument: str) -> str:
    return _verdict(_window(f, argument))


def _check_power_verdict(f: Polynomial, argument: str) -> str:
    exponent, bits = _power_argument(argument)
    return _verdict(hadamard_power(f, exponent, precision=bits))


def _check_power_membership(f: Polynomial, argument: str) -> str:
    power, key = _split(argument, 2)
    exponent, bits = _power_argument(power)
    return _flag(_membership(hadamard_power(f, exponent, precision=bits), key))


def _check_power_product_verdict(f: Polynomial, argument: str) -> str:
    exponent, bits = _power_argument(argument)
    return _verdict(hadamard_product(f, hadamard_power(f, exponent, precision=bits)))


def _check_hadamard(f: Polynomial, argument: str) -> str:
    return str(hadamard_product(f, polynomial_from_text(argument)))


def _check_p_star(f: Polynomial, argument: str) -> str:
    return f"{float(p_star(f).midpoint):.4f}"


def _check_factorized_p(f: Polynomial, argument: str) -> str:
    return format_rational(stabilize_factorized(f, int(argument)).parameters['p'])


def _check_factorized_g(f: Polynomial, argument: str) -> str:
    return str(stabilize_factorized(f, int(argument)).g)


def _check_factorized_element(f: Polynomial, argument: str) -> str:
    m, j = (int(x) for x in _split(argument, 2))
    return str(stabilize_factorized(f, m).product.elements[j])


def _check_factorization_sufficient(f: Polynomial, argument: str) -> str:
    return _flag(factorization_sufficient(f).sufficient)


def _check_stabilize(f: Polynomial, argument: str) -> str:
    return _flag(stabilize(f, int(argument)).verify())


def _check_extend_one(f: Polynomial, argument: str) -> str:
    coefficient, _ = extend_one(f, parse_rational(argument))
    return format_rational(coefficient)


def _check_lambda_uniform(f: Optional[Polynomial], argument: str) -> str:
    m, epsilon = _split(argument, 2)
    return str(lambda_uniform(int(m), parse_rational(epsilon)))


def _prepended(f: Polynomial, k: str, epsilon: str) -> Polynomial:
    _, combined = prepend_stable(f, int(k), parse_rational(epsilon))
    return combined


def _check_prepend_verdict(f: Polynomial, argument: str) -> str:
    return _verdict(_prepended(f, *_split(argument, 2)))


def _check_prepend_membership(f: Polynomial, argument: str) -> str:
    k, epsilon, key = _split(argument, 3)
    return _flag(_membership(_prepended(f, k, epsilon), key))


def _check_constant(f: Optional[Polynomial], argument: str) -> str:
    enclosure = certified_constant(ConstantTag(argument)).value
    return f"{format_rational(enclosure.lo)} {format_rational(enclosure.hi)}"


def _constant_matches(expected: str, computed: str) -> bool:
    """A five-digit published value lies within 5e-6 of the enclosure."""
    lo, hi = (Fraction(x) for x in computed.split())
    target = parse_rational(expected)
    slack = Fraction(5, 10 ** 6)
    return lo - slack <= target <= hi + slack


FixtureCheck = Callable[[Any, str], str]

FIXTURE_CHECKS: Dict[str, FixtureCheck] = {
    'lambdas': _check_lambdas,
    'minor': _check_minor,
    'minors': _check_minors,
    'hurwitz_matrix': _check_hurwitz_matrix,
    'verdict': _check_verdict,
    'rh': _check_rh,
    'membership': _check_membership,
    'w_alpha': _check_w_alpha,
    'window': _check_window,
    'window_minor': _check_window_minor,
    'window_verdict': _check_window_verdict,
    'power_verdict': _check_power_verdict,
    'power_membership': _check_power_membership,
    'power_product_verdict': _check_power_product_verdict,
    'hadamard': _check_hadamard,
    'p_star': _check_p_star,
    'factorized_p': _check_factorized_p,
    'factorized_g': _check_factorized_g,
    'factorized_element': _check_factorized_element,
    'factorization_sufficient': _check_factorization_sufficient,
    'stabilize': _check_stabilize,
    'extend_one': _check_extend_one,
    'lambda_uniform': _check_lambda_uniform,
    'prepend_verdict': _check_prepend_verdict,
    'prepend_membership': _check_prepend_membership,
    'constant': _check_constant,
}

# Checks that take no polynomial
STANDALONE_CHECKS = {'constant', 'lambda_uniform'}

FIXTURE_COMPARATORS: Dict[str, Callable[[str, str], bool]] = {
    'constant': _constant_matches,
}


def _normalize(text: str) -> str:
    return ' '.join(text.split())


def evaluate_fixture(row: Dict[str, str]) -> FixtureOutcome:
    """
    Evaluate one fixture row.

    Raises:
        FixtureParse: On an unknown check, a missing polynomial or a bad provenance tag
    """
    check = row[FIELD_CHECK]
    if check not in FIXTURE_CHECKS:
        raise FixtureParse(f"fixture {row[FIELD_FIXTURE_ID]}: unknown check {check!r}")
    provenance = row[FIELD_PROVENANCE]
    if provenance not in PROVENANCE_TAGS:
        raise FixtureParse(f"fixture {row[FIELD_FIXTURE_ID]}: bad provenance {provenance!r}")

    text = row[FIELD_POLYNOMIAL]
    if not text and check not in STANDALONE_CHECKS:
        raise FixtureParse(f"fixture {row[FIELD_FIXTURE_ID]}: check {check!r} needs a polynomial")
    try:
        f = polynomial_from_text(text) if text else None
    except ValueError as e:
        raise FixtureParse(f"fixture {row[FIELD_FIXTURE_ID]}: {e}") from e

    expected = row[FIELD_EXPECTED]
    try:
        computed = FIXTURE_CHECKS[check](f, row[FIELD_ARGUMENT])
    except FixtureParse:
        raise
    except HurwitzError as e:
        computed = f"error: {e}"
    except (ValueError, IndexError) as e:
        raise FixtureParse(f"fixture {row[FIELD_FIXTURE_ID]}: bad argument "
                           f"{row[FIELD_ARGUMENT]!r} ({e})") from e
    compare = FIXTURE_COMPARATORS.get(check)
    if computed.startswith('error:'):
        passed = False
    elif compare is not None:
        passed = compare(expected, computed)
    else:
        passed = _normalize(expected) == _normalize(computed)

    return FixtureOutcome(
        fixture_id=row[FIELD_FIXTURE_ID],
        check=check,
        polynomial=text,
        argument=row[FIELD_ARGUMENT],
        expected=expected,
        computed=computed,
        provenance=provenance,
        passed=passed,
    )


def _fixture_path(path: str) -> str:
    if os.path.isabs(path) or os.path.exists(path):
        return path
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), path)


def run_fixtures(path: Optional[str] = None) -> FixtureReport:
    """
    Evaluate every fact in the fixture file.

    Relative paths, including the default FIXTURE_FILE, resolve against
    this module's directory when they do not exist from the working directory.

    Raises:
        FileNotFoundError: If the fixture file is missing
        FixtureParse: If a row cannot be interpreted
    """
    path = _fixture_path(path or FIXTURE_FILE)
    try:
        rows = read_fixture_rows(path)
    except ValueError as e:
        raise FixtureParse(str(e)) from e
    report = FixtureReport(source=path)
    for row in rows:
        outcome = evaluate_fixture(row)
        logger.debug("fixture %s %s: %s", outcome.fixture_id, outcome.check,
                     'ok' if outcome.passed else 'MISMATCH')
        report.outcomes.append(outcome)
    return report


# Campaign

@dataclass
class Trial:
    """One property evaluation. ok=None marks a trial skipped for its degree range."""

    ok: Optional[bool]
    boundary_sightings: int = 0
    detail: str = ''


@dataclass
class PropertyResult:
    property_id: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    boundary_sightings: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'failed': self.failed,
            'skipped': self.skipped,
            'boundary_sightings': self.boundary_sightings,
            'failures': self.failures,
        }


@dataclass
class CampaignConfig:
    degrees: Tuple[int, int] = CAMPAIGN_DEGREES
    trials: int = CAMPAIGN_TRIALS
    seed: int = CAMPAIGN_SEED
    quasi_tolerance: float = QUASI_TOLERANCE
    report_path: Optional[str] = None
    workers: int = CAMPAIGN_WORKERS
    properties: Optional[List[str]] = None

    def validate(self) -> None:
        """
        Raises:
            InvalidConfig: On non-positive trials or workers, a degree range
                outside CAMPAIGN_DEGREE_LIMITS, or an unknown property id
        """
        if self.trials < 1:
            raise InvalidConfig(f"trials must be >= 1, got {self.trials}")
        if self.workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {self.workers}")
        lo, hi = self.degrees
        limit_lo, limit_hi = CAMPAIGN_DEGREE_LIMITS
        if not limit_lo <= lo <= hi <= limit_hi:
            raise InvalidConfig(f"degrees {lo}..{hi} outside {limit_lo}..{limit_hi}")
        if self.quasi_tolerance <= 0:
            raise InvalidConfig(f"quasi_tolerance must be positive, got {self.quasi_tolerance}")
        unknown = [p for p in (self.properties or []) if p not in PROPERTIES]
        if unknown:
            raise InvalidConfig(f"unknown properties: {', '.join(unknown)}")

    @property
    def property_ids(self) -> List[str]:
        return list(self.properties) if self.properties else list(PROPERTIES)


@dataclass
class CampaignReport:
    config: CampaignConfig
    results: List[PropertyResult]

    @property
    def total_failures(self) -> int:
        return sum(r.failed for r in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'seed': self.config.seed,
            'trials': self.config.trials,
            'degrees': list(self.config.degrees),
            'quasi_tolerance': self.config.quasi_tolerance,
            'total_failures': self.total_failures,
            'properties': {r.property_id: r.to_dict() for r in self.results},
        }


def trial_rng(seed: int, property_id: str, trial: int) -> random.Random:
    """Randomness for one trial, derived only from (seed, property, trial index)."""
    digest = hashlib.sha256(f"{seed}:{property_id}:{trial}".encode('utf-8')).digest()
    return random.Random(int.from_bytes(digest[:8], 'big'))


def _degree(rng: random.Random, config: CampaignConfig, minimum: int = 1) -> Optional[int]:
    lo, hi = config.degrees
    lo = max(lo, minimum)
    if lo > hi:
        return None
    return rng.randint(lo, hi)


def _element_lambdas_below(elements: Tuple[Polynomial, ...], which: ConstantTag) -> bool:
    return all(below_constant(lambdas(e).maximum, which) for e in elements)


def _record(witnesses: Witnesses, **values: Any) -> None:
    for name, value in values.items():
        witnesses[name] = format_rational(value) if isinstance(value, Fraction) else str(value)


def _prop_hadamard_closure(rng: random.Random, config: CampaignConfig,
                           witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_stable(n, rng)
    g = random_stable(rng.randint(1, n), rng)
    _record(witnesses, f=f, g=g)
    return Trial(ok=is_hurwitz_stable(hadamard_product(f, g)))


def _prop_w_low_degree_closure(rng: random.Random, config: CampaignConfig,
                               witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_w(n, rng)
    g = random_stable(rng.randint(1, min(4, n)), rng)
    _record(witnesses, f=f, g=g)
    product = generalized_hadamard(f, g)
    return Trial(ok=all(is_hurwitz_stable(e) for e in product.elements))


def _prop_end_elements_stable(rng: random.Random, config: CampaignConfig,
                              witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_stable(n, rng)
    g = random_stable(rng.randint(1, n), rng)
    _record(witnesses, f=f, g=g)
    elements = generalized_hadamard(f, g).elements
    ends = is_hurwitz_stable(elements[0]) and is_hurwitz_stable(elements[-1])
    sightings = 0
    closed = True
    for element in elements[1:-1]:
        verdict, _ = quasi_stability(element, config.quasi_tolerance)
        if verdict is Verdict.QUASI_STABLE:
            sightings += 1
        closed = closed and verdict is not Verdict.UNSTABLE
    return Trial(ok=ends and closed, boundary_sightings=sightings)


def _prop_factorized_g_closure(rng: random.Random, config: CampaignConfig,
                               witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    m = rng.randint(1, n)
    f = random_stable(n, rng)
    g1, g2 = random_stable(m, rng), random_stable(m, rng)
    _record(witnesses, f=f, g1=g1, g2=g2)
    product = generalized_hadamard(f, hadamard_product(g1, g2))
    return Trial(ok=all(is_hurwitz_stable(e) for e in product.elements))


def _prop_w_alpha_closure(rng: random.Random, config: CampaignConfig,
                          witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_w(n, rng)
    g = random_w_alpha(rng.randint(3, n), rng)
    _record(witnesses, f=f, g=g)
    elements = generalized_hadamard(f, g).elements
    return Trial(ok=_element_lambdas_below(elements, ConstantTag.ALPHA_STAR))


def _prop_w_beta_closure(rng: random.Random, config: CampaignConfig,
                         witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_w_beta(n, rng)
    g = random_w_beta(rng.randint(3, n), rng)
    _record(witnesses, f=f, g=g)
    elements = generalized_hadamard(f, g).elements
    return Trial(ok=_element_lambdas_below(elements, ConstantTag.ALPHA_STAR))


def _prop_v_closure(rng: random.Random, config: CampaignConfig,
                    witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_w(n, rng)
    g = random_v(rng.randint(3, n), rng)
    _record(witnesses, f=f, g=g)
    g_total = lambdas(g).total
    elements = generalized_hadamard(f, g).elements
    return Trial(ok=all(lambdas(e).total < g_total < 1 for e in elements))


def _prop_factorized_stabilizer(rng: random.Random, config: CampaignConfig,
                                witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_w(n, rng)
    m = rng.randint(3, n)
    _record(witnesses, f=f, m=m)
    result = stabilize_factorized(f, m)
    _record(witnesses, g=result.g)
    return Trial(ok=result.verify())


def _prop_uniform_stabilizer(rng: random.Random, config: CampaignConfig,
                             witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_positive(n, rng)
    m = rng.randint(3, n)
    _record(witnesses, f=f, m=m)
    result = stabilize(f, m)
    _record(witnesses, g=result.g)
    return Trial(ok=result.verify())


def _prop_power_above_p_star(rng: random.Random, config: CampaignConfig,
                             witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_w(n, rng)
    _record(witnesses, f=f)
    # p = 1.01 * p*, rounded up to hundredths
    p = Fraction(math.ceil(p_star(f).hi * 101), 100)
    _record(witnesses, p=p)
    return Trial(ok=is_hurwitz_stable(hadamard_power(f, p)))


EPSILON_CHOICES = [Fraction(1), Fraction(1, 2), Fraction(1, 10)]


def _prop_stable_extension(rng: random.Random, config: CampaignConfig,
                           witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_stable(n, rng)
    epsilon = rng.choice(EPSILON_CHOICES)
    target = n + rng.randint(1, 3)
    _record(witnesses, f=f, degree=target, epsilon=epsilon)
    return Trial(ok=extend_stable(f, target, epsilon).verify())


def _prop_stable_prepend(rng: random.Random, config: CampaignConfig,
                         witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_stable(n, rng)
    k = rng.randint(1, 3)
    epsilon = rng.choice(EPSILON_CHOICES)
    _record(witnesses, f=f, k=k, epsilon=epsilon)
    p, combined = prepend_stable(f, k, epsilon)
    ok = (is_hurwitz_stable(combined) and combined == prepend(p, k, f)
          and p.degree == k - 1 and all(0 < c < epsilon for c in p.coeffs))
    return Trial(ok=ok)


def _prop_lambda_uniform_builder(rng: random.Random, config: CampaignConfig,
                                 witnesses: Witnesses) -> Trial:
    m = _degree(rng, config, minimum=3)
    if m is None:
        return Trial(ok=None)
    epsilon = Fraction(rng.randint(1, 2 * SAMPLER_LAMBDA_STEPS), SAMPLER_LAMBDA_STEPS)
    seeds = _random_seeds(rng)
    _record(witnesses, m=m, epsilon=epsilon, seeds=' '.join(format_rational(s) for s in seeds))
    g = lambda_uniform(m, epsilon, seeds)
    _record(witnesses, g=g)
    ok = all(v == epsilon for v in lambdas(g).values)
    if below_constant(epsilon, ConstantTag.ALPHA_STAR):
        ok = ok and is_hurwitz_stable(g)
    return Trial(ok=ok)


def _prop_lambda_multiplicativity(rng: random.Random, config: CampaignConfig,
                                  witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_positive(n, rng)
    m = rng.randint(3, n)
    g = random_positive(m, rng)
    _record(witnesses, f=f, g=g)
    f_lambdas, g_lambdas = lambdas(f), lambdas(g)
    ok = True
    for j, element in enumerate(generalized_hadamard(f, g).elements):
        element_lambdas = lambdas(element)
        ok = ok and all(element_lambdas.value(i) == f_lambdas.value(i + j) * g_lambdas.value(i)
                        for i in range(2, m))
    return Trial(ok=ok)


def _prop_minor_identity(rng: random.Random, config: CampaignConfig,
                         witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=2)
    if n is None:
        return Trial(ok=None)
    f = random_positive(n, rng) if rng.random() < 0.5 else random_stable(n, rng)
    _record(witnesses, f=f)
    minors = leading_principal_minors(f)
    return Trial(ok=minors[-1] == f[0] * minors[-2])


def _prop_reversal_equivalence(rng: random.Random, config: CampaignConfig,
                               witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_w(n, rng) if rng.random() < 0.5 else random_stable(n, rng)
    _record(witnesses, f=f)
    return Trial(ok=is_hurwitz_stable(f) == is_hurwitz_stable(reversal(f)))


def _prop_h_subset_w(rng: random.Random, config: CampaignConfig,
                     witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=3)
    if n is None:
        return Trial(ok=None)
    f = random_stable(n, rng)
    _record(witnesses, f=f)
    return Trial(ok=lambdas(f).maximum < 1)


def _prop_w_alpha_subset_h(rng: random.Random, config: CampaignConfig,
                           witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_w_alpha(n, rng)
    _record(witnesses, f=f)
    return Trial(ok=is_hurwitz_stable(f))


def _prop_v_subset_h(rng: random.Random, config: CampaignConfig,
                     witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    f = random_v(n, rng)
    _record(witnesses, f=f)
    return Trial(ok=is_hurwitz_stable(f))


def _prop_v_subset_w(rng: random.Random, config: CampaignConfig,
                     witnesses: Witnesses) -> Trial:
    n = _degree(rng, config, minimum=5)
    if n is None:
        return Trial(ok=None)
    f = random_v(n, rng)
    _record(witnesses, f=f)
    return Trial(ok=lambdas(f).maximum < 1)


def _prop_oracle_agreement(rng: random.Random, config: CampaignConfig,
                           witnesses: Witnesses) -> Trial:
    n = _degree(rng, config)
    if n is None:
        return Trial(ok=None)
    source = rng.randrange(3)
    if source == 0:
        f = random_stable(n, rng)
    elif source == 1:
        f = random_w(n, rng)
    else:
        base = random_stable(n, rng)
        g = random_stable(rng.randint(1, n), rng)
        elements = generalized_hadamard(base, g).elements
        f = elements[rng.randrange(len(elements))]
    _record(witnesses, f=f)
    exact = is_hurwitz_stable(f)
    numeric = max(r.real for r in roots_oracle(f)) < -ORACLE_STABLE_MARGIN
    return Trial(ok=exact == numeric, detail=f"exact={exact} oracle={numeric}")


PropertyCheck = Callable[[random.Random, CampaignConfig, Witnesses], Trial]

PROPERTIES: Dict[str, PropertyCheck] = {
    'hadamard_closure': _prop_hadamard_closure,
    'w_low_degree_closure': _prop_w_low_degree_closure,
    'end_elements_stable': _prop_end_elements_stable,
    'factorized_g_closure': _prop_factorized_g_closure,
    'w_alpha_closure': _prop_w_alpha_closure,
    'w_beta_closure': _prop_w_beta_closure,
    'v_closure': _prop_v_closure,
    'factorized_stabilizer': _prop_factorized_stabilizer,
    'uniform_stabilizer': _prop_uniform_stabilizer,
    'power_above_p_star': _prop_power_above_p_star,
    'stable_extension': _prop_stable_extension,
    'stable_prepend': _prop_stable_prepend,
    'lambda_uniform_builder': _prop_lambda_uniform_builder,
    'lambda_multiplicativity': _prop_lambda_multiplicativity,
    'minor_identity': _prop_minor_identity,
    'reversal_equivalence': _prop_reversal_equivalence,
    'h_subset_w': _prop_h_subset_w,
    'w_alpha_subset_h': _prop_w_alpha_subset_h,
    'v_subset_h': _prop_v_subset_h,
    'v_subset_w': _prop_v_subset_w,
    'oracle_agreement': _prop_oracle_agreement,
}


def run_property(property_id: str, config: CampaignConfig) -> PropertyResult:
    """
    Run every trial of one property.

    Each trial records its inputs into a fresh witness dict before the risky
    calls, so a failure keeps its witnesses whether the check returned False
    or raised a HurwitzError.
    """
    check = PROPERTIES[property_id]
    result = PropertyResult(property_id=property_id)
    for index in range(config.trials):
        rng = trial_rng(config.seed, property_id, index)
        witnesses: Witnesses = {}
        try:
            trial = check(rng, config, witnesses)
        except HurwitzError as e:
            trial = Trial(ok=False, detail=f"{type(e).__name__}: {e}")

        if trial.ok is None:
            result.skipped += 1
            continue
        result.boundary_sightings += trial.boundary_sightings
        if trial.ok:
            result.passed += 1
        else:
            result.failed += 1
            result.failures.append({'trial': index, 'witnesses': witnesses,
                                    'detail': trial.detail})
    logger.debug("property %s: %d passed, %d failed, %d skipped",
                 property_id, result.passed, result.failed, result.skipped)
    return result


def run_campaign(config: CampaignConfig) -> CampaignReport:
    """
    Run every configured property and aggregate the outcomes.

    The report depends only on the config: per-trial randomness comes from
    trial_rng and results are listed in property order whatever the
    worker count. With `report_path` set the JSON report is written there.

    Raises:
        InvalidConfig: If the config does not validate
    """
    config.validate()
    ids = config.property_ids
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda pid: run_property(pid, config), ids))
    else:
        results = [run_property(pid, config) for pid in ids]

    report = CampaignReport(config=config, results=results)
    if config.report_path:
        with open(config.report_path, 'w', encoding='utf-8') as file:
            file.write(to_json(report.to_dict()) + '\n')
    return report


def replay_witness(text: str) -> Polynomial:
    """Rebuild a failure witness from the canonical text stored in a report."""
    return polynomial_from_text(text)
