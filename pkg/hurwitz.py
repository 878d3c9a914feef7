#!/usr/bin/env python3
"""
Hadamard products and Hurwitz stability from the command line.

Polynomials are given inline in canonical text (ascending coefficients,
"10 7 3 1" is s^3 + 3s^2 + 7s + 10) or as a path to a file holding that text.

Usage:
    python hurwitz.py check <f> [--assert-stable]   Stability report for any f
    python hurwitz.py classify <f>                   Report plus class memberships (f positive)
    python hurwitz.py product <f> <g>                Hadamard product f∘g
    python hurwitz.py gproduct <f> <g>               Generalized product f•g with per-element verdicts
    python hurwitz.py power <f> <p> [--precision N]  Hadamard power f^[p]
    python hurwitz.py extend <f> <N> <eps>           Stable extension to degree N
    python hurwitz.py prepend <f> <k> <eps>          Stable p(s) + s^k f(s)
    python hurwitz.py stabilize <f> <m> [--factorized]
    python hurwitz.py constants                      Certified alpha*, beta*, gamma*
    python hurwitz.py fixtures [--file PATH]         Check every fixture fact
    python hurwitz.py campaign [--seed S] [--trials T] [--degrees LO HI]
                               [--workers W] [--report PATH] [--property ID ...]

Options:
    --json          Machine-readable JSON output
    --markdown, -m  Markdown table output
    --csv, -c       CSV output
    --tol TOL       Quasi-stability tolerance (default 1e-9)
    --verbose, -v   Log search and refinement steps

Exit codes: 0 success, 1 fixture mismatch, campaign failure or failed
--assert-stable, 2 usage or input error.

Examples:
    python hurwitz.py check "3 2 4 2 2"
    python hurwitz.py stabilize "1 2 4 4 4 2" 4 --factorized --json
    python hurwitz.py campaign --trials 50 --report campaign.json
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

from config import (
    CAMPAIGN_DEGREES,
    CAMPAIGN_SEED,
    CAMPAIGN_TRIALS,
    CAMPAIGN_WORKERS,
    CONSOLE_CHECK_COLUMN_WIDTH,
    CONSOLE_ID_COLUMN_WIDTH,
    CONSOLE_STATUS_COLUMN_WIDTH,
    CONSOLE_VALUE_COLUMN_WIDTH,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    FIXTURE_FILE,
    POWER_PRECISION_BITS,
    QUASI_TOLERANCE,
)
from constructors import extend_stable, prepend_stable, stabilize, stabilize_factorized
from errors import HurwitzError, Mismatch
from harness import CampaignConfig, run_campaign, run_fixtures
from poly_core import (
    Polynomial,
    generalized_hadamard,
    hadamard_power,
    hadamard_product,
)
from stability import (
    ConstantTag,
    StabilityReport,
    Verdict,
    certified_constant,
    check,
    classify,
    quasi_stability,
)
from utils import TableFormatter, format_rational, read_polynomial_argument, to_json

logger = logging.getLogger(__name__)

Table = Tuple[List[str], List[List[Any]]]

# Minimum console widths per subcommand; other tables size to their content
COLUMN_WIDTHS: Dict[str, List[int]] = {
    'fixtures': [CONSOLE_ID_COLUMN_WIDTH, CONSOLE_CHECK_COLUMN_WIDTH, CONSOLE_VALUE_COLUMN_WIDTH,
                 CONSOLE_VALUE_COLUMN_WIDTH, CONSOLE_VALUE_COLUMN_WIDTH, CONSOLE_STATUS_COLUMN_WIDTH, 0],
}


def load_polynomial(argument: str) -> Polynomial:
    return Polynomial(tuple(read_polynomial_argument(argument)))


def report_rows(report: StabilityReport) -> List[List[Any]]:
    rows: List[List[Any]] = [['verdict', report.verdict.value]]
    for i, minor in enumerate(report.minors, start=1):
        rows.append([f"Delta_{i}", format_rational(minor)])
    if report.lambdas is not None:
        for i, value in enumerate(report.lambdas.values, start=2):
            rows.append([f"lambda_{i}", format_rational(value)])
    for key, flag in report.memberships.items():
        rows.append([f"in {key}", 'yes' if flag else 'no'])
    for root in report.boundary_roots:
        rows.append(['boundary root', f"{root.real:.3e}{root.imag:+.12g}i"])
    return rows


def cmd_check(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f = load_polynomial(args.f)
    report = check(f, args.tol) if args.command == 'check' else classify(f, args.tol)
    status = EXIT_OK
    if getattr(args, 'assert_stable', False) and report.verdict is not Verdict.STABLE:
        status = EXIT_MISMATCH
    data = {'polynomial': str(f), **report.to_dict()}
    return data, (['Field', 'Value'], report_rows(report)), status


def cmd_product(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f, g = load_polynomial(args.f), load_polynomial(args.g)
    product = hadamard_product(f, g)
    verdict, _ = quasi_stability(product, args.tol)
    data = {'f': str(f), 'g': str(g), 'product': str(product), 'verdict': verdict.value}
    rows = [['f∘g', str(product)], ['verdict', verdict.value]]
    return data, (['Field', 'Value'], rows), EXIT_OK


def cmd_gproduct(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f, g = load_polynomial(args.f), load_polynomial(args.g)
    product = generalized_hadamard(f, g)
    reports = [check(element, args.tol) for element in product.elements]
    data = product.to_dict()
    data['reports'] = [r.to_dict() for r in reports]
    rows = [[j, str(w), str(e), r.verdict.value]
            for j, (w, e, r) in enumerate(zip(product.window_polys, product.elements, reports))]
    return data, (['j', 'Window f_j', 'F_j = f_j∘g', 'Verdict'], rows), EXIT_OK


def cmd_power(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f = load_polynomial(args.f)
    powered = hadamard_power(f, args.p, precision=args.precision)
    verdict, _ = quasi_stability(powered, args.tol)
    data = {'f': str(f), 'p': args.p, 'precision': args.precision,
            'power': str(powered), 'verdict': verdict.value}
    rows = [['f^[p]', str(powered)], ['verdict', verdict.value]]
    return data, (['Field', 'Value'], rows), EXIT_OK


def cmd_extend(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f = load_polynomial(args.f)
    certificate = extend_stable(f, args.degree, args.epsilon)
    rows = [[f"a_{f.degree + k + 1}", format_rational(a)] for k, a in enumerate(certificate.appended)]
    rows.append(['result', str(certificate.result)])
    return certificate.to_dict(), (['Field', 'Value'], rows), EXIT_OK


def cmd_prepend(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f = load_polynomial(args.f)
    p, combined = prepend_stable(f, args.k, args.epsilon)
    verdict, _ = quasi_stability(combined, args.tol)
    data = {'f': str(f), 'k': args.k, 'epsilon': args.epsilon, 'p': str(p),
            'combined': str(combined), 'verdict': verdict.value}
    rows = [['p', str(p)], ['p + s^k f', str(combined)], ['verdict', verdict.value]]
    return data, (['Field', 'Value'], rows), EXIT_OK


def cmd_stabilize(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    f = load_polynomial(args.f)
    result = stabilize_factorized(f, args.m) if args.factorized else stabilize(f, args.m)
    rows: List[List[Any]] = [['g', '', str(result.g), ''], ['method', '', result.method.value, '']]
    for name, value in result.parameters.items():
        rows.append([name, '', format_rational(value), ''])
    for j, (element, report) in enumerate(zip(result.product.elements, result.verification)):
        rows.append(['element', j, str(element), report.verdict.value])
    for i, factor in enumerate(result.factors):
        rows.append(['factor', i, str(factor), ''])
    return result.to_dict(), (['Item', 'j', 'Polynomial', 'Verdict'], rows), EXIT_OK


def cmd_constants(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    constants = [certified_constant(tag) for tag in ConstantTag]
    data = {c.defining_equation.value: c.to_dict() for c in constants}
    rows = [[c.defining_equation.value, f"{float(c.value.lo):.15f}", f"{float(c.value.hi):.15f}",
             f"{float(c.residual_bound):.3e}"] for c in constants]
    return data, (['Constant', 'Lower', 'Upper', 'Residual bound'], rows), EXIT_OK


def cmd_fixtures(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    report = run_fixtures(args.file)
    rows = [[o.fixture_id, o.check, o.argument, o.expected, o.computed,
             'ok' if o.passed else 'FAIL', o.provenance] for o in report.outcomes]
    status = EXIT_OK if report.passed else EXIT_MISMATCH
    headers = ['Id', 'Check', 'Argument', 'Expected', 'Computed', 'Status', 'Provenance']
    return report.to_dict(), (headers, rows), status


def cmd_campaign(args: argparse.Namespace) -> Tuple[Dict[str, Any], Table, int]:
    config = CampaignConfig(
        degrees=tuple(args.degrees),
        trials=args.trials,
        seed=args.seed,
        quasi_tolerance=args.tol,
        report_path=args.report,
        workers=args.workers,
        properties=args.property,
    )
    report = run_campaign(config)
    rows = [[r.property_id, r.passed, r.failed, r.skipped, r.boundary_sightings]
            for r in report.results]
    status = EXIT_OK if report.total_failures == 0 else EXIT_MISMATCH
    return report.to_dict(), (['Property', 'Passed', 'Failed', 'Skipped', 'Boundary'], rows), status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    output = common.add_mutually_exclusive_group()
    output.add_argument('--json', dest='output_format', action='store_const', const='json')
    output.add_argument('--markdown', '-m', dest='output_format', action='store_const', const='markdown')
    output.add_argument('--csv', '-c', dest='output_format', action='store_const', const='csv')
    common.add_argument('--tol', type=float, default=QUASI_TOLERANCE)
    common.add_argument('--verbose', '-v', action='store_true')

    parser = argparse.ArgumentParser(
        prog='hurwitz.py',
        description='Hadamard products and Hurwitz stability',
        epilog='Run with --help on a subcommand for its arguments.',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('check', parents=[common], help='stability report for any polynomial')
    p.add_argument('f')
    p.add_argument('--assert-stable', action='store_true', help='exit 1 unless f is stable')
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser('classify', parents=[common], help='report with class memberships')
    p.add_argument('f')
    p.set_defaults(handler=cmd_check)

    for name, handler, text in [('product', cmd_product, 'Hadamard product f∘g'),
                                ('gproduct', cmd_gproduct, 'generalized Hadamard product f•g')]:
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('f')
        p.add_argument('g')
        p.set_defaults(handler=handler)

    p = sub.add_parser('power', parents=[common], help='Hadamard power f^[p]')
    p.add_argument('f')
    p.add_argument('p')
    p.add_argument('--precision', type=int, default=POWER_PRECISION_BITS)
    p.set_defaults(handler=cmd_power)

    p = sub.add_parser('extend', parents=[common], help='stable extension to degree N')
    p.add_argument('f')
    p.add_argument('degree', type=int, metavar='N')
    p.add_argument('epsilon', metavar='eps')
    p.set_defaults(handler=cmd_extend)

    p = sub.add_parser('prepend', parents=[common], help='stable p(s) + s^k f(s)')
    p.add_argument('f')
    p.add_argument('k', type=int)
    p.add_argument('epsilon', metavar='eps')
    p.set_defaults(handler=cmd_prepend)

    p = sub.add_parser('stabilize', parents=[common], help='stabilizer g with f•g stable')
    p.add_argument('f')
    p.add_argument('m', type=int)
    p.add_argument('--factorized', action='store_true',
                   help='use Hadamard powers of the windows (needs max lambda < 1)')
    p.set_defaults(handler=cmd_stabilize)

    p = sub.add_parser('constants', parents=[common], help='certified constants')
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser('fixtures', parents=[common], help='check the fixture suite')
    p.add_argument('--file', default=None, help=f'fixture CSV (default {FIXTURE_FILE})')
    p.set_defaults(handler=cmd_fixtures)

    p = sub.add_parser('campaign', parents=[common], help='random property campaign')
    p.add_argument('--seed', type=int, default=CAMPAIGN_SEED)
    p.add_argument('--trials', type=int, default=CAMPAIGN_TRIALS)
    p.add_argument('--degrees', type=int, nargs=2, default=list(CAMPAIGN_DEGREES), metavar=('LO', 'HI'))
    p.add_argument('--workers', type=int, default=CAMPAIGN_WORKERS)
    p.add_argument('--report', default=None, metavar='PATH')
    p.add_argument('--property', action='append', default=None, metavar='ID')
    p.set_defaults(handler=cmd_campaign)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and print its output."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    logger.debug("subcommand %s", args.command)

    try:
        data, (headers, rows), status = args.handler(args)
    except Mismatch as e:
        print(f"Error: {e}")
        return EXIT_MISMATCH
    except FileNotFoundError as e:
        print(f"Error: {e}")
        print("Please ensure the file exists or pass the polynomial inline.")
        return EXIT_USAGE
    except (HurwitzError, ValueError) as e:
        print(f"Error: {e}")
        return EXIT_USAGE

    if args.output_format == 'json':
        print(to_json(data))
    else:
        print(TableFormatter.render(args.output_format or 'console', headers, rows,
                                    COLUMN_WIDTHS.get(args.command)))
    return status


if __name__ == '__main__':
    sys.exit(main())
