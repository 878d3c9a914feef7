#!/usr/bin/env python3
"""
Configuration constants for the Hadamard stability toolkit.

This module centralizes all numeric tolerances, precisions, search budgets
and campaign defaults used across the library, the fixture runner and the CLI.
"""

from fractions import Fraction

# Hadamard powers with non-integer exponents
POWER_PRECISION_BITS = 128              # Mantissa bits for a_i^p before re-embedding as rationals

# Numeric root oracle
ORACLE_PRECISION_BITS = 96              # Working precision for polyroots
ORACLE_MAX_STEPS = 600                  # Durand-Kerner iteration budget
ORACLE_RETRIES = 2                      # Extra attempts after a budget runs out
ORACLE_BUDGET_GROWTH = 4                # Step budget multiplier per retry
QUASI_TOLERANCE = 1e-9                  # |Re z| <= tol counts as a boundary root
ORACLE_STABLE_MARGIN = 1e-9             # Oracle says stable iff max Re z < -margin

# Certified constants
ENCLOSURE_WIDTH = Fraction(1, 10 ** 12)
ENCLOSURE_REFINEMENTS = [Fraction(1, 10 ** 20), Fraction(1, 10 ** 30)]
CONSTANT_BRACKET = (Fraction(0), Fraction(1))
LOG_PRECISION_BITS = 256                # Precision for p* logarithms
LOG_PADDING = Fraction(1, 2 ** 200)     # Outward padding of p* enclosures

# Constructive procedures
HALVING_BUDGET = 256                    # extend_one gives up after this many halvings
DEFAULT_LAMBDA_SEEDS = (Fraction(1), Fraction(1), Fraction(1))
STABILIZE_MARGIN = Fraction(1, 2)       # stabilize uses this share of the admissible epsilon

# Campaign defaults
CAMPAIGN_DEGREES = (1, 10)
CAMPAIGN_DEGREE_LIMITS = (1, 12)
CAMPAIGN_TRIALS = 200
CAMPAIGN_SEED = 20240601
CAMPAIGN_WORKERS = 1

# Random stable sampler (grid steps keep coefficients small rationals)
SAMPLER_ROOT_GRID = [Fraction(k, 4) for k in range(1, 17)]         # r in (0, 4]
SAMPLER_DAMPING_GRID = [Fraction(k, 10) for k in range(1, 21)]     # zeta in (0, 2]
SAMPLER_FREQUENCY_GRID = [Fraction(k, 4) for k in range(1, 17)]    # omega in (0, 4]
SAMPLER_LAMBDA_STEPS = 100              # lambda values drawn from multiples of upper/steps

# Lambda upper bounds for the class samplers
LAMBDA_UPPER_W = Fraction(95, 100)
LAMBDA_UPPER_W_ALPHA = Fraction(46, 100)   # strictly below alpha* ~ 0.46557
LAMBDA_UPPER_W_BETA = Fraction(68, 100)    # strictly below beta* ~ 0.68233
LAMBDA_UPPER_ANY = Fraction(5)

# Fixture suite
FIXTURE_FILE = 'fixtures/worked_examples.csv'
PROVENANCE_TAGS = ['[WORKED]', '[TRIVIAL]', '[DERIVED]']

# Fixture CSV field names
FIELD_FIXTURE_ID = 'fixture_id'
FIELD_CHECK = 'check'
FIELD_POLYNOMIAL = 'polynomial'
FIELD_ARGUMENT = 'argument'
FIELD_EXPECTED = 'expected'
FIELD_PROVENANCE = 'provenance'

# Column widths for console output
CONSOLE_ID_COLUMN_WIDTH = 6
CONSOLE_CHECK_COLUMN_WIDTH = 22
CONSOLE_VALUE_COLUMN_WIDTH = 40
CONSOLE_STATUS_COLUMN_WIDTH = 6

# Exit codes
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
