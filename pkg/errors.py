#!/usr/bin/env python3
"""
Exception hierarchy for the Hadamard stability toolkit.

Every error is a ValueError so callers (and the CLI) can catch bad input
the same way they catch parse failures.
"""


class HurwitzError(ValueError):
    """Base class for all toolkit errors."""


# Polynomial construction and coefficient algebra
class EmptyCoefficients(HurwitzError):
    pass


class ZeroLeadingCoefficient(HurwitzError):
    pass


class DegreeOrder(HurwitzError):
    """deg g exceeds deg f."""


class BadWindowDegree(HurwitzError):
    pass


class NonPositiveExponent(HurwitzError):
    pass


class DegreeTooSmall(HurwitzError):
    pass


class DegreeOverlap(HurwitzError):
    pass


# Stability machinery
class DegreeZero(HurwitzError):
    pass


class NoConvergence(HurwitzError):
    pass


class NotPositive(HurwitzError):
    pass


class EnclosureTooWide(HurwitzError):
    pass


# Constructive procedures
class NotStableInput(HurwitzError):
    pass


class SearchBudgetExhausted(HurwitzError):
    pass


class BadDegree(HurwitzError):
    pass


class NonPositiveSeed(HurwitzError):
    pass


class BadEpsilon(HurwitzError):
    pass


class NotInW(HurwitzError):
    """max lambda_i(f) >= 1."""


class VerificationFailed(HurwitzError):
    """A construction the theory guarantees did not verify; indicates a bug."""


# Harness
class FixtureParse(HurwitzError):
    pass


class Mismatch(HurwitzError):
    pass


class InvalidConfig(HurwitzError):
    pass
