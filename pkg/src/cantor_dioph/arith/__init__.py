"""Exact arithmetic: interval enclosures of logarithms, enclosable reals,
continued fractions, number theory and small-matrix linear algebra."""
from .intervals import LogInterval, compare, decide_power_bound, lmax, lmin
from .reals import ApproximableReal, RationalReal, QuadraticReal, parse_target
from .contfrac import ContinuedFraction, convergents, convergent_sandwich_check
from .numtheory import mult_order, factorize, is_prime, is_safe_prime

__all__ = [
    "LogInterval", "compare", "decide_power_bound", "lmax", "lmin",
    "ApproximableReal", "RationalReal", "QuadraticReal", "parse_target",
    "ContinuedFraction", "convergents", "convergent_sandwich_check",
    "mult_order", "factorize", "is_prime", "is_safe_prime",
]
