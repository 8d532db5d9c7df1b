"""Continued-fraction convergents of enclosed reals.

Partial quotients are extracted from an enclosure [lo, hi] of x by pushing
both endpoints through the Moebius map that sends x to its t-th complete
quotient,

    x_t = (u_{t-2} - v_{t-2} x) / (v_{t-1} x - u_{t-1}),

and accepting a_t = floor(x_t) only when both images have the same floor.
Otherwise the enclosure is refined; if that stops helping we raise
EnclosureExhausted instead of guessing.
"""
from dataclasses import dataclass
from fractions import Fraction

from ..errors import EnclosureExhausted, RationalTargetError


class Convergents(list):
    """List of (u_t, v_t) pairs carrying a ``terminated`` flag."""

    terminated = False


class ContinuedFraction:
    """Append-only continued-fraction expansion of an ApproximableReal."""

    def __init__(self, target, start_bits=64, max_refinements=14):
        self.target = target
        self.partial_quotients = []
        self.convergents = []
        self.terminated = False
        self._bits = start_bits
        self._max_refinements = max_refinements
        self._lo, self._hi = target.enclose(Fraction(1, 1 << start_bits))

    def _refine(self):
        self._bits *= 2
        lo, hi = self.target.enclose(Fraction(1, 1 << self._bits))
        self._lo, self._hi = max(lo, self._lo), min(hi, self._hi)
        if self._lo > self._hi:
            raise AssertionError("target returned inconsistent enclosures")

    def enclosure(self):
        return self._lo, self._hi

    def _previous(self):
        """(u_{t-1}, v_{t-1}, u_{t-2}, v_{t-2}) with the usual seeds
        (u_{-1}, v_{-1}) = (1, 0) and (u_{-2}, v_{-2}) = (0, 1)."""
        c = self.convergents
        seeds = [(0, 1), (1, 0)] + c
        (u1, v1), (u2, v2) = seeds[-1], seeds[-2]
        return u1, v1, u2, v2

    def _complete_quotient(self, u1, v1, u2, v2, x):
        den = v1 * x - u1
        if den == 0:
            return None
        return (u2 - v2 * x) / den

    def _step(self):
        u1, v1, u2, v2 = self._previous()
        for _ in range(self._max_refinements + 1):
            lo, hi = self._lo, self._hi
            if lo == hi:
                X = self._complete_quotient(u1, v1, u2, v2, lo)
                a = X.__floor__()
                self._push(a, u1, v1, u2, v2)
                if X == a:
                    self.terminated = True
                return
            A = self._complete_quotient(u1, v1, u2, v2, lo)
            B = self._complete_quotient(u1, v1, u2, v2, hi)
            if A is not None and B is not None and (v1 * lo - u1) * (v1 * hi - u1) > 0:
                a_lo, a_hi = min(A, B), max(A, B)
                if a_lo.__floor__() == a_hi.__floor__():
                    self._push(a_lo.__floor__(), u1, v1, u2, v2)
                    return
            self._refine()
        raise EnclosureExhausted(
            "cannot decide partial quotient %d of %s" % (len(self.convergents), getattr(self.target, "label", self.target)))

    def _push(self, a, u1, v1, u2, v2):
        if self.partial_quotients and a < 1:
            raise AssertionError("partial quotient below 1")
        self.partial_quotients.append(a)
        self.convergents.append((a * u1 + u2, a * v1 + v2))

    def extend(self, count):
        while len(self.convergents) < count and not self.terminated:
            self._step()
        return self

    def convergent(self, t):
        self.extend(t + 1)
        if t >= len(self.convergents):
            raise IndexError("x is rational with only %d convergents" % len(self.convergents))
        return self.convergents[t]


def convergents(x, count, **kwargs):
    """First `count` convergents (u_t, v_t) of x, as a Convergents list.

    If x is exactly rational with fewer convergents, all of them are
    returned and ``terminated`` is set.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    cf = ContinuedFraction(x, **kwargs).extend(count)
    out = Convergents(cf.convergents[:count])
    out.terminated = cf.terminated and len(cf.convergents) <= count
    return out


@dataclass(frozen=True)
class SandwichWitness:
    t: int
    u: int
    v: int
    v_next: int
    dist_lo: Fraction      # certified lower bound on |x - u/v|
    dist_hi: Fraction      # certified upper bound on |x - u/v|
    holds: bool

    @property
    def lower(self):
        return Fraction(1, 2 * self.v * self.v_next)

    @property
    def upper(self):
        return Fraction(1, self.v * self.v_next)


def convergent_sandwich_check(x, t, cf=None, max_refinements=14):
    """Certify 1/(2 v_t v_{t+1}) <= |x - u_t/v_t| <= 1/(v_t v_{t+1}).

    Returns a SandwichWitness whose [dist_lo, dist_hi] enclosure of the
    distance proves both inequalities.  Raises RationalTargetError if x is
    exactly u_t/v_t.
    """
    cf = cf or ContinuedFraction(x)
    cf.extend(t + 2)
    if len(cf.convergents) <= t:
        raise IndexError("x is rational with only %d convergents" % len(cf.convergents))
    u, v = cf.convergents[t]
    if len(cf.convergents) == t + 1:
        raise RationalTargetError("x equals its convergent %d/%d" % (u, v))
    v_next = cf.convergents[t + 1][1]
    c = Fraction(u, v)
    lower, upper = Fraction(1, 2 * v * v_next), Fraction(1, v * v_next)
    for _ in range(max_refinements + 1):
        lo, hi = cf.enclosure()
        if lo <= c <= hi:
            d_lo = Fraction(0)
        else:
            d_lo = min(abs(lo - c), abs(hi - c))
        d_hi = max(abs(lo - c), abs(hi - c))
        if lower <= d_lo and d_hi <= upper:
            return SandwichWitness(t, u, v, v_next, d_lo, d_hi, True)
        if d_hi < lower or d_lo > upper:
            return SandwichWitness(t, u, v, v_next, d_lo, d_hi, False)
        cf._refine()
    raise EnclosureExhausted("sandwich at t=%d not decided" % t)
