"""Concrete real numbers that can be enclosed to any requested width.

Everything here implements the one-method protocol

    enclose(eps) -> (lo, hi)      with lo <= x <= hi and hi - lo <= eps

for a positive rational eps.  Exactly rational targets answer with a
degenerate interval, which downstream code uses to detect termination.
"""
from fractions import Fraction
from math import isqrt
from typing import Protocol, Tuple

from .intervals import LogInterval, Imprecise


class ApproximableReal(Protocol):
    def enclose(self, eps: Fraction) -> Tuple[Fraction, Fraction]:
        ...


def _ceil_log2(x):
    """Smallest k >= 0 with 2**k >= x, for a positive rational x."""
    x = Fraction(x)
    k = 0
    while (1 << k) < x:
        k += 1
    return k


class RationalReal:
    """An exactly known rational."""

    def __init__(self, x):
        self.value = Fraction(x)
        self.label = str(self.value)

    def enclose(self, eps):
        return self.value, self.value

    def __repr__(self):
        return "RationalReal(%s)" % self.value


class QuadraticReal:
    """(a + b*sqrt(d)) / c with integers a, b, c != 0 and d > 0 not a square."""

    def __init__(self, a, b, d, c=1, label=None):
        a, b, d, c = int(a), int(b), int(d), int(c)
        if c == 0 or d <= 0:
            raise ValueError("need c != 0 and d > 0")
        if isqrt(d) ** 2 == d:
            raise ValueError("d must not be a perfect square")
        if b == 0:
            raise ValueError("b = 0 gives a rational; use RationalReal")
        self.a, self.b, self.d, self.c = a, b, d, c
        self.label = label or "(%d%+d*sqrt(%d))/%d" % (a, b, d, c)

    def enclose(self, eps):
        eps = Fraction(eps)
        k = _ceil_log2(Fraction(abs(self.b), abs(self.c)) / eps) + 1
        s = isqrt(self.d << (2 * k))
        root_lo, root_hi = Fraction(s, 1 << k), Fraction(s + 1, 1 << k)
        ends = [(self.a + self.b * r) / self.c for r in (root_lo, root_hi)]
        return min(ends), max(ends)

    def __repr__(self):
        return "QuadraticReal(%s)" % self.label


class RootReal:
    """The real k-th root of a positive rational n."""

    def __init__(self, n, k, label=None):
        self.n = Fraction(n)
        self.k = int(k)
        if self.n <= 0 or self.k < 2:
            raise ValueError("need n > 0 and k >= 2")
        self.label = label or "%s^(1/%d)" % (self.n, self.k)

    def enclose(self, eps):
        eps = Fraction(eps)
        # x = (num/den)^(1/k) = (num * den^(k-1))^(1/k) / den
        num, den = self.n.numerator, self.n.denominator
        m = num * den ** (self.k - 1)
        j = _ceil_log2(1 / (eps * den)) + 1
        scaled = m << (self.k * j)
        r = _iroot(scaled, self.k)
        lo = Fraction(r, den << j)
        hi = lo if r ** self.k == scaled else Fraction(r + 1, den << j)
        return lo, hi


def _iroot(x, k):
    """floor(x ** (1/k)) for a non-negative integer x."""
    if x < 2:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


class SeriesReal:
    """sum_{n >= start} term(n) with a certified tail bound.

    ``tail(N)`` must bound |sum_{n > N} term(n)| from above.  Terms and
    bounds are rationals.
    """

    def __init__(self, term, tail, start=0, label=None):
        self.term = term
        self.tail = tail
        self.start = start
        self.label = label or "series"
        self._partial = [Fraction(0)]   # _partial[i] = sum of the first i terms

    def _sum_to(self, N):
        while len(self._partial) <= N - self.start + 1:
            i = len(self._partial) - 1
            self._partial.append(self._partial[-1] + Fraction(self.term(self.start + i)))
        return self._partial[N - self.start + 1]

    def enclose(self, eps):
        eps = Fraction(eps)
        N = self.start
        while True:
            t = Fraction(self.tail(N))
            if 2 * t <= eps:
                s = self._sum_to(N)
                return s - t, s + t
            N += 1

    def __repr__(self):
        return "SeriesReal(%s)" % self.label


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def euler_e():
    """e = sum 1/n!, tail after N bounded by 2/(N+1)!."""
    return SeriesReal(lambda n: Fraction(1, _factorial(n)),
                      lambda N: Fraction(2, _factorial(N + 1)), 0, "e")


def lacunary(base, digit, exponent, label=None):
    """sum_{n >= 1} digit * base**(-exponent(n)) for a strictly increasing
    integer-valued exponent; tail after N bounded by digit*base**(1-e(N+1))/(base-1)."""
    base, digit = int(base), int(digit)

    def term(n):
        return Fraction(digit, base ** exponent(n))

    def tail(N):
        return Fraction(digit * base, (base - 1) * base ** exponent(N + 1))
    return SeriesReal(term, tail, 1, label or "lacunary(%d,%d)" % (base, digit))


def liouville_factorial(base=3, digit=2):
    """sum_{n>=1} digit * base**(-n!)."""
    return lacunary(base, digit, _factorial, "sum %d*%d^(-n!)" % (digit, base))


def lacunary_square(base=3, digit=2):
    """sum_{n>=1} digit * base**(-n^2)."""
    return lacunary(base, digit, lambda n: n * n, "sum %d*%d^(-n^2)" % (digit, base))


def _atan_inv(k, eps):
    """Enclosure of atan(1/k) for an integer k >= 2 (alternating series)."""
    s = Fraction(0)
    n = 0
    while True:
        term = Fraction(1, (2 * n + 1) * k ** (2 * n + 1))
        if term <= eps:
            # alternating with decreasing terms: the limit lies between s and s +- term
            return (s, s + term) if n % 2 == 0 else (s - term, s)
        s += term if n % 2 == 0 else -term
        n += 1


class PiReal:
    """pi = 16 atan(1/5) - 4 atan(1/239) (Machin)."""

    label = "pi"

    def enclose(self, eps):
        eps = Fraction(eps)
        a_lo, a_hi = _atan_inv(5, eps / 64)
        b_lo, b_hi = _atan_inv(239, eps / 16)
        return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo


class IntervalReal:
    """An ApproximableReal backed by a LogInterval (e.g. log 2, log2/log3)."""

    def __init__(self, li, label=None):
        self.li = LogInterval.lift(li)
        self.label = label or self.li.label or "interval"

    def enclose(self, eps):
        eps = Fraction(eps)
        bits = 64
        while True:
            try:
                lo, hi = self.li.at(bits)
                if hi - lo <= eps:
                    return lo, hi
            except Imprecise:
                pass
            bits *= 2


class AffineReal:
    """scale * x + shift for an ApproximableReal x and rationals scale != 0, shift."""

    def __init__(self, x, scale=1, shift=0, label=None):
        self.x = x
        self.scale = Fraction(scale)
        self.shift = Fraction(shift)
        if self.scale == 0:
            raise ValueError("scale must be nonzero")
        self.label = label or "%s*(%s)+%s" % (self.scale, getattr(x, "label", "x"), self.shift)

    def enclose(self, eps):
        lo, hi = self.x.enclose(Fraction(eps) / abs(self.scale))
        ends = (self.scale * lo + self.shift, self.scale * hi + self.shift)
        return min(ends), max(ends)


def golden():
    return QuadraticReal(1, 1, 5, 2, label="(1+sqrt5)/2")


def parse_target(text):
    """Parse a target description used by the CLI and the test corpus.

    Forms: ``rational:p/q``, ``sqrt:n``, ``quad:a,b,d,c``, ``golden``, ``e``,
    ``pi``, ``root:n:k``, ``log:n``, ``logratio:a:b``, ``liouville:b:w``
    (sum w b^-n!), ``squares:b:w`` (sum w b^-n^2).
    """
    text = text.strip()
    head, _, rest = text.partition(":")
    args = [a for a in rest.replace(",", ":").split(":") if a] if rest else []
    try:
        if head == "rational":
            return RationalReal(Fraction(rest))
        if head == "sqrt":
            return QuadraticReal(0, 1, int(args[0]), 1, label="sqrt(%s)" % args[0])
        if head == "quad":
            a, b, d, c = (int(v) for v in args)
            return QuadraticReal(a, b, d, c)
        if head == "golden":
            return golden()
        if head == "e":
            return euler_e()
        if head == "pi":
            return PiReal()
        if head == "root":
            return RootReal(int(args[0]), int(args[1]))
        if head == "log":
            return IntervalReal(LogInterval.log(Fraction(args[0])), "log(%s)" % args[0])
        if head == "logratio":
            return IntervalReal(LogInterval.log_ratio(Fraction(args[0]), Fraction(args[1])))
        if head == "liouville":
            return liouville_factorial(int(args[0]), int(args[1]))
        if head == "squares":
            return lacunary_square(int(args[0]), int(args[1]))
    except (IndexError, ValueError, ZeroDivisionError) as exc:
        raise ValueError("bad target %r: %s" % (text, exc))
    raise ValueError("unknown target kind %r" % head)
