"""Certified rational enclosures of reals built from +, *, /, log and exp.

A :class:`LogInterval` wraps a *producer*: a function ``bits -> (lo, hi)``
returning rationals with ``lo <= value <= hi``.  Larger ``bits`` must give
(weakly) tighter enclosures that converge to the value.  Comparisons are
decided by asking for more bits until the enclosures separate.

Only the elementary functions needed downstream are provided:

* ``ln`` by the atanh series ln y = 2 atanh((y-1)/(y+1)) after scaling y by
  a power of two, with the geometric tail bound;
* ``exp`` by reduction modulo ln 2 and a Taylor polynomial with the usual
  remainder bound.

Every intermediate is rounded *outward* to a fixed number of significant
bits so that numerators and denominators stay small.  No binary floats are
used anywhere in this module.
"""
from fractions import Fraction

from ..errors import Undecided

DEFAULT_BITS = 64
MAX_BITS = 1 << 13

_ONE = Fraction(1)
_ZERO = Fraction(0)


class Imprecise(Exception):
    """Raised by a producer that cannot answer at the requested precision
    (for instance a divisor interval that still contains zero)."""


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _short(x):
    """str(x) for labels, abbreviated for huge rationals."""
    if max(x.numerator.bit_length(), x.denominator.bit_length()) > 256:
        return "<%d-bit rational>" % max(x.numerator.bit_length(), x.denominator.bit_length())
    return str(x)


def round_down(x, bits):
    """Largest number with `bits` significant bits that is <= x."""
    n, d = x.numerator, x.denominator
    if n == 0:
        return x
    if d & (d - 1) == 0 and abs(n).bit_length() <= bits:
        return x
    shift = bits - (abs(n).bit_length() - d.bit_length())
    if shift >= 0:
        return Fraction((n << shift) // d, 1 << shift)
    return Fraction((n // (d << -shift)) << -shift)


def round_up(x, bits):
    return -round_down(-x, bits)


# ---------------------------------------------------------------------------
# elementary functions on exact rationals


def _atanh_pos(z, bits):
    """Enclosure of atanh(z) for a rational 0 <= z <= 1/2.

    The series sum z^(2k+1)/(2k+1) is summed in integer fixed point with
    scale 2^P, once rounding every operation down and once up.
    """
    if z == 0:
        return _ZERO, _ZERO
    z = _as_fraction(z)
    a, c = z.numerator, z.denominator
    P = bits + 32
    t_lo = (a << P) // c
    t_hi = -((-a << P) // c)
    fixed = max(a.bit_length(), c.bit_length()) > 64
    if fixed:
        # long rational: z^2 in fixed point, rounded outward, and shifts
        a2_lo, a2_hi = t_lo * t_lo >> P, -(-(t_hi * t_hi) >> P)
    else:
        a2_lo = a2_hi = a * a
        c2 = c * c
    s_lo = s_hi = 0
    k = 0
    while True:
        s_lo += t_lo // (2 * k + 1)
        s_hi += -(-t_hi // (2 * k + 1))
        if fixed:
            t_lo = t_lo * a2_lo >> P
            t_hi = -(-(t_hi * a2_hi) >> P)
        else:
            t_lo = t_lo * a2_lo // c2
            t_hi = -(-t_hi * a2_hi // c2)
        k += 1
        # remainder after k terms <= t_hi / ((2k+1)(1 - z^2)) <= 2 t_hi / (2k+1)
        tail = -(-2 * t_hi // (2 * k + 1))
        if tail == 0 or (tail << (bits + 4)) <= s_lo:
            break
    return Fraction(s_lo, 1 << P), Fraction(s_hi + tail, 1 << P)


def _atanh(z, bits):
    if z >= 0:
        return _atanh_pos(z, bits)
    lo, hi = _atanh_pos(-z, bits)
    return -hi, -lo


_LN2 = {}


def ln2_bounds(bits):
    """Enclosure of ln 2 = 2 atanh(1/3)."""
    got = _LN2.get(bits)
    if got is None:
        lo, hi = _atanh_pos(Fraction(1, 3), bits)
        got = (2 * lo, 2 * hi)
        _LN2[bits] = got
    return got


_LN_CACHE = {}


def ln_bounds(x, bits=DEFAULT_BITS):
    """Enclosure (lo, hi) of ln x for a rational x > 0, relative width ~2^-bits.

    Results are cached per x; a request at lower precision is answered from
    a more precise cached enclosure."""
    x = _as_fraction(x)
    if x <= 0:
        raise ValueError("logarithm of a non-positive number")
    if x == 1:
        return _ZERO, _ZERO
    got = _LN_CACHE.get(x)
    if got is not None and got[0] >= bits:
        return round_down(got[1], bits + 8), round_up(got[2], bits + 8)
    lo, hi = _ln_bounds(x, bits)
    if len(_LN_CACHE) > 256:
        _LN_CACHE.clear()
    _LN_CACHE[x] = (bits, lo, hi)
    return lo, hi


def _ln_bounds(x, bits):
    n, d = x.numerator, x.denominator
    k = n.bit_length() - d.bit_length()
    y = x / (Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k))
    if y > Fraction(4, 3):
        k += 1
        y /= 2
    elif y < Fraction(2, 3):
        k -= 1
        y *= 2
    p = bits + 16 + abs(k).bit_length()
    y_lo, y_hi = round_down(y, p), round_up(y, p)
    z_lo, z_hi = (y_lo - 1) / (y_lo + 1), (y_hi - 1) / (y_hi + 1)
    lo, hi = _atanh(z_lo, p)
    if z_hi != z_lo:
        # atanh' = 1/(1 - z^2) <= 2 on |z| <= 1/2, so atanh(z_hi) <= atanh(z_lo)_hi + 2 (z_hi - z_lo)
        hi = round_up(hi + 2 * (z_hi - z_lo), p)
    lo, hi = 2 * lo, 2 * hi
    if k:
        l_lo, l_hi = ln2_bounds(p)
        if k > 0:
            lo, hi = lo + k * l_lo, hi + k * l_hi
        else:
            lo, hi = lo + k * l_hi, hi + k * l_lo
    return round_down(lo, bits + 8), round_up(hi, bits + 8)


def _exp_pos(r, bits):
    """Enclosure of exp(r) for a rational 0 <= r <= 1/2 (integer fixed point)."""
    if r == 0:
        return _ONE, _ONE
    r = _as_fraction(r)
    a, c = r.numerator, r.denominator
    P = bits + 32
    one = 1 << P
    t_lo = t_hi = one
    s_lo = s_hi = one
    i = 0
    while True:
        i += 1
        t_lo = t_lo * a // (c * i)
        t_hi = -(-t_hi * a // (c * i))
        s_lo += t_lo
        s_hi += t_hi
        # remainder <= r^(i+1)/(i+1)! * e^r <= 2 t_i r / (i+1)
        tail = -(-2 * t_hi * a // (c * (i + 1)))
        if (tail << (bits + 4)) <= one:
            break
    return Fraction(s_lo, one), Fraction(s_hi + tail, one)


def _exp_small(r, bits):
    if r >= 0:
        return _exp_pos(r, bits)
    lo, hi = _exp_pos(-r, bits)
    return round_down(1 / hi, bits + 16), round_up(1 / lo, bits + 16)


def exp_bounds(y, bits=DEFAULT_BITS):
    """Enclosure of exp(y) for a rational y, relative width ~2^-bits."""
    y = _as_fraction(y)
    if y == 0:
        return _ONE, _ONE
    mag = abs(y.numerator // y.denominator).bit_length()
    p = bits + 16 + mag
    l_lo, l_hi = ln2_bounds(p)
    k = (2 * y / (l_lo + l_hi) + Fraction(1, 2)).__floor__()
    if k >= 0:
        r_lo, r_hi = y - k * l_hi, y - k * l_lo
    else:
        r_lo, r_hi = y - k * l_lo, y - k * l_hi
    lo = _exp_small(round_down(r_lo, p), p)[0]
    hi = _exp_small(round_up(r_hi, p), p)[1]
    scale = Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)
    return round_down(lo, bits + 8) * scale, round_up(hi, bits + 8) * scale


# ---------------------------------------------------------------------------
# LogInterval


class LogInterval:
    """A real number known through certified rational enclosures.

    ``lo`` and ``hi`` give the enclosure at the current working precision
    ``bits``; :meth:`refine` returns the same number at a higher precision.
    ``ratio`` optionally records that the value is exactly log(A)/log(B)
    for rationals A, B, which lets :func:`decide_power_bound` settle exact
    equalities such as 3**(log 2/log 3) == 2.
    """

    __slots__ = ("_producer", "_cache", "bits", "ratio", "label")

    def __init__(self, producer, bits=DEFAULT_BITS, ratio=None, label=None):
        self._producer = producer
        self._cache = {}
        self.bits = bits
        self.ratio = ratio
        self.label = label

    # -- construction -------------------------------------------------------
    @classmethod
    def exact(cls, x):
        x = _as_fraction(x)
        return cls(lambda bits: (x, x), label=_short(x))

    @classmethod
    def lift(cls, x):
        if isinstance(x, LogInterval):
            return x
        return cls.exact(x)

    @classmethod
    def log(cls, x):
        """Natural logarithm of a positive rational or LogInterval."""
        if isinstance(x, LogInterval):
            return x.ln()
        x = _as_fraction(x)
        if x <= 0:
            raise ValueError("logarithm of a non-positive number")
        if x == 1:
            return cls.exact(0)
        return cls(lambda bits: ln_bounds(x, bits), label="log(%s)" % _short(x))

    @classmethod
    def log_ratio(cls, a, b):
        """log(a)/log(b) for rationals a, b > 0 with b != 1."""
        a, b = _as_fraction(a), _as_fraction(b)
        if b == 1 or a <= 0 or b <= 0:
            raise ValueError("log ratio needs a > 0, b > 0, b != 1")
        if a == 1:
            out = cls.exact(0)
            out.ratio = (a, b)
            return out
        out = cls.log(a) / cls.log(b)
        out.ratio = (a, b)
        out.label = "log(%s)/log(%s)" % (_short(a), _short(b))
        return out

    @classmethod
    def from_real(cls, x):
        """Wrap an ApproximableReal (anything with ``enclose(eps)``)."""
        def producer(bits):
            lo, hi = x.enclose(Fraction(1, 1 << bits))
            return _as_fraction(lo), _as_fraction(hi)
        return cls(producer, label=getattr(x, "label", None))

    # -- evaluation ---------------------------------------------------------
    def at(self, bits):
        got = self._cache.get(bits)
        if got is None:
            got = self._producer(bits)
            if got[0] > got[1]:
                raise AssertionError("producer returned an inverted interval")
            self._cache[bits] = got
        return got

    def _settled(self):
        """Enclosure at the working precision, raising the precision as
        needed until the producer can answer."""
        bits = self.bits
        while True:
            try:
                return self.at(bits)
            except Imprecise:
                bits *= 2
                if bits > MAX_BITS:
                    raise Undecided("enclosure could not be evaluated")

    @property
    def lo(self):
        return self._settled()[0]

    @property
    def hi(self):
        return self._settled()[1]

    @property
    def width(self):
        lo, hi = self._settled()
        return hi - lo

    def is_exact(self):
        lo, hi = self._settled()
        return lo == hi

    def refine(self, width=None, bits=None, max_bits=None):
        """A copy at higher precision: either at `bits`, or the first
        doubling of the precision at which the width is <= `width`."""
        max_bits = max_bits or MAX_BITS
        out = LogInterval(self._producer, self.bits, self.ratio, self.label)
        out._cache = self._cache
        if bits is not None:
            out.bits = max(bits, self.bits)
        if width is not None:
            width = _as_fraction(width)
            while True:
                try:
                    lo, hi = out.at(out.bits)
                    if hi - lo <= width:
                        break
                except Imprecise:
                    pass
                out.bits *= 2
                if out.bits > max_bits:
                    raise Undecided("cannot reach width %s" % width)
        return out

    def midpoint(self):
        lo, hi = self._settled()
        return (lo + hi) / 2

    def display(self, digits=12):
        """Decimal rendering of the midpoint.  Display only."""
        return fraction_to_decimal(self.midpoint(), digits)

    def __repr__(self):
        lo, hi = self._settled()
        return "LogInterval[%s, %s]" % (fraction_to_decimal(lo, 10), fraction_to_decimal(hi, 10))

    # -- arithmetic ---------------------------------------------------------
    def _binary(self, other, fn):
        other = LogInterval.lift(other)
        a, b = self, other

        def producer(bits):
            (alo, ahi), (blo, bhi) = a.at(bits), b.at(bits)
            lo, hi = fn(alo, ahi, blo, bhi)
            if alo == ahi and blo == bhi:
                return lo, hi
            return round_down(lo, bits + 8), round_up(hi, bits + 8)
        return LogInterval(producer, max(a.bits, b.bits))

    def __add__(self, other):
        return self._binary(other, lambda al, ah, bl, bh: (al + bl, ah + bh))

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda al, ah, bl, bh: (al - bh, ah - bl))

    def __rsub__(self, other):
        return LogInterval.lift(other) - self

    def __mul__(self, other):
        def mul(al, ah, bl, bh):
            c = (al * bl, al * bh, ah * bl, ah * bh)
            return min(c), max(c)
        return self._binary(other, mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        def div(al, ah, bl, bh):
            if bl <= 0 <= bh:
                raise Imprecise("divisor interval contains zero")
            c = (al / bl, al / bh, ah / bl, ah / bh)
            return min(c), max(c)
        return self._binary(other, div)

    def __rtruediv__(self, other):
        return LogInterval.lift(other) / self

    def __neg__(self):
        a = self
        return LogInterval(lambda bits: tuple(-v for v in reversed(a.at(bits))), a.bits)

    def ln(self):
        a = self

        def producer(bits):
            lo, hi = a.at(bits)
            if lo <= 0:
                raise Imprecise("logarithm argument not yet positive")
            if lo == hi == 1:
                return _ZERO, _ZERO
            return ln_bounds(lo, bits)[0], ln_bounds(hi, bits)[1]
        return LogInterval(producer, a.bits)

    def exp(self):
        a = self

        def producer(bits):
            lo, hi = a.at(bits)
            if lo == hi == 0:
                return _ONE, _ONE
            return exp_bounds(lo, bits)[0], exp_bounds(hi, bits)[1]
        return LogInterval(producer, a.bits)

    def __pow__(self, y):
        """x**y = exp(y ln x) for x > 0."""
        return (LogInterval.lift(y) * self.ln()).exp()

    def __rpow__(self, base):
        return LogInterval.lift(base) ** self


def lmax(*xs):
    xs = [LogInterval.lift(x) for x in xs]

    def producer(bits):
        pairs = [x.at(bits) for x in xs]
        return max(p[0] for p in pairs), max(p[1] for p in pairs)
    return LogInterval(producer, max(x.bits for x in xs))


def lmin(*xs):
    xs = [LogInterval.lift(x) for x in xs]

    def producer(bits):
        pairs = [x.at(bits) for x in xs]
        return min(p[0] for p in pairs), min(p[1] for p in pairs)
    return LogInterval(producer, max(x.bits for x in xs))


def compare(a, b, max_bits=None):
    """Certified sign of a - b: -1, 0 or 1.

    0 is returned only when both enclosures collapse to the same rational.
    Raises Undecided if the enclosures still overlap at `max_bits`.
    """
    a, b = LogInterval.lift(a), LogInterval.lift(b)
    max_bits = max_bits or MAX_BITS
    bits = max(a.bits, b.bits)
    while True:
        try:
            alo, ahi = a.at(bits)
            blo, bhi = b.at(bits)
        except Imprecise:
            pass
        else:
            if ahi < blo:
                return -1
            if alo > bhi:
                return 1
            if alo == ahi == blo == bhi:
                return 0
        bits *= 2
        if bits > max_bits:
            raise Undecided("comparison undecided at %d bits" % max_bits)


def less(a, b, max_bits=None):
    return compare(a, b, max_bits) < 0


def less_equal(a, b, max_bits=None):
    return compare(a, b, max_bits) <= 0


# ---------------------------------------------------------------------------


def rational_log(q, base):
    """Return k >= 0 with q == base**k, or None if there is no such integer."""
    q, base = _as_fraction(q), _as_fraction(base)
    if q <= 0 or base <= 0 or base == 1:
        return None
    if q == 1:
        return 0
    k = 0
    x = q
    if (base > 1) != (q > 1):
        return None
    while (x > 1 if base > 1 else x < 1):
        x /= base
        k += 1
    return k if x == 1 else None


def decide_power_bound(q, b, Q, delta, max_bits=None):
    """Decide q <= b ** (Q ** delta), i.e. ln q <= Q**delta * ln b.

    When ``delta`` is tagged as log(A)/log(B) and Q is an integral power
    B**k, then Q**delta = A**k exactly and the test is done in integers, which
    also settles the case of exact equality.
    """
    q, b, Q = int(q), int(b), _as_fraction(Q)
    if q < 1 or b < 2 or Q < 1:
        raise ValueError("need q >= 1, b >= 2, Q >= 1")
    if q == 1:
        return True
    delta = LogInterval.lift(delta)
    if delta.ratio is not None:
        A, B = delta.ratio
        k = rational_log(Q, B)
        if k is not None:
            E = A ** k
            return _int_le_power(q, b, E)
    rhs = (LogInterval.lift(Q) ** delta) * LogInterval.log(b)
    return compare(LogInterval.log(q), rhs, max_bits) <= 0


def _int_le_power(q, b, E):
    """q <= b**E for a rational exponent E >= 0, exactly."""
    E = _as_fraction(E)
    if E < 0:
        return False
    num, den = E.numerator, E.denominator
    # q**den <= b**num; compare bit lengths first to avoid huge powers
    lhs_bits = den * (q.bit_length() - 1)
    rhs_bits = num * b.bit_length()
    if lhs_bits > rhs_bits:
        return False
    if den * q.bit_length() <= num * (b.bit_length() - 1):
        return True
    return q ** den <= b ** num


def fraction_to_decimal(x, digits=12):
    """Rounded decimal string of a rational, for display only."""
    x = _as_fraction(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    n, d = x.numerator, x.denominator
    # scientific notation when far from 1
    e = n.bit_length() - d.bit_length()
    if -30 < e < 60:
        scaled = round(x * 10 ** digits)
        s = str(scaled).rjust(digits + 1, "0")
        head, tail = s[:-digits], s[-digits:].rstrip("0")
        return sign + head + ("." + tail if tail else "")
    # e10 estimate via the bit length, then correct
    k = (e * 30103) // 100000
    while True:
        m = x / Fraction(10) ** k
        if m >= 10:
            k += 1
        elif m < 1:
            k -= 1
        else:
            break
    mant = fraction_to_decimal(m, digits)
    return "%s%se%d" % (sign, mant, k)
