"""Missing-digit Cantor sets C_{b,W} = {sum c_i b^{-i-1} : c_i in W}.

Membership, nearest points and digit statistics are all decided on exact
base-b expansions.  Digit positions are 0-based: c_0 is the first digit
after the radix point.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple

from . import kernels
from .arith.intervals import LogInterval
from .arith.numtheory import expansion_lengths, is_safe_prime, small_primes
from .errors import MemberInput, NonPrimitivePeriod, NotADivisor, UsageError

_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def word_to_text(word, base):
    if base <= 36:
        return "".join(_ALPHABET[c] for c in word)
    return ",".join(str(c) for c in word)


def text_to_word(text, base):
    text = text.strip()
    if base > 36 or "," in text:
        return tuple(int(t) for t in text.split(",") if t)
    return tuple(_ALPHABET.index(ch) for ch in text.lower())


class MissingDigitSet:
    def __init__(self, b, W):
        b = int(b)
        W = tuple(sorted(set(int(w) for w in W)))
        if b < 3:
            raise UsageError("base must be at least 3")
        if len(W) < 2 or len(W) > b - 1 or W[0] < 0 or W[-1] > b - 1:
            raise UsageError("W must have between 2 and b-1 digits from 0..b-1")
        self.b = b
        self.W = W
        self.Wset = frozenset(W)
        self.J = len(W)
        self.min_point = Fraction(W[0], b - 1)
        self.max_point = Fraction(W[-1], b - 1)
        self.diam = self.max_point - self.min_point
        self.Delta = LogInterval.log_ratio(len(W), b)
        self._ifs = None

    @classmethod
    def from_ifs(cls, ifs):
        if ifs.digit_spec is None:
            raise UsageError("IFS is not a missing-digit set")
        return cls(*ifs.digit_spec)

    @property
    def ifs(self):
        if self._ifs is None:
            from .ifs import RationalIFS
            self._ifs = RationalIFS.missing_digit(self.b, self.W)
        return self._ifs

    def map_index(self, digit):
        """1-based IFS map index of a digit."""
        return self.W.index(digit) + 1

    def digit(self, j):
        return self.W[j - 1]

    def to_text(self):
        return "missing-digit b=%d W=%s" % (self.b, ",".join(map(str, self.W)))

    def __repr__(self):
        return "MissingDigitSet(b=%d, W=%s)" % (self.b, self.W)

    def __eq__(self, other):
        return isinstance(other, MissingDigitSet) and (self.b, self.W) == (other.b, other.W)

    def __hash__(self):
        return hash((self.b, self.W))


def middle_third():
    return MissingDigitSet(3, (0, 2))


# ---------------------------------------------------------------------------
# expansions


@dataclass(frozen=True)
class BaseExpansion:
    value: Fraction
    base: int
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]

    @property
    def lengths(self):
        return len(self.preperiod), len(self.period)

    def digit(self, i):
        k = len(self.preperiod)
        return self.preperiod[i] if i < k else self.period[(i - k) % len(self.period)]

    def to_rational(self):
        """p/q with p = sum_{i<N} c_i b^{N-1-i} - sum_{j<k} c_j b^{k-1-j}, q = b^N - b^k."""
        return digits_to_rational(self.preperiod, self.period, self.base)

    def to_text(self):
        return "0.%s(%s)" % (word_to_text(self.preperiod, self.base), word_to_text(self.period, self.base))


def digits_to_rational(preperiod, period, base):
    k = len(preperiod)
    N = k + len(period)
    c = tuple(preperiod) + tuple(period)
    p = sum(ci * base ** (N - 1 - i) for i, ci in enumerate(c))
    p -= sum(cj * base ** (k - 1 - j) for j, cj in enumerate(preperiod))
    return Fraction(p, base ** N - base ** k)


def expand(x, base):
    """Canonical base-`base` expansion of a rational 0 <= x < 1.

    The preperiod length is the least v with C1 | base^v and the period
    length is the order of base modulo C2 (q = C1 C2 in lowest terms, C1
    built from primes of base); the digits come from long division and are
    checked against these lengths.
    """
    x = Fraction(x)
    base = int(base)
    if not 0 <= x < 1:
        raise UsageError("expand needs 0 <= x < 1")
    if base < 2:
        raise UsageError("base must be >= 2")
    p, q = x.numerator, x.denominator
    v, L = expansion_lengths(p, q, base)
    digits = []
    r = p
    rems = []
    for _ in range(v + L):
        rems.append(r)
        t = r * base
        digits.append(t // q)
        r = t % q
    # after v + L digits the remainder must be back at the start of the period
    assert r == rems[v], "expansion lengths disagree with long division"
    if v > 0:
        assert rems[v - 1] != rems[v - 1 + L], "preperiod not minimal"
    return BaseExpansion(x, base, tuple(digits[:v]), tuple(digits[v:]))


# ---------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class Membership:
    member: bool
    witness: Optional[BaseExpansion] = None   # an all-in-W expansion (digits may end in (b-1)s)
    offending: Tuple[Optional[int], Optional[int]] = (None, None)   # canonical, dual
    reason: str = ""

    def __bool__(self):
        return self.member


def _first_bad(expansion, Wset):
    n = len(expansion.preperiod) + len(expansion.period)
    for i in range(n):
        if expansion.digit(i) not in Wset:
            return i
    return None


def dual_expansion(x, base):
    """The representation ending in (b-1)s of a terminating 0 < x <= 1, else None."""
    x = Fraction(x)
    if x == 1:
        return BaseExpansion(x, base, (), (base - 1,))
    if x <= 0 or x > 1:
        return None
    e = expand(x, base)
    if e.period != (0,):
        return None
    pre = list(e.preperiod)
    if not pre:
        return None
    pre[-1] -= 1
    return BaseExpansion(x, base, tuple(pre), (base - 1,))


def _terminates(x, b):
    """True iff x has a finite base-b expansion."""
    q = x.denominator
    g = gcd(q, b)
    while g > 1:
        while q % g == 0:
            q //= g
        g = gcd(q, b)
    return q == 1


def _streaming_first_bad(x, b, Wset):
    """Index of the first digit of 0 <= x < 1 outside Wset, or None once the
    remainder sequence cycles with every digit inside Wset."""
    p, q = x.numerator, x.denominator
    seen = set()
    i = 0
    while p not in seen:
        seen.add(p)
        p *= b
        if p // q not in Wset:
            return i
        p %= q
        i += 1
    return None


def is_member(S, x):
    """Decide x in C_{b,W}, looking at both expansions of terminating x."""
    x = Fraction(x)
    if x < S.min_point or x > S.max_point:
        return Membership(False, reason="outside [min, max]")
    if x < 1 and not _terminates(x, S.b):
        # no dual representation: stream digits until a bad one or a repeat
        bad = _streaming_first_bad(x, S.b, S.Wset)
        if bad is not None:
            return Membership(False, offending=(bad, None), reason="no all-in-W expansion")
        return Membership(True, expand(x, S.b))
    canon = expand(x, S.b) if x < 1 else None
    bad_c = _first_bad(canon, S.Wset) if canon is not None else None
    if canon is not None and bad_c is None:
        return Membership(True, canon)
    dual = dual_expansion(x, S.b)
    bad_d = _first_bad(dual, S.Wset) if dual is not None else None
    if dual is not None and bad_d is None:
        return Membership(True, dual)
    return Membership(False, offending=(bad_c, bad_d), reason="no all-in-W expansion")


def first_bad_digit(S, x, literal=False):
    """Least index i with canonical digit c_i outside W (None if there is none).

    By default the answer is None whenever x belongs to the set through its
    dual representation; ``literal=True`` reports the canonical index anyway.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise UsageError("first_bad_digit needs 0 <= x < 1")
    idx = _first_bad(expand(x, S.b), S.Wset)
    if idx is None or literal:
        return idx
    return None if is_member(S, x).member else idx


def _tail_point(prefix, digit, tail, b):
    """Value of 0.prefix digit tail tail tail ... in base b."""
    n = len(prefix) + 1
    head = 0
    for c in prefix:
        head = head * b + c
    head = head * b + digit
    return (head + Fraction(tail, b - 1)) / Fraction(b) ** n


def gap_neighbours(S, x):
    """(lower, upper): the largest point of C below x and the smallest above,
    for x in [min, max] not in C."""
    e = expand(x, S.b) if x < 1 else None
    if e is None:
        raise UsageError("x = 1 is either a member or above max")
    lo_best = hi_best = None
    i = 0
    prefix = []
    while True:
        c = e.digit(i)
        below = [w for w in S.W if w < c]
        above = [w for w in S.W if w > c]
        if below:
            lo_best = _tail_point(prefix, below[-1], S.W[-1], S.b)
        if above:
            hi_best = _tail_point(prefix, above[0], S.W[0], S.b)
        if c not in S.Wset:
            break
        prefix.append(c)
        i += 1
    return lo_best, hi_best


def nearest_point(S, x):
    """(point, distance) with point in C closest to x; ties go to the smaller point."""
    x = Fraction(x)
    if x <= S.min_point:
        return S.min_point, S.min_point - x
    if x >= S.max_point:
        return S.max_point, x - S.max_point
    if is_member(S, x).member:
        return x, Fraction(0)
    lo, hi = gap_neighbours(S, x)
    if lo is None or (hi is not None and hi - x < x - lo):
        return hi, hi - x
    return lo, x - lo


def distance(S, x):
    return nearest_point(S, x)[1]


def digit_selector(ifs):
    """Branch selector for missing-digit IFSs: the leading digit, falling back
    to the dual representation when x = 0.d000... and 0.(d-1)(b-1)(b-1)..."""
    b, W = ifs.digit_spec
    lo, hi = Fraction(W[0], b - 1), Fraction(W[-1], b - 1)
    index = {w: j for j, w in enumerate(W, 1)}

    def select(_ifs, x):
        x = x[0]
        t = b * x
        f = t.numerator // t.denominator
        for w in (f, f - 1):
            if w in index and lo <= t - w <= hi:
                return index[w]
        return None
    return select


# ---------------------------------------------------------------------------
# digit statistics


def pthm_ratio(S, x):
    """phi(x) / q0^Delta for a rational 0 <= x < 1 outside C."""
    x = Fraction(x)
    if is_member(S, x).member:
        raise MemberInput("%s lies in the set" % x)
    phi = first_bad_digit(S, x)
    if phi is None:
        raise AssertionError("non-member without a bad digit")
    if phi == 0:
        return phi, LogInterval.exact(0)
    return phi, LogInterval.exact(phi) / (LogInterval.exact(x.denominator) ** S.Delta)


def is_primitive(word):
    n = len(word)
    return n > 0 and all(tuple(word[:k]) * (n // k) != tuple(word) for k in range(1, n) if n % k == 0)


def gcd_pattern(b, word, W=None):
    """gcd(c_0 b^{N-1} + ... + c_{N-1}, b^N - 1) for a primitive word."""
    word = tuple(int(c) for c in word)
    if any(not 0 <= c < b for c in word):
        raise UsageError("digits must lie in 0..b-1")
    if W is not None and any(c not in W for c in word):
        raise UsageError("word uses digits outside W")
    if not is_primitive(word):
        raise NonPrimitivePeriod("%s is a repetition of a shorter word" % word_to_text(word, b))
    N = len(word)
    value = 0
    for c in word:
        value = value * b + c
    return gcd(value, b ** N - 1)


def gcd_bound_ratio(b, word, Delta):
    """gcd * N^{1/Delta} / b^N as a LogInterval."""
    g = gcd_pattern(b, word)
    N = len(word)
    return LogInterval.exact(Fraction(g, b ** N)) * (LogInterval.exact(N) ** (1 / LogInterval.lift(Delta)))


@dataclass(frozen=True)
class DivisorDigits:
    d_prime: int
    word: Tuple[int, ...]
    W1: frozenset
    W2: frozenset

    @property
    def equal(self):
        return self.W1 == self.W2


def divisor_digit_sets(b, N, dN, phi_len):
    """Digit sets of d' = (b^N - 1)/dN written with exactly N base-b digits:
    W1 from u_0..u_phi, W2 from all N digits."""
    b, N, dN, phi_len = int(b), int(N), int(dN), int(phi_len)
    if N < 1 or phi_len < 0 or dN < 1:
        raise UsageError("need N >= 1, dN >= 1 and phi_len >= 0")
    M = b ** N - 1
    if M % dN:
        raise NotADivisor("%d does not divide %d^%d - 1" % (dN, b, N))
    d_prime = M // dN
    word = []
    t = d_prime
    for _ in range(N):
        word.append(t % b)
        t //= b
    word.reverse()
    word = tuple(word)
    return DivisorDigits(d_prime, word, frozenset(word[:phi_len + 1]), frozenset(word))


@dataclass
class SafePrimeScan:
    q_max: int
    scanned: list = field(default_factory=list)
    hits: list = field(default_factory=list)     # (q, [p, ...]) with p/q in C


def safe_prime_scan(S, q_max):
    """All p/q in C with q <= q_max a safe prime coprime to b."""
    q_max = int(q_max)
    out = SafePrimeScan(q_max)
    primes = small_primes()
    if q_max >= primes[-1]:
        candidates = (q for q in range(5, q_max + 1, 2))
    else:
        candidates = (q for q in primes if 5 <= q <= q_max)
    for q in candidates:
        if gcd(q, S.b) != 1 or not is_safe_prime(q):
            continue
        out.scanned.append(q)
        mask = kernels.member_mask(S.b, S.W, q)
        members = [p for p in range(1, q) if mask[p]]
        if members:
            out.hits.append((q, members))
    return out


def membership_mask(S, q):
    """bytearray m with m[p] = 1 iff p/q in C, p = 0..q."""
    return kernels.member_mask(S.b, S.W, q)


def first_bad_digit_table(S, q):
    return kernels.first_bad_digits(S.b, S.W, q)
