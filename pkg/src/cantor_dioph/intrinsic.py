"""Intrinsic approximation: rationals inside the attractor close to a point
of the attractor, plus enumeration and counting of rational points.

The approximation is the shift-orbit pigeonhole construction: among the
points sigma^n(omega), n = 0..J^l, two share an address prefix of length l,
say n < m.  Then omega agrees with the eventually periodic address
omega_1..omega_n (omega_{n+1}..omega_m)^infinity on its first m + l symbols,
and that periodic address is an exact rational point of the attractor.
"""
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from . import kernels
from .arith.intervals import LogInterval, decide_power_bound, less_equal
from .digits import MissingDigitSet
from .errors import (AddressTooShort, BoundViolation, BudgetExceeded,
                     InsufficientData, UsageError)
from .ifs import (Address, common_denominator, compose, composed_box,
                  periodic_fixed_point_data, pigeonhole_witness)

DEFAULT_BUDGET = 10 ** 5


def enumeration_budget():
    """Default denominator cap, overridable through CANTOR_DIOPH_BUDGET."""
    raw = os.environ.get("CANTOR_DIOPH_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise UsageError("CANTOR_DIOPH_BUDGET must be an integer")
    return DEFAULT_BUDGET


@dataclass
class IntrinsicResult:
    approximant: tuple                  # rational d-vector
    q: int                              # reduced common denominator
    q_unreduced: int
    q_cap: object                       # certified cap on q (int, or description)
    error_bound: Fraction               # certified bound on ||xi - p/q||
    n: int
    m: int
    l: int
    address: Address                    # eventually periodic address of p/q
    certificates: dict = field(default_factory=dict)


def _symbols_needed(address, count):
    try:
        return address.prefix(count)
    except AddressTooShort:
        raise AddressTooShort("the address needs at least %d symbols here" % count)


def _orbit_collision(ifs, word, l, count):
    """First pair n < m (orbit order) with equal length-l prefixes among the
    first `count` shifts of `word`."""
    points = [Address.finite(word[i:i + l]) for i in range(count)]
    n, m, _ = pigeonhole_witness(ifs, points, l)
    return n, m


def _cylinder_distance(ifs, point, word):
    """max over the bounding box of the cylinder of `word` of the sup
    distance to `point`; an exact bound for any point with that prefix."""
    lo, hi = composed_box(ifs, compose(ifs, word))
    return max(max(abs(p - a), abs(b - p)) for p, a, b in zip(point, lo, hi))


def intrinsic_dirichlet(ifs, xi, Q):
    """Rational point of the attractor close to the point with address xi.

    Missing-digit systems get the sharper certificate
    q <= b^(Q^Delta), ||xi - p/q|| <= b/(Q q); general systems get
    q <= Q together with the explicit cylinder error bound.
    """
    Q = Fraction(Q)
    if ifs.digit_spec is not None:
        return _intrinsic_digits(ifs, xi, Q)
    return _intrinsic_general(ifs, xi, Q)


def _intrinsic_digits(ifs, xi, Q):
    b, W = ifs.digit_spec
    if Q < 1:
        raise UsageError("Q must be at least 1")
    J = len(W)
    # smallest l >= 0 with b^(l+1) >= Q, so that b^l < Q <= b^(l+1)
    l = 0
    while Fraction(b) ** (l + 1) < Q:
        l += 1
    count = J ** l + 1
    word = _symbols_needed(xi, count - 1 + l)
    n, m = _orbit_collision(ifs, word, l, count)
    pre, per = word[:n], word[n:m]
    point, q_unred = periodic_fixed_point_data(ifs, pre, per)
    q = common_denominator(point)
    bound = ifs.diam_ub * Fraction(1, b) ** (m + l)
    target = Fraction(b) / (Q * q)
    certs = {
        "q_le_b_pow_Q_Delta": decide_power_bound(q, b, Q, ifs.Delta),
        "m_le_J_pow_l": m <= J ** l,
        "cylinder_bound_le_b_over_Qq": bound <= target,
    }
    # xi lies in the cylinder of its first m + l symbols
    certs["enclosure_distance_le_b_over_Qq"] = _cylinder_distance(ifs, point, word[:m + l]) <= target
    if not all(certs.values()):
        raise BoundViolation("intrinsic certificate failed: %s" % certs)
    return IntrinsicResult(point, q, q_unred, "b^(Q^Delta)", bound, n, m, l,
                           Address.periodic(pre, per), certs)


def general_parameters(ifs, Q):
    """(N, l): N the largest n with (S (2 q_max)^d)^n <= Q, l the largest
    with J^l <= N."""
    base = ifs.S * (2 * ifs.q_max) ** ifs.d
    if Q < base:
        raise UsageError("Q must be at least S * 2^d * q_max^d = %d" % base)
    N = 0
    while Fraction(base) ** (N + 1) <= Q:
        N += 1
    l = 0
    if ifs.J > 1:
        while ifs.J ** (l + 1) <= N:
            l += 1
    return N, l


def _intrinsic_general(ifs, xi, Q):
    N, l = general_parameters(ifs, Q)
    J = ifs.J
    count = J ** l + 1
    word = _symbols_needed(xi, count - 1 + l)
    n, m = _orbit_collision(ifs, word, l, count)
    pre, per = word[:n], word[n:m]
    _, q1, _ = compose(ifs, pre)
    _, q2, _ = compose(ifs, per)
    point, q_unred = periodic_fixed_point_data(ifs, pre, per)
    q = common_denominator(point)
    chain = ifs.S * q1 * (2 * q2) ** ifs.d
    tau_prod = Fraction(1)
    for j in word[:m + l]:
        tau_prod *= ifs.tau_j[j - 1]
    bound = ifs.diam_ub * tau_prod
    certs = {
        "q_divides_unreduced": q_unred % q == 0,
        "unreduced_le_chain": q_unred <= chain,
        "chain_le_Q": chain <= Q,
        "enclosure_distance_le_bound": _cylinder_distance(ifs, point, word[:m + l]) <= bound,
    }
    if not all(certs.values()):
        raise BoundViolation("intrinsic certificate failed: %s" % certs)
    res = IntrinsicResult(point, q, q_unred, Q, bound, n, m, l, Address.periodic(pre, per), certs)
    res.certificates["realized_constant"] = realized_constant(ifs, bound, q, Q)
    return res


def realized_constant(ifs, error, q, Q):
    """K = error / (q^(mu/d) (log Q)^(log tau / log J)) as a LogInterval, or
    None when the shape function is undefined (J = 1, mu undefined, Q <= e)."""
    mu = ifs.mu
    if mu is None or ifs.J < 2 or ifs.tau == 0 or error == 0:
        return None
    logQ = LogInterval.log(Q)
    if logQ.lo <= 1:
        return None
    expo = LogInterval.log(ifs.tau) / LogInterval.log(ifs.J)
    shape = (LogInterval.exact(q) ** (mu / ifs.d)) * (logQ ** expo)
    return LogInterval.exact(error) / shape


# ---------------------------------------------------------------------------
# rational points


@dataclass
class RationalPointCatalog:
    set: MissingDigitSet
    N: int
    points: list                       # sorted (p, q) pairs
    method: str = "oracle"
    bound: Optional[LogInterval] = None
    bound_holds: Optional[bool] = None

    def __len__(self):
        return len(self.points)

    def fractions(self):
        return [Fraction(p, q) for p, q in self.points]

    def to_csv(self):
        return "p,q\n" + "".join("%d,%d\n" % pq for pq in self.points)

    def to_json_rows(self):
        return [{"p": p, "q": q} for p, q in self.points]


def members_with_denominator(S, q):
    """Reduced p with p/q in C (0 <= p <= q)."""
    mask = kernels.member_mask(S.b, S.W, q)
    return [p for p in range(q + 1) if mask[p] and gcd(p, q) == 1]


def _chunk(args):
    b, W, lo, hi = args
    S = MissingDigitSet(b, W)
    return [(q, members_with_denominator(S, q)) for q in range(lo, hi)]


def _rows_by_denominator(S, N, jobs=1):
    if jobs and jobs > 1 and N > 2000:
        step = max(1, N // (4 * jobs))
        tasks = [(S.b, S.W, lo, min(N + 1, lo + step)) for lo in range(1, N + 1, step)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_chunk, tasks):
                yield from part
    else:
        for q in range(1, N + 1):
            yield q, members_with_denominator(S, q)


def counting_bound(S, N):
    """J^2 diam^D N^(2D) with D = Delta as a LogInterval (diam <= 1)."""
    J = S.J
    diam = S.diam
    D = S.Delta
    out = LogInterval.exact(J * J) * (LogInterval.exact(N) ** (2 * D))
    if diam != 1:
        out = out * (LogInterval.exact(diam) ** D)
    return out


def enumerate_rationals(S, N, budget=None, jobs=1):
    """All reduced p/q in C with q <= N, by exhaustive membership."""
    N = int(N)
    if N < 1:
        raise UsageError("N must be at least 1")
    budget = enumeration_budget() if budget is None else budget
    if N > budget:
        raise BudgetExceeded("N = %d exceeds the enumeration budget %d" % (N, budget))
    points = []
    for q, ps in _rows_by_denominator(S, N, jobs):
        points.extend((p, q) for p in ps)
    points.sort(key=lambda pq: (pq[1], pq[0]))
    bound = counting_bound(S, N)
    return RationalPointCatalog(S, N, points, "oracle", bound, less_equal(len(points), bound))


def counting_series(S, N, jobs=1):
    """counts[k] = |S(C, k)| for k = 0..N (counts[0] = 0)."""
    counts = [0] * (N + 1)
    for q, ps in _rows_by_denominator(S, N, jobs):
        counts[q] = len(ps)
    for k in range(1, N + 1):
        counts[k] += counts[k - 1]
    return counts


def counting_exponent_fit(Ns, counts):
    """Least-squares slope of log count against log N.  A diagnostic: floats
    are used here and nowhere on a certified path."""
    pairs = sorted(set((int(n), int(c)) for n, c in zip(Ns, counts)))
    if len(set(n for n, _ in pairs)) < 3:
        raise InsufficientData("need at least three distinct N")
    if any(c <= 0 or n <= 0 for n, c in pairs):
        raise InsufficientData("counts and N must be positive")
    xs = [math.log(n) for n, _ in pairs]
    ys = [math.log(c) for _, c in pairs]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx
