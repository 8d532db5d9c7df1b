"""Extrinsic approximation: rationals outside the attractor.

* uniform_extrinsic scans a short arithmetic progression of fractions with
  denominator floor(Q) next to xi until one falls outside the set (or, in the
  prime branch, tries the nearest fraction p_N/N for primes Q/2 <= N < Q).
* extrinsic_lower_bound_check compares the exact distance d(C, p/q) with
  b^(-(2b)^Delta q^Delta) / (2q).
* liouville_build grows an address that is f everywhere except for g at
  positions a_1 < a_2 < ..., choosing each a_k so that the rational point
  theta_{k-1} (the address with the g's placed so far and f forever after)
  is a convergent of xi that keeps every rational outside the set and with
  denominator at most Q_k at distance more than Phi(Q_k)/Q_k.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional

from . import kernels
from .arith.intervals import LogInterval, compare
from .arith.numtheory import is_prime
from .digits import MissingDigitSet, is_member, nearest_point
from .errors import (BudgetExceeded, Exhausted, FixedPointNotRational, MemberInput,
                     NotInAttractor, ScheduleNotDecreasing, UsageError)
from .ifs import (Address, RationalIFS, as_vector, common_denominator, compose,
                  composed_box, rational_to_address, apply_composed)

# ---------------------------------------------------------------------------
# membership of rational vectors in a set or an IFS attractor


def membership(target, x):
    """(member, certificate) for a rational scalar / vector x."""
    if isinstance(target, MissingDigitSet):
        x = as_vector(x, 1)[0]
        m = is_member(target, x)
        if m.member:
            return True, {"witness": m.witness.to_text()}
        return False, {"offending": list(m.offending), "reason": m.reason}
    if isinstance(target, RationalIFS) and target.digit_spec is not None:
        return membership(MissingDigitSet.from_ifs(target), x)
    x = as_vector(x, target.d)
    try:
        address, _ = rational_to_address(target, x)
    except NotInAttractor as exc:
        return False, {"reason": str(exc)}
    return True, {"address": address.to_text()}


def _ifs_of(target):
    return target.ifs if isinstance(target, MissingDigitSet) else target


def _as_reals(xi, d):
    from .arith.reals import RationalReal
    if not isinstance(xi, (list, tuple)):
        xi = [xi]
    out = []
    for x in xi:
        if isinstance(x, (int, Fraction, str)):
            x = RationalReal(Fraction(x))
        out.append(x)
    if len(out) != d:
        raise UsageError("target has %d coordinates, expected %d" % (len(out), d))
    return out


# ---------------------------------------------------------------------------
# uniform extrinsic approximation


@dataclass
class ExtrinsicResult:
    approximant: tuple
    s: int
    error_bound: Fraction
    branch: str
    steps: int                   # progression index n, or number of primes tried
    K: Fraction                  # realized constant error_bound * Q
    certificate: dict = field(default_factory=dict)


def _nearest_numerators(reals, M, slack):
    """Numerators p_i nearest to M xi_i, plus the enclosures used."""
    ps, encl = [], []
    for x in reals:
        lo, hi = x.enclose(slack)
        mid = (lo + hi) / 2
        ps.append(round(mid * M))
        encl.append((lo, hi))
    return ps, encl


def _error_bound(point, encl):
    return max(max(abs(p - lo), abs(hi - p)) for p, (lo, hi) in zip(point, encl))


def uniform_extrinsic(target, xi, Q, v=None, Nmax=10, branch="progression", prime_budget=10 ** 6):
    """A rational vector outside the set with denominator <= Q close to xi."""
    Q = Fraction(Q)
    if Q <= 1:
        raise UsageError("Q must exceed 1")
    ifs = _ifs_of(target)
    d = ifs.d
    reals = _as_reals(xi, d)
    if branch == "progression":
        M = Q.numerator // Q.denominator
        v = tuple(int(c) for c in (v if v is not None else [1] * d))
        if len(v) != d or not any(v):
            raise UsageError("direction must be a nonzero integer %d-vector" % d)
        ps, encl = _nearest_numerators(reals, M, Fraction(1, M << 32))
        for n in range(int(Nmax) + 1):
            cand = tuple(Fraction(p + n * vi, M) for p, vi in zip(ps, v))
            member, cert = membership(target, cand)
            if not member:
                err = _error_bound(cand, encl)
                return ExtrinsicResult(cand, common_denominator(cand), err, branch, n, err * Q, cert)
        raise Exhausted("all %d progression points lie in the set" % (int(Nmax) + 1))
    if branch == "prime":
        lo_n = -(-Q.numerator // (2 * Q.denominator))
        tried = 0
        for N in range(max(lo_n, 2), (Q.numerator - 1) // Q.denominator + 1):
            if N > prime_budget:
                raise BudgetExceeded("prime branch beyond %d" % prime_budget)
            if not is_prime(N):
                continue
            tried += 1
            ps, encl = _nearest_numerators(reals, N, Fraction(1, N << 32))
            cand = tuple(Fraction(p, N) for p in ps)
            member, cert = membership(target, cand)
            if not member:
                err = _error_bound(cand, encl)
                return ExtrinsicResult(cand, common_denominator(cand), err, branch, tried, err * Q, cert)
        raise Exhausted("no prime denominator in [Q/2, Q) gave a non-member")
    raise UsageError("branch must be 'progression' or 'prime'")


# ---------------------------------------------------------------------------
# extrinsic lower bound


@dataclass
class LowerBoundCheck:
    x: Fraction
    distance: Fraction
    nearest: Fraction
    bound: LogInterval
    verdict: bool


def lower_bound_value(S, q):
    """b^(-(2b q)^Delta) / (2q) as a LogInterval."""
    expo = LogInterval.exact(2 * S.b * q) ** S.Delta
    return (-(expo * LogInterval.log(S.b))).exp() / (2 * q)


def extrinsic_lower_bound_check(S, x):
    x = Fraction(x)
    if is_member(S, x).member:
        raise MemberInput("%s lies in the set" % x)
    point, dist = nearest_point(S, x)
    bound = lower_bound_value(S, x.denominator)
    return LowerBoundCheck(x, dist, point, bound, compare(dist, bound) > 0)


# ---------------------------------------------------------------------------
# decay schedules


class Schedule:
    """A rational-valued decay function Phi(Q).  ``at_pow2(E)`` is Phi(2^E)
    and ``min_exponent_below(t)`` the least E >= 1 with Phi(2^E) < t."""

    name = "schedule"

    def __init__(self, fn, name=None):
        self.fn = fn
        if name:
            self.name = name

    def __call__(self, Q):
        return Fraction(self.fn(Q))

    def at_pow2(self, E):
        if E > 4096:
            raise BudgetExceeded("generic schedule cannot evaluate Phi(2^%d)" % E)
        return self(Fraction(2) ** E)

    def min_exponent_below(self, t):
        t = Fraction(t)
        hi = 1
        while not self.at_pow2(hi) < t:
            hi *= 2
        lo = hi // 2
        # bisection on the monotone step function: at_pow2(lo) >= t > at_pow2(hi)
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self.at_pow2(mid) < t:
                hi = mid
            else:
                lo = mid
        return hi

    def check(self):
        vals = [self.at_pow2(E) for E in range(1, 65)]
        if any(b > a for a, b in zip(vals, vals[1:])) or vals[0] == vals[-1]:
            raise ScheduleNotDecreasing("Phi(2^E) must be non-increasing and not constant")
        if any(v <= 0 for v in vals):
            raise ScheduleNotDecreasing("Phi must be positive")


class LogCeilSchedule(Schedule):
    """Phi(Q) = c / ceil(log2 Q)^k."""

    def __init__(self, c=1, k=1):
        self.c = Fraction(c)
        self.k = int(k)
        if self.c <= 0 or self.k < 1:
            raise UsageError("need c > 0 and k >= 1")
        self.name = "logceil:%s:%d" % (self.c, self.k) if self.k != 1 else "logceil:%s" % self.c

    def __call__(self, Q):
        Q = Fraction(Q)
        if Q < 2:
            raise UsageError("Phi is defined for Q >= 2")
        E = 0
        while Fraction(2) ** E < Q:
            E += 1
        return self.c / E ** self.k

    def at_pow2(self, E):
        return self.c / Fraction(E) ** self.k

    def min_exponent_below(self, t):
        # c / E^k < t  <=>  E^k > c / t
        bound = self.c / Fraction(t)
        E = max(1, int(_iroot_floor(bound.numerator // bound.denominator, self.k)))
        while Fraction(E) ** self.k <= bound:
            E += 1
        while E > 1 and Fraction(E - 1) ** self.k > bound:
            E -= 1
        return E


def _iroot_floor(x, k):
    from .arith.reals import _iroot
    return _iroot(max(0, x), k)


def parse_schedule(text):
    """"logceil", "logceil:c", "logceil:c:k" or "const:c" (the last one is
    rejected by Schedule.check, and exists to exercise that path)."""
    head, _, rest = text.partition(":")
    args = [a for a in rest.split(":") if a]
    try:
        if head == "logceil":
            return LogCeilSchedule(*(Fraction(a) if i == 0 else int(a) for i, a in enumerate(args)))
        if head == "const":
            c = Fraction(args[0]) if args else Fraction(1)
            return Schedule(lambda Q: c, "const:%s" % c)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("bad schedule %r: %s" % (text, exc))
    raise UsageError("unknown schedule %r" % text)


# ---------------------------------------------------------------------------
# Liouville construction


@dataclass
class StageRecord:
    k: int
    a: int
    theta: tuple                 # theta_{k-1}: rational point (p_i / q)
    q: int                       # common denominator of theta_{k-1}
    E: int                       # Q_k = 2^E
    Phi: Fraction                # Phi(Q_k)
    certificates: dict


@dataclass
class LiouvilleBuild:
    ifs: RationalIFS
    f: int
    g: int
    schedule: Schedule
    alpha: tuple
    stages: list = field(default_factory=list)

    @property
    def a(self):
        return [s.a for s in self.stages]

    def address(self):
        """Address of xi as far as it is determined: g at every a_k built so
        far, f at all other positions up to a_K (later symbols are not
        determined by a finite build)."""
        aset = set(self.a)
        last = self.a[-1] if self.a else 0
        f, g = self.f, self.g

        def symbol(i):
            if i + 1 > last:
                raise UsageError("xi is only determined up to position %d" % last)
            return g if (i + 1) in aset else f
        return Address.generated(symbol, "liouville")

    def xi_enclosure(self, width):
        """Box enclosing xi of sup-width <= width using the shortest prefix
        of the determined address that achieves it."""
        ifs = self.ifs
        w = ifs.diam_ub
        n = 0
        aset = set(self.a)
        last = self.a[-1]
        tf, tg = ifs.tau_j[self.f - 1], ifs.tau_j[self.g - 1]
        while w > width:
            if n + 1 > last:
                raise UsageError("the build does not determine xi to width %s" % width)
            n += 1
            w *= tg if n in aset else tf
        word = tuple(self.g if i in aset else self.f for i in range(1, n + 1))
        return composed_box(ifs, compose(ifs, word))

    def to_json(self):
        from .report import encode
        return {
            "a": [encode(s.a) for s in self.stages],
            "theta": [{"p": [encode(x.numerator * s.q // x.denominator) for x in s.theta],
                       "q": encode(s.q)} for s in self.stages],
            "Q": [{"pow2": encode(s.E)} for s in self.stages],
            "Phi": [encode(s.Phi) for s in self.stages],
            "schedule": self.schedule.name,
            "f": self.f,
            "g": self.g,
            "certificates": [dict(stage=s.k, **{k: v for k, v in s.certificates.items()})
                             for s in self.stages],
        }


def _theta(ifs, f, g, alpha, a_list):
    """Point with g at the positions in a_list and f elsewhere, ending in f^infinity."""
    if not a_list:
        return alpha
    aset = set(a_list)
    word = tuple(g if i in aset else f for i in range(1, a_list[-1] + 1))
    return apply_composed(ifs, compose(ifs, word), alpha)


class _StageLogs:
    """Shared logarithms for the stage inequalities (natural logs)."""

    def __init__(self, ifs, f, g):
        self.ln_diam = LogInterval.log(ifs.diam_ub)
        self.ln_tf = LogInterval.log(ifs.tau_j[f - 1])
        self.ln_tg = LogInterval.log(ifs.tau_j[g - 1])
        self.ln2 = LogInterval.log(2)

    def for_q(self, q):
        """(log q, log 6q), cached for the current stage."""
        if getattr(self, "_q", None) != q:
            self._q = q
            self._ln_q = (LogInterval.log(q), LogInterval.log(6 * q))
        return self._ln_q

    def ln_dist(self, a, k):
        """ln of diam * tau_f^(a-k) * tau_g^(k-1), the bound on |xi - theta_{k-1}|."""
        return self.ln_diam + self.ln_tf * (a - k) + self.ln_tg * (k - 1)


def _bits_for(*ints):
    """Working precision for comparisons of quantities like E * log 2 with
    E an integer of the given sizes."""
    return max(64, max(abs(int(v)).bit_length() for v in ints) + 128)


def _stage_conditions(logs, a, k, q, E, bits):
    """Certified truth values of the Legendre condition and the (Z) condition
    at position a."""
    ln_q, ln_6q = logs.for_q(q)
    dist = logs.ln_dist(a, k).refine(bits=bits)
    legendre = compare(dist, -(logs.ln2 + 2 * ln_q), max_bits=8 * bits) < 0
    z_rhs = -(ln_6q + logs.ln2 * E)
    z_cond = compare(dist, z_rhs, max_bits=8 * bits) <= 0
    return legendre, z_cond


def liouville_build(ifs, f, g, schedule, stages):
    """Build `stages` stages of the construction (1-based map indices f, g)."""
    stages = int(stages)
    if stages < 1:
        raise UsageError("stages must be >= 1")
    if f == g:
        raise UsageError("f and g must be different maps")
    schedule.check()
    ff = ifs.f(f)
    ifs.f(g)
    if ifs.diam_ub == 0:
        raise UsageError("degenerate attractor")
    alpha = ff.fixed_point()
    if any(not isinstance(c, Fraction) for c in alpha):
        raise FixedPointNotRational("fixed point of f is not rational")
    build = LiouvilleBuild(ifs, f, g, schedule, alpha)
    logs = _StageLogs(ifs, f, g)
    tf = ifs.tau_j[f - 1]
    if tf == 0:
        raise UsageError("f must not be constant")
    a_list = []
    for k in range(1, stages + 1):
        theta = _theta(ifs, f, g, alpha, a_list)
        q = common_denominator(theta)
        threshold = Fraction(1, 6 * q)
        E = schedule.min_exponent_below(threshold)
        Phi = schedule.at_pow2(E)
        a_prev = a_list[-1] if a_list else 0
        a = _choose_position(logs, k, q, E, a_prev)
        legendre, z_cond = _stage_conditions(logs, a, k, q, E, _bits_for(a, E, q.bit_length()))
        minimal = a - 1 <= max(a_prev, k - 1) or not all(
            _stage_conditions(logs, a - 1, k, q, E, _bits_for(a, E, q.bit_length())))
        certs = {
            "legendre_convergent": legendre,
            "z_ge_3Q": z_cond,
            "stage_Phi_lt_1_over_6q": Phi < threshold,
            "Phi_lt_1_over_2q": Phi < Fraction(1, 2 * q),
            # every r/s != theta with s <= Q_k < z/2 has |xi - r/s| >= 1/(2 s q) >= 2^(-1-E)/q,
            # and Phi(Q_k)/Q_k < 2^(-1-E)/q because Phi < 1/(2q)
            "witness_margin": legendre and z_cond and Phi < Fraction(1, 2 * q),
            "a_increasing": a > a_prev,
            "a_minimal": minimal,
        }
        if build.stages:
            certs["q_increasing"] = q > build.stages[-1].q
        build.stages.append(StageRecord(k, a, theta, q, E, Phi, certs))
        a_list.append(a)
    return build


def _choose_position(logs, k, q, E, a_prev):
    """Least a > a_prev (and a >= k) satisfying the Legendre and (Z)
    conditions, from the closed form a - k >= y and a verified fix-up."""
    bits = _bits_for(E, q.bit_length(), k)
    ln_q, ln_6q = logs.for_q(q)
    base = logs.ln_diam + logs.ln_tg * (k - 1)
    neg_tf = -logs.ln_tf
    y_z = ((base + ln_6q + logs.ln2 * E) / neg_tf).refine(bits=bits)
    y_l = ((base + logs.ln2 + 2 * ln_q) / neg_tf).refine(bits=bits)
    hi = max(y_z.at(bits)[1], y_l.at(bits)[1])
    a = max(k + hi.__floor__() + 1, a_prev + 1, k)
    vbits = _bits_for(a, E, q.bit_length())
    while not all(_stage_conditions(logs, a, k, q, E, vbits)):
        a += 1
    while a - 1 > max(a_prev, k - 1) and all(_stage_conditions(logs, a - 1, k, q, E, vbits)):
        a -= 1
    return a


@dataclass
class WitnessResult:
    k: int
    holds: bool
    Q: int
    threshold: Fraction
    checked: int                 # non-members examined
    counterexample: Optional[tuple] = None


def liouville_witness_check(build, k, budget=10 ** 6):
    """Exhaustive check at stage k (d = 1): every reduced r/s outside the set
    with s <= Q_k satisfies |xi - r/s| > Phi(Q_k)/Q_k."""
    if not 1 <= k <= len(build.stages):
        raise UsageError("stage %d not built" % k)
    if build.ifs.d != 1:
        raise UsageError("the exhaustive witness scan is one-dimensional")
    st = build.stages[k - 1]
    if st.E > 62 or (1 << st.E) > budget:
        raise BudgetExceeded("Q_%d = 2^%d exceeds the scan budget" % (k, st.E))
    Q = 1 << st.E
    thr = st.Phi / Q
    (lo,), (hi,) = build.xi_enclosure(thr / 2)
    ifs = build.ifs
    digit = ifs.digit_spec
    checked = 0
    for s in range(1, Q + 1):
        r_lo = ((lo - thr) * s).__floor__()
        r_hi = ((hi + thr) * s).__ceil__()
        mask = kernels.member_mask(digit[0], digit[1], s) if digit else None
        for r in range(r_lo, r_hi + 1):
            if gcd(r, s) != 1:
                continue
            x = Fraction(r, s)
            if digit:
                inside = 0 <= r <= s and mask[r]
            else:
                inside = membership(ifs, x)[0]
            if inside:
                continue
            checked += 1
            if not _farther_than(build, x, thr, (lo, hi)):
                return WitnessResult(k, False, Q, thr, checked, (r, s))
    # fractions outside [s(lo - thr), s(hi + thr)] are farther than thr from xi
    return WitnessResult(k, True, Q, thr, checked)


def _farther_than(build, x, thr, encl):
    """Decide |xi - x| > thr, narrowing the enclosure of xi when needed."""
    lo, hi = encl
    width = hi - lo
    for _ in range(8):
        d_lo = Fraction(0) if lo <= x <= hi else min(abs(x - lo), abs(x - hi))
        if d_lo > thr:
            return True
        if max(abs(x - lo), abs(x - hi)) <= thr:
            return False
        width /= 16
        try:
            (lo,), (hi,) = build.xi_enclosure(width)
        except UsageError:
            return False
    return False
