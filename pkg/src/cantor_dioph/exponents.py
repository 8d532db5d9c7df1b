"""Successive minima of the lattice Lambda_xi = {(m, m xi - n)} against the
boxes K(T) = [-T, T] x [-1/T, 1/T], and finite-depth exponent estimates.

With T = e^t the gauge of a lattice point (m, n) is

    lambda(m, n) = max(|m| / T, |m xi - n| T),

so L_(m,n)(t) = log lambda(m, n) = max(log m - t, log|m xi - n| + t).

Search region.  Every first minimum can be taken among the convergent
vectors (v_s, u_s), s >= -1, where (v_{-1}, u_{-1}) = (0, 1): any minimizer
(m, n) can be replaced by the best approximation of the second kind with
denominator <= m, which is a convergent and has no larger gauge.  Once P_s
realizes the first minimum, some second minimum is of the form W + x P_s
with (P_s, W) a lattice basis: if v2 = a P_s + b W realizes lambda_2 with
|b| >= 2, then W' = v2/b - c P_s for the integer-shifted c with |c| <= 1/2
is a lattice point with gauge <= lambda_2/2 + lambda_1/2 <= lambda_2.  The
consecutive convergent P_{s+1} (or P_{s-1}) completes P_s to a basis, and
x -> gauge(W + x P_s) is convex, so an integer binary search between the
zeros of its two linear parts finds the second minimum.
"""
import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .arith.contfrac import ContinuedFraction
from .arith.intervals import (Imprecise, LogInterval, Undecided, compare,
                              fraction_to_decimal, lmax)
from .digits import is_member
from .errors import DepthTooSmall, ExactHit, UsageError

# Ties between distinct lattice points are genuine coincidences of real
# numbers and cannot be separated; past this precision they are treated
# as ties (either point is then a valid realizer).
TIE_BITS = 2048


def _exact_value(xi):
    lo, hi = xi.enclose(Fraction(1))
    return lo if lo == hi else None


def abs_linear_form(m, n, xi):
    """|m xi - n| as a LogInterval; raises ExactHit when it vanishes."""
    m, n = int(m), int(n)
    x0 = _exact_value(xi)
    if x0 is not None:
        return LogInterval.exact(abs(m * x0 - n)) if m * x0 != n else _raise_hit(m, n)
    if m == 0:
        return LogInterval.exact(abs(n))

    def producer(bits):
        lo, hi = xi.enclose(Fraction(1, abs(m) << bits))
        a, b = m * lo - n, m * hi - n
        if a > b:
            a, b = b, a
        if a > 0:
            return a, b
        if b < 0:
            return -b, -a
        return Fraction(0), max(-a, b)
    return LogInterval(producer, label="|%d*x-%d|" % (m, n))


def _raise_hit(m, n):
    raise ExactHit("%d * xi == %d exactly" % (m, n))


def _normalize(m, n):
    if m < 0 or (m == 0 and n < 0):
        return -m, -n
    return m, n


def L_function(m, n, xi, t):
    """L_(m,n)(t) = max(log m - t, log|m xi - n| + t) as a LogInterval.

    The value is even in (m, n); m = 0 leaves only the second term.
    Raises ExactHit if m xi = n (log of zero).
    """
    m, n = _normalize(int(m), int(n))
    if m == 0 and n == 0:
        raise UsageError("(m, n) must be nonzero")
    t = Fraction(t)
    second = LogInterval.log(abs_linear_form(m, n, xi)) + t
    if m == 0:
        return second
    return lmax(LogInterval.log(m) - t, second)


def _gauge_log(m, n, xi, t):
    """L_(m,n)(t), with an exact hit (m xi = n) contributing only log m - t."""
    m, n = _normalize(m, n)
    try:
        return L_function(m, n, xi, t), False
    except ExactHit:
        return LogInterval.log(m) - Fraction(t), True


def _cmp(a, b):
    """compare() with ties (undecidable at TIE_BITS) reported as 0."""
    try:
        return compare(a, b, max_bits=TIE_BITS)
    except Undecided:
        return 0


@dataclass
class ProfileSample:
    t: Fraction
    L1: LogInterval
    L2: LogInterval
    realizer1: tuple            # (m, n)
    realizer2: tuple
    band: str                   # "certified", "touching" or "violated"
    exact_hit: bool = False

    @property
    def determinant(self):
        (m1, n1), (m2, n2) = self.realizer1, self.realizer2
        return m1 * n2 - m2 * n1


@dataclass
class MinimaProfile:
    xi_label: str
    samples: List[ProfileSample] = field(default_factory=list)
    terminal: Optional[dict] = None   # set for rational xi at the exact-hit t

    def violations(self):
        return [s for s in self.samples if s.band == "violated"]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "L1_lo", "L1_hi", "L2_lo", "L2_hi", "m1", "n1", "m2", "n2"])
        for s in self.samples:
            w.writerow([str(s.t)] + [fraction_to_decimal(v, 15) for v in
                                     (s.L1.lo, s.L1.hi, s.L2.lo, s.L2.hi)]
                       + list(s.realizer1) + list(s.realizer2))
        return buf.getvalue()

    def to_json(self):
        rows = []
        for s in self.samples:
            rows.append({"t": s.t, "L1": s.L1, "L2": s.L2, "m1": s.realizer1[0],
                         "n1": s.realizer1[1], "m2": s.realizer2[0], "n2": s.realizer2[1],
                         "band": s.band, "exact_hit": s.exact_hit})
        return {"xi": self.xi_label, "samples": rows, "terminal": self.terminal}


class _ConvergentVectors:
    """(v_s, u_s) for s = -1, 0, 1, ... grown on demand."""

    def __init__(self, xi):
        self.cf = ContinuedFraction(xi)
        self.vectors = [(0, 1)]

    def get(self, i):
        while len(self.vectors) <= i:
            before = len(self.cf.convergents)
            self.cf.extend(before + 1)
            if len(self.cf.convergents) == before:
                return None
            u, v = self.cf.convergents[-1]
            self.vectors.append((v, u))
        return self.vectors[i]


def _first_minimum(vecs, xi, t):
    best = None
    i = 0
    while True:
        P = vecs.get(i)
        if P is None:
            break
        if best is not None and P[0] > 0:
            # all later convergents have gauge >= v/T >= this one's bound
            if _cmp(LogInterval.log(P[0]) - t, best[1]) >= 0:
                break
        L, hit = _gauge_log(P[0], P[1], xi, t)
        if best is None or _cmp(L, best[1]) < 0:
            best = (i, L, hit)
        i += 1
    return best


def _floor_ceil_range(values):
    lo = min(v[0] for v in values)
    hi = max(v[1] for v in values)
    return lo.__floor__() - 1, hi.__ceil__() + 1


def _second_minimum(vecs, xi, t, i1):
    P = vecs.get(i1)
    W = vecs.get(i1 + 1)
    if W is None:
        W = vecs.get(i1 - 1)
    m1, n1 = P
    mW, nW = W
    # zeros of the two linear parts of x -> (mW + x m1, (mW + x m1) xi - (nW + x n1))
    roots = []
    if m1 != 0:
        r = Fraction(-mW, m1)
        roots.append((r, r))
    d1, dW = abs_linear_form_signed(m1, n1, xi), abs_linear_form_signed(mW, nW, xi)
    if d1 is not None:
        roots.append((Fraction(0), Fraction(0)) if dW is None else _root_enclosure(dW, d1))
    lo, hi = _floor_ceil_range(roots)

    def L(x):
        return _gauge_log(mW + x * m1, nW + x * n1, xi, t)[0]

    # smallest x in [lo, hi] with L(x + 1) >= L(x) (convexity makes this monotone)
    a, b = lo, hi
    while a < b:
        mid = (a + b) // 2
        if _cmp(L(mid + 1), L(mid)) >= 0:
            b = mid
        else:
            a = mid + 1
    x = a
    pt = _normalize(mW + x * m1, nW + x * n1)
    return pt, L(x)


def abs_linear_form_signed(m, n, xi):
    """m xi - n as a sign-settled enclosure callable, or None when exactly 0."""
    x0 = _exact_value(xi)
    if x0 is not None:
        v = m * x0 - n
        return None if v == 0 else (lambda bits: (v, v))
    if m == 0:
        return lambda bits: (Fraction(-n), Fraction(-n))

    def enc(bits):
        lo, hi = xi.enclose(Fraction(1, abs(m) << bits))
        a, b = sorted((m * lo - n, m * hi - n))
        return a, b
    return enc


def _root_enclosure(dW, d1):
    """Enclosure of -dW/d1 where d1 is bounded away from zero."""
    bits = 64
    while True:
        aW, bW = dW(bits)
        a1, b1 = d1(bits)
        if a1 > 0 or b1 < 0:
            c = [-(x / y) for x in (aW, bW) for y in (a1, b1)]
            return min(c), max(c)
        bits *= 2
        if bits > 1 << 16:
            raise Imprecise("cannot separate the linear form from zero")


def _band_status(total):
    neg_log2 = -LogInterval.log(2)
    upper = _cmp(total, 0)
    lower = _cmp(total, neg_log2)
    if upper > 0 or lower < 0:
        return "violated"
    if upper == 0 and not total.is_exact() or lower == 0:
        return "touching"
    return "certified"


def minima_sample(xi, t, vecs=None):
    """One profile sample at t >= 0."""
    t = Fraction(t)
    if t < 0:
        raise UsageError("t must be non-negative")
    vecs = vecs or _ConvergentVectors(xi)
    i1, L1, hit = _first_minimum(vecs, xi, t)
    r1 = _normalize(*vecs.get(i1))
    r2, L2 = _second_minimum(vecs, xi, t, i1)
    return ProfileSample(t, L1, L2, r1, r2, _band_status(L1 + L2), hit)


def minima_profile(xi, t_grid, label=None):
    """Successive minima L1, L2 on a sorted grid of t >= 0, with the
    Minkowski band -log 2 <= L1 + L2 <= 0 decided at every sample.

    For rational xi the profile stops at the first sample whose first
    minimum is the exact hit (v, u) with u/v = xi; that sample carries
    ``exact_hit`` and the profile records a terminal marker.
    """
    grid = [Fraction(t) for t in t_grid]
    if grid != sorted(grid):
        raise UsageError("t grid must be sorted")
    vecs = _ConvergentVectors(xi)
    prof = MinimaProfile(label or getattr(xi, "label", "xi"))
    for t in grid:
        s = minima_sample(xi, t, vecs)
        prof.samples.append(s)
        if s.exact_hit:
            prof.terminal = {"t": t, "m": s.realizer1[0], "n": s.realizer1[1], "reason": "exact-hit"}
            break
    return prof


# ---------------------------------------------------------------------------
# exponent estimates


@dataclass
class ExponentEstimate:
    kind: str                          # lambda, lambda_int, lambda_ext, hat_...
    lower_witness: Optional[Fraction]  # certified by `triple`, None if no data
    triple: Optional[tuple]            # (p, q, Q)
    upper_diagnostic: Optional[Fraction]
    depth: int
    certified: bool = False


@dataclass
class ExponentReport:
    estimates: dict
    classified: list                   # (p, q, member)
    checks: dict
    diagnostics: dict


def _witness_value(p, q, xi):
    """-log|q xi - p| / log q: the largest lambda with |xi - p/q| <= q^-1 q^-lambda."""
    return -LogInterval.log(abs_linear_form(q, p, xi)) / LogInterval.log(q)


def _certify_triple(p, q, Q, lam, xi):
    """|q xi - p| <= Q^-lam, i.e. log|q xi - p| <= -lam log Q."""
    lhs = LogInterval.log(abs_linear_form(q, p, xi))
    return _cmp(lhs, -lam * LogInterval.log(Q)) <= 0


def estimate_exponents(S, xi, depth):
    """Finite-depth exponent data for xi against the missing-digit set S.

    Convergents p/q with q <= depth are classified as intrinsic (in S) or
    extrinsic.  Ordinary exponents get certified lower witnesses: the best
    convergent of the class, with a rational lambda and its (p, q, Q = q)
    triple.  Uniform exponents are reported as diagnostics only.
    """
    depth = int(depth)
    cf = ContinuedFraction(xi)
    conv = []
    while True:
        before = len(cf.convergents)
        cf.extend(before + 1)
        if len(cf.convergents) == before:
            break
        u, v = cf.convergents[-1]
        if v > depth:
            break
        conv.append((u, v))
    if len(conv) < 3:
        raise DepthTooSmall("only %d convergents with denominator <= %d" % (len(conv), depth))
    classified = [(p, q, is_member(S, Fraction(p, q)).member) for p, q in conv]
    x0 = _exact_value(xi)
    neg_logs = {}
    scored = []
    for p, q, mem in classified:
        if x0 is not None and Fraction(p, q) == x0:
            continue
        nl = -LogInterval.log(abs_linear_form(q, p, xi))
        neg_logs[(p, q)] = nl
        if q >= 2:
            scored.append((p, q, mem, nl / LogInterval.log(q)))

    estimates = {}
    for kind, keep in (("lambda", lambda m: True), ("lambda_int", lambda m: m),
                       ("lambda_ext", lambda m: not m)):
        pool = [s for s in scored if keep(s[2])]
        best = None
        for s in pool:
            if best is None or _cmp(s[3], best[3]) > 0:
                best = s
        if best is None:
            estimates[kind] = ExponentEstimate(kind, None, None, None, depth)
            continue
        p, q, _, val = best
        lam = val.lo
        ok = _certify_triple(p, q, q, lam, xi)
        tail = [s for s in pool if s[1] * s[1] >= depth] or pool
        upper = max(s[3].midpoint() for s in tail)
        estimates[kind] = ExponentEstimate(kind, lam, (p, q, q), upper, depth, ok)

    hats = _uniform_diagnostics(classified, neg_logs, depth)
    for kind, val in hats.items():
        estimates[kind] = ExponentEstimate(kind, None, None, val, depth)

    lam, li, le = (estimates[k].lower_witness for k in ("lambda", "lambda_int", "lambda_ext"))
    checks = {
        "lambda_is_max_of_int_ext": lam == max(v for v in (li, le) if v is not None)
        if lam is not None else li is None and le is None,
        "lambda_witness_gt_1": lam is None or lam > 1,
        "witness_triples_certified": all(e.certified for e in estimates.values()
                                         if e.lower_witness is not None),
    }
    diag = {}
    if li is not None and hats.get("hat_lambda_ext") is not None:
        inv = 1 / estimates["lambda_int"].upper_diagnostic
        diag["hat_ext_le_inverse_int"] = hats["hat_lambda_ext"] <= inv
        diag["min_rule_gap"] = hats["hat_lambda_ext"] - min(inv, Fraction(1))
    return ExponentReport(estimates, classified, checks, diag)


def _uniform_diagnostics(classified, neg_logs, depth):
    """min over Q of max over class members with q <= Q of
    -log|q xi - p| / log Q, with Q running over v_{k+1} - 1 and depth.
    Midpoint arithmetic: these numbers are diagnostics, not certificates."""
    grid = sorted(set([q - 1 for _, q, _ in classified if q > 2] + [depth]))
    mids = {k: v.midpoint() for k, v in neg_logs.items()}
    out = {}
    for kind, keep in (("hat_lambda", lambda m: True), ("hat_lambda_int", lambda m: m),
                       ("hat_lambda_ext", lambda m: not m)):
        vals = []
        for Q in grid:
            if Q < 2:
                continue
            cand = [mids[(p, q)] for p, q, m in classified if q <= Q and keep(m) and (p, q) in mids]
            best = max(cand) if cand else Fraction(0)
            vals.append(max(best, Fraction(0)) / LogInterval.log(Q).midpoint())
        out[kind] = min(vals) if vals else None
    return out
