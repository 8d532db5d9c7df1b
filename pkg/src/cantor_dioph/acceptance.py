"""Corpus-level acceptance suites.

Each suite runs one family of certified claims over a fixed corpus and
returns a SuiteResult.  The same functions back ``cantor-dioph verify`` and
tests/test_acceptance.py, so the command line and the test suite can never
disagree about what "passing" means.  Corpora are seeded and deterministic.
"""
import random
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith.contfrac import ContinuedFraction, convergent_sandwich_check
from .arith.intervals import LogInterval, compare, decide_power_bound, less_equal
from .arith.numtheory import expansion_lengths
from .errors import Undecided
from .arith.reals import (QuadraticReal, RootReal, euler_e, golden, lacunary_square,
                          liouville_factorial, parse_target, PiReal)
from .digits import (first_bad_digit_table, gcd_pattern, is_member, membership_mask,
                     middle_third, nearest_point, safe_prime_scan)
from .exponents import minima_profile
from .extrinsic import (LogCeilSchedule, liouville_build, liouville_witness_check,
                        lower_bound_value, uniform_extrinsic)
from .ifs import (Address, AddressReal, AffineContraction, RationalIFS, compose,
                  composed_box, period_length_bound_check, periodic_fixed_point,
                  rational_to_address)
from .intrinsic import counting_exponent_fit, counting_series, enumerate_rationals, intrinsic_dirichlet


@dataclass
class SuiteResult:
    name: str
    criterion: int
    passed: bool
    summary: str
    data: dict = field(default_factory=dict)
    fatal: bool = True           # a diagnostic suite reports but never fails the run
    seconds: float = 0.0

    def line(self):
        if self.passed:
            tag = "PASS"
        else:
            tag = "FAIL" if self.fatal else "MISS (diagnostic, non-fatal)"
        return "[%2d] %-16s %s  %s" % (self.criterion, self.name, tag, self.summary)

    def to_json(self):
        from .report import encode
        return {"name": self.name, "criterion": self.criterion, "passed": self.passed,
                "fatal": self.fatal, "summary": self.summary, "data": encode(self.data)}


def _greater(a, b):
    """Certified a > b; exact ties (e.g. 2/3^Delta = 1/1) count as not greater."""
    try:
        return compare(a, b, max_bits=1024) > 0
    except Undecided:
        return False


def _rng(seed):
    return random.Random(seed)


def random_word(rng, J, n):
    return tuple(rng.randint(1, J) for _ in range(n))


def random_generated_address(seed, J):
    """Infinite pseudo-random address; symbol i depends only on (seed, i)."""
    def symbol(i):
        return random.Random(seed * 1000003 + i).randint(1, J)
    return Address.generated(symbol, "random(seed=%d)" % seed)


def roundtrip_systems():
    """Three unimodular systems with strong separation: the middle-third
    set, a 1-d system with an orientation-reversing map, and a 2-d system
    with a rotation."""
    S = middle_third()
    flip = RationalIFS([AffineContraction([[1]], 3, [0], 1),
                        AffineContraction([[-1]], 3, [1], 1)], label="flip")
    plane = RationalIFS([AffineContraction([[1, 0], [0, 1]], 3, [0, 0], 1),
                         AffineContraction([[0, -1], [1, 0]], 3, [1, 0], 1),
                         AffineContraction([[1, 0], [0, 1]], 3, [0, 2], 3)], label="plane")
    return [S.ifs, flip, plane]


def sandwich_targets():
    """Twenty irrational reals with enclosures of any width."""
    out = [QuadraticReal(0, 1, d, 1, label="sqrt(%d)" % d) for d in (2, 3, 5, 6, 7, 10, 11, 13)]
    out += [QuadraticReal(-1, 1, 2, 1, label="sqrt(2)-1"), golden(), QuadraticReal(1, 1, 3, 2),
            euler_e(), PiReal(), RootReal(2, 3), RootReal(3, 3), RootReal(5, 4),
            liouville_factorial(3, 2), lacunary_square(3, 2),
            parse_target("logratio:2:3"), parse_target("log:2")]
    return out


# ---------------------------------------------------------------------------
# the eleven suites


def suite_dirichlet(count=100, length=200, Qs=(3, 9, 27, 81, 243), seed=1):
    S = middle_third()
    ifs = S.ifs
    rng = _rng(seed)
    ok = total = 0
    failures = []
    for _ in range(count):
        word = random_word(rng, 2, length)
        xi = Address.finite(word)
        # every point with this 200-symbol prefix lies in this box
        (lo,), (hi,) = composed_box(ifs, compose(ifs, word))
        for Q in Qs:
            total += 1
            res = intrinsic_dirichlet(ifs, xi, Q)
            x = res.approximant[0]
            q = x.denominator
            checks = (
                is_member(S, x).member,
                periodic_fixed_point(ifs, res.address.preperiod, res.address.period) == res.approximant,
                decide_power_bound(q, 3, Q, S.Delta),
                max(abs(x - lo), abs(hi - x)) <= Fraction(3, Q * q),
            )
            if all(checks):
                ok += 1
            elif len(failures) < 5:
                failures.append({"word": Address.finite(word).to_text(), "Q": Q, "checks": list(checks)})
    return SuiteResult("dirichlet", 1, ok == total,
                       "%d/%d runs: p/q in C, q <= 3^(Q^Delta), |xi - p/q| <= 3/(Qq)" % (ok, total),
                       {"passed": ok, "total": total, "failures": failures})


def suite_counting(N_max=2000):
    S = middle_third()
    counts = counting_series(S, N_max)
    two_delta = 2 * S.Delta
    bad = []
    for N in range(1, N_max + 1):
        bound = 4 * LogInterval.exact(N) ** two_delta
        if not less_equal(counts[N], bound):
            bad.append(N)
    small = len(enumerate_rationals(S, 4))
    passed = not bad and small == 6
    return SuiteResult("counting", 2, passed,
                       "|S(C,N)| <= 4 N^(2 Delta) for N = 1..%d (%d failures); |S(C,4)| = %d"
                       % (N_max, len(bad), small),
                       {"failures": bad[:20], "count_at_max": counts[N_max], "S4": small})


def suite_conjecture(Ns=(10, 100, 1000, 10000), band=(Fraction(55, 100), Fraction(75, 100))):
    S = middle_third()
    counts = counting_series(S, max(Ns))
    slope = counting_exponent_fit(Ns, [counts[N] for N in Ns])
    inside = band[0] <= Fraction(slope) <= band[1]
    return SuiteResult("conjecture", 3, inside,
                       "least-squares slope %.4f (band [%s, %s], log2/log3 = 0.6309)"
                       % (slope, float(band[0]), float(band[1])),
                       {"slope": slope, "counts": [counts[N] for N in Ns], "N": list(Ns)},
                       fatal=False)


def suite_periods(q_max=5000):
    S = middle_third()
    ifs = S.ifs
    catalog = enumerate_rationals(S, q_max, budget=q_max)
    mismatches = []
    best = None
    for p, q in catalog.points:
        L, ratio, address = period_length_bound_check(ifs, Fraction(p, q))
        v, per = expansion_lengths(p, q, 3)
        if (len(address.preperiod), len(address.period)) != (v, per) or L != v + per:
            mismatches.append((p, q, L, v + per))
        # q = 1 (the endpoints 0 and 1) has the trivial ratio L/1 = 1
        if q > 1 and (best is None or _greater(ratio, best[0])):
            best = (ratio, p, q, L)
    return SuiteResult("periods", 4, not mismatches,
                       "%d points with q <= %d: %d length mismatches; max L/q^Delta over q >= 2 is %s at %d/%d"
                       % (len(catalog), q_max, len(mismatches), best[0].display(6), best[1], best[2]),
                       {"points": len(catalog), "mismatches": mismatches[:20],
                        "max_ratio": best[0], "argmax": [best[1], best[2], best[3]]})


def suite_extrinsic_bound(q_max=500):
    S = middle_third()
    failures = []
    checked = 0
    for q in range(1, q_max + 1):
        bound = lower_bound_value(S, q)
        hi = bound.hi
        mask = membership_mask(S, q)
        for p in range(q + 1):
            if mask[p] or gcd(p, q) != 1:
                continue
            checked += 1
            _, dist = nearest_point(S, Fraction(p, q))
            if not (dist > hi or compare(dist, bound) > 0):
                failures.append((p, q))
    spot = nearest_point(S, Fraction(1, 2))[1]
    passed = not failures and spot == Fraction(1, 6)
    return SuiteResult("extrinsic-bound", 5, passed,
                       "%d non-members with q <= %d: %d failures; d(C, 1/2) = %s"
                       % (checked, q_max, len(failures), spot),
                       {"checked": checked, "failures": failures[:20], "d_half": spot})


def minkowski_targets():
    return [QuadraticReal(-1, 1, 2, 1, label="sqrt(2)-1"), golden(), liouville_factorial(3, 2)]


def suite_minkowski(t_max=15, step=Fraction(1, 2)):
    grid = [k * step for k in range(int(t_max / step) + 1)]
    violations = []
    samples = 0
    touching = 0
    bad_det = 0
    for x in minkowski_targets():
        prof = minima_profile(x, grid)
        samples += len(prof.samples)
        for s in prof.samples:
            if s.band == "violated":
                violations.append((x.label, s.t))
            touching += s.band == "touching"
            bad_det += abs(s.determinant) != 1
    passed = not violations and not bad_det
    return SuiteResult("minkowski", 6, passed,
                       "%d samples on t = 0..%s: %d band violations, %d touching, %d dependent realizers"
                       % (samples, t_max, len(violations), touching, bad_det),
                       {"samples": samples, "violations": violations, "touching": touching})


def suite_sandwich(count=30):
    ok = total = 0
    failures = []
    for x in sandwich_targets():
        cf = ContinuedFraction(x)
        for t in range(count):
            total += 1
            w = convergent_sandwich_check(x, t, cf)
            if w.holds:
                ok += 1
            else:
                failures.append((x.label, t))
    return SuiteResult("sandwich", 7, ok == total,
                       "%d/%d convergents satisfy 1/(2 v v') <= |x - u/v| <= 1/(v v')" % (ok, total),
                       {"passed": ok, "total": total, "failures": failures})


def suite_liouville(stages=3):
    S = middle_third()
    build = liouville_build(S.ifs, 1, 2, LogCeilSchedule(), stages)
    certs_ok = all(all(st.certificates.values()) for st in build.stages)
    # theta_{k-1} is the finite base-3 number with 2's at a_1 .. a_{k-1}
    theta_ok = all(st.theta[0] == sum(Fraction(2, 3 ** a) for a in build.a[:st.k - 1])
                   for st in build.stages)
    wit = liouville_witness_check(build, 1)
    passed = certs_ok and theta_ok and wit.holds
    a_text = [a if a < 10 ** 6 else "~2^%d" % a.bit_length() for a in build.a]
    return SuiteResult("liouville", 8, passed,
                       "%d stages, a = %s, certificates %s; stage-1 scan over s <= %d: %s (%d non-members)"
                       % (stages, a_text, "all true" if certs_ok else "FAILED", wit.Q,
                          "holds" if wit.holds else "counterexample %s" % (wit.counterexample,), wit.checked),
                       {"a": build.a, "E": [st.E for st in build.stages],
                        "certificates": [st.certificates for st in build.stages],
                        "theta_formula": theta_ok, "witness_checked": wit.checked})


def suite_uniform(count=50, Qs=(10, 100, 1000), Nmax=10, seed=3):
    S = middle_third()
    ok = total = 0
    failures = []
    K_max = Fraction(0)
    for i in range(count):
        xi = AddressReal(S.ifs, random_generated_address(seed * 100 + i, 2))
        for Q in Qs:
            total += 1
            res = uniform_extrinsic(S, xi, Q, Nmax=Nmax)
            x = res.approximant[0]
            good = (not is_member(S, x).member and nearest_point(S, x)[1] > 0
                    and res.s <= Q and res.steps <= Nmax)
            ok += good
            if not good:
                failures.append((i, Q))
            K_max = max(K_max, res.K)
    zero = uniform_extrinsic(S, 0, 3, Nmax=5)
    zero_ok = zero.approximant == (Fraction(4, 3),) and zero.K == 4
    passed = ok == total and zero_ok
    return SuiteResult("uniform", 9, passed,
                       "%d/%d certified non-members, max realized K = %s; xi = 0, Q = 3 gives %s with K = %s"
                       % (ok, total, K_max, zero.approximant[0], zero.K),
                       {"passed": ok, "total": total, "K_max": K_max, "failures": failures})


def suite_digits(q_max=10 ** 4, corpus=1000):
    S = middle_third()
    first = safe_prime_scan(S, q_max)
    second = safe_prime_scan(S, q_max)
    stable = first.hits == second.hits and first.scanned == second.scanned
    hand = gcd_pattern(3, "02") == 2 and gcd_pattern(3, "20") == 2
    best = None
    for q in range(2, corpus + 1):
        mask = membership_mask(S, q)
        phi = first_bad_digit_table(S, q)
        worst = max((phi[p] for p in range(q) if not mask[p] and gcd(p, q) == 1), default=None)
        if not worst:
            continue
        ratio = LogInterval.exact(worst) / LogInterval.exact(q) ** S.Delta
        if best is None or _greater(ratio, best[0]):
            best = (ratio, worst, q)
    passed = stable and hand and best is not None
    return SuiteResult("digits", 10, passed,
                       "%d safe primes <= %d scanned, %d with members (stable: %s); gcd(2,8) = gcd(6,8) = 2: %s; "
                       "max phi/q0^Delta = %s (phi = %d, q0 = %d)"
                       % (len(first.scanned), q_max, len(first.hits), stable, hand,
                          best[0].display(6), best[1], best[2]),
                       {"hits": first.hits, "scanned": len(first.scanned),
                        "phi_ratio_max": best[0], "phi_ratio_argmax": [best[1], best[2]]})


def suite_roundtrip(count=10 ** 4, seed=4):
    systems = roundtrip_systems()
    rng = _rng(seed)
    ok = 0
    failures = []
    for i in range(count):
        ifs = systems[i % len(systems)]
        pre = random_word(rng, ifs.J, rng.randint(0, 6))
        per = random_word(rng, ifs.J, rng.randint(1, 6))
        x = periodic_fixed_point(ifs, pre, per)
        address, L = rational_to_address(ifs, x)
        back = periodic_fixed_point(ifs, address.preperiod, address.period)
        if back == x and L <= len(pre) + len(per):
            ok += 1
        elif len(failures) < 5:
            failures.append((ifs.label, Address.periodic(pre, per).to_text()))
    return SuiteResult("roundtrip", 11, ok == count,
                       "%d/%d address -> rational -> address round trips exact on %d systems"
                       % (ok, count, len(systems)),
                       {"passed": ok, "total": count, "failures": failures})


SUITES = OrderedDict([
    ("dirichlet", suite_dirichlet),
    ("counting", suite_counting),
    ("conjecture", suite_conjecture),
    ("periods", suite_periods),
    ("extrinsic-bound", suite_extrinsic_bound),
    ("minkowski", suite_minkowski),
    ("sandwich", suite_sandwich),
    ("liouville", suite_liouville),
    ("uniform", suite_uniform),
    ("digits", suite_digits),
    ("roundtrip", suite_roundtrip),
])


def run_suite(name, **kwargs):
    if name not in SUITES:
        raise KeyError(name)
    t0 = time.perf_counter()
    res = SUITES[name](**kwargs)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(names=None):
    return [run_suite(n) for n in (names or list(SUITES))]
