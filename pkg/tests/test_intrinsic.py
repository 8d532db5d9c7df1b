"""Intrinsic approximation and rational-point counting.

For Q a power of 3 the missing-digit bound q <= 3^(Q^Delta) is an integer
statement (3^(3^k Delta) = 3^(2^k)), and xi is enclosed by the exact
cylinder of a long prefix of its address; both give oracles that do not go
through the library's interval code."""
import random
from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantor_dioph.acceptance import random_generated_address, roundtrip_systems
from cantor_dioph.digits import MissingDigitSet, is_member, middle_third
from cantor_dioph.errors import AddressTooShort, BudgetExceeded, InsufficientData, UsageError
from cantor_dioph.ifs import Address, eval_prefix, parse_ifs, periodic_fixed_point
from cantor_dioph.intrinsic import (counting_bound, counting_exponent_fit, counting_series,
                                    enumerate_rationals, general_parameters, intrinsic_dirichlet,
                                    members_with_denominator)

F = Fraction
C3 = parse_ifs("missing-digit b=3 W=0,2")
S3 = middle_third()


def squares_address():
    return Address.generated(lambda i: 2 if int((i + 1) ** 0.5) ** 2 == i + 1 else 1, "squares")


def cylinder(ifs, word):
    """[lo, hi] of the middle-third cylinder with the given word."""
    lo = eval_prefix(ifs, word, (F(0),))[0]
    return lo, lo + F(1, 3 ** len(word))


def brute_catalog(S, N):
    """Oracle: every reduced p/q, q <= N, whose two base-b representations
    are checked by long division up to 2q digits."""
    out = []
    for q in range(1, N + 1):
        for p in range(q + 1):
            if gcd(p, q) != 1:
                continue
            if _digit_member(S, p, q):
                out.append((p, q))
    return out


def _digit_member(S, p, q):
    if p == q:
        return S.b - 1 in S.Wset
    digits, r = [], p
    for _ in range(2 * q + 2):
        r *= S.b
        digits.append(r // q)
        r %= q
    if all(c in S.Wset for c in digits):
        return True
    if r == 0 or all(c == 0 for c in digits[-q:]):
        nz = [i for i, c in enumerate(digits) if c]
        if not nz:
            return False
        i = nz[-1]
        return all(c in S.Wset for c in digits[:i]) and digits[i] - 1 in S.Wset and S.b - 1 in S.Wset
    return False


# ---------------------------------------------------------------------------
# intrinsic Dirichlet


def check_known_bounds(res, word, k):
    Q = 3 ** k
    p_over_q = res.approximant[0]
    q = p_over_q.denominator
    assert q == res.q and q <= 3 ** (2 ** k)
    lo, hi = cylinder(C3, word)
    target = F(3) / (Q * q)
    assert abs(lo - p_over_q) <= target and abs(hi - p_over_q) <= target
    assert is_member(S3, p_over_q).member
    addr = res.address
    assert periodic_fixed_point(C3, addr.preperiod, addr.period) == (p_over_q,)


@given(st.integers(0, 10 ** 6), st.integers(1, 5))
def test_intrinsic_random_addresses(seed, k):
    rng = random.Random(seed)
    word = tuple(rng.randint(1, 2) for _ in range(200))
    res = intrinsic_dirichlet(C3, Address.finite(word), 3 ** k)
    check_known_bounds(res, word, k)
    assert all(v is True for v in res.certificates.values())


def test_intrinsic_squares_address_in_catalog():
    addr = squares_address()
    word = addr.prefix(120)
    res = intrinsic_dirichlet(C3, addr, 9)
    check_known_bounds(res, word, 2)
    # the q cap is 3^(9^Delta) = 81: the approximant is in the oracle catalog
    assert (res.approximant[0].numerator, res.q) in set(brute_catalog(S3, 81))


def test_intrinsic_rational_target_is_within_bound():
    addr = Address.parse("|1,2")                # 1/4
    res = intrinsic_dirichlet(C3, addr, 27)
    err = abs(res.approximant[0] - F(1, 4))
    assert err <= F(3) / (27 * res.q)


def test_intrinsic_address_too_short_and_bad_Q():
    with pytest.raises(AddressTooShort):
        intrinsic_dirichlet(C3, Address.finite((1, 2)), 243)
    with pytest.raises(UsageError):
        intrinsic_dirichlet(C3, Address.finite((1, 2) * 20), F(1, 2))


def test_intrinsic_general_systems():
    for S in roundtrip_systems()[1:]:
        base = S.S * (2 * S.q_max) ** S.d
        for Q in [base, base ** 2, base ** 3 + 7]:
            N, l = general_parameters(S, Q)
            assert base ** N <= Q < base ** (N + 1)
            assert S.J ** l <= max(N, 1)
            res = intrinsic_dirichlet(S, random_generated_address(3, S.J), Q)
            assert res.q <= Q and res.q_unreduced % res.q == 0
            assert all(v for k, v in res.certificates.items() if isinstance(v, bool))
        with pytest.raises(UsageError):
            general_parameters(S, base - 1)


# ---------------------------------------------------------------------------
# enumeration and counting


def test_enumerate_examples():
    assert enumerate_rationals(S3, 1).points == [(0, 1), (1, 1)]
    cat = enumerate_rationals(S3, 4)
    assert sorted(cat.fractions()) == sorted(map(F, [0, 1, F(1, 3), F(2, 3), F(1, 4), F(3, 4)]))
    assert len(cat) == 6 and cat.bound_holds
    lo, hi = cat.bound.at(64)
    assert 22 < lo < hi < 24                       # 4 * 4^(2 Delta) = 4 * 16^Delta ~ 23.0
    with pytest.raises(UsageError):
        enumerate_rationals(S3, 0)
    with pytest.raises(BudgetExceeded):
        enumerate_rationals(S3, 50, budget=10)


def test_enumerate_matches_brute_force():
    for S in [S3, MissingDigitSet(5, [0, 4]), MissingDigitSet(5, [1, 3, 4]), MissingDigitSet(4, [0, 3])]:
        assert enumerate_rationals(S, 60).points == brute_catalog(S, 60)


def test_enumerate_parallel_equals_serial():
    a = enumerate_rationals(S3, 3000, jobs=1)
    b = enumerate_rationals(S3, 3000, jobs=3)
    assert a.points == b.points


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("CANTOR_DIOPH_BUDGET", "20")
    with pytest.raises(BudgetExceeded):
        enumerate_rationals(S3, 21)
    assert len(enumerate_rationals(S3, 20)) > 0


def test_catalog_is_symmetric():
    for S in [S3, MissingDigitSet(5, [0, 2, 4]), MissingDigitSet(7, [1, 5])]:
        pts = set(enumerate_rationals(S, 200).fractions())
        assert {S.min_point + S.max_point - x for x in pts} == pts


def test_counting_bound_on_grid():
    counts = counting_series(S3, 400)
    D = mpmath.log(2) / mpmath.log(3)
    for N in range(1, 401):
        assert counts[N] <= 4 * mpmath.power(N, 2 * D)
    assert counts[4] == 6


def test_members_with_denominator_reduced():
    for q in [3, 4, 10, 13, 80]:
        ps = members_with_denominator(S3, q)
        assert all(gcd(p, q) == 1 and is_member(S3, F(p, q)).member for p in ps)


def test_counting_bound_value():
    lo, hi = counting_bound(S3, 1).at(64)
    assert lo == hi == 4


def test_counting_exponent_fit():
    assert counting_exponent_fit([10, 100, 1000], [5, 5, 5]) == 0
    assert abs(counting_exponent_fit([10, 100, 1000], [10, 100, 1000]) - 1) < 1e-12
    with pytest.raises(InsufficientData):
        counting_exponent_fit([10, 10, 100], [1, 1, 2])
    with pytest.raises(InsufficientData):
        counting_exponent_fit([10, 100], [1, 2])
