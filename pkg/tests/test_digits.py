"""Missing-digit sets: expansions, membership with dual representations,
nearest points, first bad digits and the digit-pattern statistics.

The oracles here are written from scratch: plain long division with cycle
detection, and a recursive cylinder test for "this open interval misses C".
"""
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from cantor_dioph import kernels
from cantor_dioph.arith.numtheory import expansion_lengths
from cantor_dioph.digits import (MissingDigitSet, digits_to_rational, divisor_digit_sets, dual_expansion,
                                 expand, first_bad_digit, first_bad_digit_table, gap_neighbours, gcd_bound_ratio,
                                 gcd_pattern, is_member, is_primitive, membership_mask, middle_third,
                                 nearest_point, pthm_ratio, safe_prime_scan, text_to_word, word_to_text)
from cantor_dioph.errors import MemberInput, NonPrimitivePeriod, NotADivisor, UsageError

F = Fraction
C = middle_third()
SETS = [C, MissingDigitSet(5, [0, 4]), MissingDigitSet(5, [1, 2, 4]), MissingDigitSet(7, [0, 3, 6]),
        MissingDigitSet(10, [0, 2, 4, 6, 8]), MissingDigitSet(4, [1, 2])]


# ---------------------------------------------------------------------------
# oracles


def long_division(x, b):
    """(preperiod, period) of x in [0,1) by long division with remainder
    cycle detection; terminating expansions get period (0,)."""
    p, q = x.numerator, x.denominator
    seen, digits, r = {}, [], p
    while r not in seen:
        seen[r] = len(digits)
        r *= b
        digits.append(r // q)
        r %= q
    k = seen[r]
    return tuple(digits[:k]), tuple(digits[k:])


def oracle_member(S, x):
    """Both base-b representations of x checked digit by digit."""
    if x < 0 or x > 1:
        return False
    if x == 1:
        return S.b - 1 in S.Wset
    pre, per = long_division(x, S.b)
    if set(pre + per) <= S.Wset:
        return True
    if per == (0,) and pre:
        # the dual: decrease the last nonzero digit, then (b-1) forever
        i = max(k for k, c in enumerate(pre) if c)
        dual = pre[:i] + (pre[i] - 1,)
        return set(dual) | {S.b - 1} <= S.Wset
    return False


def misses_set(S, a, b, lo=F(0), width=F(1), depth=0):
    """True iff the open interval (a, b) contains no point of C, by recursion
    on the cylinders lo + width * [minPoint, maxPoint]."""
    clo = lo + width * S.min_point
    chi = lo + width * S.max_point
    if b <= clo or a >= chi:
        return True
    if depth > 60:
        raise RuntimeError("oracle recursion too deep")
    w = width / S.b
    return all(misses_set(S, a, b, lo + d * w, w, depth + 1) for d in S.W)


# ---------------------------------------------------------------------------
# expand


def test_expand_examples():
    e = expand(F(1, 7), 10)
    assert (e.preperiod, e.period, e.lengths) == ((), (1, 4, 2, 8, 5, 7), (0, 6))
    e = expand(F(1, 6), 10)
    assert (e.preperiod, e.period) == ((1,), (6,))
    e = expand(F(1, 4), 2)
    assert (e.preperiod, e.period) == ((0, 1), (0,))
    assert e.to_text() == "0.01(0)"


@given(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 5).filter(lambda x: x < 1),
       st.integers(2, 36))
def test_expand_matches_long_division_and_length_formula(x, b):
    e = expand(x, b)
    assert (e.preperiod, e.period) == long_division(x, b)
    assert e.to_rational() == x
    assert is_primitive(e.period)
    if x.numerator:
        assert e.lengths == expansion_lengths(x.numerator, x.denominator, b)


def test_expand_lengths_against_sympy_order():
    for q in [7, 13, 49, 97, 2 * 3 * 7 * 11]:
        C2 = q
        while C2 % 2 == 0 or C2 % 5 == 0:
            C2 //= 2 if C2 % 2 == 0 else 5
        assert expand(F(1, q), 10).lengths[1] == (sympy.n_order(10, C2) if C2 > 1 else 1)


def test_dual_expansion():
    d = dual_expansion(F(1, 3), 3)
    assert (d.preperiod, d.period) == ((0,), (2,))
    assert dual_expansion(F(1, 4), 3) is None


# ---------------------------------------------------------------------------
# membership


def test_membership_examples():
    m = is_member(C, F(1, 4))
    assert m.member and (m.witness.preperiod, m.witness.period) == ((), (0, 2))
    m = is_member(C, F(1, 3))
    assert m.member and (m.witness.preperiod, m.witness.period) == ((0,), (2,))
    m = is_member(C, F(1, 2))
    assert not m.member and m.offending[0] == 0


@given(st.sampled_from(range(len(SETS))), st.fractions(min_value=-1, max_value=2, max_denominator=3000))
def test_membership_matches_oracle(k, x):
    S = SETS[k]
    m = is_member(S, x)
    assert m.member == oracle_member(S, x)
    if m.member and x < 1:
        assert m.witness.to_rational() == x
        assert set(m.witness.preperiod + m.witness.period) <= S.Wset


def test_membership_mask_matches_is_member_both_backends():
    for S in SETS:
        for q in list(range(1, 60)) + [243, 728, 1001]:
            ref = bytearray(int(is_member(S, F(p, q)).member) for p in range(q + 1))
            assert kernels.member_mask(S.b, S.W, q) == ref
            assert membership_mask(S, q) == ref


def test_streaming_rejection_of_huge_denominators():
    # a non-member with a 40-digit denominator is rejected without expanding its period
    q = 10 ** 40 + 3
    x = F(q // 2, q)
    assert not is_member(C, x).member
    assert is_member(C, digits_to_rational([0, 2], [2, 0, 0, 2, 2, 2, 0], 3)).member


# ---------------------------------------------------------------------------
# nearest point


def test_nearest_point_examples():
    assert nearest_point(C, F(1, 2)) == (F(1, 3), F(1, 6))
    assert nearest_point(C, F(1, 4)) == (F(1, 4), 0)
    assert nearest_point(C, F(4, 9)) == (F(1, 3), F(1, 9))
    assert gap_neighbours(C, F(1, 2)) == (F(1, 3), F(2, 3))


@given(st.sampled_from(range(len(SETS))), st.fractions(min_value=-1, max_value=2, max_denominator=500))
def test_nearest_point_is_exact(k, x):
    S = SETS[k]
    point, dist = nearest_point(S, x)
    assert dist == abs(x - point)
    assert is_member(S, point).member
    assert (dist == 0) == is_member(S, x).member
    if dist:
        assert misses_set(S, x - dist, x + dist)
        # ties go to the smaller point
        if point > x:
            assert not is_member(S, x - dist).member


def test_distance_peaks_at_gap_midpoints():
    for lo, hi in [(F(1, 3), F(2, 3)), (F(1, 9), F(2, 9)), (F(7, 27), F(8, 27))]:
        mid = (lo + hi) / 2
        peak = nearest_point(C, mid)[1]
        assert peak == (hi - lo) / 2
        for k in range(1, 12):
            x = lo + (hi - lo) * F(k, 12)
            assert nearest_point(C, x)[1] <= peak


# ---------------------------------------------------------------------------
# first bad digit


def test_first_bad_digit_examples():
    assert first_bad_digit(C, F(1, 2)) == 0
    assert first_bad_digit(C, F(1, 4)) is None
    # 7/9 = 0.21 = 0.20222...: the written digit c_1 = 1 is bad, but the dual
    # representation is all in W, so the membership-keyed value is None
    assert first_bad_digit(C, F(7, 9), literal=True) == 1
    assert first_bad_digit(C, F(7, 9)) is None
    assert is_member(C, F(7, 9)).member


@given(st.sampled_from(range(len(SETS))), st.fractions(min_value=0, max_value=1, max_denominator=2000).filter(lambda x: x < 1))
def test_first_bad_digit_matches_long_division(k, x):
    S = SETS[k]
    pre, per = long_division(x, S.b)
    digits = pre + per * 3
    literal = next((i for i, c in enumerate(digits) if c not in S.Wset), None)
    assert first_bad_digit(S, x, literal=True) == literal
    expected = None if oracle_member(S, x) else literal
    assert first_bad_digit(S, x) == expected


def test_first_bad_digit_table_matches_scalar():
    for S in SETS[:4]:
        for q in [7, 10, 26, 81, 242]:
            table = first_bad_digit_table(S, q)      # literal, canonical-expansion index
            for p in range(q):
                phi = first_bad_digit(S, F(p, q), literal=True)
                assert table[p] == (-1 if phi is None else phi)


def test_first_bad_digit_ratio_examples():
    assert pthm_ratio(C, F(1, 2))[0] == 0
    x = digits_to_rational([], [0, 2, 0, 2, 0, 2, 1], 3)
    q0 = (3 ** 7 - 1) // gcd(sum(c * 3 ** (6 - i) for i, c in enumerate([0, 2, 0, 2, 0, 2, 1])), 3 ** 7 - 1)
    assert x.denominator == q0
    phi, ratio = pthm_ratio(C, x)
    assert phi == 6
    lo, hi = ratio.at(128)
    ref = 6 / float(q0) ** (sympy.log(2) / sympy.log(3)).evalf(30)
    assert float(lo) <= ref <= float(hi) + 1e-15
    with pytest.raises(MemberInput):
        pthm_ratio(C, F(1, 4))


# ---------------------------------------------------------------------------
# digit-pattern statistics


def test_gcd_pattern_examples():
    assert gcd_pattern(3, (0, 2)) == gcd(2, 8) == 2
    assert gcd_pattern(3, (2, 0)) == gcd(6, 8) == 2
    with pytest.raises(NonPrimitivePeriod):
        gcd_pattern(3, (0, 0))
    with pytest.raises(UsageError):
        gcd_pattern(3, (0, 1), W=(0, 2))


@given(st.lists(st.sampled_from([0, 2]), min_size=1, max_size=14))
def test_gcd_pattern_property(word):
    word = tuple(word)
    assume(is_primitive(word))
    N = len(word)
    value = int("".join(map(str, word)), 3)
    g = gcd_pattern(3, word)
    assert g == sympy.gcd(value, 3 ** N - 1)
    ratio = gcd_bound_ratio(3, word, C.Delta)
    lo, hi = ratio.at(64)
    assert lo > 0


def test_divisor_digit_sets_examples():
    r = divisor_digit_sets(3, 4, 2, 0)
    assert r.d_prime == 40 and r.word == (1, 1, 1, 1)
    assert r.W1 == r.W2 == {1} and r.equal
    r = divisor_digit_sets(3, 2, 8, 1)
    assert r.d_prime == 1 and r.word == (0, 1) and r.W2 == {0, 1}
    with pytest.raises(NotADivisor):
        divisor_digit_sets(3, 4, 81, 0)


def test_safe_prime_scan_small():
    assert safe_prime_scan(C, 4).scanned == []
    scan = safe_prime_scan(C, 20)
    assert scan.scanned == [5, 7, 11]
    # exhaustive oracle per q
    for q in scan.scanned:
        members = [p for p in range(1, q) if oracle_member(C, F(p, q))]
        assert dict(scan.hits).get(q, []) == members


def test_safe_prime_scan_is_stable():
    a, b = safe_prime_scan(C, 2000), safe_prime_scan(C, 2000)
    assert a.hits == b.hits and a.scanned == b.scanned
    assert all(sympy.isprime(q) and sympy.isprime((q - 1) // 2) for q in a.scanned)


def test_digit_text_round_trip():
    assert word_to_text((1, 10, 35), 36) == "1az"
    assert text_to_word("1az", 36) == (1, 10, 35)
    assert word_to_text((1, 40), 50) == "1,40"
    assert text_to_word("1,40", 50) == (1, 40)


def test_set_validation():
    for b, W in [(2, [0, 1]), (3, [0]), (3, [0, 1, 2]), (3, [0, 3])]:
        with pytest.raises(UsageError):
            MissingDigitSet(b, W)
    assert MissingDigitSet(5, [0, 4]).diam == 1
