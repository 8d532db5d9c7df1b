"""IFS core: composition, fixed points, addresses of rational points and
derived constants.  Fixed points are cross-checked with sympy matrices."""
import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from cantor_dioph.acceptance import roundtrip_systems
from cantor_dioph.arith.intervals import LogInterval
from cantor_dioph.digits import digits_to_rational
from cantor_dioph.errors import (IndexOutOfRange, InsufficientPoints, NotInAttractor, NotUnimodular,
                                 UsageError)
from cantor_dioph.ifs import (AffineContraction, Address, RationalIFS, attractor_box, derived_constants,
                              eval_prefix, parse_ifs, period_length_bound_check, periodic_fixed_point,
                              pigeonhole_witness, rational_to_address)

F = Fraction
C3 = parse_ifs("missing-digit b=3 W=0,2")
SYSTEMS = roundtrip_systems()


def mpf(x):
    return mpmath.mpf(x.numerator) / x.denominator


def sympy_fixed_point(ifs, pre, per):
    """Oracle: compose the maps as sympy matrices and solve (I - M) x = c."""
    d = ifs.d

    def affine(j):
        m = ifs.maps[j - 1]
        return sympy.Matrix(m.A) / m.q, sympy.Matrix([sympy.Rational(bi, m.s) for bi in m.b])

    def compose(word):
        M, c = sympy.eye(d), sympy.zeros(d, 1)
        for j in word:             # x -> f_{w1}(f_{w2}(... x))
            A, b = affine(j)
            M, c = M * A, M * b + c
        return M, c
    M, c = compose(per)
    x = (sympy.eye(d) - M).LUsolve(c)
    Mp, cp = compose(pre)
    y = Mp * x + cp
    return tuple(F(int(v.p), int(v.q)) for v in y)


# ---------------------------------------------------------------------------
# eval_prefix and fixed points


def test_eval_prefix_examples():
    assert eval_prefix(C3, (1, 2), (F(0),)) == (F(2, 9),)
    assert eval_prefix(C3, (), (F(5),)) == (F(5),)
    assert eval_prefix(C3, (2, 2, 2), (F(0),)) == (F(26, 27),)
    with pytest.raises(IndexOutOfRange):
        eval_prefix(C3, (3,), (F(0),))


def test_periodic_fixed_point_examples():
    assert periodic_fixed_point(C3, (), (1, 2)) == (F(1, 4),)
    assert periodic_fixed_point(C3, (1,), (2,)) == (F(1, 3),)
    for S in SYSTEMS:
        for j, m in enumerate(S.maps, 1):
            assert periodic_fixed_point(S, (), (j,)) == tuple(m.fixed_point())
            assert m(m.fixed_point()) == tuple(m.fixed_point())


def test_one_quarter_is_base3_02_repeating():
    # long division of 1/4 in base 3
    digits, r = [], F(1, 4)
    for _ in range(6):
        r *= 3
        digits.append(int(r))
        r -= int(r)
    assert digits == [0, 2, 0, 2, 0, 2]


def words(J, min_size=0, max_size=6):
    return st.lists(st.integers(1, J), min_size=min_size, max_size=max_size).map(tuple)


@given(st.sampled_from(range(len(SYSTEMS))), st.data())
def test_periodic_fixed_point_matches_sympy(k, data):
    S = SYSTEMS[k]
    pre = data.draw(words(S.J))
    per = data.draw(words(S.J, 1, 5))
    assert periodic_fixed_point(S, pre, per) == sympy_fixed_point(S, pre, per)


@given(st.sampled_from(range(len(SYSTEMS))), st.data())
def test_eval_prefix_composition(k, data):
    S = SYSTEMS[k]
    w1, w2 = data.draw(words(S.J)), data.draw(words(S.J))
    seed = tuple(data.draw(st.fractions(-3, 3, max_denominator=50)) for _ in range(S.d))
    assert eval_prefix(S, w1 + w2, seed) == eval_prefix(S, w1, eval_prefix(S, w2, seed))


@given(st.sampled_from(range(len(SYSTEMS))), st.data())
def test_period_power_gives_same_point(k, data):
    S = SYSTEMS[k]
    pre, per = data.draw(words(S.J)), data.draw(words(S.J, 1, 4))
    n = data.draw(st.integers(1, 4))
    assert periodic_fixed_point(S, pre, per * n) == periodic_fixed_point(S, pre, per)


@given(st.sampled_from(range(len(SYSTEMS))), st.data())
def test_contraction_factor_is_certified(k, data):
    S = SYSTEMS[k]
    frac = st.fractions(-5, 5, max_denominator=100)
    x = tuple(data.draw(frac) for _ in range(S.d))
    y = tuple(data.draw(frac) for _ in range(S.d))
    for m in S.maps:
        fx, fy = m(x), m(y)
        assert max(abs(a - b) for a, b in zip(fx, fy)) <= m.tau * max(abs(a - b) for a, b in zip(x, y))


def test_attractor_box_is_invariant():
    for S in SYSTEMS + [parse_ifs("missing-digit b=5 W=0,4"), parse_ifs("missing-digit b=7 W=1,3,5")]:
        lo, hi = S.box
        for m in S.maps:
            ilo, ihi = m.image_box(lo, hi)
            assert all(l <= a and b <= h for a, b, l, h in zip(ilo, ihi, lo, hi))
        assert attractor_box(S.maps) == S.box


# ---------------------------------------------------------------------------
# addresses of rational points


def test_rational_to_address_examples():
    assert rational_to_address(C3, (F(1, 4),)) == (Address.periodic((), (1, 2)), 2)
    assert rational_to_address(C3, (F(0),)) == (Address.periodic((), (1,)), 1)
    assert rational_to_address(C3, (F(1, 3),)) == (Address.periodic((1,), (2,)), 2)
    with pytest.raises(NotInAttractor):
        rational_to_address(C3, (F(1, 2),))


def test_rational_to_address_needs_unimodular():
    S = RationalIFS([AffineContraction(((2,),), 5, (0,), 1), AffineContraction(((2,),), 5, (3,), 5)])
    assert not S.unimodular
    with pytest.raises(NotUnimodular):
        rational_to_address(S, (F(0),))


@given(st.sampled_from(range(len(SYSTEMS))), st.data())
def test_round_trip(k, data):
    S = SYSTEMS[k]
    pre, per = data.draw(words(S.J)), data.draw(words(S.J, 1, 5))
    x = periodic_fixed_point(S, pre, per)
    addr, L = rational_to_address(S, x)
    assert periodic_fixed_point(S, addr.preperiod, addr.period) == x
    assert L == len(addr.preperiod) + len(addr.period)


@given(st.lists(st.sampled_from([0, 2]), max_size=5), st.lists(st.sampled_from([0, 2]), min_size=1, max_size=5))
def test_middle_third_address_agrees_with_base3_digits(pre, per):
    # Oracle: the base-3 digit formula, independent of the IFS machinery
    x = digits_to_rational(pre, per, 3)
    got = periodic_fixed_point(C3, [1 + c // 2 for c in pre], [1 + c // 2 for c in per])
    assert got == (x,)


def test_period_length_bound_examples():
    L, ratio, _ = period_length_bound_check(C3, (F(1, 4),))
    assert L == 2
    v = 2 / mpmath.power(4, mpmath.log(2) / mpmath.log(3))
    lo, hi = ratio.at(128)
    assert mpf(lo) <= v <= mpf(hi)
    assert mpf(hi) - mpf(lo) < mpmath.mpf(10) ** -30
    assert period_length_bound_check(C3, (F(0),))[0] == 1
    assert period_length_bound_check(C3, (F(1, 10),))[0] == 4


# ---------------------------------------------------------------------------
# constants and parsing


def test_derived_constants_middle_third():
    c = derived_constants(C3)
    assert c["tau"] == F(1, 3) and c["J"] == 2 and c["diam_ub"] == 1
    assert c["gamma"].at(64) == (0, 0)
    ref = mpmath.log(2) / mpmath.log(3)
    for key in ("D", "Delta"):
        lo, hi = c[key].at(128)
        assert mpf(lo) <= ref <= mpf(hi)


def test_degenerate_single_map():
    S = RationalIFS([AffineContraction(((1,),), 2, (0,), 1)])
    assert S.J == 1 and S.diam_ub == 0
    assert S.D.at(64) == (0, 0)


def test_five_adic_constants():
    S = parse_ifs("missing-digit b=5 W=0,4")
    assert S.diam_ub == 1
    assert S.Delta.ratio == (2, 5)


def test_pigeonhole_witness():
    pts = [Address.parse("1|2"), Address.parse("2|1"), Address.parse("|1")]
    i, j, bound = pigeonhole_witness(C3, pts, 1)
    assert (i, j) == (0, 2) and bound == F(1, 3)
    with pytest.raises(InsufficientPoints):
        pigeonhole_witness(C3, pts[:2], 1)


def test_pigeonhole_on_shift_orbit_distance_is_exact():
    rng = random.Random(5)
    word = [rng.randint(1, 2) for _ in range(200)]
    pts = [Address.finite(word[n:n + 20]) for n in range(100)]
    i, j, bound = pigeonhole_witness(C3, pts, 6)
    assert bound == F(1, 3 ** 6)
    # the two points x_i, x_j of C with these 20-symbol prefixes lie in one 6-cylinder
    lo_i = eval_prefix(C3, pts[i].prefix(20), (F(0),))[0]
    lo_j = eval_prefix(C3, pts[j].prefix(20), (F(0),))[0]
    assert abs(lo_i - lo_j) <= bound


def test_parse_ifs_text_format():
    text = """# rotation system
    dim 2
    map
    A 1 0 0 1
    q 3
    b 0 0
    s 1
    map
    A 0 -1 1 0
    q 3
    b 1 0
    s 1
    """
    S = parse_ifs(text)
    assert S.d == 2 and S.J == 2 and S.unimodular
    assert parse_ifs(S.to_text()).maps[1].A == ((0, -1), (1, 0))
    for bad in ["", "dim 1\nmap\nA 1\nq 3\n", "missing-digit b=3 W=0,5", "dim 1\nmap\nA 3\nq 3\nb 0\ns 1"]:
        with pytest.raises(UsageError):
            parse_ifs(bad)


def test_mu_uses_log_tau_over_log_q():
    mu = C3.mu_j[0]
    assert isinstance(mu, LogInterval)
    lo, hi = mu.at(64)
    assert lo <= -1 <= hi
