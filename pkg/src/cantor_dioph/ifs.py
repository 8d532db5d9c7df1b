"""Rational-preserving affine iterated function systems.

A map is f(y) = A y / q + b / s with an integer matrix A, integer vector b
and positive integers q, s.  Map indices are 1-based, as in the usual
address notation omega = (omega_1, omega_2, ...) with omega_i in {1..J}.

All points are tuples of Fractions, norms are sup norms, and every derived
constant that is not rational is a LogInterval.
"""
from fractions import Fraction
from functools import reduce
from math import gcd

from .arith import linalg
from .arith.intervals import LogInterval, lmax, lmin
from .errors import (AddressTooShort, AmbiguousBranch, IndexOutOfRange,
                     InsufficientPoints, NotInAttractor, NotUnimodular, UsageError)


def as_vector(x, d=None):
    """Coerce a scalar / sequence / "a,b" string into a tuple of Fractions."""
    if isinstance(x, str):
        parts = [p for p in x.split(",") if p.strip()]
        v = tuple(Fraction(p.strip()) for p in parts)
    elif isinstance(x, (int, Fraction)):
        v = (Fraction(x),)
    else:
        v = tuple(Fraction(a) for a in x)
    if d is not None and len(v) != d:
        raise UsageError("expected a %d-vector, got %d entries" % (d, len(v)))
    return v


def common_denominator(v):
    return reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in v), 1)


def _lcm(a, b):
    return a * b // gcd(a, b)


class AffineContraction:
    """f(y) = A y / q + b / s."""

    __slots__ = ("A", "q", "b", "s", "tau", "det_A")

    def __init__(self, A, q, b, s):
        A = tuple(tuple(int(a) for a in row) for row in A)
        b = tuple(int(x) for x in b)
        q, s = int(q), int(s)
        d = len(A)
        if d < 1 or any(len(row) != d for row in A) or len(b) != d:
            raise UsageError("A must be d x d and b a d-vector")
        if q < 1 or s < 1:
            raise UsageError("q and s must be positive")
        self.A, self.q, self.b, self.s = A, q, b, s
        self.tau = Fraction(linalg.row_sum_norm(A), q)
        if self.tau >= 1:
            raise UsageError("map is not a sup-norm contraction (tau = %s)" % self.tau)
        self.det_A = linalg.det(A)

    @property
    def d(self):
        return len(self.A)

    def __call__(self, y):
        return tuple(Fraction(sum(a * t for a, t in zip(row, y))) / self.q + Fraction(bi, self.s)
                     for row, bi in zip(self.A, self.b))

    def translation(self):
        return tuple(Fraction(bi, self.s) for bi in self.b)

    def inverse(self, y):
        """f^{-1}(y), requiring det A != 0."""
        if self.det_A == 0:
            raise UsageError("map is not invertible")
        rhs = tuple(self.q * (Fraction(yi) - Fraction(bi, self.s)) for yi, bi in zip(y, self.b))
        if abs(self.det_A) == 1:
            adj = linalg.adjugate(self.A)
            return tuple(Fraction(v) * self.det_A for v in linalg.mat_vec(adj, rhs))
        return linalg.solve(self.A, rhs)

    def fixed_point(self):
        d = self.d
        M = tuple(tuple((self.q if i == j else 0) - self.A[i][j] for j in range(d)) for i in range(d))
        rhs = tuple(Fraction(self.q * bi, self.s) for bi in self.b)
        return linalg.solve(M, rhs)

    def image_box(self, lo, hi):
        """Exact bounding box of f applied to the box [lo, hi]."""
        out_lo, out_hi = [], []
        for row, bi in zip(self.A, self.b):
            a = b = Fraction(0)
            for aij, l, h in zip(row, lo, hi):
                if aij >= 0:
                    a += aij * l
                    b += aij * h
                else:
                    a += aij * h
                    b += aij * l
            out_lo.append(a / self.q + Fraction(bi, self.s))
            out_hi.append(b / self.q + Fraction(bi, self.s))
        return tuple(out_lo), tuple(out_hi)

    def to_text(self):
        return "map\nA %s\nq %d\nb %s\ns %d" % (
            " ".join(str(a) for row in self.A for a in row), self.q,
            " ".join(str(x) for x in self.b), self.s)

    def __eq__(self, other):
        return (isinstance(other, AffineContraction) and
                (self.A, self.q, self.b, self.s) == (other.A, other.q, other.b, other.s))

    def __hash__(self):
        return hash((self.A, self.q, self.b, self.s))

    def __repr__(self):
        return "AffineContraction(A=%s, q=%d, b=%s, s=%d)" % (self.A, self.q, self.b, self.s)


# ---------------------------------------------------------------------------
# addresses


class Address:
    """Finite word, eventually periodic word, or lazily generated word.

    Symbols are map indices 1..J.  Positions are 0-based in the API
    (``symbol(0)`` is omega_1).
    """

    def __init__(self, kind, preperiod=(), period=(), generator=None, label=None):
        if kind not in ("finite", "periodic", "generated"):
            raise UsageError("unknown address kind %r" % kind)
        self.kind = kind
        self.preperiod = tuple(int(j) for j in preperiod)
        self.period = tuple(int(j) for j in period)
        self.generator = generator
        self.label = label
        self._memo = []
        if kind == "periodic" and not self.period:
            raise UsageError("period word must be nonempty")

    @classmethod
    def finite(cls, word):
        return cls("finite", preperiod=word)

    @classmethod
    def periodic(cls, preperiod, period):
        return cls("periodic", preperiod, period)

    @classmethod
    def generated(cls, fn, label=None):
        return cls("generated", generator=fn, label=label)

    def is_periodic(self):
        return self.kind == "periodic"

    def length(self):
        """Number of available symbols (None for infinite addresses)."""
        return len(self.preperiod) if self.kind == "finite" else None

    def symbol(self, i):
        if self.kind == "finite":
            if i >= len(self.preperiod):
                raise AddressTooShort("finite address has only %d symbols" % len(self.preperiod))
            return self.preperiod[i]
        if self.kind == "periodic":
            k = len(self.preperiod)
            return self.preperiod[i] if i < k else self.period[(i - k) % len(self.period)]
        while len(self._memo) <= i:
            self._memo.append(int(self.generator(len(self._memo))))
        return self._memo[i]

    def prefix(self, n):
        if self.kind == "finite" and n > len(self.preperiod):
            raise AddressTooShort("need %d symbols, address has %d" % (n, len(self.preperiod)))
        return tuple(self.symbol(i) for i in range(n))

    def canonical(self):
        """Shortest (preperiod, period) describing the same periodic word."""
        if self.kind != "periodic":
            return self
        per = self.period
        n = len(per)
        for k in range(1, n + 1):
            if n % k == 0 and per[:k] * (n // k) == per:
                per = per[:k]
                break
        pre = self.preperiod
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        return Address.periodic(pre, per)

    def to_text(self):
        if self.kind == "generated":
            return self.label or "<generated>"
        pre = ",".join(str(j) for j in self.preperiod)
        if self.kind == "finite":
            return pre
        return pre + "|" + ",".join(str(j) for j in self.period)

    @classmethod
    def parse(cls, text):
        """"1,2|2" is preperiod (1,2) and period (2); "1,2,1" is finite."""
        text = text.strip()

        def word(s):
            return tuple(int(t) for t in s.replace(" ", "").split(",") if t)
        if "|" in text:
            pre, per = text.split("|", 1)
            return cls.periodic(word(pre), word(per))
        return cls.finite(word(text))

    def __eq__(self, other):
        if not isinstance(other, Address) or self.kind != other.kind or self.kind == "generated":
            return self is other
        return (self.preperiod, self.period) == (other.preperiod, other.period)

    def __hash__(self):
        return hash((self.kind, self.preperiod, self.period))

    def __repr__(self):
        return "Address(%s)" % self.to_text()


# ---------------------------------------------------------------------------
# IFS


class RationalIFS:
    """A finite list of rational affine contractions of Q^d with derived
    constants.  ``digit_spec`` is (b, W) when the system came from the
    missing-digit shorthand."""

    def __init__(self, maps, label=None, digit_spec=None):
        maps = tuple(maps)
        if not maps:
            raise UsageError("an IFS needs at least one map")
        d = maps[0].d
        if any(m.d != d for m in maps):
            raise UsageError("all maps must have the same dimension")
        self.maps = maps
        self.d = d
        self.J = len(maps)
        self.label = label
        self.digit_spec = digit_spec
        self.tau_j = tuple(m.tau for m in maps)
        self.tau = max(self.tau_j)
        self.S = reduce(lambda a, b: a * b, (m.s for m in maps), 1)
        self.q_max = max(m.q for m in maps)
        self.unimodular = all(abs(m.det_A) == 1 for m in maps)
        self.box = attractor_box(maps)
        lo, hi = self.box
        self.diam_ub = max(h - l for l, h in zip(lo, hi))
        self._constants = None

    # -- construction -------------------------------------------------------
    @classmethod
    def missing_digit(cls, b, W):
        b = int(b)
        W = sorted(set(int(w) for w in W))
        maps = [AffineContraction(((1,),), b, (w,), b) for w in W]
        return cls(maps, label="missing-digit b=%d W=%s" % (b, ",".join(map(str, W))),
                   digit_spec=(b, tuple(W)))

    def f(self, j):
        if not 1 <= j <= self.J:
            raise IndexOutOfRange("map index %d outside 1..%d" % (j, self.J))
        return self.maps[j - 1]

    def zero(self):
        return tuple(Fraction(0) for _ in range(self.d))

    def to_text(self):
        if self.digit_spec:
            b, W = self.digit_spec
            return "missing-digit b=%d W=%s" % (b, ",".join(map(str, W)))
        return "dim %d\n%s" % (self.d, "\n".join(m.to_text() for m in self.maps))

    # -- derived constants --------------------------------------------------
    @property
    def mu_j(self):
        """log tau_j / log q_j as LogIntervals (None where undefined)."""
        out = []
        for m in self.maps:
            if m.tau == 0 or m.q == 1:
                out.append(None)
            else:
                out.append(LogInterval.log_ratio(m.tau, m.q))
        return tuple(out)

    @property
    def mu(self):
        vals = [v for v in self.mu_j if v is not None]
        return lmax(*vals) if vals else None

    @property
    def D(self):
        """-log J / log tau (0 when J = 1 or tau = 0)."""
        if self.J == 1 or self.tau == 0:
            return LogInterval.exact(0)
        out = LogInterval.log_ratio(self.J, 1 / self.tau)
        return out

    @property
    def gamma(self):
        """max_j log|p_j| / log q_j for d = 1, with p_j the 1x1 matrix entry."""
        if self.d != 1:
            return None
        vals = []
        for m in self.maps:
            p = abs(m.A[0][0])
            if p == 0 or m.q == 1:
                continue
            vals.append(LogInterval.log_ratio(p, m.q) if p != 1 else LogInterval.exact(0))
        return lmax(*vals) if vals else None

    @property
    def Delta(self):
        if not self.digit_spec:
            return None
        b, W = self.digit_spec
        return LogInterval.log_ratio(len(W), b)

    def __repr__(self):
        return "RationalIFS(%s)" % (self.label or "%d maps in dimension %d" % (self.J, self.d))


def _box_hull(boxes):
    los, his = zip(*boxes)
    d = len(los[0])
    return (tuple(min(l[i] for l in los) for i in range(d)),
            tuple(max(h[i] for h in his) for i in range(d)))


def _box_inside(inner, outer):
    (a, b), (c, e) = inner, outer
    return all(c[i] <= a[i] and b[i] <= e[i] for i in range(len(a)))


def _invariant(maps, box):
    return all(_box_inside(m.image_box(*box), box) for m in maps)


def attractor_box(maps, iterations=24):
    """An exact rational box B with f_j(B) inside B for every map.

    First try the hull of the fixed points; if that is not invariant, start
    from a sup-norm ball around their centroid with radius
    max_j |f_j(c) - c| / (1 - tau_j), which is invariant by the triangle
    inequality, and shrink it by the hull-of-images iteration (each iterate
    of an invariant box is again invariant and contained in it).
    """
    fixed = [m.fixed_point() for m in maps]
    d = len(fixed[0])
    hull = (tuple(min(p[i] for p in fixed) for i in range(d)),
            tuple(max(p[i] for p in fixed) for i in range(d)))
    if _invariant(maps, hull):
        return hull
    c = tuple(sum(p[i] for p in fixed) / len(fixed) for i in range(d))
    R = max(linalg.sup_norm(linalg.vec_sub(m(c), c)) / (1 - m.tau) for m in maps)
    box = (tuple(x - R for x in c), tuple(x + R for x in c))
    if not _invariant(maps, box):
        raise AssertionError("ball construction failed to give an invariant box")
    for _ in range(iterations):
        nxt = _box_hull([m.image_box(*box) for m in maps])
        if nxt == box:
            break
        box = nxt
        snapped = _snap_fixed_box(maps, box)
        if snapped is not None:
            return snapped
    assert _invariant(maps, box)
    return box


def _box_rows(m, i, lo, hi, upper):
    """Coefficients (on the 2d unknowns lo + hi) and constant of the lower
    (or upper) end of coordinate i of m(box), for the sign pattern of A."""
    d = len(lo)
    row = [Fraction(0)] * (2 * d)
    for k, a in enumerate(m.A[i]):
        use_hi = (a >= 0) == upper
        row[(d if use_hi else 0) + k] += Fraction(a, m.q)
    return row, Fraction(m.b[i], m.s)


def _snap_fixed_box(maps, box):
    """Exact fixed point of the hull-of-images map near `box`: pick for every
    box face the map realizing it, solve the resulting linear system and
    keep the answer only if it is an invariant box."""
    lo, hi = box
    d = len(lo)
    M, rhs = [], []
    for upper in (False, True):
        for i in range(d):
            ends = [m.image_box(lo, hi) for m in maps]
            vals = [e[1][i] if upper else e[0][i] for e in ends]
            j = vals.index(max(vals) if upper else min(vals))
            row, c = _box_rows(maps[j], i, lo, hi, upper)
            row[(d if upper else 0) + i] -= 1
            M.append(row)
            rhs.append(-c)
    try:
        sol = linalg.solve(M, rhs)
    except ZeroDivisionError:
        return None
    cand = (tuple(sol[:d]), tuple(sol[d:]))
    if any(a > b for a, b in zip(*cand)) or not _invariant(maps, cand):
        return None
    if _box_hull([m.image_box(*cand) for m in maps]) != cand:
        return None
    return cand


# ---------------------------------------------------------------------------
# operations


def _check_word(ifs, word):
    for j in word:
        if not 1 <= j <= ifs.J:
            raise IndexOutOfRange("map index %d outside 1..%d" % (j, ifs.J))


def eval_prefix(ifs, word, seed=None):
    """pi_1 o ... o pi_k (seed) for the word (omega_1..omega_k)."""
    word = tuple(word)
    _check_word(ifs, word)
    y = ifs.zero() if seed is None else as_vector(seed, ifs.d)
    for j in reversed(word):
        y = ifs.maps[j - 1](y)
    return y


def compose(ifs, word):
    """Integer form (P, Qd, r) of u = pi_1 o ... o pi_k with
    u(t) = P t / Qd + r / (S Qd); P integer matrix, Qd the product of the q's."""
    word = tuple(word)
    _check_word(ifs, word)
    S = ifs.S
    P = linalg.identity(ifs.d)
    Qd = 1
    r = tuple(0 for _ in range(ifs.d))
    for j in word:
        m = ifs.maps[j - 1]
        beta = tuple((S // m.s) * bi for bi in m.b)
        # u o f_j (t) = (P A t + (q P beta + q r)/S) / (Qd q)
        r = tuple(m.q * (x + y) for x, y in zip(linalg.mat_vec(P, beta), r))
        P = linalg.mat_mul(P, m.A)
        Qd *= m.q
    return P, Qd, r


def apply_composed(ifs, form, t):
    P, Qd, r = form
    return tuple((Fraction(x) + Fraction(ri, ifs.S)) / Qd
                 for x, ri in zip(linalg.mat_vec(P, t), r))


def composed_box(ifs, form, box=None):
    """Exact bounding box of u(box) for u given in integer form."""
    P, Qd, r = form
    lo, hi = box or ifs.box
    out_lo, out_hi = [], []
    for row, ri in zip(P, r):
        a = b = Fraction(0)
        for pij, l, h in zip(row, lo, hi):
            if pij >= 0:
                a += pij * l
                b += pij * h
            else:
                a += pij * h
                b += pij * l
        shift = Fraction(ri, ifs.S)
        out_lo.append((a + shift) / Qd)
        out_hi.append((b + shift) / Qd)
    return tuple(out_lo), tuple(out_hi)


def periodic_fixed_point_data(ifs, preperiod, period):
    """Exact point with address preperiod.period^infinity plus the
    unreduced denominator S q_(1) det(q_(2) I - P_(2))."""
    period = tuple(period)
    if not period:
        raise UsageError("period must be nonempty")
    P2, q2, r2 = compose(ifs, period)
    d = ifs.d
    M = tuple(tuple((q2 if i == j else 0) - P2[i][j] for j in range(d)) for i in range(d))
    detM = linalg.det(M)
    # q2 I - P2 is nonsingular because ||P2|| < q2 (contraction)
    assert detM != 0, "q I - P singular for a contraction"
    F2 = tuple(x / ifs.S for x in linalg.solve(M, r2))
    form1 = compose(ifs, preperiod)
    point = apply_composed(ifs, form1, F2)
    return point, ifs.S * form1[1] * abs(detM)


def periodic_fixed_point(ifs, preperiod, period):
    return periodic_fixed_point_data(ifs, preperiod, period)[0]


def address_point(ifs, address):
    """Exact point of an eventually periodic address."""
    if not address.is_periodic():
        raise UsageError("only eventually periodic addresses have exact points")
    return periodic_fixed_point(ifs, address.preperiod, address.period)


def in_box(x, box):
    lo, hi = box
    return all(l <= v <= h for v, l, h in zip(x, lo, hi))


def generic_selector(ifs, x, depth=6, width=256):
    """Index j (1-based) whose image f_j(C) contains x, or None.

    A branch survives if f_j^{-1}(x) lies in the attractor box; ties are
    broken by looking `depth` levels further (keeping at most `width`
    descendants per branch).  Persistent ties raise AmbiguousBranch.
    """
    alive = []
    for j, m in enumerate(ifs.maps, 1):
        y = m.inverse(x)
        if in_box(y, ifs.box):
            alive.append((j, [y]))
    for _ in range(depth):
        if len(alive) <= 1:
            break
        nxt = []
        for j, pts in alive:
            kids = []
            for y in pts:
                for m in ifs.maps:
                    z = m.inverse(y)
                    if in_box(z, ifs.box) and z not in kids:
                        kids.append(z)
            if kids:
                nxt.append((j, kids[:width]))
        alive = nxt
    if not alive:
        return None
    if len(alive) > 1:
        raise AmbiguousBranch("point %s lies in several images %s" %
                              (tuple(str(v) for v in x), [j for j, _ in alive]))
    return alive[0][0]


def default_selector(ifs):
    if ifs.digit_spec is not None:
        from .digits import digit_selector
        return digit_selector(ifs)
    return generic_selector


def rational_to_address(ifs, x, selector=None, max_steps=10 ** 6):
    """Eventually periodic address of a rational point of the attractor.

    Iterates a_{n+1} = f_{j_n}^{-1}(a_n) until a point repeats.  Returns
    (Address, L) with L = len(preperiod) + len(period).
    """
    if not ifs.unimodular:
        raise NotUnimodular("rational_to_address needs |det A_j| = 1 for all maps")
    x = as_vector(x, ifs.d)
    selector = selector or default_selector(ifs)
    seen = {}
    word = []
    a = x
    for n in range(max_steps + 1):
        if a in seen:
            i = seen[a]
            return Address.periodic(word[:i], word[i:]), n
        seen[a] = n
        j = selector(ifs, a)
        if j is None:
            raise NotInAttractor("%s is not in the attractor" % ",".join(str(v) for v in x))
        word.append(j)
        a = ifs.maps[j - 1].inverse(a)
    raise NotInAttractor("no repetition within %d steps" % max_steps)


def period_length_bound_check(ifs, x, selector=None):
    """(L, ratio) with L the measured total period length of the address of
    x = p/q and ratio = L / min(q^D, q^d) as a LogInterval."""
    x = as_vector(x, ifs.d)
    address, L = rational_to_address(ifs, x, selector)
    q = common_denominator(x)
    bound = lmin(LogInterval.exact(q) ** ifs.D, LogInterval.exact(q ** ifs.d)) if q > 1 else LogInterval.exact(1)
    return L, LogInterval.exact(L) / bound, address


def derived_constants(ifs):
    out = {
        "J": ifs.J,
        "d": ifs.d,
        "tau_j": ifs.tau_j,
        "tau": ifs.tau,
        "S": ifs.S,
        "q_max": ifs.q_max,
        "D": ifs.D,
        "mu_j": ifs.mu_j,
        "mu": ifs.mu,
        "gamma": ifs.gamma,
        "unimodular": ifs.unimodular,
        "box": ifs.box,
        "diam_ub": ifs.diam_ub,
    }
    if ifs.digit_spec:
        out["Delta"] = ifs.Delta
    return out


def _address_of(p):
    if isinstance(p, Address):
        return p
    if isinstance(p, tuple) and len(p) == 2 and isinstance(p[1], Address):
        return p[1]
    return getattr(p, "address")


def pigeonhole_witness(ifs, points, l):
    """Two indices (i, j), i < j, whose length-l address prefixes agree, so
    the points are within diam_ub * tau^l.  The lexicographically first such
    pair is returned.  Returns (i, j, bound)."""
    l = int(l)
    if l < 0:
        raise UsageError("l must be >= 0")
    points = list(points)
    if len(points) <= ifs.J ** l:
        raise InsufficientPoints("need more than J^l = %d points" % ifs.J ** l)
    first = {}
    best = None
    for idx, p in enumerate(points):
        key = _address_of(p).prefix(l)
        if key in first:
            cand = (first[key], idx)
            if best is None or cand < best:
                best = cand
        else:
            first[key] = idx
    assert best is not None, "pigeonhole failed"
    return best[0], best[1], ifs.diam_ub * ifs.tau ** l


class AddressReal:
    """ApproximableReal for coordinate `coord` of the point with a given address."""

    def __init__(self, ifs, address, coord=0):
        self.ifs = ifs
        self.address = address
        self.coord = coord
        self.label = "addr(%s)" % address.to_text()
        self._exact = address_point(ifs, address)[coord] if address.is_periodic() else None
        self._cache = {}

    def cylinder(self, n):
        """Bounding box of the image of the attractor box under the n-prefix."""
        got = self._cache.get(n)
        if got is None:
            got = composed_box(self.ifs, compose(self.ifs, self.address.prefix(n)))
            self._cache = {n: got}
        return got

    def enclose(self, eps):
        if self._exact is not None:
            return self._exact, self._exact
        eps = Fraction(eps)
        width = self.ifs.diam_ub
        n = 0
        # widths of cylinders shrink at least by tau_{omega_i} per symbol
        while width > eps:
            width *= self.ifs.tau_j[self.address.symbol(n) - 1]
            n += 1
            if width == 0:
                break
        lo, hi = self.cylinder(n)
        return lo[self.coord], hi[self.coord]


def parse_ifs(text):
    """Parse the IFS text format (see README) into a RationalIFS."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise UsageError("empty IFS description")
    if len(lines) == 1 and lines[0].startswith("missing-digit"):
        return _parse_missing_digit(lines[0])
    d = None
    maps = []
    cur = None

    def finish(cur):
        if cur is None:
            return
        missing = [k for k in ("A", "q", "b", "s") if k not in cur]
        if missing:
            raise UsageError("map block lacks %s" % ",".join(missing))
        flat = cur["A"]
        if len(flat) != d * d:
            raise UsageError("A needs %d entries" % (d * d))
        A = [flat[i * d:(i + 1) * d] for i in range(d)]
        if len(cur["b"]) != d or len(cur["q"]) != 1 or len(cur["s"]) != 1:
            raise UsageError("malformed map block")
        maps.append(AffineContraction(A, cur["q"][0], cur["b"], cur["s"][0]))

    for line in lines:
        key, _, rest = line.partition(" ")
        if key == "missing-digit":
            if maps or cur:
                raise UsageError("missing-digit shorthand cannot be mixed with map blocks")
            return _parse_missing_digit(line)
        if key == "dim":
            d = int(rest)
            if d < 1:
                raise UsageError("dim must be >= 1")
            continue
        if d is None:
            raise UsageError("first line must be 'dim <d>'")
        if key == "map":
            finish(cur)
            cur = {}
            continue
        if cur is None or key not in ("A", "q", "b", "s"):
            raise UsageError("unexpected line %r" % line)
        try:
            cur[key] = [int(t) for t in rest.split()]
        except ValueError:
            raise UsageError("non-integer entry in %r" % line)
    finish(cur)
    if not maps:
        raise UsageError("no maps given")
    return RationalIFS(maps)


def _parse_missing_digit(line):
    fields = dict(kv.split("=", 1) for kv in line.split()[1:] if "=" in kv)
    try:
        b = int(fields["b"])
        W = [int(w) for w in fields["W"].split(",") if w]
    except (KeyError, ValueError):
        raise UsageError("expected 'missing-digit b=<int> W=<digits>'")
    if b < 2 or len(W) < 1 or any(not 0 <= w < b for w in W):
        raise UsageError("digits must lie in 0..b-1")
    return RationalIFS.missing_digit(b, W)
