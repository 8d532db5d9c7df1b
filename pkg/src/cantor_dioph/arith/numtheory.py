"""Primality, factoring and multiplicative orders.

Factoring is trial division by primes up to 10**6 followed by Brent's
variant of Pollard rho under an iteration budget.  Primality is
Miller-Rabin with the first thirteen prime bases, which is deterministic
below 3.3 * 10**24; larger inputs raise FactorizationLimit rather than
returning a probabilistic verdict.
"""
from math import gcd, isqrt

from ..errors import FactorizationLimit, NotCoprime

TRIAL_LIMIT = 10 ** 6
RHO_BUDGET = 2 * 10 ** 6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981   # deterministic for n below this

_primes = None


def small_primes():
    """All primes below TRIAL_LIMIT (sieved once)."""
    global _primes
    if _primes is None:
        n = TRIAL_LIMIT
        sieve = bytearray([1]) * n
        sieve[0:2] = b"\x00\x00"
        for i in range(2, isqrt(n - 1) + 1):
            if sieve[i]:
                sieve[i * i::i] = bytearray(len(range(i * i, n, i)))
        _primes = [i for i in range(n) if sieve[i]]
    return _primes


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise FactorizationLimit("primality of %d-bit number not certifiable here" % n.bit_length())
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n, c, budget):
    """One Brent-rho attempt with polynomial x^2 + c; returns a factor or None."""
    y, r, q, g = 2, 1, 1, 1
    m = 128
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        used += r
        r *= 2
        if used > budget:
            return None
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
    return g if g != n else None


def _split(n, budget):
    for c in (1, 3, 5, 7):
        f = _brent(n, c, budget // 4)
        if f is not None:
            return f
    raise FactorizationLimit("could not split %d within budget" % n)


def factorize(n, budget=None):
    """Prime factorization of a positive integer as a dict {p: e}."""
    n = int(n)
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    budget = RHO_BUDGET if budget is None else budget
    out = {}
    for p in small_primes():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if m < _MR_LIMIT:
                if is_prime(m):
                    out[m] = out.get(m, 0) + 1
                    continue
            elif pow(2, m - 1, m) == 1:
                raise FactorizationLimit("cannot certify the %d-bit cofactor" % m.bit_length())
            r = isqrt(m)
            if r * r == m:
                stack += [r, r]
                continue
            f = _split(m, budget)
            stack += [f, m // f]
    return dict(sorted(out.items()))


def totient(n):
    out = 1
    for p, e in factorize(n).items():
        out *= (p - 1) * p ** (e - 1)
    return out


def carmichael(n):
    """Carmichael's function: the exponent of (Z/nZ)^*."""
    out = 1
    for p, e in factorize(n).items():
        if p == 2 and e >= 3:
            lam = 1 << (e - 2)
        else:
            lam = (p - 1) * p ** (e - 1)
        out = out * lam // gcd(out, lam)
    return out


def mult_order(base, modulus, budget=None):
    """Least m >= 1 with base**m == 1 (mod modulus)."""
    base, modulus = int(base), int(modulus)
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if modulus == 1:
        return 1
    if gcd(base, modulus) != 1:
        raise NotCoprime("gcd(%d, %d) > 1" % (base, modulus))
    order = carmichael(modulus)
    for p in factorize(order, budget):
        while order % p == 0 and pow(base, order // p, modulus) == 1:
            order //= p
    return order


def is_safe_prime(q):
    return q >= 5 and q % 2 == 1 and is_prime(q) and is_prime((q - 1) // 2)


def coprime_split(C, B):
    """Write C = C1 * C2 with every prime of C1 dividing B and gcd(C2, B) = 1."""
    C1 = 1
    g = gcd(C, B)
    while g > 1:
        C //= g
        C1 *= g
        g = gcd(C, B)
    return C1, C


def expansion_lengths(p, q, base):
    """(preperiod, period) lengths of the base expansion of p/q: the least v
    with C1 | base**v, and the order of base modulo C2, where q = C1*C2 in
    lowest terms with C1 built from primes dividing base."""
    q //= gcd(p, q)
    C1, C2 = coprime_split(q, base)
    v, t = 0, 1 % C1
    while t:
        t = t * base % C1
        v += 1
    return v, mult_order(base, C2)
