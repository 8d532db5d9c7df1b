"""Pure-Python reference implementation of the hot kernels.

Both kernels walk the remainder orbit r -> b*r mod q, which is the base-b
long division of r/q.  State r stands for the point r/q; state q stands for
the point 1, whose only expansion in [0, 1] is 0.(b-1)(b-1)...

The compiled module ``_ckernels`` implements exactly the same algorithms.
"""

UNKNOWN = 3
ON_PATH = 2


def member_mask(b, wmask, q):
    """Return a bytearray m of length q+1 with m[r] = 1 iff r/q lies in C_{b,W}.

    ``wmask`` is a length-b bytes object, ``wmask[d]`` nonzero iff d is an
    allowed digit.  Both base-b representations of terminating fractions are
    taken into account.
    """
    b = int(b)
    q = int(q)
    if q < 1:
        raise ValueError("q must be positive")
    ok = [1 if wmask[d] else 0 for d in range(b)]
    status = bytearray([UNKNOWN]) * (q + 1)
    status[0] = ok[0]
    status[q] = ok[b - 1]
    zero_ok = status[0]
    one_ok = status[q]
    for start in range(1, q):
        if status[start] != UNKNOWN:
            continue
        path = []
        cur = start
        while status[cur] == UNKNOWN:
            t = b * cur
            d = t // q
            nxt = t - d * q
            if nxt == 0:
                # x = d/b at this point: digit d then zeros, or d-1 then (b-1)s
                status[cur] = 1 if ((ok[d] and zero_ok) or (ok[d - 1] and one_ok)) else 0
                break
            status[cur] = ON_PATH
            path.append(cur)
            cur = nxt
        if status[cur] == ON_PATH:
            i = path.index(cur)
            cycle = path[i:]
            good = 1
            for s in cycle:
                if not ok[(b * s) // q]:
                    good = 0
                    break
            for s in cycle:
                status[s] = good
            del path[i:]
        for s in reversed(path):
            t = b * s
            d = t // q
            status[s] = 1 if (ok[d] and status[t - d * q] == 1) else 0
    return status


def first_bad_digits(b, wmask, q):
    """Return a list f of length q with f[r] = index of the first canonical
    digit of r/q outside W, or -1 when every canonical digit is allowed."""
    b = int(b)
    q = int(q)
    if q < 1:
        raise ValueError("q must be positive")
    ok = [1 if wmask[d] else 0 for d in range(b)]
    unknown = -3
    on_path = -2
    phi = [unknown] * q
    for start in range(q):
        if phi[start] != unknown:
            continue
        path = []
        cur = start
        while phi[cur] == unknown:
            d = (b * cur) // q
            if not ok[d]:
                phi[cur] = 0
                break
            phi[cur] = on_path
            path.append(cur)
            cur = b * cur - d * q
        if phi[cur] == on_path:
            i = path.index(cur)
            for s in path[i:]:
                phi[s] = -1
            del path[i:]
        for s in reversed(path):
            nxt = phi[b * s - ((b * s) // q) * q]
            phi[s] = -1 if nxt == -1 else nxt + 1
    return phi
