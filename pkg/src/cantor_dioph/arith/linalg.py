"""Tiny exact linear algebra on tuples of ints / Fractions (d is 1, 2 or 3
in practice, so clarity beats speed)."""
from fractions import Fraction


def identity(d):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)) for i in range(n))


def mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def sup_norm(v):
    return max((abs(a) for a in v), default=0)


def row_sum_norm(A):
    """Operator norm induced by the sup norm: the largest absolute row sum."""
    return max(sum(abs(a) for a in row) for row in A)


def det(A):
    """Exact determinant (Bareiss fraction-free elimination for ints,
    plain elimination for Fractions)."""
    n = len(A)
    M = [list(row) for row in A]
    if all(isinstance(a, int) for row in M for a in row):
        sign, prev = 1, 1
        for k in range(n - 1):
            if M[k][k] == 0:
                for i in range(k + 1, n):
                    if M[i][k] != 0:
                        M[k], M[i] = M[i], M[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1]
    M = [[Fraction(a) for a in row] for row in M]
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            out = -out
        out *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            for j in range(k, n):
                M[i][j] -= f * M[k][j]
    return out


def solve(A, b):
    """Solve A x = b exactly by Gaussian elimination; A must be nonsingular."""
    n = len(A)
    M = [[Fraction(a) for a in row] + [Fraction(v)] for row, v in zip(A, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[k], M[piv] = M[piv], M[k]
        for i in range(n):
            if i != k and M[i][k] != 0:
                f = M[i][k] / M[k][k]
                for j in range(k, n + 1):
                    M[i][j] -= f * M[k][j]
    return tuple(M[i][n] / M[i][i] for i in range(n))


def adjugate(A):
    """Integer adjugate, so that A * adj(A) = det(A) I."""
    n = len(A)
    if n == 1:
        return ((1,),)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            out[j][i] = (-1) ** (i + j) * det(tuple(tuple(r) for r in minor))
    return tuple(tuple(r) for r in out)
