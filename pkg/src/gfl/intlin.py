"""Exact integer linear algebra.

Smith normal form with transform tracking, integer kernels and ranks, and
linear solving modulo a prime power.  Solving over Z/l^m goes through the
Smith form of an integer lift: naive Gaussian elimination is unsound there
because Z/l^m has zero divisors.

Matrices are lists of rows of Python ints; everything stays exact.  Sizes
are desk scale (a dozen rows/columns at most), so the quadratic pivot
search is fine.
"""

from __future__ import annotations


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _diagonalize(D, U, V, rows, cols):
    for t in range(min(rows, cols)):
        # Re-select the globally smallest pivot before every reduction
        # sweep.  Remainders are strictly smaller than the pivot, so the
        # sweep count per level is bounded by the initial pivot size, and
        # quotients stay balanced; swapping mid-sweep instead (Euclid on
        # whatever row happens to sit at t) lets entries square with each
        # pass and stalls on bigints well before any mathematical cycle.
        while True:
            piv = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if D[i][j] != 0 and (piv is None
                                         or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return
            i0, j0 = piv
            if i0 != t:
                D[t], D[i0] = D[i0], D[t]
                U[t], U[i0] = U[i0], U[t]
            if j0 != t:
                for r in range(rows):
                    D[r][t], D[r][j0] = D[r][j0], D[r][t]
                for r in range(cols):
                    V[r][t], V[r][j0] = V[r][j0], V[r][t]
            clean = True
            for i in range(t + 1, rows):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    if q:
                        for j in range(cols):
                            D[i][j] -= q * D[t][j]
                        for j in range(rows):
                            U[i][j] -= q * U[t][j]
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, cols):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    if q:
                        for i in range(rows):
                            D[i][j] -= q * D[i][t]
                        for i in range(cols):
                            V[i][j] -= q * V[i][t]
                    if D[t][j]:
                        clean = False
            if clean:
                break


def smith_normal_form(mat):
    """Return (U, D, V) with U @ mat @ V == D, U and V unimodular.

    D is diagonal with nonnegative entries, each dividing the next.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    D = [[int(x) for x in row] for row in mat]
    U = _identity(rows)
    V = _identity(cols)
    if rows == 0 or cols == 0:
        return U, D, V
    while True:
        _diagonalize(D, U, V, rows, cols)
        for t in range(min(rows, cols)):
            if D[t][t] < 0:
                for j in range(cols):
                    D[t][j] = -D[t][j]
                for j in range(rows):
                    U[t][j] = -U[t][j]
        bad = None
        for t in range(min(rows, cols) - 1):
            a, b = D[t][t], D[t + 1][t + 1]
            if a != 0 and b % a != 0:
                bad = t
                break
        if bad is None:
            return U, D, V
        # merge the offending pair and rediagonalize
        t = bad
        for i in range(rows):
            D[i][t] += D[i][t + 1]
        for i in range(cols):
            V[i][t] += V[i][t + 1]


def matmul(A, B):
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(rows)]


def integer_rank(mat) -> int:
    _, D, _ = smith_normal_form(mat)
    return sum(1 for t in range(min(len(D), len(D[0]) if D else 0)) if D[t][t] != 0)


def kernel_basis(mat):
    """Basis (list of int vectors) of {x : mat @ x == 0} over Z.

    The basis spans a saturated sublattice (direct summand) of Z^cols.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    _, D, V = smith_normal_form(mat)
    out = []
    for i in range(cols):
        d = D[i][i] if i < rows and i < cols else 0
        if d == 0:
            out.append([V[r][i] for r in range(cols)])
    return out


def _val_l(x: int, ell: int) -> int:
    if x == 0:
        return 10 ** 9
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def solve_mod_prime_power(mat, rhs, ell: int, m: int):
    """One solution x of mat @ x == rhs (mod ell^m), or None."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    q = ell ** m
    U, D, V = smith_normal_form(mat)
    c = [sum(U[i][k] * rhs[k] for k in range(rows)) % q for i in range(rows)]
    y = [0] * cols
    for i in range(rows):
        d = D[i][i] if i < cols else 0
        if d == 0:
            if c[i] % q:
                return None
            continue
        g = ell ** min(m, _val_l(d, ell))
        if c[i] % g:
            return None
        qq = q // g
        y[i] = ((c[i] // g) * pow((d // g) % qq, -1, qq)) % qq if qq > 1 else 0
    x = [sum(V[i][k] * y[k] for k in range(cols)) % q for i in range(cols)]
    return x


def kernel_mod_prime_power(mat, ell: int, m: int):
    """Generators of the Z/ell^m-module {x : mat @ x == 0 (mod ell^m)}."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    q = ell ** m
    _, D, V = smith_normal_form(mat)
    gens = []
    for i in range(cols):
        d = D[i][i] if i < rows else 0
        # condition on y_i is d*y_i == 0 mod l^m, so y_i ranges over
        # multiples of l^(m - min(m, v_l(d)))
        scale = 1 if d == 0 else ell ** (m - min(m, _val_l(d, ell)))
        g = [(V[r][i] * scale) % q for r in range(cols)]
        if any(g):
            gens.append(g)
    return gens
