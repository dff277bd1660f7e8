"""Exact arithmetic for GF(p) and GF(p^e), and linear algebra over them.

Field elements are plain ints 0..q-1 encoding base-p coefficient vectors
of the polynomial representative: a = sum(a_i * p^i) stands for
sum(a_i * X^i) modulo the defining polynomial.  For e = 1 this is the
usual residue 0..p-1.  Defining polynomials come from a fixed published
Conway table (p <= 7, e <= 3) unless an explicit irreducible modulus is
supplied, which is how quotient extensions GF(p)[x]/(c) are built.

Vectors are tuples of encoded elements; subspaces are canonicalized as
reduced-row-echelon bases, and all enumerations are lexicographic, so two
runs always list points and subspaces in the same order.  Everything here
is immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

# Conway polynomials C_{p,e}, coefficients ascending, monic.
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (7, 3): (4, 0, 6, 1),
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class GF:
    """GF(p^e) with int-encoded elements; construct via gf() or extension_field()."""

    def __init__(self, p: int, e: int = 1, modulus: tuple[int, ...] | None = None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError("e must be >= 1")
        self.p = p
        self.e = e
        self.q = p ** e
        if e == 1:
            modulus = None
        elif modulus is None:
            if (p, e) not in CONWAY:
                raise ValueError(f"no Conway polynomial stored for ({p}, {e})")
            modulus = CONWAY[(p, e)]
        if modulus is not None:
            if len(modulus) != e + 1 or modulus[-1] % p != 1:
                raise ValueError("modulus must be monic of degree e")
            modulus = tuple(c % p for c in modulus)
        self.modulus = modulus
        self._mul_table = None
        self._inv_table = None
        if self.q <= 64:
            self._mul_table = [[self._mul_raw(a, b) for b in range(self.q)]
                               for a in range(self.q)]
            self._inv_table = [0] * self.q
            for a in range(1, self.q):
                for b in range(1, self.q):
                    if self._mul_table[a][b] == 1:
                        self._inv_table[a] = b
                        break

    # ---- encoding ----------------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        a = 0
        for c in reversed(list(cs)):
            a = a * self.p + (c % self.p)
        return a

    def elements(self):
        return range(self.q)

    # ---- arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.from_coeffs(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.from_coeffs(-x for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_raw(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        # reduce modulo the defining polynomial
        for i in range(len(prod) - 1, self.e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(self.e):
                    prod[i - self.e + j] = (prod[i - self.e + j] - c * self.modulus[j]) % self.p
        return self.from_coeffs(prod[: self.e])

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self._inv_table is not None:
            return self._inv_table[a]
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow_(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow_(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow_(self.inv(a), -n)
        r, base = 1, a
        while n:
            if n & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            n >>= 1
        return r

    def scalar(self, k: int) -> int:
        """Embed an integer via the prime subfield."""
        return k % self.p

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"


_FIELDS: dict = {}


def gf(p: int, e: int = 1) -> GF:
    """Cached field with the Conway-table defining polynomial."""
    key = (p, e)
    if key not in _FIELDS:
        _FIELDS[key] = GF(p, e)
    return _FIELDS[key]


def extension_field(p: int, modulus: tuple[int, ...]) -> GF:
    """GF(p)[x]/(modulus) for an explicit monic irreducible modulus."""
    key = (p, tuple(c % p for c in modulus))
    if key not in _FIELDS:
        _FIELDS[key] = GF(p, len(modulus) - 1, modulus)
    return _FIELDS[key]


# ---- vectors and subspaces ------------------------------------------


def vec_add(F: GF, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))

def vec_sub(F: GF, u, v):
    return tuple(F.sub(a, b) for a, b in zip(u, v))

def vec_scale(F: GF, c: int, v):
    return tuple(F.mul(c, a) for a in v)

def vec_is_zero(v) -> bool:
    return all(a == 0 for a in v)


def normalize_point(F: GF, v):
    """Canonical projective representative: first nonzero coordinate 1."""
    for a in v:
        if a:
            return vec_scale(F, F.inv(a), v)
    raise ValueError("zero vector has no projective class")


def proj_points(F: GF, n: int):
    """All points of P(F^n) as normalized tuples, ascending lexicographic."""
    out = []
    for k in range(n - 1, -1, -1):
        for tail in product(range(F.q), repeat=n - 1 - k):
            out.append((0,) * k + (1,) + tail)
    return out


def rref(F: GF, rows):
    """Reduced row echelon form; returns tuple of nonzero rows."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = F.inv(mat[r][c])
        mat[r] = [F.mul(inv, x) for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in mat[:r] if any(row))


def in_span(F: GF, basis, v) -> bool:
    return rref(F, list(basis) + [v]) == rref(F, basis)


def coords_in_basis(F: GF, basis, v):
    """Coordinates of v in the given (independent) basis, or None."""
    if not basis:
        return None if any(v) else ()
    n = len(v)
    # solve sum(c_i * basis_i) = v by eliminating the transposed system
    aug = [[basis[i][r] for i in range(len(basis))] + [v[r]] for r in range(n)]
    ncols = len(basis)
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = F.inv(aug[r][c])
        aug[r] = [F.mul(inv, x) for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][ncols]:
            return None
    out = [0] * ncols
    for i, c in enumerate(pivots):
        out[c] = aug[i][ncols]
    return tuple(out)


def gf_kernel(F: GF, mat):
    """Basis of the right kernel of a matrix over F."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    red = [list(r) for r in mat]
    r = 0
    pivots = []
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if red[i][c]), None)
        if piv is None:
            continue
        red[r], red[piv] = red[piv], red[r]
        inv = F.inv(red[r][c])
        red[r] = [F.mul(inv, x) for x in red[r]]
        for i in range(nrows):
            if i != r and red[i][c]:
                f = red[i][c]
                red[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(red[i], red[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(red[i][fc])
        basis.append(tuple(v))
    return basis


def subspace_bases(F: GF, n: int, d: int):
    """All d-dim subspaces of F^n as RREF bases, deterministic order."""
    if d == 0:
        return [()]
    out = []
    for pivots in combinations(range(n), d):
        free_pos = [(i, j) for i in range(d) for j in range(pivots[i] + 1, n)
                    if j not in pivots]
        for vals in product(range(F.q), repeat=len(free_pos)):
            rowsm = [[0] * n for _ in range(d)]
            for i in range(d):
                rowsm[i][pivots[i]] = 1
            for (i, j), v in zip(free_pos, vals):
                rowsm[i][j] = v
            out.append(tuple(tuple(r) for r in rowsm))
    return out


def gaussian_binomial(q: int, n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@dataclass(frozen=True)
class VecSpace:
    """F_q-vector space of a fixed finite dimension."""

    field: GF
    dim: int

    def vectors(self):
        return product(range(self.field.q), repeat=self.dim)

    def points(self):
        return proj_points(self.field, self.dim)

    def subspaces(self, d: int):
        return subspace_bases(self.field, self.dim, d)

    def normalize(self, v):
        return normalize_point(self.field, v)

    def span(self, vectors):
        return rref(self.field, vectors)
