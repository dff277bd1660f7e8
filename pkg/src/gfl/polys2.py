"""Sparse bivariate polynomials over GF(q) in the affine variables (x, y).

Terms are kept in a dict {(i, j): c}; the leading term is taken in graded
lex order (total degree, then x-degree).  A single polynomial is a Groebner
basis of the ideal it generates, so exact division and multiplicity counts
need only the one-divisor division loop, no Groebner machinery.

Factorization is deliberately restricted to the desk classes: monomial
content, univariate content in either variable, polynomials linear in x or
y, and quadratics in one variable (split via the discriminant over the
rational function field).  Anything denser raises UnsupportedPolynomial.
"""

from __future__ import annotations

from .ffcore import GF
from .polys import Pol, factor, pol_gcd


class UnsupportedPolynomial(ValueError):
    """Raised when a polynomial falls outside the supported desk classes."""


class Pol2:
    """Immutable sparse polynomial in x, y over a GF instance."""

    __slots__ = ("field", "terms")

    def __init__(self, field: GF, terms):
        clean = {}
        for (i, j), c in (terms.items() if isinstance(terms, dict) else terms):
            if c:
                clean[(i, j)] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __setattr__(self, *a):
        raise AttributeError("Pol2 is immutable")

    @classmethod
    def zero(cls, field):
        return cls(field, {})

    @classmethod
    def const(cls, field, c):
        return cls(field, {(0, 0): c})

    @classmethod
    def var_x(cls, field):
        return cls(field, {(1, 0): 1})

    @classmethod
    def var_y(cls, field):
        return cls(field, {(0, 1): 1})

    @classmethod
    def from_pol_x(cls, p: Pol):
        return cls(p.field, {(i, 0): c for i, c in enumerate(p.coeffs)})

    @classmethod
    def from_pol_y(cls, p: Pol):
        return cls(p.field, {(0, i): c for i, c in enumerate(p.coeffs)})

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return all(k == (0, 0) for k in self.terms)

    @property
    def total_degree(self):
        return max((i + j for i, j in self.terms), default=-1)

    @property
    def deg_x(self):
        return max((i for i, _ in self.terms), default=-1)

    @property
    def deg_y(self):
        return max((j for _, j in self.terms), default=-1)

    def __eq__(self, other):
        return (isinstance(other, Pol2) and self.field is other.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.field), tuple(sorted(self.terms.items()))))

    def sort_key(self):
        return (self.total_degree, tuple(sorted(self.terms.items())))

    def __repr__(self):
        if self.is_zero():
            return "Pol2<0>"
        bits = []
        for (i, j), c in sorted(self.terms.items()):
            s = str(c)
            if i:
                s += f"*x^{i}"
            if j:
                s += f"*y^{j}"
            bits.append(s)
        return "Pol2<" + " + ".join(bits) + ">"

    # ---- arithmetic ----
    def __add__(self, other):
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = F.add(out.get(k, 0), c)
        return Pol2(F, out)

    def __neg__(self):
        F = self.field
        return Pol2(F, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        out: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = F.add(out.get(k, 0), F.mul(c1, c2))
        return Pol2(F, out)

    def scale(self, c: int):
        F = self.field
        return Pol2(F, {k: F.mul(c, v) for k, v in self.terms.items()})

    def pow_(self, n: int):
        out = Pol2.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # ---- graded-lex leading data ----
    def lead(self):
        k = max(self.terms, key=lambda ij: (ij[0] + ij[1], ij[0]))
        return k, self.terms[k]

    def monic_grlex(self):
        if self.is_zero():
            return self
        _, c = self.lead()
        return self.scale(self.field.inv(c)) if c != 1 else self

    def leading_form(self):
        """Highest total-degree homogeneous part."""
        d = self.total_degree
        return Pol2(self.field, {k: c for k, c in self.terms.items() if k[0] + k[1] == d})

    # ---- conversions ----
    def as_y_coeffs(self) -> list[Pol]:
        """Coefficients as polynomials in x, index = power of y."""
        F = self.field
        dy = self.deg_y
        rows: list[dict] = [dict() for _ in range(dy + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        return [Pol(F, [row.get(i, 0) for i in range(max(row, default=-1) + 1)])
                for row in rows]

    def as_x_coeffs(self) -> list[Pol]:
        return self.swap().as_y_coeffs()

    def swap(self):
        return Pol2(self.field, {(j, i): c for (i, j), c in self.terms.items()})

    @classmethod
    def from_y_coeffs(cls, field, coeffs: list[Pol]):
        terms = {}
        for j, p in enumerate(coeffs):
            for i, c in enumerate(p.coeffs):
                if c:
                    terms[(i, j)] = c
        return cls(field, terms)

    def univariate_x(self) -> Pol:
        if self.deg_y > 0:
            raise ValueError("has positive y-degree")
        out = [0] * (self.deg_x + 1)
        for (i, _), c in self.terms.items():
            out[i] = c
        return Pol(self.field, out)

    def univariate_y(self) -> Pol:
        return self.swap().univariate_x()


def div_exact(a: Pol2, b: Pol2) -> Pol2 | None:
    """a / b if b divides a exactly, else None (single-divisor division)."""
    F = a.field
    if b.is_zero():
        raise ZeroDivisionError
    (bk, bc) = b.lead()
    inv_bc = F.inv(bc)
    quo: dict = {}
    rem = a
    while not rem.is_zero():
        (k, c) = rem.lead()
        if k[0] < bk[0] or k[1] < bk[1]:
            return None
        qk = (k[0] - bk[0], k[1] - bk[1])
        qc = F.mul(c, inv_bc)
        quo[qk] = F.add(quo.get(qk, 0), qc)
        rem = rem - Pol2(F, {qk: qc}) * b
    return Pol2(F, quo)


def multiplicity(a: Pol2, b: Pol2) -> int:
    """Largest k with b^k dividing a (a nonzero, b nonconstant)."""
    if a.is_zero():
        raise ValueError("zero polynomial has infinite multiplicity")
    k = 0
    while True:
        q = div_exact(a, b)
        if q is None:
            return k
        a = q
        k += 1


# ---- content and gcd -------------------------------------------------


def content_y(p: Pol2) -> Pol:
    """gcd in GF(q)[x] of the y-coefficients."""
    g = Pol.zero(p.field)
    for c in p.as_y_coeffs():
        g = pol_gcd(g, c)
    return g


def _prem_y(a: list[Pol], b: list[Pol], F: GF):
    """Pseudo-remainder of a by b as polynomials in y with Pol coefficients."""
    da, db = len(a) - 1, len(b) - 1
    lc = b[-1]
    r = list(a)
    for i in range(da - db, -1, -1):
        if len(r) - 1 < i + db:
            continue
        top = r[i + db]
        if top.is_zero():
            continue
        r = [c * lc for c in r]
        for j in range(db + 1):
            r[i + j] = r[i + j] - top * b[j]
        while r and r[-1].is_zero():
            r.pop()
    return r


def gcd2(a: Pol2, b: Pol2) -> Pol2:
    """gcd in GF(q)[x, y], normalized to leading grlex coefficient 1."""
    F = a.field
    if a.is_zero():
        return b.monic_grlex()
    if b.is_zero():
        return a.monic_grlex()
    if a.deg_y == 0 and b.deg_y == 0:
        return Pol2.from_pol_x(pol_gcd(a.univariate_x(), b.univariate_x()))
    conta, contb = content_y(a), content_y(b)
    gcont = pol_gcd(conta, contb)
    ppa = div_exact(a, Pol2.from_pol_x(conta))
    ppb = div_exact(b, Pol2.from_pol_x(contb))
    if ppa.deg_y == 0 or ppb.deg_y == 0:
        # a primitive y-free part is a unit
        return Pol2.from_pol_x(gcont).monic_grlex()
    fa, fb = ppa.as_y_coeffs(), ppb.as_y_coeffs()
    if len(fa) < len(fb):
        fa, fb = fb, fa
    while len(fb) - 1 > 0:
        r = _prem_y(fa, fb, F)
        if not r:
            break
        rp = Pol2.from_y_coeffs(F, r)
        cont = content_y(rp)
        rp = div_exact(rp, Pol2.from_pol_x(cont))
        fa, fb = fb, rp.as_y_coeffs()
    if len(fb) - 1 == 0:
        ppg = Pol2.const(F, 1)
    else:
        ppg = Pol2.from_y_coeffs(F, fb)
    return (Pol2.from_pol_x(gcont) * ppg).monic_grlex()


# ---- restricted factorization ----------------------------------------


def _sqrt_in_field(F: GF, c: int) -> int | None:
    for a in range(F.q):
        if F.mul(a, a) == c:
            return a
    return None


def _poly_sqrt(p: Pol) -> Pol | None:
    """Square root in GF(q)[x] if p is a perfect square, else None."""
    if p.is_zero():
        return Pol.zero(p.field)
    unit, facs = factor(p)
    root_unit = _sqrt_in_field(p.field, unit)
    if root_unit is None:
        return None
    out = Pol.const(p.field, root_unit)
    for g, e in facs:
        if e % 2:
            return None
        for _ in range(e // 2):
            out = out * g
    return out


def _factor_y_quadratic(p: Pol2):
    """Split A(x)y^2 + B(x)y + C(x) into y-linear factors or declare irreducible."""
    F = p.field
    if F.q % 2 == 0:
        raise UnsupportedPolynomial("quadratic split needs odd characteristic")
    cs = p.as_y_coeffs()
    A = cs[2]
    B = cs[1] if len(cs) > 1 else Pol.zero(F)
    C = cs[0]
    disc = B * B - A * C.scale(F.scalar(4))
    s = _poly_sqrt(disc)
    if s is None:
        return None  # irreducible over GF(q)(x), hence over GF(q)[x,y] (primitive)
    two_a = A.scale(F.scalar(2))
    g1 = Pol2.from_y_coeffs(F, [B - s, two_a])
    g2 = Pol2.from_y_coeffs(F, [B + s, two_a])
    out = []
    for g in (g1, g2):
        cont = content_y(g)
        if not cont.is_const():
            g = div_exact(g, Pol2.from_pol_x(cont))
        out.append(g.monic_grlex())
    return out


def factor2(p: Pol2):
    """Restricted factorization: (unit, [(irreducible canonical Pol2, mult)]).

    Complete for products of: monomials, univariate polynomials in x or y,
    polynomials of degree 1 in x or y, and quadratics in a single variable.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = p.field
    out: dict[Pol2, int] = {}

    def push(g: Pol2, e: int):
        if e > 0 and not g.is_const():
            out[g] = out.get(g, 0) + e

    # monomial content
    if not p.is_const():
        imin = min(i for i, _ in p.terms)
        jmin = min(j for _, j in p.terms)
        if imin or jmin:
            push(Pol2.var_x(F), imin)
            push(Pol2.var_y(F), jmin)
            p = Pol2(F, {(i - imin, j - jmin): c for (i, j), c in p.terms.items()})

    def strip_univariate_content(p: Pol2) -> Pol2:
        for conv, back in ((content_y, Pol2.from_pol_x),
                           (lambda q: content_y(q.swap()), lambda g: Pol2.from_pol_y(g))):
            cont = conv(p)
            if not cont.is_const():
                _, facs = factor(cont)
                for g, e in facs:
                    push(back(g).monic_grlex(), e)
                p = div_exact(p, back(cont))
        return p

    def rec(p: Pol2):
        if p.is_const():
            return
        p = strip_univariate_content(p)
        if p.is_const():
            return
        if p.deg_y == 0:
            _, facs = factor(p.univariate_x())
            for g, e in facs:
                push(Pol2.from_pol_x(g).monic_grlex(), e)
            return
        if p.deg_x == 0:
            _, facs = factor(p.univariate_y())
            for g, e in facs:
                push(Pol2.from_pol_y(g).monic_grlex(), e)
            return
        if p.deg_y == 1 or p.deg_x == 1:
            # primitive and linear in one variable: irreducible
            push(p.monic_grlex(), 1)
            return
        for q, unswap in ((p, lambda g: g), (p.swap(), lambda g: g.swap())):
            if q.deg_y == 2:
                split = _factor_y_quadratic(q)
                if split is None:
                    push(unswap(q).monic_grlex(), 1)
                    return
                g1, g2 = split
                rest = div_exact(q, g1 * g2)
                assert rest is not None and rest.is_const()
                push(unswap(g1).monic_grlex(), 1)
                push(unswap(g2).monic_grlex(), 1)
                return
        raise UnsupportedPolynomial(
            f"degree pattern (deg_x={p.deg_x}, deg_y={p.deg_y}) outside desk classes")

    rec(p)
    return out


def factorization(p: Pol2):
    """Public wrapper: returns (unit, sorted factor list)."""
    raw = factor2(p)
    prod = Pol2.const(p.field, 1)
    for g, e in raw.items():
        prod = prod * g.pow_(e)
    # unit = p / prod, a nonzero scalar
    q = div_exact(p, prod)
    assert q is not None and q.is_const()
    unit = q.terms.get((0, 0), 0)
    return unit, sorted(raw.items(), key=lambda kv: kv[0].sort_key())


def is_irreducible2(p: Pol2) -> bool:
    unit, facs = factorization(p)
    return len(facs) == 1 and facs[0][1] == 1
