"""Rational functions over GF(q), univariate (t) and bivariate (x, y).

Fractions are reduced on construction and the denominator is normalized
(monic for one variable, leading graded-lex coefficient 1 for two), so
equal functions compare equal.  A class representative modulo nonzero
constants additionally makes the numerator monic; that quotient is what
residues and the multiplicative point sets of the geometry module live in.

Closed points of the affine-plus-infinity line are monic irreducible
polynomials or the marker point at infinity; plane curves are irreducible
affine polynomials or the line at infinity.  Both carry a total sort key
so enumerations and reports are reproducible.
"""

from __future__ import annotations

from .ffcore import GF, gf_kernel
from .polys import Pol, is_irreducible, pol_gcd
from .polys2 import Pol2, factorization, gcd2, multiplicity


class ClosedPoint:
    """Closed point of the projective t-line: monic irreducible or infinity."""

    __slots__ = ("poly",)

    def __init__(self, poly: Pol | None):
        if poly is not None:
            if poly.lc != 1 or not is_irreducible(poly):
                raise ValueError("closed point needs a monic irreducible polynomial")
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, *a):
        raise AttributeError("ClosedPoint is immutable")

    @classmethod
    def infinity(cls):
        return cls(None)

    @classmethod
    def rational(cls, field: GF, a: int):
        """The point t = a."""
        return cls(Pol(field, (field.neg(a), 1)))

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.degree

    def sort_key(self):
        return (1,) if self.poly is None else (0, self.poly.degree, self.poly.coeffs)

    def __eq__(self, other):
        return isinstance(other, ClosedPoint) and (
            (self.poly is None and other.poly is None) or self.poly == other.poly)

    def __hash__(self):
        return hash(("pt", None if self.poly is None else self.poly.coeffs))

    def __repr__(self):
        return "Point<inf>" if self.poly is None else f"Point<{self.poly!r}>"

    def to_json(self):
        return "inf" if self.poly is None else list(self.poly.coeffs)

    @classmethod
    def from_json(cls, field: GF, data):
        if data == "inf":
            return cls(None)
        return cls(Pol(field, data))


class RatFunc:
    """Element of GF(q)(t)."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: GF, num: Pol, den: Pol):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = pol_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        else:
            den = Pol.one(field)
        c = den.lc
        if c != 1:
            inv = field.inv(c)
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_pol(cls, p: Pol):
        return cls(p.field, p, Pol.one(p.field))

    @classmethod
    def const(cls, field: GF, c: int):
        return cls(field, Pol.const(field, c), Pol.one(field))

    @classmethod
    def var(cls, field: GF):
        return cls(field, Pol.x(field), Pol.one(field))

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    @property
    def degree(self) -> int:
        """Degree as a map of the line: max of numerator/denominator degrees."""
        return max(self.num.degree, self.den.degree)

    def __eq__(self, other):
        return (isinstance(other, RatFunc) and self.field is other.field
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((id(self.field), self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return f"RatFunc<({self.num!r})/({self.den!r})>"

    def __add__(self, other):
        return RatFunc(self.field, self.num * other.den + other.num * self.den,
                       self.den * other.den)

    def __neg__(self):
        return RatFunc(self.field, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.field, self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        return RatFunc(self.field, self.num * other.den, self.den * other.num)

    def scale(self, c: int):
        return RatFunc(self.field, self.num.scale(c), self.den)

    def pow_(self, n: int):
        if n < 0:
            return RatFunc(self.field, Pol.one(self.field), Pol.one(self.field)) / self.pow_(-n)
        out = RatFunc.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def ord_at(self, point: ClosedPoint) -> int:
        """Order of vanishing at a closed point of the projective line."""
        if self.is_zero():
            raise ValueError("the zero function has no order")
        if point.is_infinity:
            return self.den.degree - self.num.degree

        def mult(p: Pol) -> int:
            k = 0
            while True:
                q, r = divmod(p, point.poly)
                if not r.is_zero():
                    return k
                p = q
                k += 1
        return mult(self.num) - mult(self.den)

    def proj_class(self):
        """Representative modulo GF(q)^*: (monic numerator, monic denominator)."""
        if self.is_zero():
            raise ValueError("zero function has no class modulo constants")
        return (self.num.monic().coeffs, self.den.coeffs)

    def to_json(self):
        return {"vars": ["t"], "num": list(self.num.coeffs), "den": list(self.den.coeffs)}

    @classmethod
    def from_json(cls, field: GF, data):
        return cls(field, Pol(field, data["num"]), Pol(field, data["den"]))


class Curve:
    """Irreducible plane curve: affine polynomial, or the line at infinity."""

    __slots__ = ("poly",)

    def __init__(self, poly: Pol2 | None, check: bool = True):
        if poly is not None:
            poly = poly.monic_grlex()
            if check:
                if poly.is_const():
                    raise ValueError("constant polynomial is not a curve")
                _, facs = factorization(poly)
                if len(facs) != 1 or facs[0][1] != 1:
                    raise ValueError("curve polynomial must be irreducible")
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, *a):
        raise AttributeError("Curve is immutable")

    @classmethod
    def line_at_infinity(cls):
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.total_degree

    def sort_key(self):
        return (1,) if self.poly is None else (0,) + self.poly.sort_key()

    def __eq__(self, other):
        return isinstance(other, Curve) and (
            (self.poly is None and other.poly is None) or self.poly == other.poly)

    def __hash__(self):
        return hash(("curve", None if self.poly is None else
                     tuple(sorted(self.poly.terms.items()))))

    def __repr__(self):
        return "Curve<inf>" if self.poly is None else f"Curve<{self.poly!r}>"

    def to_json(self):
        return "inf" if self.poly is None else [[i, j, c] for (i, j), c
                                                in sorted(self.poly.terms.items())]

    @classmethod
    def from_json(cls, field: GF, data, check: bool = True):
        if data == "inf":
            return cls(None)
        return cls(Pol2(field, {(i, j): c for i, j, c in data}), check=check)


class RatFunc2:
    """Element of GF(q)(x, y)."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: GF, num: Pol2, den: Pol2):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not num.is_zero():
            g = gcd2(num, den)
            if not g.is_const():
                from .polys2 import div_exact
                num, den = div_exact(num, g), div_exact(den, g)
        else:
            den = Pol2.const(field, 1)
        _, c = den.lead()
        if c != 1:
            inv = field.inv(c)
            num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, *a):
        raise AttributeError("RatFunc2 is immutable")

    @classmethod
    def from_pol(cls, p: Pol2):
        return cls(p.field, p, Pol2.const(p.field, 1))

    @classmethod
    def const(cls, field: GF, c: int):
        return cls(field, Pol2.const(field, c), Pol2.const(field, 1))

    @classmethod
    def var_x(cls, field: GF):
        return cls.from_pol(Pol2.var_x(field))

    @classmethod
    def var_y(cls, field: GF):
        return cls.from_pol(Pol2.var_y(field))

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def __eq__(self, other):
        return (isinstance(other, RatFunc2) and self.field is other.field
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((id(self.field), tuple(sorted(self.num.terms.items())),
                     tuple(sorted(self.den.terms.items()))))

    def __repr__(self):
        return f"RatFunc2<({self.num!r})/({self.den!r})>"

    def __add__(self, other):
        return RatFunc2(self.field, self.num * other.den + other.num * self.den,
                        self.den * other.den)

    def __neg__(self):
        return RatFunc2(self.field, -self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc2(self.field, self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero():
            raise ZeroDivisionError
        return RatFunc2(self.field, self.num * other.den, self.den * other.num)

    def scale(self, c: int):
        return RatFunc2(self.field, self.num.scale(c), self.den)

    def pow_(self, n: int):
        if n < 0:
            return RatFunc2.const(self.field, 1) / self.pow_(-n)
        out = RatFunc2.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def ord_along(self, curve: Curve) -> int:
        """Order along a divisorial curve of the projective plane."""
        if self.is_zero():
            raise ValueError("the zero function has no order")
        if curve.is_infinite:
            return self.den.total_degree - self.num.total_degree
        up = 0 if self.num.is_const() else multiplicity(self.num, curve.poly)
        down = 0 if self.den.is_const() else multiplicity(self.den, curve.poly)
        return up - down

    def to_json(self):
        return {"vars": ["x", "y"],
                "num": [[i, j, c] for (i, j), c in sorted(self.num.terms.items())],
                "den": [[i, j, c] for (i, j), c in sorted(self.den.terms.items())]}

    @classmethod
    def from_json(cls, field: GF, data):
        num = Pol2(field, {(i, j): c for i, j, c in data["num"]})
        den = Pol2(field, {(i, j): c for i, j, c in data["den"]})
        return cls(field, num, den)


def ratfunc_from_json(field: GF, data):
    if data.get("vars") == ["t"]:
        return RatFunc.from_json(field, data)
    return RatFunc2.from_json(field, data)


def rat_compose(z: RatFunc, w: RatFunc) -> RatFunc:
    """z(w): substitute w into z via homogenized evaluation."""
    F = z.field
    e = max(z.num.degree, z.den.degree)
    N, D = w.num, w.den

    def plug(p: Pol) -> Pol:
        out = Pol.zero(F)
        for i, c in enumerate(p.coeffs):
            if c:
                out = out + Pol.const(F, c) * _pow(N, i) * _pow(D, e - i)
        return out

    return RatFunc(F, plug(z.num), plug(z.den))


def _pow(p: Pol, n: int) -> Pol:
    out = Pol.one(p.field)
    for _ in range(n):
        out = out * p
    return out


def compose_solve(target: RatFunc, inner: RatFunc) -> RatFunc | None:
    """Outer z with z(inner) = target, or None when no such z exists.

    Composition multiplies degrees, so deg z = deg target / deg inner; the
    identity num(target) * den(z(inner)) = den(target) * num(z(inner)) is
    linear in the coefficients of z once z is written over the homogenized
    monomials N^i D^(r-i) of inner = N/D.  Those monomials are linearly
    independent (N, D coprime), so any nonzero kernel vector with a nonzero
    denominator part yields a solution.
    """
    F = target.field
    dw = inner.degree
    if dw == 0:
        raise ValueError("inner function must be nonconstant")
    if target.is_zero():
        return target
    if target.degree % dw:
        return None
    r = target.degree // dw
    basis = [_pow(inner.num, i) * _pow(inner.den, r - i) for i in range(r + 1)]
    cols = [-(target.den * b) for b in basis] + [target.num * b for b in basis]
    width = max(p.degree for p in cols) + 1
    mat = [[(p.coeffs[row] if row < len(p.coeffs) else 0) for p in cols]
           for row in range(width)]
    for vec in gf_kernel(F, mat):
        num = Pol(F, tuple(vec[:r + 1]))
        den = Pol(F, tuple(vec[r + 1:]))
        if den.is_zero() or num.is_zero():
            continue
        z = RatFunc(F, num, den)
        if rat_compose(z, inner) == target:
            return z
    return None
