"""Valuations on k(t) and k(x,y) at desk scale.

Three kinds: closed points of the projective t-line (rank 1), divisorial
valuations along irreducible plane curves or the line at infinity (rank 1),
and flag valuations (curve plus a point on it) with values in Z^2 ordered
lexicographically.

Restriction to a curve avoids Groebner machinery by supporting a fixed
family of charts: curves linear in y (substitute y = -b/a), linear in x,
univariate in one variable of degree <= 3 (substitute a root in the
matching extension field), and the line at infinity (ratio of leading
forms in the coordinate s = x/y).  Instances outside these classes raise
UnsupportedPolynomial.

The line at infinity has no global equation; its fixed uniformizer here
is 1/y.  Flag values therefore depend on that documented choice, as they
depend on the curve equation in the finite case.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ffcore import GF, coords_in_basis, gf, vec_add
from .ffcore import CONWAY
from .flagmap import HomogeneousMap, Ring, is_flag_map
from .polys import Pol
from .polys2 import Pol2, UnsupportedPolynomial, div_exact, factorization, multiplicity
from .ratfunc import ClosedPoint, Curve, RatFunc, RatFunc2


class Valuation:
    """Point, divisorial, or flag valuation; kind fixes the value group rank."""

    __slots__ = ("kind", "field", "place", "curve", "point")

    def __init__(self, kind: str, field: GF, place=None, curve=None, point=None):
        if field.p == 2:
            raise ValueError("valuation theory here needs odd characteristic")
        if kind == "point":
            if not isinstance(place, ClosedPoint):
                raise ValueError("point valuation needs a closed point of the line")
        elif kind == "divisorial":
            if not isinstance(curve, Curve):
                raise ValueError("divisorial valuation needs a curve")
        elif kind == "flag":
            if not isinstance(curve, Curve) or not isinstance(point, ClosedPoint):
                raise ValueError("flag valuation needs a curve and a point on it")
            chart = parameter_chart(field, curve)
            if point.poly is not None and point.poly.field is not chart.field:
                raise ValueError("flag point must live on the curve's parameter line")
        else:
            raise ValueError(f"unknown valuation kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "place", place)
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "point", point)

    def __setattr__(self, *a):
        raise AttributeError("Valuation is immutable")

    @classmethod
    def at_point(cls, field: GF, place: ClosedPoint):
        return cls("point", field, place=place)

    @classmethod
    def along_curve(cls, field: GF, curve: Curve):
        return cls("divisorial", field, curve=curve)

    @classmethod
    def flag(cls, field: GF, curve: Curve, point: ClosedPoint):
        return cls("flag", field, curve=curve, point=point)

    @property
    def rank(self) -> int:
        return 2 if self.kind == "flag" else 1

    def __eq__(self, other):
        return (isinstance(other, Valuation) and self.kind == other.kind
                and self.field is other.field and self.place == other.place
                and self.curve == other.curve and self.point == other.point)

    def __hash__(self):
        return hash((self.kind, id(self.field), self.place, self.curve, self.point))

    def __repr__(self):
        if self.kind == "point":
            return f"Valuation<point {self.place!r}>"
        if self.kind == "divisorial":
            return f"Valuation<{self.curve!r}>"
        return f"Valuation<{self.curve!r} at {self.point!r}>"

    def to_json(self):
        if self.kind == "point":
            return {"kind": "point", "q": self.place.to_json()}
        if self.kind == "divisorial":
            return {"kind": "divisorial", "C": self.curve.to_json()}
        chart = parameter_chart(self.field, self.curve)
        return {"kind": "flag", "C": self.curve.to_json(), "q": self.point.to_json(),
                "chart_field": [chart.field.p, chart.field.e]}

    @classmethod
    def from_json(cls, field: GF, data):
        kind = data["kind"]
        if kind == "point":
            return cls.at_point(field, ClosedPoint.from_json(field, data["q"]))
        curve = Curve.from_json(field, data["C"])
        if kind == "divisorial":
            return cls.along_curve(field, curve)
        chart = parameter_chart(field, curve)
        return cls.flag(field, curve, ClosedPoint.from_json(chart.field, data["q"]))


@dataclass(frozen=True)
class Chart:
    """Parametrization of a supported curve: which variable survives, where."""

    param: str          # "x", "y", or "s" for the line at infinity
    field: GF           # constants of the parameter line
    root: int | None    # substituted value for univariate charts


def parameter_chart(field: GF, curve: Curve) -> Chart:
    """Chart classification; raises UnsupportedPolynomial outside desk classes."""
    if curve.is_infinite:
        return Chart("s", field, None)
    C = curve.poly
    if C.deg_y == 0:
        return _univariate_chart(field, C.univariate_x(), "y")
    if C.deg_x == 0:
        return _univariate_chart(field, C.univariate_y(), "x")
    if C.deg_y == 1:
        return Chart("x", field, None)
    if C.deg_x == 1:
        return Chart("y", field, None)
    raise UnsupportedPolynomial(
        "restriction supported for curves linear in one variable, univariate "
        "of degree <= 3, or the line at infinity")


def _univariate_chart(field: GF, pi: Pol, param: str) -> Chart:
    e = pi.degree
    if field.e != 1 or e > 3 or (e > 1 and (field.p, e) not in CONWAY):
        raise UnsupportedPolynomial(
            "univariate curve charts need a prime base field and degree <= 3")
    E = field if e == 1 else gf(field.p, e)
    root = min(a for a in E.elements() if pi.eval_in(E, a) == 0)
    return Chart(param, E, root)


def _subst_linear(C: Pol2, P: Pol2) -> tuple[Pol, int]:
    """P with y := -b/a for C = a(x) y + b(x); returns (numerator, power of a)."""
    F = P.field
    cy = C.as_y_coeffs()
    a, b = cy[1], cy[0]
    coeffs = P.as_y_coeffs()
    d = len(coeffs) - 1
    out = Pol.zero(F)
    apow = [Pol.one(F)]
    bpow = [Pol.one(F)]
    for _ in range(d):
        apow.append(apow[-1] * a)
        bpow.append(bpow[-1] * (-b))
    for j, pj in enumerate(coeffs):
        out = out + pj * bpow[j] * apow[d - j]
    return out, d


def _subst_root(P: Pol2, E: GF, root: int, along_x: bool) -> Pol:
    """P with x := root (or y := root when along_x is False), over E."""
    coeffs = P.as_y_coeffs() if along_x else P.as_x_coeffs()
    vals = [pj.eval_in(E, root) for pj in coeffs]
    return Pol(E, vals)


def restrict_to_curve(field: GF, curve: Curve, f: RatFunc2) -> RatFunc:
    """f as a rational function on the curve's parameter line.

    Common curve powers of numerator and denominator are stripped first;
    a function with nonzero order along the curve has no restriction and
    is rejected.
    """
    if f.is_zero():
        raise ValueError("cannot restrict the zero function")
    num, den = f.num, f.den
    chart = parameter_chart(field, curve)

    if curve.is_infinite:
        if num.total_degree != den.total_degree:
            raise ValueError("restriction vanishes: nonzero order along the curve")
        return RatFunc(field, _form_in_s(num), _form_in_s(den))

    C = curve.poly
    k = min(multiplicity(num, C) if not num.is_const() else 0,
            multiplicity(den, C) if not den.is_const() else 0)
    for _ in range(k):
        num = div_exact(num, C)
        den = div_exact(den, C)

    if C.deg_y == 0 or C.deg_x == 0:
        along_x = C.deg_y == 0
        rn = _subst_root(num, chart.field, chart.root, along_x)
        rd = _subst_root(den, chart.field, chart.root, along_x)
    elif C.deg_y == 1:
        n1, d1 = _subst_linear(C, num)
        n2, d2 = _subst_linear(C, den)
        cy = C.as_y_coeffs()
        a = cy[1]
        rn = n1 * _pol_pow(a, d2)
        rd = n2 * _pol_pow(a, d1)
    else:
        Cs = C.swap()
        n1, d1 = _subst_linear(Cs, num.swap())
        n2, d2 = _subst_linear(Cs, den.swap())
        a = Cs.as_y_coeffs()[1]
        rn = n1 * _pol_pow(a, d2)
        rd = n2 * _pol_pow(a, d1)

    if rd.is_zero() or rn.is_zero():
        raise ValueError("restriction vanishes: nonzero order along the curve")
    return RatFunc(rn.field, rn, rd)


def _form_in_s(P: Pol2) -> Pol:
    """Leading form evaluated at (x, y) = (s, 1)."""
    form = P.leading_form()
    F = P.field
    d = P.total_degree
    coeffs = [0] * (d + 1)
    for (i, j), c in form.terms.items():
        coeffs[i] = c
    return Pol(F, coeffs)


def _pol_pow(p: Pol, n: int) -> Pol:
    out = Pol.one(p.field)
    for _ in range(n):
        out = out * p
    return out


def uniformizer(field: GF, curve: Curve) -> RatFunc2:
    """Fixed local equation: the curve polynomial, or 1/y at infinity."""
    if curve.is_infinite:
        return RatFunc2(field, Pol2.const(field, 1), Pol2.var_y(field))
    return RatFunc2.from_pol(curve.poly)


def ord_value(v: Valuation, f):
    """Value of the valuation: an integer, or a lex-ordered pair for flags."""
    if v.kind == "point":
        if not isinstance(f, RatFunc):
            raise TypeError("point valuations act on one-variable functions")
        return f.ord_at(v.place)
    if not isinstance(f, RatFunc2):
        raise TypeError("curve valuations act on two-variable functions")
    if v.kind == "divisorial":
        return f.ord_along(v.curve)
    m = f.ord_along(v.curve)
    g = f / uniformizer(v.field, v.curve).pow_(m)
    r = restrict_to_curve(v.field, v.curve, g)
    return (m, r.ord_at(v.point))


def value_tuple(value) -> tuple:
    return value if isinstance(value, tuple) else (value,)


def value_positive(value) -> bool:
    return value_tuple(value) > (0,) * len(value_tuple(value))


@dataclass(frozen=True)
class Residue:
    """Restriction class of f^{v(g)} / g^{v(f)} modulo nonzero constants."""

    curve: Curve
    func: RatFunc

    @property
    def trivial(self) -> bool:
        return self.func.is_const()

    def canonical(self):
        num, den = self.func.num, self.func.den
        return (num.monic().coeffs, den.coeffs)


def residue(v: Valuation, f: RatFunc2, g: RatFunc2) -> Residue:
    """Two-function residue along a divisorial valuation.

    The combination f^{v(g)} / g^{v(f)} has order zero along the curve,
    so its restriction is a nonzero function there; when both inputs are
    units the combination is 1 and the residue is trivial by construction.
    Result is normalized to a monic numerator (class modulo constants).
    """
    if v.kind != "divisorial":
        raise ValueError("residues are taken along divisorial valuations")
    if f.is_zero() or g.is_zero():
        raise ValueError("residues need nonzero functions")
    mf = ord_value(v, f)
    mg = ord_value(v, g)
    h = f.pow_(mg) / g.pow_(mf)
    r = restrict_to_curve(v.field, v.curve, h)
    r = RatFunc(r.field, r.num.monic(), r.den)
    return Residue(v.curve, r)


@dataclass(frozen=True)
class ResidueSweep:
    ok: bool
    witness: Curve | None = None
    checked: tuple = ()

    def __bool__(self):
        return self.ok


def function_support(f: RatFunc2) -> list[Curve]:
    """Irreducible components of div(f) in the affine plane."""
    curves = []
    for part in (f.num, f.den):
        if part.is_const():
            continue
        for g, _ in factorization(part)[1]:
            c = Curve(g, check=False)
            if c not in curves:
                curves.append(c)
    return sorted(curves, key=lambda c: c.sort_key())


def residues_vanish_all(f: RatFunc2, g: RatFunc2) -> ResidueSweep:
    """Residues of (f, g) are trivial along every relevant divisor.

    The sweep covers the components of div(f) and div(g) plus the line at
    infinity; along any other divisor both functions are units and the
    residue is trivial without computation.
    """
    if f.is_zero() or g.is_zero() or f.is_const() or g.is_const():
        raise ValueError("sweep needs nonzero nonconstant functions")
    field = f.field
    support = function_support(f) + function_support(g)
    curves = []
    for c in support + [Curve.line_at_infinity()]:
        if c not in curves:
            curves.append(c)
    for c in curves:
        # the finite-curve residue needs a supported chart; infinity always has one
        if not residue(Valuation.along_curve(field, c), f, g).trivial:
            return ResidueSweep(False, c, tuple(curves))
    return ResidueSweep(True, None, tuple(curves))


def compatible(v1: Valuation, v2: Valuation) -> bool:
    """Structural compatibility of two valuations on the same field.

    A divisorial valuation is compatible with any flag refinement along the
    same curve (first projection); distinct curves, or distinct points on
    one curve, are incompatible.
    """
    line1 = v1.kind == "point"
    line2 = v2.kind == "point"
    if line1 != line2 or v1.field is not v2.field:
        raise ValueError("compatibility is defined on a single function field")
    if v1 == v2:
        return True
    if line1:
        return False
    if v1.curve != v2.curve:
        return False
    # same curve: divisorial vs flag is the projection; two flags differ in q
    return v1.kind != v2.kind


@dataclass(frozen=True)
class CompaWitness:
    """Factorization h = f1^a * u showing K* = (1 + m_v) * (units of v2)."""

    f1: RatFunc2
    a: int
    u: RatFunc2


def compa_witness(v1: Valuation, v2: Valuation, h: RatFunc2) -> CompaWitness:
    """Explicit incompatibility certificate for distinct finite curves.

    f1 = C2/(C1 + C2) lies in 1 + m_{v1} and has v2-value 1, so stripping
    f1^a with a = v2(h) leaves a v2-unit; every identity is rechecked.
    """
    if v1.kind != "divisorial" or v2.kind != "divisorial":
        raise ValueError("witness construction works for divisorial valuations")
    if v1.curve == v2.curve or v1.curve.is_infinite or v2.curve.is_infinite:
        raise ValueError("witness needs two distinct finite curves")
    field = v1.field
    C1 = RatFunc2.from_pol(v1.curve.poly)
    C2 = RatFunc2.from_pol(v2.curve.poly)
    f1 = C2 / (C1 + C2)
    one = RatFunc2.const(field, 1)
    if not value_positive(ord_value(v1, f1 - one)) or ord_value(v2, f1) != 1:
        raise AssertionError("witness construction violated its own invariants")
    a = ord_value(v2, h)
    u = h / f1.pow_(a)
    if ord_value(v2, u) != 0 or f1.pow_(a) * u != h:
        raise AssertionError("witness construction violated its own invariants")
    return CompaWitness(f1, a, u)


@dataclass(frozen=True)
class OrderReport:
    """Total preorder on projective points, classes listed ascending."""

    ok: bool
    classes: tuple
    violations: tuple = ()

    def __bool__(self):
        return self.ok

    def rank_of(self, pt) -> int:
        for i, cls in enumerate(self.classes):
            if pt in cls:
                return i
        raise KeyError(pt)


def order_from_flagmap(alpha: HomogeneousMap, mult=None) -> OrderReport:
    """Rebuild the valuation preorder on P(B) from a flag map.

    For distinct values the sum decides: alpha(f + f') = alpha(f') puts f
    strictly above f'.  Ties are broken through intermediaries of a third
    value; pairs with no strict separation either way are equivalent.
    Totality, transitivity, and (when a multiplication is supplied)
    product compatibility are verified and violations reported.
    """
    if not is_flag_map(alpha):
        raise ValueError("order reconstruction needs a flag map")
    space = alpha.space
    F = space.field
    pts = space.points()
    n = len(pts)
    val = [alpha.table[pt] for pt in pts]
    strict = [[False] * n for _ in range(n)]
    violations = []

    for i in range(n):
        for j in range(i + 1, n):
            if val[i] == val[j]:
                continue
            vs = alpha.at(vec_add(F, pts[i], pts[j]))
            if vs == val[j] and vs != val[i]:
                strict[i][j] = True
            elif vs == val[i] and vs != val[j]:
                strict[j][i] = True
            else:
                violations.append(("undecided", pts[i], pts[j]))

    for i in range(n):
        for j in range(n):
            if i != j and val[i] == val[j]:
                if any(strict[i][k] and strict[k][j] for k in range(n)):
                    strict[i][j] = True

    for i in range(n):
        for j in range(n):
            if strict[i][j] and strict[j][i]:
                violations.append(("antisymmetry", pts[i], pts[j]))
            for k in range(n):
                if strict[i][j] and strict[j][k] and not strict[i][k]:
                    violations.append(("transitivity", pts[i], pts[j], pts[k]))

    # group equivalent points, then order the classes
    labels = list(range(n))
    for i in range(n):
        for j in range(n):
            if i != j and not strict[i][j] and not strict[j][i]:
                if val[i] != val[j]:
                    violations.append(("totality", pts[i], pts[j]))
                root = min(labels[i], labels[j])
                old_i, old_j = labels[i], labels[j]
                for k in range(n):
                    if labels[k] in (old_i, old_j):
                        labels[k] = root

    classes = {}
    for i, lab in enumerate(labels):
        classes.setdefault(lab, []).append(i)
    groups = list(classes.values())

    reps = [g[0] for g in groups]

    def below(g):
        rep = g[0]
        return sum(1 for r in reps if r != rep and strict[rep][r])

    groups.sort(key=below)
    for gi, g in enumerate(groups):
        for gj, g2 in enumerate(groups):
            expected = gi > gj
            for a in g:
                for b in g2:
                    if a != b and strict[a][b] != expected:
                        violations.append(("class-order", pts[a], pts[b]))

    report = OrderReport(not violations,
                         tuple(tuple(sorted(pts[i] for i in g)) for g in groups),
                         tuple(violations))

    if mult is not None and report.ok:
        extra = _product_violations(report, space, mult)
        if extra:
            report = OrderReport(False, report.classes, extra)
    return report


def _product_violations(report: OrderReport, space, mult):
    out = []
    nonzero = [v for v in space.vectors() if any(v)]
    ranks = {}
    for v in nonzero:
        ranks[v] = report.rank_of(space.normalize(v))
    for a in nonzero:
        for b in nonzero:
            if ranks[a] == ranks[b]:
                continue
            lo, hi = (a, b) if ranks[a] < ranks[b] else (b, a)
            for c in nonzero:
                pl = mult(lo, c)
                ph = mult(hi, c)
                if pl is None or ph is None or not any(pl) or not any(ph):
                    continue
                if ranks.get(tuple(pl), None) is None or ranks.get(tuple(ph)) is None:
                    continue
                if ranks[tuple(pl)] > ranks[tuple(ph)]:
                    out.append(("product", lo, hi, c))
    return tuple(out)


def span_coords(funcs, target):
    """Coefficients expressing target in the span of funcs, or None.

    Works by clearing denominators and comparing monomial coordinates.
    """
    univariate = isinstance(funcs[0], RatFunc)
    F = funcs[0].field
    dens = [f.den for f in funcs] + [target.den]
    if univariate:
        common = Pol.one(F)
    else:
        common = Pol2.const(F, 1)
    for d in dens:
        common = common * d

    def cleared(f):
        rest = common
        q = _exact_quotient(rest, f.den, univariate)
        return f.num * q

    polys = [cleared(f) for f in funcs]
    tpol = cleared(target)

    if univariate:
        width = max([p.degree for p in polys + [tpol]]) + 1
        rows = [tuple(p.coeffs) + (0,) * (width - len(p.coeffs)) for p in polys]
        tv = tuple(tpol.coeffs) + (0,) * (width - len(tpol.coeffs))
    else:
        monos = sorted({m for p in polys + [tpol] for m in p.terms})
        rows = [tuple(p.terms.get(m, 0) for m in monos) for p in polys]
        tv = tuple(tpol.terms.get(m, 0) for m in monos)
    return coords_in_basis(F, rows, tv)


def _exact_quotient(a, b, univariate: bool):
    if univariate:
        q, r = divmod(a, b)
        if not r.is_zero():
            raise ArithmeticError("inexact quotient while clearing denominators")
        return q
    q = div_exact(a, b)
    if q is None:
        raise ArithmeticError("inexact quotient while clearing denominators")
    return q


def combine_functions(funcs, coeffs):
    """Linear combination of basis functions with field scalars."""
    out = funcs[0].scale(0)
    for c, f in zip(coeffs, funcs):
        out = out + f.scale(c)
    return out


@dataclass(frozen=True)
class DecompositionReport:
    ok: bool
    violation: tuple | None = None

    def __bool__(self):
        return self.ok


def decomposition_respects(mu: HomogeneousMap, v: Valuation, funcs) -> DecompositionReport:
    """mu(1 + m) = mu(1) for every m in the maximal ideal meeting the span."""
    space = mu.space
    if len(funcs) != space.dim:
        raise ValueError("one basis function per coordinate")
    one_coords = span_coords(funcs, _one_like(funcs[0]))
    if one_coords is None:
        raise ValueError("the span must contain 1")
    base = mu.at(one_coords)
    for w in space.vectors():
        if not any(w):
            continue
        fw = combine_functions(funcs, w)
        if fw.is_zero():
            continue
        if value_positive(ord_value(v, fw)):
            u = vec_add(space.field, one_coords, w)
            if mu.at(u) != base:
                return DecompositionReport(False, w)
    return DecompositionReport(True)


def _one_like(f):
    if isinstance(f, RatFunc):
        return RatFunc.const(f.field, 1)
    return RatFunc2.const(f.field, 1)


def valuation_component_maps(v: Valuation, funcs, ring: Ring):
    """Flag maps pr_i composed with the valuation on the span of funcs.

    One homogeneous map per value-group component; point values are the
    component integers reduced into the ring.
    """
    from .ffcore import VecSpace
    F = funcs[0].field
    if ring.kind == "Zl" and ring.ell == F.p:
        raise ValueError("truncation prime must differ from the field characteristic")
    space = VecSpace(F, len(funcs))

    values = {}
    for pt in space.points():
        fw = combine_functions(funcs, pt)
        if fw.is_zero():
            raise ValueError("basis functions are linearly dependent")
        values[pt] = value_tuple(ord_value(v, fw))

    width = v.rank
    return tuple(HomogeneousMap(space, ring, {pt: values[pt][i] for pt in values})
                 for i in range(width))
