"""Truncated l-adic divisor calculus on the projective plane.

Divisors live on the surface with Picard group Z: components are
irreducible affine plane curves plus the line at infinity, and the class
of a divisor is its total degree.  Coefficients are truncated to Z/l^m.
A divisor of class zero decomposes as a Z/l^m-combination of principal
divisors supported on its own components; the decomposition runs through
the integer kernel of the degree map, so the support never grows.

Functions enter either as plain rational functions in x, y or as finite
l-adic words (f_0, ..., f_{m-1}) read as f_0 f_1^l ... f_{m-1}^(l^(m-1)).
The support of a word accumulates the orders of its letters with l-power
weights; letters can cancel a component at one truncation level and
expose it at a higher one.

`gff_subfield` tests whether two words sit in a common subfield of
transcendence degree one: pairwise vanishing residues along every
component of either word, then an explicit common generator found by
minimal-polynomial descent in one coordinate.  Support overlap between
the words is reported, not rejected: shared rational components such as
the line at infinity are chart artifacts.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .ffcore import GF
from .flagmap import Ring
from .intlin import integer_rank, kernel_basis, solve_mod_prime_power
from .polys import Pol
from .polys2 import Pol2, factorization
from .ratfunc import Curve, RatFunc, RatFunc2, compose_solve
from .valuation import residues_vanish_all


class LadicDivisor:
    """Finite combination of irreducible plane curves, coefficients mod l^m."""

    __slots__ = ("field", "ring", "entries")

    def __init__(self, field: GF, ring: Ring, entries=None):
        if ring.kind != "Zl":
            raise ValueError("divisor coefficients live in a truncated ring")
        table = {}
        for curve, coeff in dict(entries or {}).items():
            if not isinstance(curve, Curve):
                raise TypeError("support must consist of curves")
            coeff = ring.reduce(coeff)
            if coeff:
                if curve in table:
                    raise ValueError("support curves must be pairwise distinct")
                table[curve] = coeff
        ordered = tuple(sorted(table.items(), key=lambda kv: kv[0].sort_key()))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", ordered)

    def __setattr__(self, *a):
        raise AttributeError("LadicDivisor is immutable")

    def support(self):
        return tuple(c for c, _ in self.entries)

    def coefficient(self, curve: Curve) -> int:
        for c, a in self.entries:
            if c == curve:
                return a
        return 0

    def __eq__(self, other):
        return (isinstance(other, LadicDivisor) and self.field is other.field
                and self.ring == other.ring and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        parts = [f"{a}*({c!r})" for c, a in self.entries] or ["0"]
        return "LadicDivisor(" + " + ".join(parts) + ")"

    def to_json(self):
        return {"ell": self.ring.ell, "m": self.ring.m,
                "entries": [[c.to_json(), a] for c, a in self.entries]}

    @classmethod
    def from_json(cls, field: GF, data):
        ring = Ring.truncated(data["ell"], data["m"])
        return cls(field, ring,
                   {Curve.from_json(field, cj): a for cj, a in data["entries"]})


def surface_divisor(f: RatFunc2) -> dict:
    """div(f) on the plane: finite components plus the line at infinity."""
    if f.is_zero():
        raise ValueError("the zero function has no divisor")
    coeffs = {}
    for part, sign in ((f.num, 1), (f.den, -1)):
        if part.is_const():
            continue
        _, factors = factorization(part)
        for g, e in factors:
            curve = Curve(g, check=False)
            coeffs[curve] = coeffs.get(curve, 0) + sign * e
    at_inf = f.den.total_degree - f.num.total_degree
    if at_inf:
        coeffs[Curve.line_at_infinity()] = at_inf
    return {c: a for c, a in coeffs.items() if a}


def class_map(D: LadicDivisor) -> int:
    """Image in the truncated Picard group: total degree mod l^m."""
    return D.ring.reduce(sum(a * c.degree for c, a in D.entries))


@dataclass(frozen=True)
class DDReport:
    """Decomposition D = sum of a_i div(f_i) at truncation level m.

    `warnings` lists small integer relations among the lifted a_i; such a
    relation cannot be distinguished from a truncation artifact, so the
    independence of the coefficients is only certified at this level.
    """

    pairs: tuple
    level: int
    warnings: tuple


def _kernel_vectors(degrees):
    vectors = []
    for vec in kernel_basis([list(degrees)]):
        lead = next((c for c in vec if c), 1)
        if lead < 0:
            vec = [-c for c in vec]
        vectors.append(tuple(vec))
    return vectors


def _support_function(field: GF, curves, vector) -> RatFunc2:
    """Product of curve polynomials to the given powers.

    The line at infinity never contributes a factor; its order comes out
    of the total-degree balance, which the degree-zero condition on
    `vector` fixes to the prescribed coefficient.
    """
    num = Pol2.const(field, 1)
    den = Pol2.const(field, 1)
    for curve, c in zip(curves, vector):
        if curve.is_infinite or c == 0:
            continue
        if c > 0:
            num = num * curve.poly.pow_(c)
        else:
            den = den * curve.poly.pow_(-c)
    return RatFunc2(field, num, den)


_RELATION_BOUND = 3  # small-relation scan: max |n_i| when flagging dependence


def _small_relations(lifts, modulus):
    if not lifts:
        return ()
    found = []
    for rel in product(range(-_RELATION_BOUND, _RELATION_BOUND + 1),
                       repeat=len(lifts)):
        if any(rel) and sum(n * a for n, a in zip(rel, lifts)) % modulus == 0:
            found.append(rel)
    return tuple(found)


def dd_decompose(D: LadicDivisor) -> DDReport:
    """Write a class-zero divisor as a combination of principal divisors.

    The integer kernel of the degree row on supp(D) gives degree-zero
    vectors; each turns into a function supported in supp(D).  The
    coefficients a_i solve a linear system mod l^m.  A divisor whose class
    vanishes only because of the truncation (the integer degree is a
    nonzero multiple of l^m) has no decomposition and is rejected.
    """
    if class_map(D) != 0:
        raise ValueError("divisor class is nonzero")
    ring = D.ring
    curves = D.support()
    if not curves:
        return DDReport(pairs=(), level=ring.m, warnings=())
    degrees = [c.degree for c in curves]
    vectors = _kernel_vectors(degrees)
    funcs = [_support_function(D.field, curves, v) for v in vectors]

    mat = [[v[i] for v in vectors] for i in range(len(curves))]
    target = [a for _, a in D.entries]
    sol = solve_mod_prime_power(mat, target, ring.ell, ring.m)
    if sol is None:
        raise ValueError(
            "class vanishes only at the truncation level; "
            "no decomposition at this precision")

    pairs = tuple((f, ring.reduce(a)) for f, a in zip(funcs, sol)
                  if ring.reduce(a))
    kept = [(v, ring.reduce(a)) for v, a in zip(vectors, sol) if ring.reduce(a)]
    if kept:
        scaled = [[a * c for c in v] for v, a in kept]
        assert integer_rank(scaled) == len(kept)
    warnings = tuple(
        ("relation", rel) for rel in _small_relations([a for _, a in kept],
                                                      ring.modulus))
    report = DDReport(pairs=pairs, level=ring.m, warnings=warnings)

    # reconstruction must be exact at the truncation level
    residual = {c: a for c, a in D.entries}
    for f, a in pairs:
        for curve, mult in surface_divisor(f).items():
            residual[curve] = residual.get(curve, 0) - a * mult
    assert all(ring.reduce(v) == 0 for v in residual.values())
    return report


class LadicFunction:
    """Finite l-adic word (f_0, ..., f_{k-1}), read as prod f_i^(l^i)."""

    __slots__ = ("field", "ell", "funcs")

    def __init__(self, field: GF, ell: int, funcs):
        funcs = tuple(funcs)
        if not funcs:
            raise ValueError("a word needs at least one letter")
        for f in funcs:
            if not isinstance(f, RatFunc2) or f.is_zero():
                raise ValueError("letters must be nonzero plane functions")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "funcs", funcs)

    def __setattr__(self, *a):
        raise AttributeError("LadicFunction is immutable")

    def accumulated_orders(self) -> dict:
        """Order along each component, letters weighted by l-powers."""
        total = {}
        for i, f in enumerate(self.funcs):
            weight = self.ell ** i
            for curve, mult in surface_divisor(f).items():
                total[curve] = total.get(curve, 0) + weight * mult
        return total

    def to_json(self):
        return {"ell": self.ell, "funcs": [f.to_json() for f in self.funcs]}

    @classmethod
    def from_json(cls, field: GF, data):
        return cls(field, data["ell"],
                   [RatFunc2.from_json(field, fj) for fj in data["funcs"]])


def supp_x(fhat: LadicFunction, m: int):
    """Components whose accumulated coefficient survives truncation at m."""
    modulus = fhat.ell ** m
    keep = [c for c, a in fhat.accumulated_orders().items() if a % modulus]
    return tuple(sorted(keep, key=lambda c: c.sort_key()))


def _as_univariate(f: RatFunc2):
    """Read a plane function as a function of one coordinate, if it is one.

    Returns (axis, RatFunc) with axis "x" or "y", or None.  Constants pass
    as x-functions.
    """
    if f.num.deg_y == 0 and f.den.deg_y == 0:
        return "x", RatFunc(f.field, f.num.univariate_x(), f.den.univariate_x())
    if f.num.deg_x == 0 and f.den.deg_x == 0:
        return "y", RatFunc(f.field, f.num.univariate_y(), f.den.univariate_y())
    return None


class _ZPoly:
    """Polynomial in one auxiliary variable with RatFunc coefficients."""

    def __init__(self, coeffs):
        while coeffs and coeffs[-1].is_zero():
            coeffs = coeffs[:-1]
        self.coeffs = list(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def monic(self):
        lead = self.coeffs[-1]
        return _ZPoly([c / lead for c in self.coeffs])

    def rem(self, other):
        a = list(self.coeffs)
        b = other.coeffs
        while len(a) >= len(b) and a:
            q = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[shift + i] = a[shift + i] - q * c
            while a and a[-1].is_zero():
                a.pop()
        return _ZPoly(a)


def _zpoly_gcd(a: _ZPoly, b: _ZPoly) -> _ZPoly:
    while not b.is_zero():
        a, b = b, a.rem(b)
    return a.monic()


def subfield_generator(funcs) -> RatFunc:
    """Generator of the subfield of k(t) generated by the given functions.

    Computes the minimal polynomial of t over the subfield as the gcd of
    num_i(Z) - h_i * den_i(Z); one of its coefficients of maximal height
    generates (height equals the gcd degree exactly for such a
    coefficient).  Polynomial generators are normalized to be monic with
    zero constant term.
    """
    field = funcs[0].field
    working = [h for h in funcs if not h.is_const()]
    if not working:
        raise ValueError("constants generate no subfield")

    def z_poly(h: RatFunc) -> _ZPoly:
        coeffs = []
        top = max(h.num.degree, h.den.degree)
        for i in range(top + 1):
            cn = h.num.coeffs[i] if i < len(h.num.coeffs) else 0
            cd = h.den.coeffs[i] if i < len(h.den.coeffs) else 0
            coeffs.append(RatFunc.const(field, cn) - h * RatFunc.const(field, cd))
        return _ZPoly(coeffs)

    g = z_poly(working[0])
    for h in working[1:]:
        g = _zpoly_gcd(g, z_poly(h))
    d = g.degree
    if d < 1:
        raise ValueError("functions do not determine a proper subfield")
    # every nonconstant coefficient of the monic minimal polynomial is a
    # degree-one function of a minimal-height generator, hence generates
    gen = next(c for c in g.monic().coeffs[:-1]
               if not c.is_const() and c.degree == d)
    for h in working:
        assert compose_solve(h, gen) is not None
    if gen.den.is_const():
        p = gen.num.scale(field.inv(gen.den.coeffs[0])).monic()
        if p.coeffs[0]:
            p = p - Pol.const(field, p.coeffs[0])
        gen = RatFunc.from_pol(p)
    return gen


@dataclass(frozen=True)
class GffReport:
    """Outcome of the common-subfield test for two l-adic words.

    On success `generator` is a one-variable function (with its axis) such
    that every letter of both words is a rational function of it.  On
    failure `witness` carries the first divisorial component with a
    nontrivial residue, or the axis obstruction.  `shared_support` lists
    the components the two words have in common at the chosen level; a
    shared rational component (the line at infinity, say) is a chart
    artifact and does not block the test, so overlap is reported rather
    than rejected.
    """

    ok: bool
    axis: str | None = None
    generator: RatFunc | None = None
    witness: tuple | None = None
    shared_support: tuple = ()
    checked: int = 0


def gff_subfield(fhat: LadicFunction, ghat: LadicFunction,
                 m: int | None = None) -> GffReport:
    """Test that two words sit in a common one-dimensional subfield.

    Sweeps residues of every letter pair along all components of both
    words; the first nontrivial residue fails the test.  When the sweep
    is clean the explicit generator is found by minimal-polynomial
    descent, provided all letters read as functions of one coordinate
    (the desk scope).
    """
    if fhat.field is not ghat.field or fhat.ell != ghat.ell:
        raise ValueError("words must share a field and a prime")
    level = m if m is not None else max(len(fhat.funcs), len(ghat.funcs))
    shared = tuple(sorted(set(supp_x(fhat, level)) & set(supp_x(ghat, level)),
                          key=lambda c: c.sort_key()))

    checked = 0
    for f in fhat.funcs:
        for g in ghat.funcs:
            if f.is_const() or g.is_const():
                continue
            sweep = residues_vanish_all(f, g)
            checked += len(sweep.checked)
            if not sweep.ok:
                return GffReport(ok=False, witness=("residue", sweep.witness),
                                 shared_support=shared, checked=checked)

    letters = [f for f in list(fhat.funcs) + list(ghat.funcs) if not f.is_const()]
    reads = [_as_univariate(f) for f in letters]
    if any(r is None for r in reads):
        raise ValueError("generator search needs single-coordinate letters")
    axes = {axis for axis, _ in reads}
    if len(axes) != 1:
        # residues vanished but the letters live on different coordinate
        # lines; report the obstruction instead of guessing a generator
        return GffReport(ok=False, witness=("mixed axes", tuple(sorted(axes))),
                         shared_support=shared, checked=checked)
    axis = axes.pop()
    gen = subfield_generator([h for _, h in reads])
    return GffReport(ok=True, axis=axis, generator=gen,
                     shared_support=shared, checked=checked)
