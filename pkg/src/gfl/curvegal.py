"""Degree-weighted divisor calculus and Kummer pairings on the projective line.

A rational function on P^1 over GF(q) has a principal divisor supported on
closed points (monic irreducible polynomials in t, plus the point at
infinity).  Dual to the divisor group sits the module of Z/l^m-valued maps
on closed points taken modulo constant shifts; the pairing

    [mu, f] = sum over P of mu(P) * ord_P(f) * deg(P)   (mod l^m)

is well defined on that quotient because deg div(f) = 0.  Closed points
stand in for geometric points of the algebraically closed theory, which is
why every pairing term carries the weight deg(P).

On top of the pairing the module builds:

  * inertia generators delta_P (pairing = order of vanishing at P),
  * separating homomorphisms that certify a cyclic subgroup is not caught
    inside the span of any s inertia generators (`cu_separator`),
  * genus detection from declared finite quotients killing all inertia,
  * unit matching between two generator systems related pointwise by a
    single scalar in (Z/l^m)^* (`cc_match`).

Pic^0 of the projective line is trivial, so every degree-zero divisor is
principal with multiplier 1; the separator never needs an auxiliary
torsion multiple.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .ffcore import GF
from .flagmap import Ring
from .intlin import kernel_basis, solve_mod_prime_power
from .polys import Pol, factor, irreducible_monics
from .ratfunc import ClosedPoint, RatFunc
from .util import parallel_map


class Divisor:
    """Finite formal Z-combination of closed points of P^1."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs=None):
        table = {}
        for point, mult in dict(coeffs or {}).items():
            if not isinstance(point, ClosedPoint):
                raise TypeError("divisor support must consist of closed points")
            if mult:
                table[point] = int(mult)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", table)

    def __setattr__(self, *a):
        raise AttributeError("Divisor is immutable")

    def support(self):
        return tuple(sorted(self.coeffs, key=lambda p: p.sort_key()))

    def multiplicity(self, point: ClosedPoint) -> int:
        return self.coeffs.get(point, 0)

    @property
    def degree(self) -> int:
        return sum(m * p.degree for p, m in self.coeffs.items())

    def items(self):
        return tuple((p, self.coeffs[p]) for p in self.support())

    def __add__(self, other):
        out = dict(self.coeffs)
        for p, m in other.coeffs.items():
            out[p] = out.get(p, 0) + m
        return Divisor(self.field, out)

    def __neg__(self):
        return Divisor(self.field, {p: -m for p, m in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, n: int):
        return Divisor(self.field, {p: n * m for p, m in self.coeffs.items()})

    def __eq__(self, other):
        return (isinstance(other, Divisor) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field.p, self.field.e, self.items()))

    def __repr__(self):
        if not self.coeffs:
            return "Divisor(0)"
        parts = [f"{m}*[{p!r}]" for p, m in self.items()]
        return "Divisor(" + " + ".join(parts) + ")"

    def to_json(self):
        return [[p.to_json(), m] for p, m in self.items()]

    @classmethod
    def from_json(cls, field: GF, data):
        return cls(field, {ClosedPoint.from_json(field, pj): m for pj, m in data})


def principal_divisor(f: RatFunc) -> Divisor:
    """div(f): orders of vanishing at finite closed points plus infinity."""
    if f.is_zero():
        raise ValueError("the zero function has no divisor")
    coeffs = {}
    _, num_factors = factor(f.num)
    for g, e in num_factors:
        coeffs[ClosedPoint(g)] = coeffs.get(ClosedPoint(g), 0) + e
    _, den_factors = factor(f.den)
    for g, e in den_factors:
        coeffs[ClosedPoint(g)] = coeffs.get(ClosedPoint(g), 0) - e
    at_inf = f.den.degree - f.num.degree
    if at_inf:
        coeffs[ClosedPoint.infinity()] = at_inf
    div = Divisor(f.field, coeffs)
    assert div.degree == 0
    return div


class CurveGaloisElem:
    """Z/l^m-valued map on closed points, finite off a default value.

    Two elements are identified when they differ by a constant shift; the
    exception table is kept minimal (no entry equal to the default), so the
    support size is just the table size.
    """

    __slots__ = ("field", "ring", "default", "exceptions")

    def __init__(self, field: GF, ring: Ring, default: int = 0, exceptions=None):
        if ring.kind != "Zl":
            raise ValueError("point maps take values in a truncated ring")
        default = ring.reduce(default)
        table = {}
        for point, v in dict(exceptions or {}).items():
            if not isinstance(point, ClosedPoint):
                raise TypeError("exceptions must be keyed by closed points")
            v = ring.reduce(v)
            if v != default:
                table[point] = v
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "default", default)
        object.__setattr__(self, "exceptions", table)

    def __setattr__(self, *a):
        raise AttributeError("CurveGaloisElem is immutable")

    def at(self, point: ClosedPoint) -> int:
        return self.exceptions.get(point, self.default)

    def shift(self, c: int) -> "CurveGaloisElem":
        return CurveGaloisElem(
            self.field, self.ring, self.default + c,
            {p: v + c for p, v in self.exceptions.items()})

    def normalized(self) -> "CurveGaloisElem":
        """The representative with default value 0."""
        return self.shift(-self.default)

    def scale(self, c: int) -> "CurveGaloisElem":
        # well defined mod constants: c * (mu + const) shifts by c * const
        return CurveGaloisElem(
            self.field, self.ring, self.default * c,
            {p: v * c for p, v in self.exceptions.items()})

    def _key(self):
        norm = self.normalized()
        return tuple(sorted(((p.sort_key(), v) for p, v in norm.exceptions.items())))

    def __eq__(self, other):
        return (isinstance(other, CurveGaloisElem) and self.field is other.field
                and self.ring == other.ring and self._key() == other._key())

    def __hash__(self):
        return hash((self.ring, self._key()))

    def __repr__(self):
        exc = {repr(p): v for p, v in sorted(
            self.exceptions.items(), key=lambda kv: kv[0].sort_key())}
        return f"CurveGaloisElem(default={self.default}, exceptions={exc})"

    def to_json(self):
        return {
            "ell": self.ring.ell, "m": self.ring.m, "default": self.default,
            "exceptions": [[p.to_json(), v] for p, v in sorted(
                self.exceptions.items(), key=lambda kv: kv[0].sort_key())],
        }

    @classmethod
    def from_json(cls, field: GF, data):
        ring = Ring.truncated(data["ell"], data["m"])
        exc = {ClosedPoint.from_json(field, pj): v for pj, v in data["exceptions"]}
        return cls(field, ring, data["default"], exc)


def inertia_generator(field: GF, point: ClosedPoint, ring: Ring) -> CurveGaloisElem:
    """delta_P: pairs with f to ord_P(f) * deg(P) mod l^m."""
    return CurveGaloisElem(field, ring, 0, {point: 1})


def diagonal(field: GF, ring: Ring) -> CurveGaloisElem:
    """The sum of all inertia generators; kills every pairing."""
    return CurveGaloisElem(field, ring, 1)


def support_size(mu: CurveGaloisElem) -> int:
    """Minimal number of points off a constant, over all constant shifts.

    The ambient point set is infinite while the exception table is finite,
    so the default value is the only shift attaining the minimum.
    """
    return len(mu.exceptions)


def kummer_pairing(mu: CurveGaloisElem, f: RatFunc, m: int | None = None) -> int:
    """[mu, f] = sum of mu(P) * ord_P(f) * deg(P), reduced mod l^m.

    Independent of the constant-shift representative because div(f) has
    degree zero.  Bilinear: [mu, fg] = [mu, f] + [mu, g].
    """
    level = mu.ring.m if m is None else m
    modulus = mu.ring.ell ** level
    total = 0
    for point, mult in principal_divisor(f).items():
        total += mu.at(point) * mult * point.degree
    return total % modulus


def _fresh_points(field: GF, avoid, count: int):
    """First `count` finite closed points outside `avoid`, ascending."""
    out = []
    degree = 1
    while len(out) < count:
        for g in irreducible_monics(field, degree):
            point = ClosedPoint(g)
            if point not in avoid:
                out.append(point)
                if len(out) == count:
                    return out
        degree += 1
    return out


def _divisor_function(field: GF, points, vector) -> RatFunc:
    """Function with divisor sum(c_i * P_i) for a degree-zero vector.

    Finite points contribute their polynomial to the given power; the
    point at infinity absorbs the remaining degree automatically.
    """
    f = RatFunc.const(field, 1)
    for point, c in zip(points, vector):
        if point.is_infinity or c == 0:
            continue
        f = f * RatFunc.from_pol(point.poly).pow_(c)
    return f


@dataclass(frozen=True)
class CuSeparator:
    """Separating homomorphism data: psi(mu) = ([mu, f_j])_j on Z/l^level.

    `inertia_images` lists psi(delta_q) for q in `points`; inertia at any
    point outside `points` maps to zero, so span checks against arbitrary
    s-subsets of points reduce to subsets of `points`.
    """

    points: tuple
    funcs: tuple
    level: int
    case: int
    iota_image: tuple
    inertia_images: tuple

    def psi(self, mu: CurveGaloisElem) -> tuple:
        return tuple(kummer_pairing(mu, f, self.level) for f in self.funcs)


def cu_separator(iota: CurveGaloisElem, s: int, m: int | None = None) -> CuSeparator:
    """Build psi with psi(iota) outside the span of any s inertia images.

    Selects a set Q of 2s+2 points: either points with pairwise distinct
    iota-values when enough values exist (case 1), or s+1 points sharing
    the default value plus s+1 exception points (case 2).  Either way,
    removing any s points leaves iota nonconstant on the rest, which a
    difference function f with div(f) = P - P' (weighted by degrees)
    detects through the pairing.  The separation claim is verified here by
    exhaustion over all s-subsets of Q.
    """
    if s < 1:
        raise ValueError("separation needs s >= 1")
    if support_size(iota) <= s:
        raise ValueError(f"support {support_size(iota)} does not exceed s={s}")
    field, ring = iota.field, iota.ring
    level = ring.m if m is None else m
    if level < 1 or level > ring.m:
        raise ValueError("level must be between 1 and the ring level")
    modulus = ring.ell ** level
    size = 2 * s + 2

    exceptions = sorted(iota.exceptions.items(), key=lambda kv: kv[0].sort_key())
    by_value = {}
    for point, v in exceptions:
        by_value.setdefault(v, point)  # least point attaining each value

    if len(by_value) + 1 >= size:
        # case 1: one point per value; the default value (attained at any
        # fresh point) first, then the smallest exception values
        case = 1
        values = sorted(by_value)
        chosen = []
        default_used = False
        for v in ([iota.default] + values)[:size]:
            if v == iota.default and not default_used:
                chosen.append(_fresh_points(field, set(iota.exceptions), 1)[0])
                default_used = True
            else:
                chosen.append(by_value[v])
        q_points = chosen
        picked_values = [iota.at(p) for p in q_points]
        if len({v % modulus for v in picked_values}) != size:
            raise ValueError("level collapses the selected values")
    else:
        # case 2: s+1 default-value points and s+1 exception points
        case = 2
        q_points = _fresh_points(field, set(iota.exceptions), s + 1)
        q_points += [p for p, _ in exceptions[:s + 1]]
        if any((v - iota.default) % modulus == 0 for _, v in exceptions[:s + 1]):
            raise ValueError("level collapses the selected values")

    degree_row = [p.degree for p in q_points]
    basis = kernel_basis([degree_row])
    funcs = tuple(_divisor_function(field, q_points, vec) for vec in basis)

    sep = CuSeparator(
        points=tuple(q_points), funcs=funcs, level=level, case=case,
        iota_image=tuple(kummer_pairing(iota, f, level) for f in funcs),
        inertia_images=tuple(
            tuple(kummer_pairing(inertia_generator(field, p, ring), f, level)
                  for f in funcs)
            for p in q_points))

    def separated(subset) -> bool:
        cols = [sep.inertia_images[i] for i in subset]
        mat = [[cols[j][r] for j in range(len(cols))] for r in range(len(funcs))]
        found = solve_mod_prime_power(mat, list(sep.iota_image), ring.ell, level)
        return found is None

    verdicts = parallel_map(separated, list(combinations(range(size), s)))
    assert all(verdicts), "separation certificate failed exhaustive check"
    return sep


class QuotientCandidate:
    """Declared finite cyclic quotient: images of the known generators.

    `inertia_images` maps points to residues; unlisted points map to 0.
    `extra_images` are images of declared generators beyond inertia, which
    only genus >= 1 data possesses.
    """

    __slots__ = ("modulus", "inertia_images", "extra_images")

    def __init__(self, modulus: int, inertia_images=None, extra_images=()):
        if modulus < 2:
            raise ValueError("a finite quotient needs modulus >= 2")
        table = {p: v % modulus for p, v in dict(inertia_images or {}).items()
                 if v % modulus}
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "inertia_images", table)
        object.__setattr__(self, "extra_images",
                           tuple(v % modulus for v in extra_images))

    def __setattr__(self, *a):
        raise AttributeError("QuotientCandidate is immutable")

    def kills_inertia(self) -> bool:
        return not self.inertia_images

    def is_nonzero(self) -> bool:
        return bool(self.inertia_images) or any(self.extra_images)


class CurveGaloisData:
    """Curve-side generator data: genus, point list, declared quotients.

    Genus 0 data is concrete (the dual module is generated by inertia), so
    its quotient candidates may not declare extra generators.
    """

    __slots__ = ("genus", "points", "quotients")

    def __init__(self, genus: int, points=(), quotients=()):
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        quotients = tuple(quotients)
        if genus == 0:
            for cand in quotients:
                if cand.extra_images:
                    raise ValueError(
                        "genus 0 data has no generators beyond inertia")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "points", tuple(points))
        object.__setattr__(self, "quotients", quotients)

    def __setattr__(self, *a):
        raise AttributeError("CurveGaloisData is immutable")


def genus_detect(data: CurveGaloisData) -> bool:
    """True iff some declared nonzero quotient kills every inertia image.

    Genus 0 data always scans to False: with inertia generating the whole
    module, a quotient killing inertia is the zero quotient.
    """
    return any(cand.kills_inertia() and cand.is_nonzero()
               for cand in data.quotients)


@dataclass(frozen=True)
class CCMatch:
    """Unit-matching outcome between two inertia generator systems."""

    ok: bool
    unit: int | None
    pairs: tuple
    failure: tuple | None


def cc_match(data_a: CurveGaloisData, data_b: CurveGaloisData,
             images, ring: Ring) -> CCMatch:
    """Recover the single unit a with image(delta_w) = a * delta_w'.

    `images` maps each point of `data_a` to the image of its inertia
    generator, written in the second system's module.  The match succeeds
    when every image is a unit multiple of a single generator, the induced
    point map is a bijection onto `data_b`'s points, and the multiplier is
    one constant a for all points (forced by the diagonal relation: the sum
    of all generators on one side is a times the sum on the other).
    """
    modulus = ring.modulus
    order = sorted(data_a.points, key=lambda p: p.sort_key())
    pairs = []
    units = []
    for w in order:
        if w not in images:
            return CCMatch(False, None, (), ("missing image", w))
        norm = images[w].normalized()
        if len(norm.exceptions) != 1:
            return CCMatch(False, None, (), ("not a generator multiple", w))
        (w2, a_w), = norm.exceptions.items()
        if a_w % ring.ell == 0:
            return CCMatch(False, None, (), ("multiplier not a unit", w))
        pairs.append((w, w2))
        units.append(a_w % modulus)
    targets = [w2 for _, w2 in pairs]
    if len(set(targets)) != len(targets) or set(targets) != set(data_b.points):
        return CCMatch(False, None, (), ("not a bijection onto the second system",))
    for i in range(1, len(units)):
        if units[i] != units[0]:
            return CCMatch(False, None, (),
                           ("inconsistent", order[0], order[i]))
    unit = units[0] if units else 1
    return CCMatch(True, unit, tuple(pairs), None)
