"""Seeded instance builders behind the `gen` subcommand.

Every builder is a pure function of (seed, params): one random.Random
stream consumed in a fixed order, no clock or environment input, so a
given (kind, seed, params) triple always produces the same bytes.  The
output envelope is {kind, seed, params, payload} with the payload in the
JSON schema of the module it feeds; file loaders elsewhere unwrap the
envelope, so generated files can be fed straight back to the checkers.

The standing restrictions p != 2 and p != ell are enforced here, which
keeps every generated instance inside the theory's hypotheses.
"""

from __future__ import annotations

import random

from .curvegal import CurveGaloisElem, support_size
from .ffcore import GF, VecSpace, gf, is_prime
from .flagmap import HomogeneousMap, Ring, find_flag_combination, is_c_pair
from .ladicdiv import LadicDivisor, class_map
from .polys import Pol
from .polys2 import Pol2
from .projgeom import pg_space
from .ratfunc import ClosedPoint, Curve, RatFunc2
from .valuation import Valuation, ord_value


def _check_params(p: int, ell: int) -> None:
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if not is_prime(ell):
        raise ValueError("ell must be prime")
    if p == ell:
        raise ValueError("p and ell must differ")


def _unit(rng: random.Random, ring: Ring) -> int:
    while True:
        u = rng.randrange(1, ring.modulus)
        if u % ring.ell:
            return u


# ---- flagmap-cpair ---------------------------------------------------

# exponent pairs (i, j) for basis elements P^i * T^j, P the curve
# equation and T the local coordinate at the chosen point of the curve
_EXPONENTS = ((0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0))


def _cpair(rng: random.Random, p: int = 3, ell: int = 5, level: int = 2,
           dim: int | None = None):
    """Coordinate pair of a lexicographic (curve, point) valuation.

    The subspace basis is a random invertible mixture of monomials in
    the uniformizer P = y - h(x) and the parameter T, so pure basis
    vectors take the exact value (i, j) and mixtures take lexicographic
    minima.  The two coordinate maps land in Z/ell^level.  Draws are
    retried until the pair passes is_c_pair and find_flag_combination,
    which discards the rare instances where reduction erases the flag.
    """
    _check_params(p, ell)
    if level < 1:
        raise ValueError("level must be >= 1")
    F = gf(p, 1)
    ring = Ring.truncated(ell, level)
    d = dim if dim is not None else rng.choice((2, 3))
    if d not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    space = VecSpace(F, d)

    for _ in range(200):
        h = Pol2(F, {(i, 0): rng.randrange(p) for i in range(3)})
        curve = Curve(Pol2.var_y(F) - h, check=False)
        at_inf = rng.randrange(4) == 0
        a = rng.randrange(p)
        point = ClosedPoint.infinity() if at_inf else ClosedPoint.rational(F, a)
        v = Valuation.flag(F, curve, point)

        P = curve.poly
        T = Pol2.var_x(F) if at_inf else Pol2.var_x(F) - Pol2.const(F, a)
        raw = [P.pow_(i) * T.pow_(j) for i, j in rng.sample(_EXPONENTS, d)]
        for _ in range(3 * d):  # random elementary row operations
            i, j = rng.sample(range(d), 2)
            raw[i] = raw[i] + raw[j].scale(rng.randrange(1, p))

        table, table2 = {}, {}
        for pt in space.points():
            f = Pol2.zero(F)
            for c, b in zip(pt, raw):
                f = f + b.scale(c)
            val = ord_value(v, RatFunc2.from_pol(f))
            table[pt] = ring.reduce(val[0])
            table2[pt] = ring.reduce(val[1])
        mu = HomogeneousMap(space, ring, table)
        mu2 = HomogeneousMap(space, ring, table2)

        if is_c_pair(mu, mu2).ok and find_flag_combination(mu, mu2).found:
            params = {"p": p, "ell": ell, "level": level, "dim": d}
            payload = {"p": p, "mu": mu.to_json(), "mu2": mu2.to_json(),
                       "valuation": v.to_json(),
                       "basis": [[[i, j, c] for (i, j), c in
                                  sorted(b.terms.items())] for b in raw]}
            return params, payload
    raise RuntimeError("no valid c-pair instance found for this seed")


# ---- ladic -----------------------------------------------------------


def _line_pool(F: GF):
    x, y, one = Pol2.var_x(F), Pol2.var_y(F), Pol2.const(F, 1)
    pool = []
    for c in range(F.p):
        pool.append(x + one.scale(c))
        pool.append(y + one.scale(c))
        pool.append(y - x + one.scale(c))
    return pool


def _ladic(rng: random.Random, p: int = 3, ell: int = 5, level: int = 3,
           support: int = 4):
    """Class-zero divisor assembled from principal pieces.

    Even support: unit multiples of div(L/L') over disjoint line pairs.
    Odd support: one conic piece div((y - x^2)/(L L')) plus pairs.  Each
    piece has total degree zero, so the class vanishes identically, not
    just at the truncation level.
    """
    _check_params(p, ell)
    if support < 2:
        raise ValueError("support must be >= 2")
    F = gf(p, 1)
    ring = Ring.truncated(ell, level)

    need = support if support % 2 == 0 else support - 3
    lines = rng.sample(_line_pool(F), need + (2 if support % 2 else 0))
    entries: dict = {}
    pieces = []

    def add_piece(u, num: Pol2, den_parts):
        den = Pol2.const(F, 1)
        for q in den_parts:
            den = den * q
        f = RatFunc2(F, num, den)
        pieces.append([u, f.to_json()])
        entries[Curve(num, check=False)] = entries.get(Curve(num, check=False), 0) + u
        for q in den_parts:
            entries[Curve(q, check=False)] = entries.get(Curve(q, check=False), 0) - u

    if support % 2:
        x, y = Pol2.var_x(F), Pol2.var_y(F)
        add_piece(_unit(rng, ring), y - x * x, lines[:2])
        lines = lines[2:]
    for k in range(0, len(lines), 2):
        add_piece(_unit(rng, ring), lines[k], [lines[k + 1]])

    D = LadicDivisor(F, ring, entries)
    assert class_map(D) == 0 and len(D.entries) == support
    params = {"p": p, "ell": ell, "level": level, "support": support}
    return params, {"p": p, "divisor": D.to_json(), "pieces": pieces}


# ---- curve-iota ------------------------------------------------------


def _point_pool(F: GF):
    """Closed points of the projective line: infinity, rational, quadratic."""
    pool = [ClosedPoint.infinity()]
    pool += [ClosedPoint.rational(F, a) for a in range(F.p)]
    for b in range(F.p):
        for c in range(F.p):
            q = Pol(F, (c, b, 1))
            if all(q.eval(a) for a in range(F.p)):
                pool.append(ClosedPoint(q))
    return pool


def _curve_iota(rng: random.Random, p: int = 7, ell: int = 3, level: int = 2,
                support: int = 6, s: int = 2):
    """Point map with prescribed support size, for separator runs."""
    _check_params(p, ell)
    F = gf(p, 1)
    ring = Ring.truncated(ell, level)
    pool = _point_pool(F)
    if support > len(pool):
        raise ValueError(f"support {support} exceeds the {len(pool)}-point pool")
    pts = rng.sample(pool, support)
    iota = CurveGaloisElem(F, ring, 0,
                           {pt: rng.randrange(1, ring.modulus) for pt in pts})
    assert support_size(iota) == support
    params = {"p": p, "ell": ell, "level": level, "support": support, "s": s}
    return params, {"p": p, "iota": iota.to_json(), "s": s}


# ---- cc-pair ---------------------------------------------------------


def _cc_pair(rng: random.Random, p: int = 7, ell: int = 3, level: int = 2,
             size: int = 5, corrupt: bool = False):
    """Two generator systems related by a planted unit multiplier.

    The image of each inertia generator is the planted unit times the
    generator at the permuted point.  With corrupt=True one image is
    rescaled by a second unit != 1, which no single multiplier explains
    (detectable from size >= 2 on).
    """
    _check_params(p, ell)
    if corrupt and size < 2:
        raise ValueError("a corrupted instance needs size >= 2")
    F = gf(p, 1)
    ring = Ring.truncated(ell, level)
    pts = rng.sample(_point_pool(F), size)
    targets = list(pts)
    rng.shuffle(targets)
    planted = _unit(rng, ring)

    images = []
    for w, w2 in zip(pts, targets):
        images.append([w.to_json(),
                       CurveGaloisElem(F, ring, 0, {w2: planted}).to_json()])
    if corrupt:
        bad = rng.randrange(size)
        while True:
            u = _unit(rng, ring)
            if u % ring.modulus != 1:
                break
        w, w2 = pts[bad], targets[bad]
        images[bad] = [w.to_json(),
                       CurveGaloisElem(F, ring, 0, {w2: planted * u}).to_json()]

    params = {"p": p, "ell": ell, "level": level, "size": size,
              "corrupt": corrupt}
    payload = {"p": p, "ell": ell, "m": level,
               "a": {"p": p, "ell": ell, "m": level, "genus": 0,
                     "points": [w.to_json() for w in pts],
                     "images": images},
               "b": {"p": p, "ell": ell, "m": level, "genus": 0,
                     "points": [w.to_json() for w in sorted(
                         targets, key=lambda q: q.sort_key())]},
               "planted": planted, "corrupted": corrupt}
    return params, payload


# ---- pg-plane --------------------------------------------------------


def _pg_plane(rng: random.Random, q: int = 3, n: int = 2):
    """Incidence dump of P^n over GF(q); nothing random about it."""
    if n < 2:
        raise ValueError("need projective dimension >= 2")
    st = pg_space(q, n)
    params = {"q": q, "n": n}
    return params, {"q": q, "n": n, "structure": st.to_json()}


_BUILDERS = {
    "flagmap-cpair": _cpair,
    "ladic": _ladic,
    "curve-iota": _curve_iota,
    "cc-pair": _cc_pair,
    "pg-plane": _pg_plane,
}


def kinds():
    return sorted(_BUILDERS)


def generate(kind: str, seed: int, **params) -> dict:
    """Instance envelope {kind, seed, params, payload}, deterministic."""
    try:
        build = _BUILDERS[kind]
    except KeyError:
        raise ValueError(
            f"unknown kind {kind!r}; known kinds: {', '.join(kinds())}") from None
    used, payload = build(random.Random(seed),
                          **{k: v for k, v in params.items() if v is not None})
    return {"kind": kind, "seed": seed, "params": used, "payload": payload}
