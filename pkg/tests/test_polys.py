"""Univariate and bivariate polynomial arithmetic and factorization."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from gfl.ffcore import gf
from gfl.polys import (Pol, factor, irreducible_monics, is_irreducible, pol_gcd,
                       squarefree_decomposition)
from gfl.polys2 import (Pol2, UnsupportedPolynomial, div_exact, factorization,
                        gcd2, multiplicity)
from gfl.ratfunc import ClosedPoint, Curve, RatFunc, RatFunc2, rat_compose

F2 = gf(2, 1)
F3 = gf(3, 1)
F4 = gf(2, 2)
F5 = gf(5, 1)
F7 = gf(7, 1)
F9 = gf(3, 2)


def rand_pol(rng, F, max_deg):
    deg = rng.randrange(max_deg + 1)
    coeffs = [rng.randrange(F.q) for _ in range(deg)] + [rng.randrange(1, F.q)]
    return Pol(F, coeffs)


# ---------------------------------------------------------------- univariate

coeff3 = st.lists(st.integers(0, 2), min_size=0, max_size=6)


@settings(max_examples=60, deadline=None)
@given(coeff3, coeff3, coeff3)
def test_pol_ring_axioms(a, b, c):
    pa, pb, pc = Pol(F3, a), Pol(F3, b), Pol(F3, c)
    assert pa + pb == pb + pa
    assert (pa + pb) + pc == pa + (pb + pc)
    assert pa * pb == pb * pa
    assert (pa * pb) * pc == pa * (pb * pc)
    assert pa * (pb + pc) == pa * pb + pa * pc
    assert pa + (-pa) == Pol.zero(F3)


def test_divmod_roundtrip():
    rng = random.Random(11)
    for _ in range(200):
        F = rng.choice([F3, F5, F7, F9])
        a = rand_pol(rng, F, 7)
        b = rand_pol(rng, F, 4)
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree


def test_gcd_divides_both():
    rng = random.Random(12)
    for _ in range(100):
        F = rng.choice([F3, F5])
        g = rand_pol(rng, F, 3)
        a = g * rand_pol(rng, F, 3)
        b = g * rand_pol(rng, F, 3)
        d = pol_gcd(a, b)
        assert d.lc == 1
        assert (a % d).is_zero() and (b % d).is_zero()
        # the planted factor divides the gcd
        assert (d % g.monic()).is_zero()


def brute_irreducible(f: Pol) -> bool:
    if f.degree < 1:
        return False
    for d in range(1, f.degree // 2 + 1):
        for g in irreducible_monics(f.field, d):
            if (f % g).is_zero():
                return False
    return True


def test_is_irreducible_matches_brute_force():
    rng = random.Random(13)
    for _ in range(120):
        F = rng.choice([F2, F3, F4, F5])
        f = rand_pol(rng, F, 4)
        if f.degree == 0:
            continue
        assert is_irreducible(f) == brute_irreducible(f)


def necklace_count(q, n):
    def mu(k):
        out, d = 1, 2
        while d * d <= k:
            if k % d == 0:
                k //= d
                if k % d == 0:
                    return 0
                out = -out
            d += 1
        if k > 1:
            out = -out
        return out
    return sum(mu(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


@pytest.mark.parametrize("F,n", [(F2, 3), (F2, 4), (F3, 1), (F3, 2), (F3, 3),
                                 (F4, 2), (F5, 2), (F7, 2), (F9, 2)])
def test_irreducible_monics_counts(F, n):
    monics = irreducible_monics(F, n)
    assert len(monics) == necklace_count(F.q, n)
    assert monics == sorted(monics, key=lambda p: p.coeffs)
    assert all(is_irreducible(m) and m.lc == 1 for m in monics)


def test_squarefree_decomposition_with_pth_powers():
    x = Pol.x(F3)
    one = Pol.one(F3)
    f = x * _pow(x + one, 2) * _pow(x * x + one, 3)  # x^2+1 irreducible over F_3
    parts = squarefree_decomposition(f)
    assert parts == [(x * x + one, 3), (x + one, 2), (x, 1)] or \
        sorted(parts, key=lambda t: (t[1], t[0].sort_key())) == [
            (x, 1), (x + one, 2), (x * x + one, 3)]
    # p-th power alone
    g = x * x + x + Pol.const(F3, 2)
    cube = g * g * g
    assert squarefree_decomposition(cube) == [(g, 3)]


def test_factor_reassembles_and_is_deterministic():
    rng = random.Random(14)
    for _ in range(80):
        F = rng.choice([F2, F3, F4, F5, F9])
        f = rand_pol(rng, F, 6)
        if f.degree == 0:
            continue
        unit, facs = factor(f)
        prod = Pol.const(F, unit)
        for g, e in facs:
            assert g.lc == 1 and is_irreducible(g)
            for _ in range(e):
                prod = prod * g
        assert prod == f
        assert factor(f) == (unit, facs)
        assert facs == sorted(facs, key=lambda t: t[0].sort_key())


def test_factor_splitting_field_closed_form():
    # x^q - x is the product of all monic linear polynomials
    for F in (F4, F5, F9):
        x = Pol.x(F)
        f = _pow(x, F.q) - x
        unit, facs = factor(f)
        assert unit == 1
        assert len(facs) == F.q
        assert all(g.degree == 1 and e == 1 for g, e in facs)


def _pow(p, n):
    out = Pol.one(p.field)
    for _ in range(n):
        out = out * p
    return out


# ----------------------------------------------------------------- bivariate

def P2(F, terms):
    return Pol2(F, terms)


def test_pol2_arithmetic_and_division():
    x, y = Pol2.var_x(F3), Pol2.var_y(F3)
    a = (x + y) * (x * x + y)
    assert div_exact(a, x + y) == x * x + y
    assert div_exact(a, x * y) is None
    assert a - a == Pol2.zero(F3)
    assert (x + y) * Pol2.const(F3, 2) == x.scale(2) + y.scale(2)


def test_multiplicity_counts_planted_powers():
    x, y = Pol2.var_x(F5), Pol2.var_y(F5)
    c = y - x * x
    f = c * c * c * (y + x)
    assert multiplicity(f, c) == 3
    assert multiplicity(f, y + x) == 1
    assert multiplicity(f, y - x) == 0


def test_gcd2_planted_common_factor():
    x, y = Pol2.var_x(F3), Pol2.var_y(F3)
    g = y - x * x
    a = g * (y + x)
    b = g * (x * x + Pol2.const(F3, 1))
    assert gcd2(a, b) == g.monic_grlex()
    # pure content gcd
    assert gcd2(x * (y - Pol2.const(F3, 1)), x * (x + y)) == x


def test_factorization_desk_classes():
    x, y = Pol2.var_x(F3), Pol2.var_y(F3)
    one = Pol2.const(F3, 1)

    # univariate content and y-linear parts
    f = (y - x) * (y - x * x) * (x + one).scale(2)
    unit, facs = factorization(f)
    prod = Pol2.const(F3, unit)
    for g, e in facs:
        for _ in range(e):
            prod = prod * g
    assert prod == f
    assert {g for g, _ in facs} == {(y - x).monic_grlex(), (y - x * x).monic_grlex(),
                                    (x + one).monic_grlex()}

    # repeated factor
    unit, facs = factorization((y - x) * (y - x))
    assert facs == [((y - x).monic_grlex(), 2)]

    # quadratic in y that splits
    unit, facs = factorization(y * y - x * x)
    assert {g for g, _ in facs} == {(y - x).monic_grlex(), (y + x).monic_grlex()}

    # quadratic in y that does not split: y^2 - x^3
    unit, facs = factorization(y * y - x * x * x)
    assert len(facs) == 1 and facs[0][1] == 1

    # linear in x even though cubic in y
    g = y * y * y + x * y + one
    unit, facs = factorization(g)
    assert facs == [(g.monic_grlex(), 1)]


def test_factorization_rejects_outside_desk():
    x, y = Pol2.var_x(F3), Pol2.var_y(F3)
    dense = y * y * y + x * x * x + Pol2.const(F3, 1)
    with pytest.raises(UnsupportedPolynomial):
        factorization(dense)


# ------------------------------------------------------- rational functions

def test_ratfunc_reduction_and_equality():
    t = Pol.x(F5)
    one = Pol.one(F5)
    f = RatFunc(F5, t * t - one, t - one)
    assert f == RatFunc.from_pol(t + one)
    g = RatFunc(F5, (t + one).scale(3), (t - one).scale(3))
    assert g == RatFunc(F5, t + one, t - one)
    assert g.den.lc == 1


def test_ratfunc_ord_and_degree_sum():
    t = Pol.x(F3)
    f = RatFunc(F3, t * t, t + Pol.one(F3))
    p_t = ClosedPoint(t)
    p_t1 = ClosedPoint(t + Pol.one(F3))
    inf = ClosedPoint.infinity()
    assert f.ord_at(p_t) == 2
    assert f.ord_at(p_t1) == -1
    assert f.ord_at(inf) == -1

    # principal divisors have degree zero
    rng = random.Random(15)
    for _ in range(40):
        F = rng.choice([F3, F5])
        f = RatFunc(F, rand_pol(rng, F, 5), rand_pol(rng, F, 5))
        if f.is_zero() or f.is_const():
            continue
        total = f.ord_at(ClosedPoint.infinity())
        for part in (f.num, f.den):
            for g, _ in factor(part)[1]:
                if g.degree > 0:
                    total += f.ord_at(ClosedPoint(g)) * g.degree
        assert total == 0


def test_rat_compose():
    t = Pol.x(F5)
    z = RatFunc.from_pol(t * t)             # t^2
    w = RatFunc(F5, t + Pol.one(F5), t)     # (t+1)/t
    zw = rat_compose(z, w)
    assert zw == RatFunc(F5, (t + Pol.one(F5)) * (t + Pol.one(F5)), t * t)
    rng = random.Random(16)
    for _ in range(25):
        a = RatFunc(F5, rand_pol(rng, F5, 3), rand_pol(rng, F5, 2))
        b = RatFunc(F5, rand_pol(rng, F5, 2), rand_pol(rng, F5, 2))
        if a.degree == 0 or b.degree == 0:
            continue
        assert rat_compose(a, b).degree == a.degree * b.degree


def test_closed_point_validation():
    t = Pol.x(F3)
    with pytest.raises(ValueError):
        ClosedPoint(t * t - Pol.one(F3))     # reducible
    with pytest.raises(ValueError):
        ClosedPoint((t + Pol.one(F3)).scale(2))  # not monic


def test_ratfunc2_ord_along():
    x, y = Pol2.var_x(F7), Pol2.var_y(F7)
    c = Curve(y - x)
    f = RatFunc2(F7, (y - x) * (y - x), y + x)
    assert f.ord_along(c) == 2
    assert f.ord_along(Curve(y + x)) == -1
    assert f.ord_along(Curve.line_at_infinity()) == -1
    with pytest.raises(ValueError):
        Curve(y * y - x * x)                  # reducible
    assert Curve(y - x) == Curve((y - x).scale(3))  # normalized


def test_ratfunc2_reduction():
    x, y = Pol2.var_x(F5), Pol2.var_y(F5)
    f = RatFunc2(F5, (y - x) * (y + x), y - x)
    assert f == RatFunc2.from_pol(y + x)
    assert (f - f).is_zero()
    assert (f / f) == RatFunc2.const(F5, 1)
