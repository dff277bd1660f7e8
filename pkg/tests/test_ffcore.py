from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfl.ffcore import (
    CONWAY,
    VecSpace,
    coords_in_basis,
    extension_field,
    gaussian_binomial,
    gf,
    gf_kernel,
    in_span,
    normalize_point,
    proj_points,
    rref,
    subspace_bases,
    vec_add,
    vec_scale,
)


def field_axioms(F):
    els = list(F.elements())
    for a in els:
        assert F.add(a, 0) == a
        assert F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    for a, b in product(els, repeat=2):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
    for a, b, c in product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (3, 3)])
def test_field_axioms(p, e):
    field_axioms(gf(p, e))


def test_conway_moduli_irreducible():
    # degree 2 and 3 polynomials are irreducible iff they have no roots
    for (p, e), mod in CONWAY.items():
        if e == 1:
            continue
        F = gf(p)
        for a in range(p):
            val = 0
            for c in reversed(mod):
                val = (val * a + c) % p
            assert val != 0, f"Conway entry ({p},{e}) has root {a}"


def test_extension_field_explicit_modulus():
    # GF(7)[x]/(x^2 + 1); x^2 = -1
    F = extension_field(7, (1, 0, 1))
    x = F.from_coeffs((0, 1))
    assert F.mul(x, x) == F.from_coeffs((6, 0))
    field_axioms(F)


def test_point_counts():
    # Fano: F_2, dim 3 gives 7 points
    assert len(proj_points(gf(2), 3)) == 7
    for q, fld in [(2, gf(2)), (3, gf(3)), (4, gf(2, 2)), (5, gf(5))]:
        for n in range(1, 5):
            pts = proj_points(fld, n)
            assert len(pts) == (q ** n - 1) // (q - 1)
            assert pts == sorted(pts)
            assert len(set(pts)) == len(pts)


def test_normalize_point():
    F = gf(3)
    assert normalize_point(F, (0, 2, 1)) == (0, 1, 2)
    for v in [(1, 2, 0), (2, 1, 0), (0, 0, 2)]:
        n = normalize_point(F, v)
        assert n[next(i for i, a in enumerate(n) if a)] == 1


def test_subspace_counts():
    for q, fld in [(2, gf(2)), (3, gf(3)), (4, gf(2, 2)), (5, gf(5))]:
        for n in range(1, 5):
            for d in range(0, n + 1):
                bases = subspace_bases(fld, n, d)
                assert len(bases) == gaussian_binomial(q, n, d)
                assert len(set(bases)) == len(bases)
                for b in bases:
                    assert rref(fld, b) == b


def test_rref_canonical_and_span():
    F = gf(3)
    b = rref(F, [(1, 2, 0), (2, 1, 1)])
    assert rref(F, [(2, 1, 1), (1, 2, 0)]) == b
    assert in_span(F, b, vec_add(F, (1, 2, 0), vec_scale(F, 2, (2, 1, 1))))
    assert not in_span(F, ((1, 0, 0),), (0, 1, 0))


def test_coords_in_basis():
    F = gf(5)
    basis = ((1, 0, 2), (0, 1, 3))
    v = vec_add(F, vec_scale(F, 2, basis[0]), vec_scale(F, 4, basis[1]))
    assert coords_in_basis(F, basis, v) == (2, 4)
    assert coords_in_basis(F, basis, (0, 0, 1)) is None


def test_gf_kernel():
    F = gf(3)
    ker = gf_kernel(F, [[1, 2, 0], [0, 0, 1]])
    assert len(ker) == 1
    for v in ker:
        for row in [[1, 2, 0], [0, 0, 1]]:
            s = 0
            for a, b in zip(row, v):
                s = F.add(s, F.mul(a, b))
            assert s == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3 ** 3 - 1), st.integers(0, 3 ** 3 - 1))
def test_gf27_add_mul_agree_with_poly_model(a, b):
    F = gf(3, 3)
    ca, cb = F.coeffs(a), F.coeffs(b)
    s = tuple((x + y) % 3 for x, y in zip(ca, cb))
    assert F.add(a, b) == F.from_coeffs(s)
    # multiplication: reduce the convolution mod the Conway polynomial
    prod = [0] * 5
    for i, x in enumerate(ca):
        for j, y in enumerate(cb):
            prod[i + j] += x * y
    mod = CONWAY[(3, 3)]
    for i in range(4, 2, -1):
        c = prod[i] % 3
        prod[i] = 0
        for j in range(3):
            prod[i - 3 + j] -= c * mod[j]
    expect = F.from_coeffs(c % 3 for c in prod[:3])
    assert F.mul(a, b) == expect


def test_vecspace_api():
    V = VecSpace(gf(3), 2)
    assert len(V.points()) == 4
    assert len(V.subspaces(1)) == 4
    assert V.span([(1, 1), (2, 2)]) == ((1, 1),)
