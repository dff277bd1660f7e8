"""Univariate polynomials over GF(q).

Coefficients are int-encoded field elements, stored ascending with no
trailing zeros; the zero polynomial has an empty coefficient tuple and
degree -1.  Factorization (squarefree split, distinct-degree, equal-degree
Cantor-Zassenhaus with a deterministic candidate sweep) requires odd q,
which is all the function-field machinery ever needs.
"""

from __future__ import annotations

from itertools import count, product

from .ffcore import GF


class Pol:
    """Immutable univariate polynomial over a GF instance."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("Pol is immutable")

    # ---- constructors ----
    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def x(cls, field):
        return cls(field, (0, 1))

    # ---- structure ----
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other):
        return (isinstance(other, Pol) and self.field is other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def sort_key(self):
        return (self.degree, self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "Pol<0>"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*t^{i}" if i else f"{c}")
        return "Pol<" + " + ".join(terms) + ">"

    # ---- arithmetic ----
    def __add__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Pol(F, (F.add(x, y) for x, y in zip(a, b)))

    def __neg__(self):
        F = self.field
        return Pol(F, (F.neg(c) for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        if self.is_zero() or other.is_zero():
            return Pol.zero(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Pol(F, out)

    def scale(self, c: int):
        F = self.field
        return Pol(F, (F.mul(c, a) for a in self.coeffs))

    def __divmod__(self, other):
        F = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Pol.zero(F), self
        quo = [0] * (dq + 1)
        inv_lc = F.inv(other.lc)
        for i in range(dq, -1, -1):
            c = F.mul(rem[i + other.degree], inv_lc)
            quo[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] = F.sub(rem[i + j], F.mul(c, b))
        return Pol(F, quo), Pol(F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self):
        if self.is_zero() or self.lc == 1:
            return self
        return self.scale(self.field.inv(self.lc))

    def eval(self, a: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, a), c)
        return acc

    def eval_in(self, E: GF, a: int) -> int:
        """Evaluate at a point of an extension E of the (prime) base field."""
        if self.field.e != 1:
            raise ValueError("eval_in needs a prime base field")
        acc = 0
        for c in reversed(self.coeffs):
            acc = E.add(E.mul(acc, a), E.scalar(c))
        return acc

    def compose(self, other: "Pol") -> "Pol":
        F = self.field
        acc = Pol.zero(F)
        for c in reversed(self.coeffs):
            acc = acc * other + Pol.const(F, c)
        return acc

    def deriv(self):
        F = self.field
        return Pol(F, (F.mul(F.scalar(i), c) for i, c in enumerate(self.coeffs) if i)) \
            if self.degree >= 1 else Pol.zero(F)

    def pow_mod(self, n: int, mod: "Pol") -> "Pol":
        result = Pol.one(self.field)
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result


def pol_gcd(a: Pol, b: Pol) -> Pol:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def _pth_root(F: GF, c: int) -> int:
    # Frobenius is an automorphism; the inverse of x -> x^p is x -> x^(q/p)
    return F.pow_(c, F.q // F.p)


def squarefree_decomposition(f: Pol):
    """Monic f -> list of (monic squarefree g, multiplicity)."""
    F = f.field
    p = F.p
    out: dict[Pol, int] = {}

    def add(g: Pol, e: int):
        if g.degree >= 1:
            out[g] = out.get(g, 0) + e

    def run(f: Pol, outer: int):
        if f.degree < 1:
            return
        d = f.deriv()
        if d.is_zero():
            # f is a p-th power: f(x) = g(x^p)
            root = Pol(F, (_pth_root(F, f.coeffs[i]) for i in range(0, len(f.coeffs), p)))
            run(root.monic(), outer * p)
            return
        c = pol_gcd(f, d)
        w = f // c
        i = 1
        while not w.is_const():
            y = pol_gcd(w, c)
            z = w // y
            add(z.monic(), i * outer)
            w = y
            c = c // y
            i += 1
        if not c.is_const():
            run(c.monic(), outer)

    run(f.monic(), 1)
    return sorted(out.items(), key=lambda kv: kv[0].sort_key())


def _equal_degree_split(f: Pol, d: int):
    """Split monic squarefree f whose irreducible factors all have degree d."""
    F = f.field
    if f.degree == d:
        return [f]
    if F.q % 2 == 0:
        # absolute trace splits in characteristic 2
        bits = d * F.e

        def probe(r: Pol) -> Pol:
            t = r % f
            acc = t
            for _ in range(bits - 1):
                t = (t * t) % f
                acc = acc + t
            return pol_gcd(acc, f)
    else:
        exponent = (F.q ** d - 1) // 2

        def probe(r: Pol) -> Pol:
            return pol_gcd(r.pow_mod(exponent, f) - Pol.one(F), f)

    # deterministic candidate sweep instead of random probes
    for deg in count(1):
        for tail in product(range(F.q), repeat=deg):
            r = Pol(F, tail + (1,))
            g = probe(r)
            if 0 < g.degree < f.degree:
                return _equal_degree_split(g, d) + _equal_degree_split(f // g, d)


def factor(f: Pol):
    """Full factorization: returns (unit, [(monic irreducible, mult), ...]).

    Factors are sorted by (degree, coefficients).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    unit = f.lc
    out: dict[Pol, int] = {}
    for g, e in squarefree_decomposition(f.monic()):
        # distinct-degree on each squarefree part
        h = Pol.x(g.field)
        rest = g
        d = 0
        while rest.degree > 0:
            d += 1
            if 2 * d > rest.degree:
                out[rest] = out.get(rest, 0) + e
                break
            h = h.pow_mod(g.field.q, rest)
            part = pol_gcd(h - Pol.x(g.field), rest)
            if part.degree > 0:
                for irr in _equal_degree_split(part, d):
                    out[irr] = out.get(irr, 0) + e
                rest = rest // part
                h = h % rest
    return unit, sorted(out.items(), key=lambda kv: kv[0].sort_key())


def is_irreducible(f: Pol) -> bool:
    """Rabin test: works for any q."""
    if f.degree < 1:
        return False
    if f.degree == 1:
        return True
    F = f.field
    n = f.degree
    x = Pol.x(F)
    primes = []
    k = n
    d = 2
    while d * d <= k:
        if k % d == 0:
            primes.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        primes.append(k)
    for r in primes:
        h = x.pow_mod(F.q ** (n // r), f) - x
        if pol_gcd(h, f).degree != 0:
            return False
    return x.pow_mod(F.q ** n, f) == x % f


def irreducible_monics(F: GF, degree: int):
    """Monic irreducibles of the given degree, ascending coefficient order."""
    out = []
    for tail in product(range(F.q), repeat=degree):
        f = Pol(F, tail + (1,))
        if is_irreducible(f):
            out.append(f)
    return out
