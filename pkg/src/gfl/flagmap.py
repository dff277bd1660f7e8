"""Homogeneous maps on projective spaces: flag structure, c-pairs, cliques.

A map on P(A) is a flag map when some complete chain of subspaces
A = A_0 > A_1 > ... > A_n = 0 makes it constant on each difference
P(A_i) minus P(A_{i+1}).  Equivalently, and this is what the checkers
use, its restriction to every 2-dimensional subspace is constant except
at most one point.

Values live in Z or in a truncation Z/l^m.  The truncated ring has zero
divisors, so every linear solve here goes through Smith normal form
instead of Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ffcore import GF, VecSpace, gf, is_prime, proj_points, vec_add, vec_scale
from .intlin import kernel_basis, kernel_mod_prime_power
from .util import parallel_map


class Ring:
    """Value ring tag: exact integers, or the truncation Z/l^m."""

    __slots__ = ("kind", "ell", "m")

    def __init__(self, kind: str, ell: int | None = None, m: int | None = None):
        if kind == "Z":
            ell = m = None
        elif kind == "Zl":
            if ell is None or m is None or not is_prime(ell) or m < 1:
                raise ValueError("truncated ring needs a prime ell and level m >= 1")
        else:
            raise ValueError(f"unknown ring kind {kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "m", m)

    def __setattr__(self, *a):
        raise AttributeError("Ring is immutable")

    @classmethod
    def integers(cls):
        return cls("Z")

    @classmethod
    def truncated(cls, ell: int, m: int):
        return cls("Zl", ell, m)

    @property
    def modulus(self) -> int | None:
        return None if self.kind == "Z" else self.ell ** self.m

    def reduce(self, v: int) -> int:
        return v if self.kind == "Z" else v % self.modulus

    def __eq__(self, other):
        return (isinstance(other, Ring) and self.kind == other.kind
                and self.ell == other.ell and self.m == other.m)

    def __hash__(self):
        return hash((self.kind, self.ell, self.m))

    def __repr__(self):
        return "Z" if self.kind == "Z" else f"Z/{self.ell}^{self.m}"

    def to_json(self):
        if self.kind == "Z":
            return {"kind": "Z"}
        return {"kind": "Zl", "ell": self.ell, "m": self.m}

    @classmethod
    def from_json(cls, data):
        if data["kind"] == "Z":
            return cls.integers()
        return cls.truncated(data["ell"], data["m"])


class HomogeneousMap:
    """Map on the projective points of a finite vector space.

    Homogeneity is structural: the table is indexed by normalized points,
    so scaling the argument cannot change the value.  The scalar field
    must have odd characteristic.
    """

    __slots__ = ("space", "ring", "table")

    def __init__(self, space: VecSpace, ring: Ring, mapping):
        if space.field.p == 2:
            raise ValueError("flag-map theory needs odd characteristic")
        pts = space.points()
        if callable(mapping):
            table = {pt: ring.reduce(int(mapping(pt))) for pt in pts}
        else:
            table = {pt: ring.reduce(int(mapping[pt])) for pt in pts}
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "table", table)

    def __setattr__(self, *a):
        raise AttributeError("HomogeneousMap is immutable")

    def at(self, v) -> int:
        """Value at a nonzero vector (normalized to its projective point)."""
        return self.table[self.space.normalize(tuple(v))]

    def values(self):
        return sorted(set(self.table.values()))

    def compose(self, h, ring: Ring):
        """h applied after this map, with the stated value ring."""
        return HomogeneousMap(self.space, ring,
                              {pt: h[v] for pt, v in self.table.items()})

    @classmethod
    def combine(cls, c: int, mu: "HomogeneousMap", c2: int, mu2: "HomogeneousMap",
                ring: Ring | None = None):
        """The map c*mu + c2*mu2 in the given ring (default: mu's ring)."""
        if mu.space != mu2.space:
            raise ValueError("maps live on different spaces")
        ring = ring or mu.ring
        return cls(mu.space, ring,
                   {pt: c * mu.table[pt] + c2 * mu2.table[pt] for pt in mu.table})

    def __eq__(self, other):
        return (isinstance(other, HomogeneousMap) and self.space == other.space
                and self.ring == other.ring and self.table == other.table)

    def __hash__(self):
        return hash((self.space, self.ring, tuple(sorted(self.table.items()))))

    def __repr__(self):
        return f"HomogeneousMap<dim {self.space.dim} over GF({self.space.field.q}), {self.ring!r}>"

    def to_json(self):
        if self.space.field.e != 1:
            raise ValueError("serialized maps use prime scalar fields")
        return {"p": self.space.field.p, "n": self.space.dim,
                "ring": self.ring.to_json(),
                "table": [[list(pt), v] for pt, v in sorted(self.table.items())]}

    @classmethod
    def from_json(cls, data):
        space = VecSpace(gf(data["p"], 1), data["n"])
        ring = Ring.from_json(data["ring"])
        return cls(space, ring, {tuple(pt): v for pt, v in data["table"]})


@dataclass(frozen=True)
class Flag:
    """Complete chain of subspaces, top first, ending at the zero space.

    Each level is an echelon basis (tuple of ambient vectors); consecutive
    levels drop the dimension by exactly one.
    """

    chain: tuple

    def __post_init__(self):
        dims = [len(b) for b in self.chain]
        if dims != list(range(dims[0], -1, -1)):
            raise ValueError("flag must drop one dimension per step and end at 0")

    @property
    def depth(self) -> int:
        return len(self.chain) - 1


def subspace_points(space: VecSpace, basis):
    """Normalized projective points of the span, in coefficient order."""
    F = space.field
    out = []
    for coeffs in proj_points(F, len(basis)):
        v = (0,) * space.dim
        for c, b in zip(coeffs, basis):
            v = vec_add(F, v, vec_scale(F, c, b))
        out.append(space.normalize(v))
    return tuple(out)


def is_flag_dim2(mu: HomogeneousMap, basis) -> bool:
    """Constant-except-at-most-one-point test on a 2-dimensional subspace."""
    if len(basis) != 2:
        raise ValueError("expected a basis of a 2-dimensional subspace")
    pts = subspace_points(mu.space, basis)
    counts: dict[int, int] = {}
    for pt in pts:
        v = mu.table[pt]
        counts[v] = counts.get(v, 0) + 1
    return max(counts.values()) >= len(pts) - 1


def is_flag_map(mu: HomogeneousMap) -> bool:
    """Flag property via the 2-dimensional criterion over all planes."""
    if mu.space.dim < 2:
        return True
    results = parallel_map(lambda basis: is_flag_dim2(mu, basis),
                           mu.space.subspaces(2))
    return all(results)


def find_flag(mu: HomogeneousMap, basis=None):
    """Complete flag witnessing the flag property on span(basis), or None.

    At each level every hyperplane whose complement is monochromatic
    qualifies; the lexicographically least echelon basis is taken first,
    with backtracking (only non-flag inputs ever exhaust the search).
    """
    space = mu.space
    F = space.field
    if basis is None:
        basis = tuple(tuple(1 if i == j else 0 for j in range(space.dim))
                      for i in range(space.dim))
    top = space.span(basis)

    def descend(bas):
        k = len(bas)
        if k == 0:
            return [()]
        pts = subspace_points(space, bas)
        cands = []
        for coords in _coord_subspaces(F, k):
            hb = space.span([_mix(F, space.dim, coeffs, bas) for coeffs in coords])
            inside = set(subspace_points(space, hb)) if hb else set()
            outside_vals = {mu.table[pt] for pt in pts if pt not in inside}
            if len(outside_vals) <= 1:
                cands.append(hb)
        for hb in sorted(cands):
            rest = descend(hb)
            if rest is not None:
                return [bas] + rest
        return None

    chain = descend(top)
    return Flag(tuple(chain)) if chain is not None else None


def _coord_subspaces(F: GF, k: int):
    from .ffcore import subspace_bases
    return subspace_bases(F, k, k - 1)


def _mix(F: GF, dim: int, coeffs, basis):
    v = (0,) * dim
    for c, b in zip(coeffs, basis):
        v = vec_add(F, v, vec_scale(F, c, b))
    return v


def h_reduction_holds(mu: HomogeneousMap) -> bool:
    """All two-valued collapses h of the value set give flag maps.

    Rejects maps with more than 16 distinct values: the scan is over all
    2^#values collapses.
    """
    vals = mu.values()
    if len(vals) > 16:
        raise ValueError("h-reduction scan capped at 16 distinct values")
    z2 = Ring.truncated(2, 1)
    for mask in range(2 ** len(vals)):
        h = {v: (mask >> i) & 1 for i, v in enumerate(vals)}
        if not is_flag_map(mu.compose(h, z2)):
            return False
    return True


def functional_equation_flag(mu: HomogeneousMap, basis) -> bool:
    """Basis (c, b) with mu(c) = mu(c + k*b) != mu(b) for all scalars k.

    True only for plane restrictions that are constant away from exactly
    one point; constant maps fail (no unequal pair exists).  A positive
    answer is cross-checked against the counting criterion.
    """
    if len(basis) != 2:
        raise ValueError("expected a basis of a 2-dimensional subspace")
    space = mu.space
    F = space.field
    pts = subspace_points(space, basis)
    for b in pts:
        vb = mu.table[b]
        for c in pts:
            if c == b or mu.table[c] == vb:
                continue
            vc = mu.table[c]
            if all(mu.at(vec_add(F, c, vec_scale(F, k, b))) == vc
                   for k in range(F.q)):
                if not is_flag_dim2(mu, basis):
                    raise AssertionError("functional equation held on a non-flag plane")
                return True
    return False


@dataclass(frozen=True)
class CPairWitness:
    """Constants (s, s2, s3) with s*mu + s2*mu2 = s3 on one plane."""

    basis: tuple
    s: int
    s2: int
    s3: int


@dataclass(frozen=True)
class CPairReport:
    ok: bool
    witnesses: tuple = ()
    failing: tuple = ()

    def __bool__(self):
        return self.ok


def is_c_pair(mu: HomogeneousMap, mu2: HomogeneousMap) -> CPairReport:
    """Affine relation s*mu + s2*mu2 = s3, (s, s2) != (0, 0), on every plane.

    Per plane the relation is the kernel of the #points x 3 matrix with
    rows (mu(x), mu2(x), -1), computed over Z or Z/l^m as declared.
    """
    if mu.space != mu2.space or mu.ring != mu2.ring:
        raise ValueError("c-pair inputs must share domain and ring")
    space, ring = mu.space, mu.ring
    if space.dim < 2:
        return CPairReport(True)

    def solve(basis):
        pts = subspace_points(space, basis)
        rows = [[mu.table[x], mu2.table[x], -1] for x in pts]
        if ring.kind == "Z":
            gens = kernel_basis(rows)
        else:
            gens = kernel_mod_prime_power(rows, ring.ell, ring.m)
        for g in gens:
            s, s2, s3 = (ring.reduce(v) for v in g)
            if s != 0 or s2 != 0:
                return CPairWitness(basis, s, s2, s3)
        return None

    witnesses, failing = [], []
    planes = space.subspaces(2)
    for basis, wit in zip(planes, parallel_map(solve, planes)):
        if wit is None:
            failing.append(basis)
        else:
            witnesses.append(wit)
    return CPairReport(not failing, tuple(witnesses), tuple(failing))


def cpair_witness_valid(mu: HomogeneousMap, mu2: HomogeneousMap,
                        wit: CPairWitness) -> bool:
    """Recheck one witness directly against the defining relation."""
    ring = mu.ring
    if ring.reduce(wit.s) == 0 and ring.reduce(wit.s2) == 0:
        return False
    return all(ring.reduce(wit.s * mu.table[x] + wit.s2 * mu2.table[x] - wit.s3) == 0
               for x in subspace_points(mu.space, wit.basis))


@dataclass(frozen=True)
class FlagComboResult:
    coeffs: tuple | None
    flag: Flag | None = None
    failing: tuple = ()

    @property
    def found(self) -> bool:
        return self.coeffs is not None

    def __bool__(self):
        return self.found


def find_flag_combination(mu: HomogeneousMap, mu2: HomogeneousMap,
                          m: int | None = None) -> FlagComboResult:
    """First projective combination (c, c2) making c*mu + c2*mu2 a flag map.

    Scan order over representatives of P^1(Z/l^m), fixed for reproducibility:
    (1, 0), (1, 1), ..., (1, l^m - 1), then (0, 1), (l, 1), (2l, 1), ...,
    (l^m - l, 1).  When no combination works the result carries the failing
    planes reported by is_c_pair as a certificate.
    """
    if mu.space != mu2.space or mu.ring != mu2.ring:
        raise ValueError("combination search needs a shared domain and ring")
    if mu.ring.kind != "Zl":
        raise ValueError("combination search runs over a truncated ring")
    ell = mu.ring.ell
    m = mu.ring.m if m is None else m
    ring = Ring.truncated(ell, m)
    modulus = ring.modulus

    candidates = [(1, c2) for c2 in range(modulus)]
    candidates += [(k * ell, 1) for k in range(ell ** (m - 1))]
    for c, c2 in candidates:
        xi = HomogeneousMap.combine(c, mu, c2, mu2, ring)
        if is_flag_map(xi):
            return FlagComboResult((c, c2), find_flag(xi))
    return FlagComboResult(None, None, is_c_pair(mu, mu2).failing)


@dataclass(frozen=True)
class LogarithmicReport:
    ok: bool
    tested: int
    skipped: int
    violation: tuple | None = None

    def __bool__(self):
        return self.ok


def is_logarithmic(mu: HomogeneousMap, mult) -> LogarithmicReport:
    """mu(a*b) = mu(a) + mu(b) over all in-domain products.

    mult(a, b) returns the product vector or None when it leaves the space;
    skipped pairs are counted, not errors.
    """
    space, ring = mu.space, mu.ring
    nonzero = [v for v in space.vectors() if any(v)]
    tested = skipped = 0
    violation = None
    ok = True
    for a in nonzero:
        for b in nonzero:
            prod = mult(a, b)
            if prod is None or not any(prod):
                skipped += 1
                continue
            tested += 1
            if mu.at(prod) != ring.reduce(mu.at(a) + mu.at(b)):
                ok = False
                if violation is None:
                    violation = (a, b)
    return LogarithmicReport(ok, tested, skipped, violation)


def maximal_cpair_cliques(maps) -> list:
    """Maximal index sets whose maps pairwise satisfy the c-pair condition.

    Plain Bron-Kerbosch on the c-pair graph, deterministic order, output
    sorted; isolated maps appear as singleton cliques.
    """
    n = len(maps)
    adj = {i: set() for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if is_c_pair(maps[i], maps[j]).ok:
                adj[i].add(j)
                adj[j].add(i)

    cliques = []

    def bk(r, p, x):
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            return
        for v in sorted(p):
            bk(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    bk(set(), set(range(n)), set())
    return sorted(cliques)
