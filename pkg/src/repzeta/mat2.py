"""2x2 matrices over truncated valuation rings: GL2/SL2, conjugation orbits,
twist orbits (translation by scalars), and exhaustive enumeration.

Matrices are immutable and carry their entries as canonical ring codes, so a
matrix packs into a single integer index; all brute-force machinery works on
those indices.
"""

from __future__ import annotations

import os

from .ring import RElem, RingDesc


class TooLarge(RuntimeError):
    """Raised when an enumeration would exceed the configured cap."""


DEFAULT_MATRIX_CAP = 1 << 24


def matrix_cap(override=None) -> int:
    """Enumeration cap on the matrix space size; REPZETA_CAP overrides."""
    if override is not None:
        return int(override)
    env = os.environ.get("REPZETA_CAP")
    if env:
        return int(env)
    return DEFAULT_MATRIX_CAP


class Mat2:
    """A 2x2 matrix over a RingDesc, stored as four canonical entry codes."""

    __slots__ = ("ring", "e")

    def __init__(self, ring: RingDesc, entries):
        object.__setattr__(self, "ring", ring)
        e = tuple(int(x) % ring.size for x in entries)
        if len(e) != 4:
            raise ValueError("a 2x2 matrix needs exactly 4 entries")
        object.__setattr__(self, "e", e)

    def __setattr__(self, name, value):
        raise AttributeError("Mat2 is immutable")

    @classmethod
    def of(cls, ring: RingDesc, a, b, c, d) -> "Mat2":
        codes = [x.code if isinstance(x, RElem) else int(x) for x in (a, b, c, d)]
        return cls(ring, codes)

    @classmethod
    def scalar(cls, ring: RingDesc, x) -> "Mat2":
        code = x.code if isinstance(x, RElem) else int(x)
        return cls(ring, (code, 0, 0, code))

    @classmethod
    def identity(cls, ring: RingDesc) -> "Mat2":
        return cls(ring, (1, 0, 0, 1))

    @property
    def a(self) -> RElem:
        return RElem(self.ring, self.e[0])

    @property
    def b(self) -> RElem:
        return RElem(self.ring, self.e[1])

    @property
    def c(self) -> RElem:
        return RElem(self.ring, self.e[2])

    @property
    def d(self) -> RElem:
        return RElem(self.ring, self.e[3])

    @property
    def trace_code(self) -> int:
        return self.ring.add(self.e[0], self.e[3])

    @property
    def det_code(self) -> int:
        r = self.ring
        return r.sub(r.mul(self.e[0], self.e[3]), r.mul(self.e[1], self.e[2]))

    def trace(self) -> RElem:
        return RElem(self.ring, self.trace_code)

    def det(self) -> RElem:
        return RElem(self.ring, self.det_code)

    def __mul__(self, other: "Mat2") -> "Mat2":
        if self.ring != other.ring:
            raise ValueError("matrix product across different rings")
        return Mat2(self.ring, _mul4(self.ring, self.e, other.e))

    def __add__(self, other: "Mat2") -> "Mat2":
        r = self.ring
        return Mat2(r, tuple(r.add(x, y) for x, y in zip(self.e, other.e)))

    def inverse(self) -> "Mat2":
        return Mat2(self.ring, _inv4(self.ring, self.e))

    def conj_by(self, g: "Mat2") -> "Mat2":
        """g * self * g^-1."""
        r = self.ring
        return Mat2(r, _mul4(r, _mul4(r, g.e, self.e), _inv4(r, g.e)))

    def add_scalar(self, x) -> "Mat2":
        code = x.code if isinstance(x, RElem) else int(x)
        r = self.ring
        return Mat2(r, (r.add(self.e[0], code), self.e[1], self.e[2], r.add(self.e[3], code)))

    def __eq__(self, other):
        return isinstance(other, Mat2) and self.ring == other.ring and self.e == other.e

    def __hash__(self):
        return hash((self.e, self.ring.kind, self.ring.level, self.ring.q))

    def __repr__(self):
        a, b, c, d = (list(self.ring.digits(x)) for x in self.e)
        return f"Mat2({self.ring!r}, [[{a},{b}],[{c},{d}]])"

    def to_json(self):
        f = self.ring.elem_to_json
        return [[f(self.e[0]), f(self.e[1])], [f(self.e[2]), f(self.e[3])]]


def mat_from_json(ring: RingDesc, obj) -> Mat2:
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2
            or any(not isinstance(row, (list, tuple)) or len(row) != 2 for row in obj)):
        raise ValueError("matrix JSON must be a 2x2 array")
    g = ring.elem_from_json
    return Mat2(ring, (g(obj[0][0]), g(obj[0][1]), g(obj[1][0]), g(obj[1][1])))


# --------------------------------------------------------------- code helpers

def _mul4(r: RingDesc, x, y):
    mul, add = r.mul, r.add
    a, b, c, d = x
    e, f, g, h = y
    return (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h)),
            add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h)))


def _inv4(r: RingDesc, x):
    a, b, c, d = x
    det = r.sub(r.mul(a, d), r.mul(b, c))
    di = r.inv(det)
    return (r.mul(d, di), r.mul(r.neg(b), di), r.mul(r.neg(c), di), r.mul(a, di))


def pack(n: int, e) -> int:
    a, b, c, d = e
    return ((a * n + b) * n + c) * n + d


def unpack(n: int, idx: int):
    idx, d = divmod(idx, n)
    idx, c = divmod(idx, n)
    a, b = divmod(idx, n)
    return (a, b, c, d)


def elem_sort_key(ring: RingDesc, code: int):
    """Order key matching the serialized form: coefficient-array lexicographic
    for equal characteristic, numeric for Z/p^i."""
    if ring.kind == "EqualChar":
        return ring.digits(code)
    return code


def mat_sort_key(m: Mat2):
    r = m.ring
    return tuple(elem_sort_key(r, x) for x in m.e)


# --------------------------------------------------------------------- groups

class GroupDesc:
    """GL2 or SL2 over a fixed ring."""

    __slots__ = ("ring", "flavor")

    def __init__(self, ring: RingDesc, flavor: str):
        if flavor not in ("GL2", "SL2"):
            raise ValueError(f"flavor must be GL2 or SL2, got {flavor!r}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "flavor", flavor)

    def __setattr__(self, name, value):
        raise AttributeError("GroupDesc is immutable")

    def __repr__(self):
        return f"{self.flavor}({self.ring!r})"

    def __eq__(self, other):
        return (isinstance(other, GroupDesc) and self.flavor == other.flavor
                and self.ring == other.ring)

    def __hash__(self):
        return hash((self.flavor, self.ring))

    def order(self) -> int:
        return group_order(self)

    def contains(self, m: Mat2) -> bool:
        if self.flavor == "GL2":
            return self.ring.is_unit(m.det_code)
        return m.det_code == self.ring.one


def group_order(g: GroupDesc) -> int:
    """|GL2(O_i)| = q^(4i-3) (q-1)^2 (q+1);  |SL2(O_i)| = q^(3i-2) (q-1) (q+1)."""
    q, i = g.ring.q, g.ring.level
    if g.flavor == "GL2":
        return q ** (4 * i - 3) * (q - 1) ** 2 * (q + 1)
    return q ** (3 * i - 2) * (q - 1) * (q + 1)


def enumerate_group(g: GroupDesc, cap=None):
    """Yield every group element exactly once, in ascending packed-index order."""
    r = g.ring
    n = r.size
    total = n ** 4
    if total > matrix_cap(cap):
        raise TooLarge(f"matrix space of size {total} exceeds cap {matrix_cap(cap)}")
    want_sl = g.flavor == "SL2"
    mul, sub = r.mul, r.sub
    is_unit = r.is_unit
    for a in range(n):
        for b in range(n):
            for c in range(n):
                bc = mul(b, c)
                for d in range(n):
                    det = sub(mul(a, d), bc)
                    if det == 1 if want_sl else is_unit(det):
                        yield Mat2(r, (a, b, c, d))


def additive_basis(r: RingDesc):
    """Codes of an additive generating set of (O, +)."""
    if r.kind == "Unramified0":
        return [1]
    k = r.field.k
    return [r.p ** m * r.q ** j for j in range(r.level) for m in range(k)]


def generators(g: GroupDesc):
    """A generating set: elementary matrices over an additive basis, plus
    diag(u, 1) for every unit u when determinants must be covered."""
    r = g.ring
    gens = []
    for b in additive_basis(r):
        gens.append(Mat2(r, (1, b, 0, 1)))
        gens.append(Mat2(r, (1, 0, b, 1)))
    if g.flavor == "GL2":
        for u in r.units():
            gens.append(Mat2(r, (u, 0, 0, 1)))
    return gens


class ConjOrbit:
    """Result of a conjugation-orbit computation."""

    __slots__ = ("size", "rep", "members")

    def __init__(self, size: int, rep: Mat2, members):
        self.size = size
        self.rep = rep
        self.members = members

    def __repr__(self):
        return f"ConjOrbit(size={self.size}, rep={self.rep!r})"


def conj_orbit(g: GroupDesc, beta: Mat2, cap=None) -> ConjOrbit:
    """Orbit of beta under x -> gxg^-1, by breadth-first closure under a
    generating set. The representative is the least member in the
    serialized-entry lexicographic order."""
    r = g.ring
    if beta.ring != r:
        raise ValueError("matrix is over a different ring")
    n = r.size
    if n ** 4 > matrix_cap(cap):
        raise TooLarge(f"matrix space of size {n ** 4} exceeds cap {matrix_cap(cap)}")
    gen_pairs = [(m.e, _inv4(r, m.e)) for m in generators(g)]
    seen = {beta.e}
    frontier = [beta.e]
    while frontier:
        nxt = []
        for m in frontier:
            for ge, gi in gen_pairs:
                m2 = _mul4(r, _mul4(r, ge, m), gi)
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        frontier = nxt
    members = frozenset(Mat2(r, e) for e in seen)
    rep = min(members, key=mat_sort_key)
    return ConjOrbit(len(seen), rep, members)


def twist_orbit(g: GroupDesc, beta: Mat2, cap=None) -> frozenset:
    """Conjugacy classes swept out by x -> xI + beta over all scalars x,
    as a frozenset of canonical class representatives."""
    r = g.ring
    reps = []
    covered = set()
    for x in r.elements():
        shifted = beta.add_scalar(x)
        if shifted.e in covered:
            continue
        orb = conj_orbit(g, shifted, cap=cap)
        covered.update(m.e for m in orb.members)
        reps.append(orb.rep)
    return frozenset(reps)


# ------------------------------------------------------- permutation builders

def conj_permutation(ring: RingDesc, g: Mat2):
    """The permutation idx -> packed(g * m * g^-1) over the whole matrix
    space, exploiting that left multiplication acts on columns and right
    multiplication on rows (two pair tables instead of n^4 matrix products)."""
    n = ring.size
    ge = g.e
    gi = _inv4(ring, ge)
    mul, add = ring.mul, ring.add
    g00, g01, g10, g11 = ge
    h00, h01, h10, h11 = gi
    # col[x*n+y] packs the image of column (x, y) under left mult by g
    col = [0] * (n * n)
    row = [0] * (n * n)
    for x in range(n):
        a_gx0 = mul(g00, x)
        a_gx1 = mul(g10, x)
        r_xh0 = mul(x, h00)
        r_xh1 = mul(x, h01)
        base = x * n
        for y in range(n):
            col[base + y] = add(a_gx0, mul(g01, y)) * n + add(a_gx1, mul(g11, y))
            row[base + y] = add(r_xh0, mul(y, h10)) * n + add(r_xh1, mul(y, h11))
    nn = n * n
    perm = [0] * (nn * nn)
    out_pos = 0
    for ab in range(nn):
        a, b = divmod(ab, n)
        an = a * n
        bn = b * n
        for cd in range(nn):
            c, d = divmod(cd, n)
            ac = col[an + c]
            bd = col[bn + d]
            a1, c1 = divmod(ac, n)
            b1, d1 = divmod(bd, n)
            perm[out_pos] = row[a1 * n + b1] * nn + row[c1 * n + d1]
            out_pos += 1
    return perm


def scalar_shift_permutation(ring: RingDesc, x: int):
    """The permutation idx -> packed(m + xI)."""
    n = ring.size
    add = ring.add
    shifted = [add(a, x) for a in range(n)]
    nn = n * n
    perm = [0] * (nn * nn)
    pos = 0
    for a in range(n):
        for b in range(n):
            top = (shifted[a] * n + b) * nn
            for c in range(n):
                base = top + c * n
                for d in range(n):
                    perm[pos] = base + shifted[d]
                    pos += 1
    return perm
