"""Centralizer orders for regular 2x2 classes over truncated valuation rings.

For a matrix that is non-scalar modulo the maximal ideal, everything that
commutes with it is a ring-linear combination a*I + b*beta, so centralizer
orders in GL2 reduce to counting pairs (a, b) whose binary form
a^2 + tr*ab + det*b^2 is a unit, and determinant-one centralizer orders to
counting pairs where the form equals 1.  Split and irreducible residue
polynomials give closed forms at every level; the repeated-root case in
residue characteristic 2 does not, and is handled by exact pair sweeps whose
totals always factor as c * q^(level + delta) with a small integer c.  The
kernel census groups classes under two count-preserving changes of variable
so the sweep scales to rings too large for a class-by-class pass.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .mat2 import GroupDesc, Mat2, TooLarge, _mul4, enumerate_group
from .orbits import NONREGULAR, InvalidInvariants, classify, companion
from .ring import RingDesc, sqrt_char2

# pair sweeps iterate size^2 tuples; beyond this the caller gets TooLarge
NORM_PAIR_CAP = 1 << 22


class NotRegular(ValueError):
    """Raised when a matrix is scalar modulo the maximal ideal."""


@dataclass(frozen=True)
class CentralizerReport:
    """Order data for one class at one level.

    order_brute, when present, equals order_formula directly, except in the
    repeated-root residue-characteristic-2 case where it equals
    c_factor * order_formula with c_factor in {1, 2, 3} and order_formula
    the base power q^(level + delta).
    """

    level: int
    beta: Mat2
    order_formula: int
    order_brute: int = None
    c_factor: int = None


class NormOne(NamedTuple):
    count: int
    delta: int
    c: int
    base: int
    admissible: frozenset


class KernelCell(NamedTuple):
    w: int
    delta: int
    count: int
    c: int
    classes: int


def _require_eq2(ring):
    if ring.kind != "EqualChar" or ring.p != 2:
        raise InvalidInvariants(
            "this operation needs an equal-characteristic ring with residue "
            "characteristic 2")


def _norm_pairs(ring, tau, det):
    """#{(x, y) : x^2 + tau*x*y + det*y^2 = 1}, by exact sweep."""
    n = ring.size
    if n * n > NORM_PAIR_CAP:
        raise TooLarge(f"pair sweep over {n}^2 tuples exceeds cap")
    if ring.kind == "Unramified0":
        cnt = 0
        for x in range(n):
            xx = x * x
            tx = tau * x
            cnt += sum(1 for y in range(n) if (xx + tx * y + det * y * y) % n == 1)
        return cnt
    mul = ring.mul_table()
    sq = [mul[y][y] for y in range(n)]
    drow = mul[det]
    dsq = [drow[s] for s in sq]
    trow = mul[tau]
    cnt = 0
    if ring.p == 2:
        # equal characteristic 2: addition of codes is xor
        for x in range(n):
            xx = sq[x]
            txr = mul[trow[x]]
            cnt += sum(1 for y in range(n) if xx ^ txr[y] ^ dsq[y] == 1)
    else:
        add = ring.add
        for x in range(n):
            xx = sq[x]
            txr = mul[trow[x]]
            cnt += sum(1 for y in range(n) if add(xx, add(txr[y], dsq[y])) == 1)
    return cnt


def _unit_pairs(ring, tau, det):
    """#{(a, b) : a^2 + tau*a*b + det*b^2 is a unit}."""
    n = ring.size
    if n * n > NORM_PAIR_CAP:
        raise TooLarge(f"pair sweep over {n}^2 tuples exceeds cap")
    cnt = 0
    for a in range(n):
        aa = ring.mul(a, a)
        ta = ring.mul(tau, a)
        for b in range(n):
            v = ring.add(aa, ring.add(ring.mul(ta, b),
                                      ring.mul(det, ring.mul(b, b))))
            if ring.is_unit(v):
                cnt += 1
    return cnt


def centralizer_order(m, brute="auto"):
    """|C_GL2(m)| for a regular class, from the residue type of m.

    Split residue polynomial: (q-1)^2 * q^(2(k-1)).  Irreducible:
    (q^2-1) * q^(2(k-1)).  Repeated root: q(q-1) * q^(2(k-1)).  With
    brute=True (or "auto" on small rings) the value is cross-checked by
    counting pairs (a, b) with a*I + b*m invertible.
    """
    cls = classify(m)
    if cls.otype == NONREGULAR:
        raise NotRegular("centralizer order formulas need a matrix that is "
                         "non-scalar modulo the maximal ideal")
    r = m.ring
    q, k = r.q, r.level
    head = {1: (q - 1) ** 2, 2: q * q - 1, 3: q * (q - 1)}[cls.otype]
    order = head * q ** (2 * (k - 1))
    if brute is True or (brute == "auto" and r.size ** 2 <= 1 << 12):
        got = _unit_pairs(r, m.trace_code, m.det_code)
        assert got == order, (got, order)
    return order


def centralizer_order_brute(m, cap=None, flavor="GL2"):
    """Centralizer order by sweeping the whole group. Small rings only."""
    g = GroupDesc(m.ring, flavor)
    return sum(1 for x in enumerate_group(g, cap) if (x * m).e == (m * x).e)


def norm_one_structural(ring, tau, det):
    """(base, admissible) for a repeated-root class: the norm-one count is
    c * base with base = q^(level + delta) and c in the admissible set
    ({1, 2} below the delta ceiling, {1, 2, 3} on it)."""
    _require_eq2(ring)
    cls = classify(companion(ring, tau, det))
    if cls.otype != 3:
        raise InvalidInvariants("norm-one census needs a repeated-root class")
    base = ring.q ** (ring.level + cls.delta)
    admissible = frozenset((1, 2)) if cls.delta < cls.M else frozenset((1, 2, 3))
    return base, admissible


def norm_one_count(ring, tau, det):
    """Exact #{(x, y) : x^2 + tau*xy + det*y^2 = 1} with its factorization."""
    base, admissible = norm_one_structural(ring, tau, det)
    cls = classify(companion(ring, tau, det))
    count = _norm_pairs(ring, tau, det)
    c, rem = divmod(count, base)
    assert rem == 0 and c in admissible, (tau, det, count, base, c)
    return NormOne(count, cls.delta, c, base, admissible)


def sc_order(m, brute="auto"):
    """|C(m) ∩ SL2| as a CentralizerReport.

    Split: (q-1)q^(i-1).  Irreducible: (q+1)q^(i-1).  Repeated root in odd
    residue characteristic: 2q^i.  Repeated root in residue characteristic 2
    has no closed form; over an equal-characteristic ring the report carries
    the exact pair-sweep count and its factor c in {1, 2, 3} over the base
    q^(i + delta), while over Z/2^i that factorization law fails (sweeps
    find factors 4 and 1/2 already at i = 3 and 4) so the report carries
    the exact count alone.
    """
    cls = classify(m)
    if cls.otype == NONREGULAR:
        raise NotRegular("determinant-one centralizer formulas need a matrix "
                         "that is non-scalar modulo the maximal ideal")
    r = m.ring
    q, i = r.q, r.level
    tau, det = m.trace_code, m.det_code
    if cls.otype == 3 and r.p == 2:
        count = _norm_pairs(r, tau, det)
        if r.kind != "EqualChar":
            return CentralizerReport(i, m, count, count, None)
        base = q ** (i + cls.delta)
        c, rem = divmod(count, base)
        assert rem == 0 and c in (1, 2, 3), (count, base, c)
        return CentralizerReport(i, m, base, count, c)
    if cls.otype == 3:
        order = 2 * q ** i
    else:
        order = (q - 1 if cls.otype == 1 else q + 1) * q ** (i - 1)
    count = None
    if brute is True or (brute == "auto" and r.size ** 2 <= 1 << 12):
        count = _norm_pairs(r, tau, det)
        assert count == order, (count, order)
    return CentralizerReport(i, m, order, count, None)


def normalize_type3(ring, tau, det):
    """Normal form (w, u) of a repeated-root class datum (tau, det).

    Scaling y by the unit part of tau moves tau to t^w, and shifting x by a
    multiple of y then forces the constant digit of the determinant to 1;
    both moves preserve the norm-one solution count, the valuation w, and
    the determinant digits at odd positions below w.
    """
    _require_eq2(ring)
    if ring.residue(tau) != 0:
        raise InvalidInvariants("normal form needs a repeated-root class "
                                "(trace in the maximal ideal)")
    i, q = ring.level, ring.q
    w = ring.valuation(tau)
    eta = tau // q ** w if w < i else ring.one
    ei = ring.inv(eta)
    u = ring.mul(det, ring.mul(ei, ei))
    if ring.residue(u) != 1:
        mu0 = sqrt_char2(ring.field, ring.field.add(ring.residue(u), 1))
        mu = ring.scalar_from_residue(mu0)
        tw = q ** w if w < i else 0
        u = ring.add(u, ring.add(ring.mul(mu, mu), ring.mul(mu, tw)))
    assert ring.residue(u) == 1
    return w, u


@dataclass(frozen=True)
class UGroup:
    """The solutions of x(x + tau) = 0, as codes. Closed under addition."""

    level: int
    tau: int
    elements: frozenset
    order: int


def u_group(ring, tau):
    """U(tau) = {x : x(x + tau) = 0}, with its order law asserted.

    Order 2 when tau is a unit; otherwise 2q^w below the half-level
    threshold and q^floor(level/2) at or above it.
    """
    _require_eq2(ring)
    xs = frozenset(x for x in ring.elements()
                   if ring.mul(x, ring.add(x, tau)) == 0)
    i, q = ring.level, ring.q
    if ring.is_unit(tau):
        expect = 2
    else:
        w = ring.valuation(tau)
        expect = 2 * q ** w if w < (i + 1) // 2 else q ** (i // 2)
    assert len(xs) == expect, (tau, sorted(xs), expect)
    return UGroup(i, tau, xs, len(xs))


def stab_decomposition_check(m, cap=None):
    """Check C_SL(m + scalars) = U(tr m) . (C_SL(m)) with trivial overlap.

    Computes all three sets explicitly: the stabilizer of the scalar coset
    of m inside SL2, the determinant-one centralizer, and the product of
    the lower-triangular lift of U with the latter.  True only when the
    product is the stabilizer, has full size, and meets U only at 1.
    """
    r = m.ring
    _require_eq2(r)
    if classify(m).otype == NONREGULAR:
        raise NotRegular("the stabilizer decomposition is about regular classes")
    sl = GroupDesc(r, "SL2")
    stab, sc = set(), set()
    for g in enumerate_group(sl, cap):
        h = m.conj_by(g)
        da = r.sub(h.e[0], m.e[0])
        if (h.e[1] == m.e[1] and h.e[2] == m.e[2]
                and da == r.sub(h.e[3], m.e[3])):
            stab.add(g.e)
            if da == 0:
                sc.add(g.e)
    one = r.one
    umat = {(one, 0, x, one) for x in u_group(r, m.trace_code).elements}
    prod = {_mul4(r, u, s) for u in umat for s in sc}
    return (prod == stab
            and len(prod) == len(umat) * len(sc)
            and umat & sc == {(one, 0, 0, one)})


def sc_ratio_check(ring, tau, det):
    """|SC at this level| / |SC one level down| for a repeated-root class.

    Returns the exact ratio and asserts q/3 <= ratio <= 3q^2.
    """
    _require_eq2(ring)
    if ring.level < 2:
        raise InvalidInvariants("the ratio compares two consecutive levels")
    low = RingDesc("EqualChar", ring.field, ring.level - 1)
    tl = low.from_digits(ring.digits(tau)[: low.level])
    dl = low.from_digits(ring.digits(det)[: low.level])
    hi = norm_one_count(ring, tau, det)
    lo = norm_one_count(low, tl, dl)
    ratio = Fraction(hi.count, lo.count)
    q = ring.q
    assert Fraction(q, 3) <= ratio <= 3 * q * q, (tau, det, ratio)
    return ratio


def kernel_c_census(ring, grouped=True):
    """Norm-one counts covering every repeated-root class of the ring.

    grouped=True sweeps one representative per group under the two
    count-preserving moves (y -> unit*y, x -> x + lambda*y): a group is a
    trace valuation w together with a coset of the shift image
    {l^2 + l*t^w} in the determinant coordinate.  grouped=False sweeps
    literally every class; both paths report how many classes each row
    covers and the totals always sum to q^(2*level - 1).
    """
    _require_eq2(ring)
    i, q, n = ring.level, ring.q, ring.size
    out = []
    if grouped:
        for w in range(1, i + 1):
            tw = q ** w if w < i else 0
            ntau = (q - 1) * q ** (i - w - 1) if w < i else 1
            im = sorted({ring.mul(l, l) ^ ring.mul(l, tw) for l in range(n)})
            seen = bytearray(n)
            for u in range(n):
                if seen[u]:
                    continue
                for v in im:
                    seen[u ^ v] = 1
                rec = norm_one_count(ring, tw, u)
                out.append(KernelCell(w, rec.delta, rec.count, rec.c,
                                      ntau * len(im)))
    else:
        for tau in range(n):
            if ring.is_unit(tau):
                continue
            w = ring.valuation(tau)
            for det in range(n):
                rec = norm_one_count(ring, tau, det)
                out.append(KernelCell(w, rec.delta, rec.count, rec.c, 1))
    assert sum(cell.classes for cell in out) == q ** (2 * i - 1)
    return out
