"""Exact arithmetic for finite fields GF(p^k) and truncated valuation rings.

Two ring families are supported:

* ``EqualChar``: F_q[t]/(t^i), equal characteristic, uniformizer t,
  infinite ramification index.
* ``Unramified0``: Z/p^i, characteristic zero lifted, uniformizer p,
  ramification index 1 (residue field is the prime field GF(p)).

Elements are immutable values carrying a canonical integer encoding, so
they hash and compare cheaply and enumeration order is reproducible.
"""

from __future__ import annotations

import math


class NotAUnit(ArithmeticError):
    """Raised when inverting an element of positive valuation."""


class Unsupported(ValueError):
    """Raised for operations outside a ring family's domain."""


FIELD_ORDER_CAP = 1 << 10  # largest p^k accepted by field_make


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_divmod(num, den, p):
    """Divide polynomials over GF(p); coefficient lists, ascending degree."""
    num = list(num)
    dn = len(den) - 1
    while den[dn] == 0:
        dn -= 1
    lead_inv = pow(den[dn], p - 2, p) if p > 2 else den[dn]
    quot = [0] * max(1, len(num) - dn)
    for shift in range(len(num) - dn - 1, -1, -1):
        c = (num[shift + dn] * lead_inv) % p
        if c:
            quot[shift] = c
            for j in range(dn + 1):
                num[shift + j] = (num[shift + j] - c * den[j]) % p
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


def _poly_is_irreducible(coeffs, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(coeffs) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for code in range(p ** d):
            div = []
            c = code
            for _ in range(d):
                div.append(c % p)
                c //= p
            div.append(1)
            _, rem = _poly_divmod(coeffs, div, p)
            if rem == [0]:
                return False
    return True


class FieldDesc:
    """GF(p^k) with a fixed modulus; elements are integer codes in [0, p^k).

    The code of an element with coefficients c_0..c_{k-1} (ascending powers
    of the generator) is sum(c_j * p^j).
    """

    __slots__ = ("p", "k", "q", "modulus", "_mul_table")

    def __init__(self, p: int, k: int, modulus):
        self.p = p
        self.k = k
        self.q = p ** k
        self.modulus = tuple(modulus)
        self._mul_table = None

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (isinstance(other, FieldDesc)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def digits(self, e: int):
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(e % p)
            e //= p
        return tuple(out)

    def encode(self, digits) -> int:
        e = 0
        for d in reversed(list(digits)):
            e = e * self.p + d % self.p
        return e

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.k):
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _mul_raw(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        A = self.digits(a)
        B = self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(A):
            if ai:
                for j, bj in enumerate(B):
                    if bj:
                        prod[i + j] = (prod[i + j] + ai * bj) % p
        mod = self.modulus
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for j in range(k):
                    if mod[j]:
                        prod[deg - k + j] = (prod[deg - k + j] - c * mod[j]) % p
        return self.encode(prod[:k])

    def mul_table(self):
        """Full q-by-q multiplication table (list of row lists), built lazily."""
        if self._mul_table is None:
            q = self.q
            tab = [[0] * q for _ in range(q)]
            for a in range(1, q):
                row = tab[a]
                for b in range(a, q):
                    v = self._mul_raw(a, b)
                    row[b] = v
                    tab[b][a] = v
            self._mul_table = tab
        return self._mul_table

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        if self.q <= 256:
            return self.mul_table()[a][b]
        return self._mul_raw(a, b)

    def pow(self, a: int, n: int) -> int:
        result = 1
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise NotAUnit("0 has no inverse in a field")
        return self.pow(a, self.q - 2)

    def elements(self):
        return range(self.q)


def field_make(p: int, k: int) -> FieldDesc:
    """Build GF(p^k) with the lowest-lexicographic monic irreducible modulus.

    'Lowest' means smallest integer encoding sum(c_j * p^j) of the non-leading
    coefficients c_0..c_{k-1}; this makes serialized elements reproducible.
    The order p^k is capped at 2^10.
    """
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p ** k > FIELD_ORDER_CAP:
        raise ValueError(f"field order {p}^{k} exceeds cap {FIELD_ORDER_CAP}")
    for code in range(p ** k):
        coeffs = []
        c = code
        for _ in range(k):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        if _poly_is_irreducible(coeffs, p):
            return FieldDesc(p, k, coeffs)
    raise AssertionError("no irreducible polynomial found; unreachable")


def sqrt_char2(field: FieldDesc, a: int) -> int:
    """The unique square root in GF(2^k): Frobenius inverse a^(2^(k-1))."""
    if field.p != 2:
        raise Unsupported("square roots via Frobenius inverse need characteristic 2")
    return field.pow(a, 1 << (field.k - 1))


# beyond this size no multiplication table is materialized
RING_TABLE_CAP = 1 << 10
RING_TABLE_CAP_ODD = 1 << 8


class RingDesc:
    """A finite truncated valuation ring, either F_q[t]/(t^i) or Z/p^i.

    Element codes: for EqualChar, sum(c_j * q^j) with c_j the field code of
    the t^j coefficient; for Unramified0, the integer itself in [0, p^i).
    """

    __slots__ = ("kind", "field", "p", "level", "q", "size", "_mul_table", "_add_table")

    def __init__(self, kind: str, field_or_p, level: int):
        if level < 1:
            raise ValueError(f"level must be >= 1, got {level}")
        self.kind = kind
        self.level = level
        self._mul_table = None
        self._add_table = None
        if kind == "EqualChar":
            if not isinstance(field_or_p, FieldDesc):
                raise ValueError("EqualChar ring needs a FieldDesc")
            self.field = field_or_p
            self.p = field_or_p.p
            self.q = field_or_p.q
        elif kind == "Unramified0":
            p = field_or_p
            if not _is_prime(p):
                raise ValueError(f"p must be prime, got {p}")
            self.field = None
            self.p = p
            self.q = p
        else:
            raise Unsupported(f"unknown ring kind {kind!r}; ramified extensions are not modeled")
        self.size = self.q ** level

    # ------------------------------------------------------------------ basics

    def __repr__(self):
        if self.kind == "EqualChar":
            base = f"F{self.q}[t]/(t^{self.level})"
        else:
            base = f"Z/{self.p}^{self.level}"
        return base

    def __eq__(self, other):
        return (isinstance(other, RingDesc)
                and self.kind == other.kind
                and self.level == other.level
                and self.p == other.p
                and self.field == other.field)

    def __hash__(self):
        return hash((self.kind, self.p, self.q, self.level))

    @property
    def is_char2(self) -> bool:
        """True when the residue characteristic is 2."""
        return self.p == 2

    @property
    def ramification(self):
        """e with p*O = (uniformizer)^e; infinite in equal characteristic."""
        return math.inf if self.kind == "EqualChar" else 1

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def uniformizer(self) -> int:
        return self.q if self.kind == "EqualChar" else self.p

    def elements(self):
        return range(self.size)

    def units(self):
        return (x for x in range(self.size) if self.is_unit(x))

    def unit_count(self) -> int:
        return self.size - self.size // self.q

    # -------------------------------------------------------------- arithmetic

    def digits(self, x: int):
        """Residue-field digit codes of x along powers of the uniformizer."""
        q = self.q
        out = []
        for _ in range(self.level):
            out.append(x % q)
            x //= q
        return tuple(out)

    def from_digits(self, digits) -> int:
        x = 0
        for d in reversed(list(digits)):
            x = x * self.q + d % self.q
        return x

    def add(self, x: int, y: int) -> int:
        if self.kind == "Unramified0":
            return (x + y) % self.size
        if self.p == 2:
            return x ^ y
        f = self.field
        q = self.q
        out = 0
        mult = 1
        for _ in range(self.level):
            out += f.add(x % q, y % q) * mult
            x //= q
            y //= q
            mult *= q
        return out

    def neg(self, x: int) -> int:
        if self.kind == "Unramified0":
            return (-x) % self.size
        if self.p == 2:
            return x
        f = self.field
        q = self.q
        out = 0
        mult = 1
        for _ in range(self.level):
            out += f.neg(x % q) * mult
            x //= q
            mult *= q
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def _mul_raw(self, x: int, y: int) -> int:
        if self.kind == "Unramified0":
            return (x * y) % self.size
        f = self.field
        i = self.level
        X = self.digits(x)
        Y = self.digits(y)
        out = [0] * i
        for a in range(i):
            xa = X[a]
            if xa:
                for b in range(i - a):
                    yb = Y[b]
                    if yb:
                        out[a + b] = f.add(out[a + b], f.mul(xa, yb))
        return self.from_digits(out)

    def mul(self, x: int, y: int) -> int:
        if self.kind == "Unramified0":
            return (x * y) % self.size
        if self._mul_table is not None:
            return self._mul_table[x][y]
        return self._mul_raw(x, y)

    def mul_table(self):
        """Full size-by-size multiplication table; only for small rings.

        For characteristic 2 the table is filled by a Gray-code walk: stepping
        y by one basis bit costs a single XOR with a precomputed basis product.
        """
        if self._mul_table is not None:
            return self._mul_table
        if self.kind == "Unramified0":
            n = self.size
            tab = [[(x * y) % n for y in range(n)] for x in range(n)]
            self._mul_table = tab
            return tab
        cap = RING_TABLE_CAP if self.p == 2 else RING_TABLE_CAP_ODD
        if self.size > cap:
            raise Unsupported(f"ring of size {self.size} exceeds table cap {cap}")
        n = self.size
        if self.p == 2:
            nbits = n.bit_length() - 1
            tab = []
            for x in range(n):
                basis = [self._mul_raw(x, 1 << b) for b in range(nbits)]
                row = [0] * n
                acc = 0
                gray_prev = 0
                for y in range(1, n):
                    gray = y ^ (y >> 1)
                    bit = (gray ^ gray_prev).bit_length() - 1
                    acc ^= basis[bit]
                    row[gray] = acc
                    gray_prev = gray
                tab.append(row)
        else:
            tab = [[self._mul_raw(x, y) for y in range(n)] for x in range(n)]
        self._mul_table = tab
        return tab

    def add_table(self):
        """Addition table for small odd-characteristic rings (char 2 uses XOR)."""
        if self._add_table is None:
            n = self.size
            if n > RING_TABLE_CAP_ODD and self.p != 2:
                raise Unsupported(f"ring of size {n} exceeds table cap")
            self._add_table = [[self.add(x, y) for y in range(n)] for x in range(n)]
        return self._add_table

    def is_unit(self, x: int) -> bool:
        if self.kind == "Unramified0":
            return x % self.p != 0
        return x % self.q != 0

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise NotAUnit(f"element of valuation {self.valuation(x)} has no inverse")
        if self.kind == "Unramified0":
            return pow(x, -1, self.size)
        # Newton lift of the residue inverse: y <- y(2 - xy) doubles precision
        f = self.field
        y = f.inv(x % self.q)
        two = self.add(1, 1)
        prec = 1
        while prec < self.level:
            y = self.mul(y, self.sub(two, self.mul(x, y)))
            prec *= 2
        return y

    def valuation(self, x: int) -> int:
        """Largest j with x in (uniformizer)^j; the zero element gets the level."""
        if x == 0:
            return self.level
        if self.kind == "Unramified0":
            v = 0
            while x % self.p == 0:
                x //= self.p
                v += 1
            return v
        v = 0
        q = self.q
        while x % q == 0:
            x //= q
            v += 1
        return v

    def residue(self, x: int) -> int:
        return x % self.q

    def scalar_from_residue(self, c: int) -> int:
        """Lift a residue-field code to the ring (constant digit)."""
        return c % self.q

    # --------------------------------------------------------------- elements

    def elem(self, x) -> "RElem":
        if isinstance(x, RElem):
            if x.ring != self:
                raise ValueError("element belongs to a different ring")
            return x
        return RElem(self, int(x) % self.size)

    def elem_from_coeffs(self, coeffs) -> "RElem":
        return RElem(self, self.from_digits(coeffs))

    # ------------------------------------------------------------------- JSON

    def to_json(self) -> dict:
        if self.kind == "EqualChar":
            return {"base": "Fq", "p": self.p, "k": self.field.k, "level": self.level}
        return {"base": "Zp", "p": self.p, "level": self.level}

    def elem_to_json(self, x: int):
        if self.kind == "Unramified0":
            return str(x % self.size)
        digs = self.digits(x)
        if self.field.k == 1:
            return list(digs)
        return [list(self.field.digits(c)) for c in digs]

    def elem_from_json(self, obj) -> int:
        if self.kind == "Unramified0":
            v = int(obj)
            if not 0 <= v < self.size:
                raise ValueError(f"element {v} out of range for {self!r}")
            return v
        if not isinstance(obj, (list, tuple)) or len(obj) != self.level:
            raise ValueError(f"element of {self!r} needs {self.level} coefficients")
        if self.field.k == 1:
            return self.from_digits(int(c) for c in obj)
        codes = []
        for c in obj:
            if isinstance(c, (list, tuple)):
                codes.append(self.field.encode(int(d) for d in c))
            else:
                codes.append(int(c))
        return self.from_digits(codes)


class RElem:
    """An immutable ring element: a ring reference plus its canonical code."""

    __slots__ = ("ring", "code")

    def __init__(self, ring: RingDesc, code: int):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "code", code % ring.size)

    def __setattr__(self, name, value):
        raise AttributeError("RElem is immutable")

    @property
    def coeffs(self):
        return self.ring.digits(self.code)

    def __add__(self, other):
        return RElem(self.ring, self.ring.add(self.code, self.ring.elem(other).code))

    __radd__ = __add__

    def __sub__(self, other):
        return RElem(self.ring, self.ring.sub(self.code, self.ring.elem(other).code))

    def __rsub__(self, other):
        return RElem(self.ring, self.ring.sub(self.ring.elem(other).code, self.code))

    def __mul__(self, other):
        return RElem(self.ring, self.ring.mul(self.code, self.ring.elem(other).code))

    __rmul__ = __mul__

    def __neg__(self):
        return RElem(self.ring, self.ring.neg(self.code))

    def inv(self) -> "RElem":
        return RElem(self.ring, self.ring.inv(self.code))

    def valuation(self) -> int:
        return self.ring.valuation(self.code)

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.code)

    def __eq__(self, other):
        return (isinstance(other, RElem)
                and self.ring == other.ring and self.code == other.code)

    def __hash__(self):
        return hash((self.code, self.ring.kind, self.ring.level, self.ring.q))

    def __repr__(self):
        return f"RElem({self.ring!r}, {list(self.coeffs)})"

    def to_json(self):
        return self.ring.elem_to_json(self.code)


def inv(x: RElem) -> RElem:
    """Multiplicative inverse; raises NotAUnit off the unit group."""
    return x.inv()


def valuation(x: RElem) -> int:
    return x.valuation()


def ring_equalchar(field: FieldDesc, level: int) -> RingDesc:
    """F_q[t]/(t^level) over the given residue field."""
    return RingDesc("EqualChar", field, level)


def ring_unramified0(p: int, level: int) -> RingDesc:
    """Z/p^level."""
    return RingDesc("Unramified0", p, level)


def ring_fqt(p: int, k: int, level: int) -> RingDesc:
    """Convenience: F_{p^k}[t]/(t^level)."""
    return ring_equalchar(field_make(p, k), level)


def ring_from_json(obj) -> RingDesc:
    """Parse {"base":"Fq","p":2,"k":1,"level":3} or {"base":"Zp","p":2,"level":3}."""
    if not isinstance(obj, dict):
        raise ValueError("ring spec must be a JSON object")
    base = obj.get("base")
    if base == "Fq":
        p = int(obj["p"])
        k = int(obj.get("k", 1))
        return ring_equalchar(field_make(p, k), int(obj["level"]))
    if base == "Zp":
        if "k" in obj and int(obj["k"]) != 1:
            raise Unsupported("unramified characteristic-zero rings have prime residue field")
        return ring_unramified0(int(obj["p"]), int(obj["level"]))
    raise ValueError(f"ring spec field 'base' must be 'Fq' or 'Zp', got {base!r}")
