"""Exact linear algebra and polynomial arithmetic over GF(2).

Polynomials are stored as Python integers, bit ``i`` holding the coefficient
of ``x**i``.  Matrices store one integer per row, bit ``j`` of row ``i``
holding entry ``(i, j)``.  Vectors are integers and act on the *left*:
``(v * M)[j] = XOR_i v_i M[i][j]``, so multiplying a row vector by a matrix
is a xor of the rows selected by the set bits of ``v``.

Everything here is exact; no floating point is involved.  Instances are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ZERO_DEGREE",
    "GF2Poly",
    "X",
    "ONE",
    "ZERO",
    "poly_weight",
    "poly_mod_mul",
    "poly_mod_pow",
    "poly_gcd",
    "poly_lcm",
    "BitMatrix",
    "mat_mul",
    "mat_pow",
    "mat_rank",
    "is_invertible",
    "char_poly",
    "is_primitive",
    "berlekamp_massey",
    "lfsr_bits",
    "LinearComplexityResult",
    "Gf2Error",
    "UnsupportedDegreeError",
]

# Degree of the zero polynomial.  A distinct sentinel (not -1) so that
# accidental arithmetic on it fails loudly / compares sanely.
ZERO_DEGREE = float("-inf")


class Gf2Error(Exception):
    pass


class UnsupportedDegreeError(Gf2Error):
    """No factorization of 2**n - 1 is available for this degree."""


def _clmul(a: int, b: int) -> int:
    """Carry-less product of two coefficient masks."""
    if a.bit_count() > b.bit_count():
        a, b = b, a
    r = 0
    while a:
        low = a & -a
        r ^= b << (low.bit_length() - 1)
        a ^= low
    return r


# byte -> 16-bit "spread" (insert a zero between consecutive bits); squaring a
# polynomial over GF(2) is exactly this spreading applied bytewise
_SPREAD = [0] * 256
for _v in range(1, 256):
    _low = _v & -_v
    _SPREAD[_v] = _SPREAD[_v ^ _low] | (1 << (2 * (_low.bit_length() - 1)))


def _clsquare(a: int) -> int:
    r = 0
    shift = 0
    while a:
        r |= _SPREAD[a & 0xFF] << shift
        a >>= 8
        shift += 16
    return r


def _mod_bits(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while True:
        da = a.bit_length() - 1
        if da < dm:
            return a
        a ^= m << (da - dm)


def _divmod_bits(a: int, m: int) -> tuple[int, int]:
    dm = m.bit_length() - 1
    q = 0
    while True:
        da = a.bit_length() - 1
        if da < dm:
            return q, a
        q |= 1 << (da - dm)
        a ^= m << (da - dm)


class GF2Poly:
    """Immutable polynomial over GF(2)."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("coefficient mask must be non-negative")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("GF2Poly is immutable")

    @classmethod
    def from_degrees(cls, degrees) -> "GF2Poly":
        bits = 0
        for d in degrees:
            bits ^= 1 << d
        return cls(bits)

    @property
    def degree(self):
        return self.bits.bit_length() - 1 if self.bits else ZERO_DEGREE

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def coeff(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __eq__(self, other):
        return isinstance(other, GF2Poly) and self.bits == other.bits

    def __hash__(self):
        return hash(("GF2Poly", self.bits))

    def __xor__(self, other: "GF2Poly") -> "GF2Poly":
        return GF2Poly(self.bits ^ other.bits)

    __add__ = __xor__

    def __mul__(self, other: "GF2Poly") -> "GF2Poly":
        return GF2Poly(_clmul(self.bits, other.bits))

    def __mod__(self, other: "GF2Poly") -> "GF2Poly":
        if other.bits == 0:
            raise ZeroDivisionError("polynomial modulus is zero")
        return GF2Poly(_mod_bits(self.bits, other.bits))

    def __divmod__(self, other: "GF2Poly"):
        if other.bits == 0:
            raise ZeroDivisionError("polynomial modulus is zero")
        q, r = _divmod_bits(self.bits, other.bits)
        return GF2Poly(q), GF2Poly(r)

    def __str__(self):
        if self.bits == 0:
            return "0"
        terms = []
        for d in range(self.bits.bit_length() - 1, -1, -1):
            if (self.bits >> d) & 1:
                terms.append("1" if d == 0 else ("x" if d == 1 else f"x^{d}"))
        return " + ".join(terms)

    def __repr__(self):
        return f"GF2Poly(0x{self.bits:x})"


ZERO = GF2Poly(0)
ONE = GF2Poly(1)
X = GF2Poly(2)


def poly_weight(p: GF2Poly) -> int:
    """Number of nonzero coefficients."""
    return p.weight


def poly_gcd(a: GF2Poly, b: GF2Poly) -> GF2Poly:
    x, y = a.bits, b.bits
    while y:
        x, y = y, _mod_bits(x, y)
    return GF2Poly(x)


def poly_lcm(a: GF2Poly, b: GF2Poly) -> GF2Poly:
    if a.bits == 0 or b.bits == 0:
        return ZERO
    g = poly_gcd(a, b)
    q, _ = _divmod_bits(_clmul(a.bits, b.bits), g.bits)
    return GF2Poly(q)


def _check_modulus(m: GF2Poly):
    if m.bits == 0 or m.degree == 0:
        raise ValueError("modulus must have degree >= 1")


def poly_mod_mul(a: GF2Poly, b: GF2Poly, m: GF2Poly) -> GF2Poly:
    """a*b mod m.  Pure big-integer carry-less multiplication."""
    _check_modulus(m)
    return GF2Poly(_mod_bits(_clmul(a.bits, b.bits), m.bits))


def poly_mod_pow(base: GF2Poly, e: int, m: GF2Poly) -> GF2Poly:
    """base**e mod m by square-and-multiply; e may be a huge integer."""
    _check_modulus(m)
    if e < 0:
        raise ValueError("negative exponent")
    r = 1
    b = _mod_bits(base.bits, m.bits)
    while e:
        if e & 1:
            r = _mod_bits(_clmul(r, b), m.bits)
        e >>= 1
        if e:
            b = _mod_bits(_clsquare(b), m.bits)
    return GF2Poly(r)


@dataclass(frozen=True)
class LinearComplexityResult:
    complexity: int
    connection_poly: GF2Poly


def berlekamp_massey(bits) -> LinearComplexityResult:
    """Shortest LFSR generating ``bits`` (an iterable of 0/1).

    The connection polynomial ``C`` satisfies c_0 = 1 and, for n >= L,
    s_n = XOR_{i=1..L} c_i s_{n-i}.  The caller is responsible for supplying
    at least twice the true complexity's worth of bits for a reliable answer.
    """
    C = 1
    B = 1
    L = 0
    m = 1
    R = 0  # bit i of R = s_{n-i}, i.e. the sequence seen so far, reversed
    for n, s in enumerate(bits):
        s = int(s)
        R = (R << 1) | s
        d = (C & R).bit_count() & 1
        if d:
            T = C
            C ^= B << m
            if 2 * L <= n:
                L = n + 1 - L
                B = T
                m = 1
            else:
                m += 1
        else:
            m += 1
    return LinearComplexityResult(L, GF2Poly(C))


def lfsr_bits(connection_poly: GF2Poly, seed_bits: int, length: int):
    """Run the LFSR defined by a BM-style connection polynomial.

    The low ``L`` bits of ``seed_bits`` are s_0..s_{L-1}; returns a list of
    ``length`` bits.
    """
    L = connection_poly.degree
    if L is ZERO_DEGREE or connection_poly.bits & 1 == 0:
        raise ValueError("connection polynomial must have c_0 = 1")
    L = int(L)
    taps = connection_poly.bits >> 1  # c_1..c_L
    mask = (1 << L) - 1
    out = [(seed_bits >> i) & 1 for i in range(min(L, length))]
    W = 0  # bit j = s_{n-1-j}, the window of the last L outputs
    for s in out:
        W = ((W << 1) | s) & mask
    for _ in range(length - len(out)):
        s = (taps & W).bit_count() & 1
        out.append(s)
        W = ((W << 1) | s) & mask
    return out


# ---------------------------------------------------------------------------
# Bit matrices


class BitMatrix:
    """Dense square matrix over GF(2), rows packed into integers."""

    __slots__ = ("n", "rows", "_tables")

    def __init__(self, n: int, rows):
        if n < 1:
            raise ValueError("dimension must be >= 1")
        rows = tuple(int(r) for r in rows)
        if len(rows) != n:
            raise ValueError("row count does not match dimension")
        mask = (1 << n) - 1
        if any(r & ~mask for r in rows):
            raise ValueError("row has bits beyond the matrix dimension")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_tables", None)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("BitMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, [1 << i for i in range(n)])

    def __eq__(self, other):
        return (
            isinstance(other, BitMatrix)
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash(("BitMatrix", self.n, self.rows))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def transpose(self) -> "BitMatrix":
        n = self.n
        out = [0] * n
        for i, row in enumerate(self.rows):
            while row:
                low = row & -row
                out[low.bit_length() - 1] |= 1 << i
                row ^= low
        return BitMatrix(n, out)

    def _mul_tables(self):
        # byte-sliced lookup tables for fast v |-> v*M
        tables = self._tables
        if tables is None:
            rows = self.rows
            n = self.n
            tables = []
            for base in range(0, n, 8):
                chunk = rows[base : base + 8]
                tbl = [0] * 256
                for v in range(1, 256):
                    low = v & -v
                    i = low.bit_length() - 1
                    tbl[v] = tbl[v ^ low] ^ (chunk[i] if i < len(chunk) else 0)
                tables.append(tbl)
            object.__setattr__(self, "_tables", tables)
        return tables

    def mul_vec(self, v: int) -> int:
        """Row vector times matrix: v * M."""
        acc = 0
        for tbl in self._mul_tables():
            acc ^= tbl[v & 0xFF]
            v >>= 8
        return acc

    def __repr__(self):
        return f"BitMatrix(n={self.n})"


def mat_mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} != {b.n}")
    return BitMatrix(a.n, [b.mul_vec(r) for r in a.rows])


def mat_pow(m: BitMatrix, e: int) -> BitMatrix:
    """m**e by square-and-multiply; e may be a huge integer."""
    if e < 0:
        raise ValueError("negative exponent")
    r = BitMatrix.identity(m.n)
    b = m
    while e:
        if e & 1:
            r = mat_mul(r, b)
        e >>= 1
        if e:
            b = mat_mul(b, b)
    return r


def mat_rank(m: BitMatrix) -> int:
    pivots: dict[int, int] = {}
    for row in m.rows:
        while row:
            p = row.bit_length() - 1
            other = pivots.get(p)
            if other is None:
                pivots[p] = row
                break
            row ^= other
    return len(pivots)


def is_invertible(m: BitMatrix) -> bool:
    return mat_rank(m) == m.n


def _reduce(v: int, basis: dict[int, int]) -> int:
    while v:
        r = basis.get(v.bit_length() - 1)
        if r is None:
            return v
        v ^= r
    return 0


def char_poly(m: BitMatrix, verify: bool = True) -> GF2Poly:
    """Characteristic polynomial det(M - xI) over GF(2).

    Computed from the cyclic decomposition of the row action v |-> v*M: the
    product of the relative annihilator polynomials of a chain of Krylov
    subspaces.  The result is verified against Cayley-Hamilton (P(M) must be
    the zero matrix); a verification failure means a bug and raises Gf2Error.
    """
    n = m.n
    if n > 1024:
        raise ValueError("char_poly supports dimensions up to 1024")
    basis: dict[int, int] = {}
    poly = 1
    dim = 0
    j = 0
    while dim < n:
        while True:
            v = 1 << j
            j += 1
            if _reduce(v, basis):
                break
        # grow the Krylov chain of v until it becomes dependent modulo basis
        chain: dict[int, tuple[int, int]] = {}  # pivot -> (vector, combo)
        u = v
        upoly = 1
        g = None
        while True:
            r = u
            c = upoly
            while r:
                p = r.bit_length() - 1
                if p in chain:
                    vec, combo = chain[p]
                    r ^= vec
                    c ^= combo
                elif p in basis:
                    r ^= basis[p]  # basis vectors vanish in the quotient
                else:
                    break
            if not r:
                g = c  # monic: top bit is the current power of x
                break
            chain[r.bit_length() - 1] = (r, c)
            u = m.mul_vec(u)
            upoly <<= 1
        poly = _clmul(poly, g)
        basis.update((p, vec) for p, (vec, _) in chain.items())
        dim += len(chain)
    result = GF2Poly(poly)
    if verify and not _cayley_hamilton_holds(m, result):
        raise Gf2Error("characteristic polynomial failed Cayley-Hamilton check")
    return result


def _cayley_hamilton_holds(m: BitMatrix, p: GF2Poly) -> bool:
    """Check that evaluating p at m yields the zero matrix, row by row."""
    bits = p.bits
    deg = bits.bit_length() - 1
    for i in range(m.n):
        u = 1 << i
        acc = 0
        for d in range(deg + 1):
            if (bits >> d) & 1:
                acc ^= u
            if d != deg:
                u = m.mul_vec(u)
        if acc:
            return False
    return True


# ---------------------------------------------------------------------------
# Primitivity

# Distinct prime factors of 2**n - 1 for the large supported degrees.  These
# are the classical complete factorizations through the Fermat numbers F_0..F_9
# (2**(2**k) - 1 = prod_{i<k} F_i); each table is checked against the exact
# product the first time it is used.
_F5 = (641, 6700417)
_F6 = (274177, 67280421310721)
_F7 = (59649589127497217, 5704689200685129054721)
_F8 = (
    1238926361552897,
    93461639715357977769163558199606896584051237541638188580280321,
)
_F9 = (
    2424833,
    7455602825647884208337395736200454918783366342657,
    741640062627530801524787141901937474059940781097519023905821316144415759504705008092818711693940737,
)

_FACTORS_2N1 = {
    64: (3, 5, 17, 257, 65537) + _F5,
    128: (3, 5, 17, 257, 65537) + _F5 + _F6,
    256: (3, 5, 17, 257, 65537) + _F5 + _F6 + _F7,
    512: (3, 5, 17, 257, 65537) + _F5 + _F6 + _F7 + _F8,
    1024: (3, 5, 17, 257, 65537) + _F5 + _F6 + _F7 + _F8 + _F9,
}

_verified_factor_tables: set[int] = set()


def _trial_factor(n: int):
    factors = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors.append(n)
    return tuple(factors)


def _prime_factors_2n_minus_1(n: int):
    if n <= 32:
        return _trial_factor((1 << n) - 1)
    table = _FACTORS_2N1.get(n)
    if table is None:
        raise UnsupportedDegreeError(
            f"no factorization of 2^{n} - 1 available (supported: <=32, "
            f"{sorted(_FACTORS_2N1)})"
        )
    if n not in _verified_factor_tables:
        prod = math.prod(table)
        if prod != (1 << n) - 1:
            raise Gf2Error(f"embedded factor table for 2^{n}-1 is inconsistent")
        _verified_factor_tables.add(n)
    return table


def _is_irreducible(p: GF2Poly) -> bool:
    d = p.degree
    if d is ZERO_DEGREE or d == 0:
        return False
    d = int(d)
    if d == 1:
        return True
    # x^(2^d) == x mod p, and gcd(x^(2^(d/q)) - x, p) = 1 for prime q | d
    t = X.bits
    for _ in range(d):
        t = _mod_bits(_clsquare(t), p.bits)
    if t != X.bits:
        return False
    for q in _trial_factor(d):
        t = X.bits
        for _ in range(d // q):
            t = _mod_bits(_clsquare(t), p.bits)
        if poly_gcd(GF2Poly(t ^ X.bits), p) != ONE:
            return False
    return True


def is_primitive(p: GF2Poly) -> bool:
    """True iff p is irreducible and x has order 2**deg(p) - 1 modulo p.

    Supported degrees: 1..32 (2**n - 1 factored on the fly) and
    64/128/256/512/1024 (embedded factor tables); anything else raises
    UnsupportedDegreeError.
    """
    d = p.degree
    if d is ZERO_DEGREE or d == 0:
        raise ValueError("primitivity is undefined for constant polynomials")
    d = int(d)
    factors = _prime_factors_2n_minus_1(d)  # raises for unsupported degrees
    if p.bits & 1 == 0:
        return False  # divisible by x
    if not _is_irreducible(p):
        return False
    order = (1 << d) - 1
    for q in factors:
        if poly_mod_pow(X, order // q, p) == ONE:
            return False
    return True
