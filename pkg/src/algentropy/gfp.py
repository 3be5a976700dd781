"""Fast univariate arithmetic over GF(p) for the mod-p degree oracle.

Polynomials are numpy uint64 arrays of residues, ascending by degree,
with no trailing zeros; the zero polynomial is the empty array.  The
working primes are below 2**31 so that products of two residues fit in
int64/uint64 without overflow.

Multiplication uses Kronecker substitution: coefficients are packed
into 128-bit slots of one big integer, multiplied with gmpy2, and the
slots unpacked.  Slot width 128 bits is safe while the convolution
coefficients stay below 2**128; with residues < 2**31 that allows
operand lengths up to 2**66, far beyond anything the oracle produces.

Division uses the reversal trick with Newton series inversion, and gcd
uses a Lehmer-style batched Euclid: quotients are computed from the top
coefficients only and applied to the full operands as a 2x2 polynomial
matrix, four big multiplications per round instead of thousands of
long subtractions.
"""

from __future__ import annotations

import numpy as np
import gmpy2

from .errors import DivisionByZeroError

# largest primes below 2**31; residue products stay below 2**62
PRIMES = (2147483647, 2147483629, 2147483587)

_SLOT_BYTES = 16
_B64 = 1 << 64

ZERO = np.zeros(0, dtype=np.uint64)


def trim(a):
    """Strip trailing zero coefficients."""
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def from_ints(values, p):
    return trim(np.array([v % p for v in values], dtype=np.uint64))


def deg(a):
    return len(a) - 1


def gf_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] = (out[: len(b)] + b) % p
    return trim(out)


def gf_sub(a, b, p):
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.uint64)
    out[: len(a)] = a
    out[: len(b)] = (out[: len(b)] + p - b) % p
    return trim(out)


def gf_neg(a, p):
    if not len(a):
        return a
    return (p - a) % p


def gf_scale(a, c, p):
    c = int(c) % p
    if c == 0 or not len(a):
        return ZERO
    return trim(a * np.uint64(c) % np.uint64(p))


def _mul_school(a, b, p):
    if len(a) > len(b):
        a, b = b, a
    out = np.zeros(len(a) + len(b) - 1, dtype=np.uint64)
    pb = np.uint64(p)
    for i, c in enumerate(a):
        if c:
            out[i : i + len(b)] = (out[i : i + len(b)] + b * c % pb) % pb
    return trim(out)


def _pack(a):
    buf = np.zeros((len(a), 2), dtype=np.uint64)
    buf[:, 0] = a
    return gmpy2.mpz(int.from_bytes(buf.tobytes(), "little"))


def gf_mul(a, b, p):
    if not len(a) or not len(b):
        return ZERO
    if min(len(a), len(b)) <= 16:
        return _mul_school(a, b, p)
    m = len(a) + len(b) - 1
    prod = int(_pack(a) * _pack(b))
    raw = prod.to_bytes(_SLOT_BYTES * m, "little")
    slots = np.frombuffer(raw, dtype=np.uint64).reshape(m, 2)
    lo = slots[:, 0] % np.uint64(p)
    hi = slots[:, 1] % np.uint64(p)
    out = (lo + hi * np.uint64(_B64 % p)) % np.uint64(p)
    return trim(out)


def _mul_trunc(a, b, prec, p):
    """a*b mod x**prec, returned zero-padded to exactly prec entries."""
    full = gf_mul(a[:prec], b[:prec], p)
    out = np.zeros(prec, dtype=np.uint64)
    out[: min(prec, len(full))] = full[:prec]
    return out


def _inv_series(f, m, p):
    """Inverse of f mod x**m by Newton iteration; needs f[0] != 0."""
    g = np.array([pow(int(f[0]), p - 2, p)], dtype=np.uint64)
    prec = 1
    while prec < m:
        prec = min(2 * prec, m)
        fg = _mul_trunc(f, g, prec, p)
        t = (np.uint64(p) - fg) % np.uint64(p)
        t[0] = (2 + p - int(fg[0])) % p
        g = _mul_trunc(g, t, prec, p)
    return g


def _divmod_school(a, b, p):
    db = deg(b)
    if deg(a) < db:
        return ZERO, a
    rem = a.copy()
    quo = np.zeros(len(a) - db, dtype=np.uint64)
    inv_lead = pow(int(b[-1]), p - 2, p)
    pb = np.uint64(p)
    for i in range(len(rem) - 1, db - 1, -1):
        c = int(rem[i])
        if c:
            q = c * inv_lead % p
            quo[i - db] = q
            rem[i - db : i + 1] = (rem[i - db : i + 1] + pb - b * np.uint64(q) % pb) % pb
    return trim(quo), trim(rem[:db])


def gf_divmod(a, b, p):
    if not len(b):
        raise DivisionByZeroError("polynomial division by zero")
    da, db = deg(a), deg(b)
    if da < db:
        return ZERO, a
    m = da - db + 1
    if db <= 64 or m <= 64:
        return _divmod_school(a, b, p)
    ra = a[::-1][:m].copy()
    rb = b[::-1][:m].copy()
    q_rev = _mul_trunc(ra, _inv_series(rb, m, p), m, p)
    q = trim(q_rev[::-1].copy())
    rem = gf_sub(a, gf_mul(b, q, p), p)
    return q, trim(rem[:db])


def gf_exact_div(a, b, p):
    q, r = gf_divmod(a, b, p)
    if len(r):
        raise ValueError("inexact polynomial division")
    return q


_EUCLID_CUTOFF = 600
_LEHMER_BLOCK = 1024


def _euclid(a, b, p):
    while len(b):
        a, b = b, _divmod_school(a, b, p)[1]
    return a


def gf_gcd(a, b, p):
    """Monic gcd, Lehmer-batched above the cutoff degree."""
    a, b = trim(a), trim(b)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > _EUCLID_CUTOFF:
        n = deg(a)
        k = min(_LEHMER_BLOCK, deg(b) // 2)
        m = n - 2 * k
        if m < 0:
            m = 0
        if deg(b) <= m + k + 1 or k < 8:
            # quotient too large or operands too lopsided for a batch:
            # take one full division step instead
            a, b = b, gf_divmod(a, b, p)[1]
            continue
        a1 = a[m:].copy()
        b1 = b[m:].copy()
        m00 = np.array([1], dtype=np.uint64)
        m01 = ZERO
        m10 = ZERO
        m11 = np.array([1], dtype=np.uint64)
        steps = 0
        # quotients read off the top 2k coefficients stay valid while the
        # truncated remainders keep degree above k + 1
        while deg(b1) > k + 1:
            q, r = _divmod_school(a1, b1, p)
            a1, b1 = b1, r
            m00, m01, m10, m11 = (
                m10,
                m11,
                gf_sub(m00, gf_mul(q, m10, p), p),
                gf_sub(m01, gf_mul(q, m11, p), p),
            )
            steps += 1
        if steps == 0:
            a, b = b, gf_divmod(a, b, p)[1]
            continue
        new_a = gf_add(gf_mul(m00, a, p), gf_mul(m01, b, p), p)
        new_b = gf_add(gf_mul(m10, a, p), gf_mul(m11, b, p), p)
        a, b = new_a, new_b
        if len(a) < len(b):
            a, b = b, a
    if len(b):
        # drop a once so both operands are small, then plain Euclid
        a, b = b, gf_divmod(a, b, p)[1]
        a = _euclid(a, b, p)
    if not len(a):
        return a
    return gf_scale(a, pow(int(a[-1]), p - 2, p), p)


def gf_pow_x(k):
    """The monomial x**k."""
    out = np.zeros(k + 1, dtype=np.uint64)
    out[k] = 1
    return out


class GFRat:
    """Rational function over GF(p) in one variable, held as num/den.

    Arithmetic does not cancel; the oracle cancels once per iteration
    step via reduce().  The denominator is always nonzero.
    """

    __slots__ = ("p", "num", "den")

    def __init__(self, p, num, den=None):
        self.p = p
        self.num = trim(num)
        self.den = trim(den) if den is not None else np.array([1], dtype=np.uint64)
        if not len(self.den):
            raise DivisionByZeroError("zero denominator in GFRat")

    @classmethod
    def const(cls, p, value):
        num = int(getattr(value, "numerator", value)) % p
        den = int(getattr(value, "denominator", 1)) % p
        if den == 0:
            raise DivisionByZeroError("constant denominator divisible by p")
        r = num * pow(den, p - 2, p) % p
        return cls(p, np.array([r] if r else [], dtype=np.uint64))

    @classmethod
    def gen(cls, p):
        return cls(p, np.array([0, 1], dtype=np.uint64))

    def is_zero(self):
        return not len(self.num)

    def degree(self):
        """Degree of the rational function (call on a reduced value)."""
        return max(deg(self.num), deg(self.den), 0)

    def reduce(self):
        g = gf_gcd(self.num, self.den, self.p)
        num, den = self.num, self.den
        if deg(g) > 0:
            num = gf_exact_div(num, g, self.p)
            den = gf_exact_div(den, g, self.p)
        lead_inv = pow(int(den[-1]), self.p - 2, self.p)
        if lead_inv != 1:
            num = gf_scale(num, lead_inv, self.p)
            den = gf_scale(den, lead_inv, self.p)
        return GFRat(self.p, num, den)

    def __add__(self, other):
        p = self.p
        return GFRat(p, gf_add(gf_mul(self.num, other.den, p),
                               gf_mul(other.num, self.den, p), p),
                     gf_mul(self.den, other.den, p))

    def __sub__(self, other):
        p = self.p
        return GFRat(p, gf_sub(gf_mul(self.num, other.den, p),
                               gf_mul(other.num, self.den, p), p),
                     gf_mul(self.den, other.den, p))

    def __mul__(self, other):
        p = self.p
        return GFRat(p, gf_mul(self.num, other.num, p),
                     gf_mul(self.den, other.den, p))

    def __truediv__(self, other):
        p = self.p
        if other.is_zero():
            raise DivisionByZeroError("division by zero rational function")
        return GFRat(p, gf_mul(self.num, other.den, p),
                     gf_mul(self.den, other.num, p))

    def __neg__(self):
        return GFRat(self.p, gf_neg(self.num, self.p), self.den)

    def __pow__(self, e):
        if e < 0:
            if self.is_zero():
                raise DivisionByZeroError("negative power of zero")
            base = GFRat(self.p, self.den, self.num)
            e = -e
        else:
            base = self
        out = GFRat.const(self.p, 1)
        sq = base
        while e:
            if e & 1:
                out = out * sq
            sq = sq * sq
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GFRat):
            return NotImplemented
        p = self.p
        lhs = gf_mul(self.num, other.den, p)
        rhs = gf_mul(other.num, self.den, p)
        return len(lhs) == len(rhs) and bool(np.all(lhs == rhs))

    def __repr__(self):
        return f"GFRat(p={self.p}, num_deg={deg(self.num)}, den_deg={deg(self.den)})"
