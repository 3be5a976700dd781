"""Exact coefficient arithmetic.

Everything symbolic in the engine lives in rational-function fields
QQ(sym_1, ..., sym_m) built on sympy's sparse FracField, which keeps
fractions reduced and canonically normalized on every operation.  Two
symbol names are reserved: ``n`` for the iteration index and ``u`` for
the generic pre-singularity value; ``z`` is reserved for the oracle's
initial-condition indeterminate and may not be a mapping parameter.

This module also provides dense univariate polynomials over an abstract
coefficient field (used for singular-value extraction and for gcd
checks) and the finite-field specialization used by the mod-p oracle.
"""

from __future__ import annotations

from fractions import Fraction

from sympy import QQ, factor_list, sympify
from sympy.polys.fields import field as _sympy_field

from .errors import BadSpecializationError, DivisionByZeroError

RESERVED_INDEX = "n"
RESERVED_GENERIC = "u"
RESERVED_INITIAL = "z"


class CoefficientField:
    """A rational-function field QQ(symbols) with engine helpers."""

    def __init__(self, symbols):
        self.symbols = tuple(symbols)
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in {self.symbols}")
        built = _sympy_field(",".join(self.symbols), QQ) if self.symbols else None
        if built is None:
            # degenerate parameter-free case: fall back to a 1-symbol field
            # is unnecessary; plain Fractions would do, but keeping a single
            # code path is simpler, so embed QQ via a dummy symbol-free field
            raise ValueError("CoefficientField needs at least one symbol")
        self.field = built[0]
        self.gens = {name: gen for name, gen in zip(self.symbols, built[1:])}
        self.one = self.field.one
        self.zero = self.field.zero

    def __repr__(self):
        return f"CoefficientField({', '.join(self.symbols)})"

    def gen(self, name):
        return self.gens[name]

    def const(self, value):
        """Lift an int or Fraction into the field."""
        frac = Fraction(value)
        return self.field.ground_new(QQ(frac.numerator, frac.denominator))

    def from_string(self, text):
        """Parse an expression like '(c**2-1)/(c-1)' into a reduced element."""
        return self.field.from_expr(sympify(text))

    def normalize(self, num, den):
        """Reduced, canonical fraction num/den (= field_normalize)."""
        if den == 0 if isinstance(den, int) else (getattr(den, "is_zero", None) or den == self._zero_like(den)):
            raise DivisionByZeroError("zero denominator")
        num_el = num if hasattr(num, "denom") else self.field.field_new(num)
        den_el = den if hasattr(den, "denom") else self.field.field_new(den)
        if not den_el:
            raise DivisionByZeroError("zero denominator")
        return num_el / den_el

    @staticmethod
    def _zero_like(den):
        return den * 0

    def depends_on(self, element, name):
        """Does the reduced element involve the given symbol?"""
        if name not in self.gens:
            return False
        idx = self.symbols.index(name)
        gen = self.field.ring.gens[idx]
        return element.numer.degree(gen) > 0 or element.denom.degree(gen) > 0

    def shift_n(self, element, amount=1):
        """Substitute n -> n + amount throughout (field homomorphism)."""
        if RESERVED_INDEX not in self.gens:
            return element
        idx = self.symbols.index(RESERVED_INDEX)
        ngen = self.field.ring.gens[idx]
        target = ngen + amount
        num = element.numer.compose(ngen, target)
        den = element.denom.compose(ngen, target)
        return self.normalize(num, den)

    def eval_n(self, element, n_value):
        """Substitute a concrete integer for n; result stays in the field."""
        if RESERVED_INDEX not in self.gens:
            return element
        idx = self.symbols.index(RESERVED_INDEX)
        ngen = self.field.ring.gens[idx]
        num = element.numer.compose(ngen, element.numer.ring.ground_new(QQ(n_value)) * element.numer.ring.one)
        den = element.denom.compose(ngen, element.denom.ring.ground_new(QQ(n_value)) * element.denom.ring.one)
        return self.normalize(num, den)

    def specialize(self, element, cfg, n_value=0):
        """Ring-homomorphic image of an element in GF(cfg.prime).

        Raises BadSpecializationError when the denominator vanishes under
        the assignment; the caller re-draws.
        """
        p = cfg.prime
        num = _eval_poly_mod(element.numer, self.symbols, cfg.assignment, n_value, p)
        den = _eval_poly_mod(element.denom, self.symbols, cfg.assignment, n_value, p)
        if den == 0:
            raise BadSpecializationError(
                f"denominator vanished under {cfg.assignment}", cfg.assignment)
        return num * pow(den, p - 2, p) % p


def _eval_poly_mod(poly, symbols, assignment, n_value, p):
    values = []
    for name in symbols:
        if name == RESERVED_INDEX:
            values.append(n_value % p)
        else:
            if name not in assignment:
                raise BadSpecializationError(f"no residue assigned for {name!r}", assignment)
            values.append(assignment[name] % p)
    total = 0
    for monom, coeff in poly.terms():
        q = Fraction(coeff.numerator, coeff.denominator) if hasattr(coeff, "numerator") else Fraction(coeff)
        cden = q.denominator % p
        if cden == 0:
            raise BadSpecializationError("coefficient denominator divisible by p", assignment)
        term = q.numerator % p * pow(cden, p - 2, p) % p
        for exp, val in zip(monom, values):
            if exp:
                term = term * pow(val, exp, p) % p
        total = (total + term) % p
    return total


def field_normalize(ctx: CoefficientField, num, den):
    """Reduced canonical fraction; module-level alias kept for clarity."""
    return ctx.normalize(num, den)


def shift_n(ctx: CoefficientField, element, amount=1):
    return ctx.shift_n(element, amount)


def specialize(ctx: CoefficientField, element, cfg, n_value=0):
    return ctx.specialize(element, cfg, n_value)


# ---------------------------------------------------------------------------
# Dense univariate polynomials over an abstract field
# ---------------------------------------------------------------------------

class UniPoly:
    """Dense univariate polynomial with coefficients in a field.

    The coefficient field is described by a small domain object with
    ``zero``, ``one``, ``add``, ``sub``, ``mul``, ``div``, ``neg`` and
    ``is_zero``; see FieldDomain and GFDomain below.  Coefficients are
    stored ascending by degree with a nonzero leading coefficient; the
    zero polynomial has an empty list and degree -1 (the sentinel).
    """

    __slots__ = ("domain", "coeffs")

    def __init__(self, domain, coeffs):
        while coeffs and domain.is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        self.domain = domain
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"

    def __add__(self, other):
        d = self.domain
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else d.zero
            b = other.coeffs[i] if i < len(other.coeffs) else d.zero
            out.append(d.add(a, b))
        return UniPoly(d, out)

    def __sub__(self, other):
        d = self.domain
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else d.zero
            b = other.coeffs[i] if i < len(other.coeffs) else d.zero
            out.append(d.sub(a, b))
        return UniPoly(d, out)

    def __mul__(self, other):
        d = self.domain
        if self.is_zero() or other.is_zero():
            return UniPoly(d, [])
        out = [d.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if d.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = d.add(out[i + j], d.mul(a, b))
        return UniPoly(d, out)

    def scale(self, factor):
        d = self.domain
        return UniPoly(d, [d.mul(factor, c) for c in self.coeffs])

    def monic(self):
        if self.is_zero():
            return self
        d = self.domain
        lead = self.coeffs[-1]
        return UniPoly(d, [d.div(c, lead) for c in self.coeffs])

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        d = self.domain
        rem = list(self.coeffs)
        quo = [d.zero] * max(len(rem) - len(other.coeffs) + 1, 0)
        db = other.degree
        lead_inv = d.div(d.one, other.coeffs[-1])
        for i in range(len(rem) - 1, db - 1, -1):
            if d.is_zero(rem[i]):
                continue
            q = d.mul(rem[i], lead_inv)
            quo[i - db] = q
            for j, b in enumerate(other.coeffs):
                rem[i - db + j] = d.sub(rem[i - db + j], d.mul(q, b))
        return UniPoly(d, quo), UniPoly(d, rem)

    def evaluate(self, x):
        d = self.domain
        acc = d.zero
        for c in reversed(self.coeffs):
            acc = d.add(d.mul(acc, x), c)
        return acc


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor via the Euclidean remainder sequence.

    gcd(0, 0) = 0 by convention.
    """
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


class FieldDomain:
    """Adapter exposing a CoefficientField as a UniPoly coefficient domain."""

    def __init__(self, ctx: CoefficientField):
        self.ctx = ctx
        self.zero = ctx.zero
        self.one = ctx.one

    def is_zero(self, a):
        return not a

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a


class GFDomain:
    """Prime field GF(p) as a UniPoly coefficient domain (ints mod p)."""

    def __init__(self, p):
        self.p = p
        self.zero = 0
        self.one = 1

    def is_zero(self, a):
        return a % self.p == 0

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def div(self, a, b):
        return a * pow(b, self.p - 2, self.p) % self.p

    def neg(self, a):
        return -a % self.p


def factor_roots_in_field(ctx: CoefficientField, poly: UniPoly):
    """Split a UniPoly over the parameter field into its roots.

    Returns (roots, unsolved) where roots are field elements from the
    linear factors and unsolved lists the degrees of irreducible factors
    that have no root in the field.
    """
    if poly.degree < 1:
        return [], []
    # clear to a polynomial in one extra symbol over QQ and let sympy factor
    import sympy

    x = sympy.Symbol("__root_var__")
    expr = sympy.Integer(0)
    for i, c in enumerate(poly.coeffs):
        expr += sympy.sympify(str(c)) * x**i
    expr = sympy.together(expr)
    num, _den = sympy.fraction(sympy.cancel(expr))
    roots = []
    unsolved = []
    for fac, mult in factor_list(num, x)[1]:
        fp = sympy.Poly(fac, x)
        if fp.degree() == 0:
            continue
        if fp.degree() == 1:
            a1, a0 = fp.all_coeffs()
            root = sympy.cancel(-a0 / a1)
            roots.extend([ctx.field.from_expr(root)] * mult)
        else:
            unsolved.append(int(fp.degree()))
    return roots, unsolved
