"""Root extraction and growth-rate helpers.

Characteristic polynomials come out of the balance layer as integer
sympy Polys; the dynamical degree is their largest real root above 1,
compared against the growth rates of anticonfined tail recurrences.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from .errors import DegenerateSequenceError

LAMBDA = sp.Symbol("lambda", positive=True)

# decimal digits carried through evalf; far beyond the 1e-9 reporting
# tolerance
_DIGITS = 30


def largest_real_root(poly):
    """Largest real root of an integer sympy Poly, as a sympy Float.

    Returns None when the polynomial has no real root.
    """
    if poly is None:
        return None
    if poly.degree() < 1:
        raise DegenerateSequenceError("constant characteristic polynomial")
    roots = sp.real_roots(poly)
    if not roots:
        return None
    return max(r.evalf(_DIGITS) for r in roots)


def recurrence_rate(rec):
    """Growth rate of o_m = rec[0]*o_{m-1} + ... : the largest real root
    of the characteristic polynomial, or 0.0 if there is none."""
    coeffs = [sp.Rational(Fraction(c)) for c in rec]
    t = sp.Symbol("t")
    poly = sp.Poly(t ** len(coeffs)
                   - sum(c * t ** (len(coeffs) - 1 - k) for k, c in enumerate(coeffs)),
                   t)
    roots = sp.real_roots(poly)
    if not roots:
        return sp.Float(0)
    return max(r.evalf(_DIGITS) for r in roots)


_NAMED = (
    ("the golden ratio (1+sqrt(5))/2", sp.Rational(1, 2) + sp.sqrt(5) / 2),
    ("the square of the golden ratio (3+sqrt(5))/2", sp.Rational(3, 2) + sp.sqrt(5) / 2),
    ("the plastic ratio, the real root of x^3-x-1",
     sp.real_roots(sp.Poly([1, 0, -1, -1], sp.Symbol("x")))[0]),
    ("the silver ratio 1+sqrt(2)", 1 + sp.sqrt(2)),
)


def identify_constant(value):
    """Name for a well-known growth constant, or None.

    ``value`` is a sympy Float; matching is at 1e-12 which is far tighter
    than any accidental collision among the named constants.
    """
    if value is None:
        return None
    if abs(value - 1) < sp.Float("1e-12"):
        return "1 (zero algebraic entropy)"
    for name, const in _NAMED:
        if abs(value - const.evalf(_DIGITS)) < sp.Float("1e-12"):
            return name
    return None
