"""Truncated Laurent series for singularity tracing.

A series is c_v eps^v + c_{v+1} eps^{v+1} + ... + O(eps^prec) with
coefficients in a CoefficientField.  Exactness is tracked through the
absolute precision ``prec``: the coefficient of eps^k is known for all
k < prec.  An empty coefficient list means the series is O(eps^prec)
with nothing known below; prec = +inf with no coefficients is the exact
zero.  Relative precision is capped at the context depth, which the
tracer doubles and retries when an InsufficientDepthSignal escapes.

Precision bookkeeping: (a*b).prec = min(a.val + b.prec, b.val + a.prec)
and inverse(a).prec = a.prec - 2*a.val, so the number of known terms
past the leading one is conserved by multiplicative operations and can
only shrink through cancellation in additions.
"""

from __future__ import annotations

from fractions import Fraction
from math import inf

from .algebra import CoefficientField
from .errors import DivisionByZeroError, InsufficientDepthSignal


class SeriesContext:
    """Shared coefficient field plus the working relative depth."""

    def __init__(self, field: CoefficientField, depth: int = 8):
        self.field = field
        self.depth = depth

    def make(self, val, coeffs, prec):
        return LaurentSeries(self, val, coeffs, prec)

    def const(self, value):
        """Exact constant series from a field element, int or Fraction."""
        el = value if hasattr(value, "denom") else self.field.const(Fraction(value))
        if not el:
            return LaurentSeries(self, 0, [], inf)
        return LaurentSeries(self, 0, [el], inf)

    def zero(self):
        return LaurentSeries(self, 0, [], inf)

    def seed_near(self, value):
        """The seed w + eps used to probe a finite singular value w."""
        return LaurentSeries(self, 0, [value, self.field.one], inf)

    def seed_near_infinity(self):
        """The seed 1/eps used to probe the value infinity."""
        return LaurentSeries(self, -1, [self.field.one], inf)


class LaurentSeries:
    __slots__ = ("ctx", "val", "coeffs", "prec")

    def __init__(self, ctx, val, coeffs, prec):
        # strip leading zeros, drop terms at or past prec, cap the
        # relative depth
        coeffs = list(coeffs)
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            val += 1
        if coeffs:
            prec = min(prec, val + ctx.depth)
            keep = int(prec - val) if prec != inf else len(coeffs)
            coeffs = coeffs[:keep]
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            # interior zero coefficients are fine; only re-check the head
            while coeffs and not coeffs[0]:
                coeffs.pop(0)
                val += 1
        if not coeffs:
            val = 0
        self.ctx = ctx
        self.val = val
        self.coeffs = coeffs
        self.prec = prec

    # -- inspection ----------------------------------------------------

    def is_empty(self):
        return not self.coeffs

    def is_exact_zero(self):
        return not self.coeffs and self.prec == inf

    def valuation(self):
        """Order of the leading term; raises if truncation hides it."""
        if self.coeffs:
            return self.val
        if self.prec == inf:
            raise DivisionByZeroError("valuation of the zero series")
        raise InsufficientDepthSignal()

    def leading(self):
        self.valuation()
        return self.coeffs[0]

    def coeff(self, k):
        """Coefficient of eps**k; raises InsufficientDepthSignal past prec."""
        if k >= self.prec:
            raise InsufficientDepthSignal()
        if not self.coeffs or k < self.val or k >= self.val + len(self.coeffs):
            return self.ctx.field.zero
        return self.coeffs[k - self.val]

    def __repr__(self):
        if not self.coeffs:
            return f"O(eps^{self.prec})"
        terms = " + ".join(f"({c})*eps^{self.val + i}"
                           for i, c in enumerate(self.coeffs) if c)
        return f"{terms} + O(eps^{self.prec})"

    # -- ring operations -----------------------------------------------

    def _add_like(self, other, sign):
        ctx = self.ctx
        prec = min(self.prec, other.prec)
        if not self.coeffs and not other.coeffs:
            return LaurentSeries(ctx, 0, [], prec)
        starts = [s.val for s in (self, other) if s.coeffs]
        lo = min(starts)
        if prec == inf:
            hi = max(s.val + len(s.coeffs) for s in (self, other) if s.coeffs)
        else:
            hi = int(prec)
        zero = ctx.field.zero
        out = []
        for k in range(lo, hi):
            a = self.coeffs[k - self.val] if self.coeffs and self.val <= k < self.val + len(self.coeffs) else zero
            b = other.coeffs[k - other.val] if other.coeffs and other.val <= k < other.val + len(other.coeffs) else zero
            out.append(a + b if sign > 0 else a - b)
        return LaurentSeries(ctx, lo, out, prec)

    def __add__(self, other):
        return self._add_like(other, +1)

    def __sub__(self, other):
        return self._add_like(other, -1)

    def __neg__(self):
        return LaurentSeries(self.ctx, self.val, [-c for c in self.coeffs], self.prec)

    def __mul__(self, other):
        ctx = self.ctx
        if not self.coeffs or not other.coeffs:
            if self.coeffs:
                prec = self.val + other.prec
            elif other.coeffs:
                prec = other.val + self.prec
            else:
                prec = self.prec + other.prec
            return LaurentSeries(ctx, 0, [], prec)
        v = self.val + other.val
        prec = min(self.val + other.prec, other.val + self.prec)
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec != inf:
            n = min(n, int(prec) - v)
        zero = ctx.field.zero
        out = [zero] * n
        for i, a in enumerate(self.coeffs):
            if not a or i >= n:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j >= n:
                    break
                if b:
                    out[i + j] = out[i + j] + a * b
        return LaurentSeries(ctx, v, out, prec)

    def inverse(self):
        ctx = self.ctx
        if not self.coeffs:
            if self.prec == inf:
                raise DivisionByZeroError("inverse of the zero series")
            raise InsufficientDepthSignal()
        v = self.val
        # an exact finite Laurent polynomial inverts to any depth
        k = ctx.depth if self.prec == inf else min(int(self.prec - v), ctx.depth)
        k = max(k, 1)
        lead_inv = ctx.field.one / self.coeffs[0]
        zero = ctx.field.zero
        # b = inverse of (self / lead / eps^v) computed term by term
        b = [ctx.field.one]
        a = [self.coeffs[i] / self.coeffs[0] if i < len(self.coeffs) else zero
             for i in range(k)]
        for m in range(1, k):
            acc = zero
            for i in range(1, m + 1):
                ai = a[i] if i < len(a) else zero
                if ai:
                    acc = acc + ai * b[m - i]
            b.append(-acc)
        out = [c * lead_inv for c in b]
        prec = (self.prec - 2 * v) if self.prec != inf else (-v + k)
        return LaurentSeries(ctx, -v, out, prec)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e):
        base = self
        if e < 0:
            base = self.inverse()
            e = -e
        out = self.ctx.const(1)
        sq = base
        while e:
            if e & 1:
                out = out * sq
            sq = sq * sq
            e >>= 1
        return out
