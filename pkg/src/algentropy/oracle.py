"""Brute-force degree oracle, independent of the singularity machinery.

The oracle iterates the mapping on the initial data x_0 = u, x_1 = z
and records the degree in z of every iterate.  Two modes:

modp    parameters and u are specialized to random residues modulo a
        word-sized prime and the iteration runs over GF(p)(z).  A bad
        draw can only lower a degree (numerator/denominator leading
        terms or a gcd can collapse), so each index is decided by a
        majority vote over independent draws, re-drawing on ties.

exact   the iteration runs over QQ(z, u, params) with one gcd per step.
        Exact but expensive; a time budget raises ResourceCapExceeded
        carrying the partial sequence.

The sequences are what the balance layer is verified against; nothing
here knows about singularity patterns.
"""

from __future__ import annotations

import csv
import random
import time
from fractions import Fraction

import sympy as sp

from . import gfp
from .errors import (BadSpecializationError, DegenerateSequenceError,
                     DivisionByZeroError, ResourceCapExceeded,
                     UnstableSpecializationError)
from .expr import eval_ast
from .gfp import GFRat, PRIMES


# ---------------------------------------------------------------------------
# mod-p mode
# ---------------------------------------------------------------------------


def _run_modp(spec, n_max, p, assignment, reduce=True):
    """Degrees d_0..d_n_max for one specialization; raises
    BadSpecializationError when the draw hits a zero denominator."""
    env = {name: GFRat.const(p, value) for name, value in assignment.items()}
    env["__const__"] = lambda fr: GFRat.const(p, fr)
    x0 = GFRat.const(p, assignment["u"])
    x1 = GFRat.gen(p)
    degrees = [0, 1]
    try:
        for i in range(1, n_max):
            env["n"] = GFRat.const(p, i)
            x2 = eval_ast(spec.update, {**env, "x0": x0, "x1": x1})
            if reduce:
                x2 = x2.reduce()
            if x2.is_zero():
                raise BadSpecializationError(
                    "iterate collapsed to zero", assignment)
            degrees.append(x2.degree())
            x0, x1 = x1, x2
    except DivisionByZeroError as exc:
        raise BadSpecializationError(str(exc), assignment) from exc
    return degrees


def _draw(spec, rng, prime_pool):
    p = prime_pool[rng.randrange(len(prime_pool))]
    names = tuple(spec.params) + ("u",)
    assignment = {name: rng.randrange(2, p - 2) for name in names}
    return p, assignment


def degree_sequence_modp(spec, n_max, votes=3, max_draws=9, seed=0,
                         reduce=True, primes=PRIMES):
    """Majority-voted degree sequence d_0..d_n_max over GF(p)(z).

    Each index needs agreement of a strict majority of the draws;
    disagreement triggers extra draws up to max_draws, after which
    UnstableSpecializationError is raised.
    """
    rng = random.Random(seed)
    runs = []
    draws = 0
    while len(runs) < votes and draws < max_draws:
        draws += 1
        p, assignment = _draw(spec, rng, primes)
        try:
            runs.append(_run_modp(spec, n_max, p, assignment, reduce=reduce))
        except BadSpecializationError:
            continue
    if len(runs) < votes:
        raise UnstableSpecializationError(
            f"{draws} draws produced only {len(runs)} clean runs")
    out = []
    for n in range(n_max + 1):
        while True:
            counts = {}
            for r in runs:
                counts[r[n]] = counts.get(r[n], 0) + 1
            value, count = max(counts.items(), key=lambda kv: kv[1])
            if count * 2 > len(runs):
                out.append(value)
                break
            if draws >= max_draws:
                raise UnstableSpecializationError(
                    f"no degree majority at index {n}: {counts}")
            draws += 1
            p, assignment = _draw(spec, rng, primes)
            try:
                runs.append(_run_modp(spec, n_max, p, assignment, reduce=reduce))
            except BadSpecializationError:
                continue
    return out


# ---------------------------------------------------------------------------
# exact mode
# ---------------------------------------------------------------------------


class _Pair:
    """num/den of sympy ring polynomials; no cancellation on arithmetic."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring, num, den):
        self.ring = ring
        self.num = num
        self.den = den

    def __add__(self, other):
        return _Pair(self.ring, self.num * other.den + other.num * self.den,
                     self.den * other.den)

    def __sub__(self, other):
        return _Pair(self.ring, self.num * other.den - other.num * self.den,
                     self.den * other.den)

    def __mul__(self, other):
        return _Pair(self.ring, self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if not other.num:
            raise DivisionByZeroError("exact oracle divided by zero")
        return _Pair(self.ring, self.num * other.den, self.den * other.num)

    def __neg__(self):
        return _Pair(self.ring, -self.num, self.den)

    def __pow__(self, e):
        if e < 0:
            return _Pair(self.ring, self.den ** -e, self.num ** -e)
        return _Pair(self.ring, self.num ** e, self.den ** e)

    def cancel(self):
        g = self.num.gcd(self.den)
        num, den = self.num, self.den
        if not g.is_ground:
            num = num.quo(g)
            den = den.quo(g)
        return _Pair(self.ring, num, den)


def degree_sequence_exact(spec, n_max, budget=120.0):
    """Exact degree sequence d_0..d_n_max over QQ(z, u, params).

    Stops with ResourceCapExceeded (carrying the partial sequence) when
    the time budget runs out.
    """
    names = ("z", "u") + tuple(spec.params)
    ring, *gens = sp.ring(names, sp.QQ)
    zgen = gens[0]

    def const(fr):
        fr = Fraction(fr)
        return _Pair(ring, ring.ground_new(sp.QQ(fr.numerator, fr.denominator)),
                     ring.one)

    env = {name: _Pair(ring, g, ring.one) for name, g in zip(names, gens)}
    env["__const__"] = const
    x0, x1 = env["u"], env["z"]
    z_index = 0
    degrees = [0, 1]
    started = time.monotonic()
    for i in range(1, n_max):
        if time.monotonic() - started > budget:
            raise ResourceCapExceeded(
                f"exact oracle exceeded {budget:.0f}s at index {i + 1}",
                partial=degrees)
        env["n"] = const(i)
        x2 = eval_ast(spec.update, {**env, "x0": x0, "x1": x1}).cancel()
        if not x2.num:
            raise DegenerateSequenceError("exact iterate collapsed to zero")
        degrees.append(max(x2.num.degree(z_index), x2.den.degree(z_index)))
        x0, x1 = x1, x2
    return degrees


def degree_sequence(spec, n_max, mode="modp", **kw):
    if mode == "modp":
        return degree_sequence_modp(spec, n_max, **kw)
    if mode == "exact":
        return degree_sequence_exact(spec, n_max, **kw)
    raise ValueError(f"unknown oracle mode {mode!r}")


# ---------------------------------------------------------------------------
# growth estimation
# ---------------------------------------------------------------------------


def _annihilated(values, power):
    """True when (S^2 - 1)^power maps the sequence to zero.

    S is the shift; (S^2 - 1)^k kills any quasi-polynomial
    c(n) + (-1)^n s(n) with both parts of degree < k.
    """
    seq = list(values)
    for _ in range(power):
        seq = [b - a for a, b in zip(seq, seq[2:])]
    return bool(seq) and all(v == 0 for v in seq)


def estimate_lambda(degrees, poly_power=4):
    """Growth-rate estimate from a raw degree sequence.

    Polynomial-type growth (detected exactly through repeated second
    differences on the trailing window) gives 1.0; otherwise the last
    degree ratio, which converges geometrically to the dynamical degree.
    """
    tail = [d for d in degrees if d > 0]
    if len(tail) < 4:
        raise DegenerateSequenceError(
            f"need at least 4 positive degrees, got {len(tail)}")
    for power in range(1, poly_power + 1):
        window = tail[-(2 * power + 4):]
        if len(window) >= 2 * power + 2 and _annihilated(window, power):
            return 1.0
    return tail[-1] / tail[-2]


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def write_degrees_csv(path, degrees, truncated=False):
    """n,degree CSV; a trailing marker row records a resource-cap cut."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "degree"])
        for n, d in enumerate(degrees):
            writer.writerow([n, d])
        if truncated:
            writer.writerow(["truncated", "resource cap reached at "
                             f"n={len(degrees) - 1}"])


def read_degrees_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    return [int(d) for n, d in rows[1:] if n.isdigit()]
