"""Singularity structure of a mapping.

The tracer perturbs a candidate value w as x_1 = w + eps (or 1/eps for
w at infinity) with a generic x_0 = u, iterates the mapping forward and
backward as Laurent series in eps with a symbolic index n, and reads
off one entry per position: generic (the leading coefficient still
involves u), a finite non-generic value with an approach order, or a
zero/pole of some order.  The entry sequence is then classified as one
of

    confined              finite body, generic on both sides
    cyclic                periodic orbit mixing generic and singular
    unconfined_periodic   periodic, no generic entries
    unconfined_aperiodic  spontaneous, never returns to generic
    anticonfined          singular tails on both sides, orders
                          following a linear recurrence
    inverse               not spontaneous: the continuation of a
                          pattern of the backward mapping

Candidate values are those where the update loses its x0 dependence,
the same for the inverse, and the value at infinity.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dfield
from fractions import Fraction

from . import mapping as mp
from .algebra import (CoefficientField, FieldDomain, UniPoly,
                      factor_roots_in_field, poly_gcd)
from .errors import (DivisionByZeroError, InsufficientDepthSignal,
                     MappingValidationError, UnresolvedPatternError)
from .expr import eval_ast
from .series import SeriesContext


class AtInfinity:
    """Sentinel for the value at infinity (one shared instance)."""

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, AtInfinity)

    def __hash__(self):
        return hash(AtInfinity)


INFINITY = AtInfinity()


# ---------------------------------------------------------------------------
# Entries
# ---------------------------------------------------------------------------

@dataclass
class Entry:
    position: int
    kind: str               # "generic" | "finite" | "infinity"
    order: object = None    # int, or None when the entry is exactly constant
    value: object = None    # field element when finite, else None

    def is_generic(self):
        return self.kind == "generic"

    def is_polar(self):
        """Zero or pole; the entry kinds that can form anticonfined tails."""
        return self.kind == "infinity" or (self.kind == "finite" and not self.value)

    def matches(self, w):
        if self.kind == "infinity":
            return w is INFINITY
        if self.kind == "finite":
            return w is not INFINITY and self.value == w
        return False

    def render(self):
        if self.kind == "generic":
            return "x"
        if self.kind == "infinity":
            body = "inf"
        else:
            body = str(self.value)
            if "/" in body or " " in body:
                body = f"({body})"
        if self.order not in (None, 1):
            body += f"^{self.order}"
        return body


def abstract_equal(a: Entry, b: Entry):
    if a.kind != b.kind:
        return False
    if a.kind == "generic":
        return True
    if a.order != b.order:
        return False
    if a.kind == "finite":
        return a.value == b.value
    return True


def entry_from_series(ctx: CoefficientField, s, position):
    v = s.valuation()
    if v < 0:
        return Entry(position, "infinity", -v)
    lead = s.coeff(v)
    if v > 0:
        return Entry(position, "finite", v, ctx.zero)
    if ctx.depends_on(lead, "u"):
        return Entry(position, "generic")
    # non-generic finite limit; the order is how fast it is approached
    diff = s - s.ctx.const(lead)
    try:
        order = diff.valuation()
    except DivisionByZeroError:
        order = None
    return Entry(position, "finite", order, lead)


# ---------------------------------------------------------------------------
# Candidate singular values
# ---------------------------------------------------------------------------

def _coeff_vectors(ctx, element, var):
    """Split numer/denom of a field element into coefficient vectors of var."""
    idx = ctx.symbols.index(var)
    ring = ctx.field.ring
    vectors = []
    for poly in (element.numer, element.denom):
        d = poly.degree(ring.gens[idx])
        d = max(d, 0)
        parts = [ring.zero] * (d + 1)
        for monom, coeff in poly.terms():
            e = monom[idx]
            reduced = tuple(m if i != idx else 0 for i, m in enumerate(monom))
            parts[e] = parts[e] + ring.term_new(reduced, coeff)
        vectors.append(parts)
    return vectors


def _cross_minors(ctx, expr_ast, incoming, pivot):
    """2x2 minors of the (P-coeffs, Q-coeffs) matrix w.r.t. the incoming
    variable, as polynomials in the pivot variable.

    The mapping degenerates (loses its dependence on the incoming
    variable) exactly where all minors vanish simultaneously.
    """
    env = {name: ctx.gen(name) for name in ctx.symbols}
    env["__const__"] = ctx.const
    value = eval_ast(expr_ast, env)
    p_vec, q_vec = _coeff_vectors(ctx, value, incoming)
    n = max(len(p_vec), len(q_vec))
    ring = ctx.field.ring
    p_vec += [ring.zero] * (n - len(p_vec))
    q_vec += [ring.zero] * (n - len(q_vec))
    minors = []
    for i in range(n):
        for j in range(n):
            if i != j:
                minors.append(p_vec[i] * q_vec[j] - p_vec[j] * q_vec[i])
    minors = [m for m in minors if m]
    if not minors:
        raise MappingValidationError(
            "expression does not actually depend on its incoming variable")
    # finite candidates: roots of the gcd of the minors as polynomials in
    # the pivot variable
    pividx = ctx.symbols.index(pivot)
    pivgen = ring.gens[pividx]
    dom = FieldDomain(ctx)

    def to_unipoly(poly):
        d = max(poly.degree(pivgen), 0)
        parts = [ring.zero] * (d + 1)
        for monom, coeff in poly.terms():
            e = monom[pividx]
            reduced = tuple(m if k != pividx else 0 for k, m in enumerate(monom))
            parts[e] = parts[e] + ring.term_new(reduced, coeff)
        return UniPoly(dom, [ctx.normalize(p, ring.one) for p in parts])

    unis = [to_unipoly(m) for m in minors]
    g = unis[0]
    for upoly in unis[1:]:
        g = poly_gcd(g, upoly)
        if g.degree == 0:
            break
    roots, unsolved = ([], []) if g.degree < 1 else factor_roots_in_field(ctx, g)
    # candidate at infinity: all minors of the top-degree coefficient
    # vectors vanish
    dmax = max(max(p.degree(pivgen) for p in p_vec + q_vec if p), 0)

    def top(poly):
        if not poly or poly.degree(pivgen) < dmax:
            return ring.zero
        out = ring.zero
        for monom, coeff in poly.terms():
            if monom[pividx] == dmax:
                reduced = tuple(m if k != pividx else 0 for k, m in enumerate(monom))
                out = out + ring.term_new(reduced, coeff)
        return out

    pt = [top(p) for p in p_vec]
    qt = [top(q) for q in q_vec]
    inf_singular = True
    for i in range(n):
        for j in range(n):
            if i != j and pt[i] * qt[j] - pt[j] * qt[i]:
                inf_singular = False
    return roots, inf_singular, unsolved


def find_singular_values(spec, ctx=None):
    """Values of x1 where the update loses its x0 dependence.

    Returns (values, infinity_is_singular, unsolved_factor_degrees); the
    values are elements of the trace coefficient field.
    """
    ctx = ctx or trace_field(spec)
    work = CoefficientField(tuple(spec.params) + ("n", "u", "x0", "x1"))
    roots, inf_sing, unsolved = _cross_minors(work, spec.update, "x0", "x1")
    values = [_convert(ctx, r) for r in roots]
    return _dedupe(values), inf_sing, unsolved


def candidate_values(spec, ctx=None):
    """Seeds worth tracing: forward and backward singular values plus
    infinity."""
    ctx = ctx or trace_field(spec)
    values, _, unsolved = find_singular_values(spec, ctx)
    spec = mp.ensure_inverse(spec)
    work = CoefficientField(tuple(spec.params) + ("n", "u", "x1", "x2"))
    back_roots, _, back_unsolved = _cross_minors(work, spec.inverse, "x2", "x1")
    values = _dedupe(values + [_convert(ctx, r) for r in back_roots])
    return values + [INFINITY], unsolved + back_unsolved


def trace_field(spec):
    return CoefficientField(tuple(spec.params) + ("n", "u"))


def _convert(ctx, element):
    return ctx.from_string(str(element))


def _dedupe(values):
    out = []
    for v in values:
        if not any(v == w for w in out):
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# Tracing
# ---------------------------------------------------------------------------

@dataclass
class TraceLimits:
    max_forward: int = 20
    max_backward: int = 12
    exit_guard: int = 2
    back_guard: int = 2
    min_tail: int = 4
    min_forward: int = 10
    side_budget: float = 15.0    # seconds per trace direction
    depths: tuple = (8, 16, 32, 64, 128)


@dataclass
class SeedTrace:
    seed: object
    forward: list        # entries at positions 1..len
    backward: list       # entries at positions -1..-len


def _run_trace(spec, w, ctx, depth, limits):
    sc = SeriesContext(ctx, depth)
    base_env = {p: sc.const(ctx.gen(p)) for p in spec.params}
    base_env["__const__"] = sc.const
    ngen = ctx.gen("n")
    pos = {0: sc.const(ctx.gen("u"))}
    pos[1] = sc.seed_near_infinity() if w is INFINITY else sc.seed_near(w)
    fwd = [entry_from_series(ctx, pos[1], 1)]
    started = time.monotonic()
    i = 1
    while i < limits.max_forward:
        nval = sc.const(ngen + (i - 1))
        pos[i + 1] = mp.step(spec, pos[i - 1], pos[i], nval, base_env)
        fwd.append(entry_from_series(ctx, pos[i + 1], i + 1))
        i += 1
        if _forward_done(fwd, limits, time.monotonic() - started):
            break
    bwd = []
    started = time.monotonic()
    j = 0
    while j > -limits.max_backward:
        nval = sc.const(ngen + (j - 1))
        pos[j - 1] = mp.back_step(spec, pos[j], pos[j + 1], nval, base_env)
        bwd.append(entry_from_series(ctx, pos[j - 1], j - 1))
        j -= 1
        if _backward_done(bwd, limits, time.monotonic() - started):
            break
    return SeedTrace(seed=w, forward=fwd, backward=bwd)


def _forward_done(fwd, limits, elapsed=0.0):
    g = limits.exit_guard
    if len(fwd) >= g and all(e.is_generic() for e in fwd[-g:]):
        return True
    # a period already confirmed three times over will not change
    p = _find_period(fwd)
    if p and len(fwd) >= 3 * p + 2:
        return True
    # growing singular tail whose orders already follow a verified
    # recurrence: no need to push the horizon further
    if len(fwd) >= 12:
        tail = _polar_suffix(fwd)
        if len(tail) >= 6 and fit_recurrence([e.order for e in tail]):
            return True
    # coefficient growth can make deep horizons unaffordable; keep
    # whatever prefix the budget allowed
    if elapsed > limits.side_budget and len(fwd) >= limits.min_forward:
        return True
    return False


def _backward_done(bwd, limits, elapsed=0.0):
    g = limits.back_guard
    if len(bwd) >= g and all(e.is_generic() for e in bwd[-g:]):
        return True
    p = _find_period(bwd)
    if p and len(bwd) >= 3 * p + 2:
        return True
    if len(bwd) >= 8:
        tail = _polar_suffix(bwd)
        if len(tail) >= 6 and fit_recurrence([e.order for e in tail]):
            return True
    if elapsed > limits.side_budget and len(bwd) >= 6:
        return True
    return False


def _polar_suffix(entries):
    out = []
    for e in reversed(entries):
        if e.is_polar() and e.order is not None:
            out.append(e)
        else:
            break
    return list(reversed(out))


# ---------------------------------------------------------------------------
# Order recurrences for anticonfined tails
# ---------------------------------------------------------------------------

def fit_recurrence(orders, max_len=2):
    """Fit o_m = a*o_{m-1} (+ b*o_{m-2}) on an integer sequence.

    Requires at least length + 3 points so the fit is verified on a
    holdout; returns the coefficient tuple or None.
    """
    vals = [Fraction(o) for o in orders]
    for length in range(1, max_len + 1):
        if len(vals) < length + 3:
            continue
        coeffs = _solve_rec(vals, length)
        if coeffs is None:
            continue
        ok = all(
            sum(c * vals[m - 1 - k] for k, c in enumerate(coeffs)) == vals[m]
            for m in range(length, len(vals))
        )
        if ok:
            return tuple(coeffs)
    return None


def _solve_rec(vals, length):
    if length == 1:
        if not vals[0]:
            return None
        return [vals[1] / vals[0]]
    det = vals[1] * vals[1] - vals[2] * vals[0]
    if not det:
        return None
    a = (vals[2] * vals[1] - vals[3] * vals[0]) / det
    b = (vals[1] * vals[3] - vals[2] * vals[2]) / det
    return [a, b]


def extend_orders(orders, rec, upto):
    """Orders continued by the recurrence out to `upto` terms."""
    vals = [Fraction(o) for o in orders]
    while len(vals) < upto:
        vals.append(sum(c * vals[-1 - k] for k, c in enumerate(rec)))
    out = []
    for v in vals[:upto]:
        if v.denominator != 1:
            raise UnresolvedPatternError("tail order recurrence left the integers")
        out.append(int(v))
    return out


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass
class Tail:
    start: int           # absolute position of the first tail entry
    direction: int       # +1 forward, -1 backward
    entries: list
    rec: tuple
    kind: str            # "zero" | "infinity" | "mixed"

    def orders(self):
        return [e.order for e in self.entries]


@dataclass
class SingularityPattern:
    kind: str
    seed: object
    spontaneous: bool
    entries: list = dfield(default_factory=list)
    period: int = None
    middle: list = dfield(default_factory=list)
    fwd_tail: Tail = None
    bwd_tail: Tail = None
    prefix_only: bool = False
    label: str = None
    trace: object = None

    def render(self):
        if self.kind == "anticonfined":
            left = [e.render() for e in (self.bwd_tail.entries if self.bwd_tail else [])]
            mid = [e.render() for e in self.middle]
            right = [e.render() for e in (self.fwd_tail.entries if self.fwd_tail else [])]
            return "{..., " + ", ".join(list(reversed(left)) + mid + right) + ", ...}"
        body = ", ".join(e.render() for e in self.entries)
        if self.kind in ("unconfined_periodic", "cyclic"):
            return "{" + body + "} (repeating)"
        if self.kind == "unconfined_aperiodic" or self.prefix_only:
            return "{" + body + ", ...}"
        return "{" + body + "}"


def _find_period(entries, min_repeats=2, extra=1):
    n = len(entries)
    for p in range(1, n // min_repeats + 1):
        if n < min_repeats * p + extra:
            break
        if all(abstract_equal(entries[i], entries[i + p]) for i in range(n - p)):
            return p
    return None


def classify_trace(trace, limits):
    fwd, bwd = trace.forward, trace.backward
    spontaneous = bool(bwd) and bwd[0].is_generic()

    # confined: a finite non-generic body followed by a guarded run of
    # generic entries, entered spontaneously
    exit_at = None
    for idx, e in enumerate(fwd):
        if e.is_generic():
            exit_at = idx
            break
    if exit_at is not None and exit_at >= 1:
        after = fwd[exit_at:]
        guard_ok = all(e.is_generic() for e in after) and (
            len(after) >= limits.exit_guard or exit_at + len(after) >= limits.max_forward)
        if guard_ok and spontaneous:
            return SingularityPattern(
                kind="confined", seed=trace.seed, spontaneous=True,
                entries=fwd[:exit_at])

    # cyclic: the two-sided sequence repeats with a period mixing generic
    # and singular entries
    e0 = Entry(0, "generic")
    seq = [e0] + fwd
    p = _find_period(seq)
    if p and p >= 2:
        window = seq[:p]
        kinds = {e.kind for e in window}
        if "generic" in kinds and kinds != {"generic"}:
            back_ok = all(
                abstract_equal(bwd[j], seq[(-(j + 1)) % p]) for j in range(len(bwd)))
            if back_ok:
                return SingularityPattern(
                    kind="cyclic", seed=trace.seed, spontaneous=False,
                    entries=window, period=p)

    # unconfined periodic: forward entries repeat with no generic entry
    p = _find_period(fwd)
    if p and all(not e.is_generic() for e in fwd[:p]) and spontaneous:
        return SingularityPattern(
            kind="unconfined_periodic", seed=trace.seed, spontaneous=True,
            entries=fwd[:p], period=p)

    # anticonfined: singular tails with recurrent orders on both sides
    ftail = _polar_suffix(fwd)
    btail = _polar_suffix(bwd)
    if len(ftail) >= limits.min_tail and len(btail) >= 2:
        frec = fit_recurrence([e.order for e in ftail])
        brec = fit_recurrence([e.order for e in btail]) if len(btail) >= 4 else ()
        if frec is not None and brec is not None:
            fstart = ftail[0].position
            bstart = btail[0].position
            middle = [e for e in list(reversed(bwd)) + [e0] + fwd
                      if bstart < e.position < fstart]
            return SingularityPattern(
                kind="anticonfined", seed=trace.seed, spontaneous=False,
                middle=middle,
                fwd_tail=Tail(fstart, +1, ftail, frec, _tail_kind(ftail)),
                bwd_tail=Tail(bstart, -1, btail, brec or (), _tail_kind(btail)))

    if spontaneous and all(not e.is_generic() for e in fwd):
        return SingularityPattern(
            kind="unconfined_aperiodic", seed=trace.seed, spontaneous=True,
            entries=list(fwd), prefix_only=True)

    if not spontaneous:
        # continuation of a backward-mapping pattern: keep the finite
        # forward window for its census contributions
        last = max((i for i, e in enumerate(fwd) if not e.is_generic()), default=-1)
        window = fwd[:last + 1]
        bounded = all(e.is_generic() for e in fwd[last + 1:]) and \
            len(fwd) - (last + 1) >= limits.exit_guard
        return SingularityPattern(
            kind="inverse", seed=trace.seed, spontaneous=False,
            entries=window, prefix_only=not bounded)

    raise UnresolvedPatternError(
        f"trace from {trace.seed!r} fits no pattern class",
        prefix=[e.render() for e in fwd])


def _tail_kind(entries):
    kinds = {"infinity" if e.kind == "infinity" else "zero" for e in entries}
    return kinds.pop() if len(kinds) == 1 else "mixed"


def analyze_seed(spec, w, ctx, limits=None):
    limits = limits or TraceLimits()
    last = None
    for depth in limits.depths:
        try:
            trace = _run_trace(spec, w, ctx, depth, limits)
            pattern = classify_trace(trace, limits)
            pattern.trace = trace
            return pattern
        except InsufficientDepthSignal as sig:
            last = sig
            continue
    raise UnresolvedPatternError(
        f"trace from {w!r} still truncation-limited at depth {limits.depths[-1]}"
    ) from last


@dataclass
class SingularityAnalysis:
    spec: object
    ctx: object
    patterns: list
    unsolved_factors: list

    def spontaneous_patterns(self):
        return [p for p in self.patterns
                if p.kind in ("confined", "unconfined_periodic", "unconfined_aperiodic")]


def analyze(spec, limits=None, extra_seeds=()):
    """Trace and classify every candidate value of the mapping.

    Anticonfined patterns can cross finite values that are not singular
    for either map direction; each simple crossing is a further seed
    alignment of the same doubly infinite pattern and is traced too, so
    the census sees every alignment.  ``extra_seeds`` adds user-chosen
    values (field-expression strings, or "inf") to the trace list.
    """
    spec = mp.ensure_inverse(spec)
    ctx = trace_field(spec)
    values, unsolved = candidate_values(spec, ctx)
    for seed in extra_seeds:
        w = INFINITY if seed == "inf" else ctx.from_string(seed)
        if not any((w is INFINITY and v is INFINITY) or
                   (w is not INFINITY and v is not INFINITY and v == w)
                   for v in values):
            values.append(w)
    traced = list(values)
    queue = list(values)
    patterns = []
    while queue:
        w = queue.pop(0)
        pattern = analyze_seed(spec, w, ctx, limits)
        patterns.append(pattern)
        if pattern.kind == "anticonfined":
            for e in pattern.middle:
                if e.kind == "finite" and e.order == 1 and not any(
                        t is not INFINITY and e.value == t for t in traced):
                    traced.append(e.value)
                    queue.append(e.value)
    _assign_labels(patterns)
    return SingularityAnalysis(spec=spec, ctx=ctx, patterns=patterns,
                               unsolved_factors=unsolved)


def _assign_labels(patterns):
    counts = {}
    named = []
    for p in patterns:
        if p.kind == "confined":
            letter = "Z"
        elif p.kind.startswith("unconfined"):
            letter = "U"
        else:
            continue
        counts[letter] = counts.get(letter, 0) + 1
        named.append((p, letter))
    seen = {}
    for p, letter in named:
        if counts[letter] == 1:
            p.label = letter
        else:
            seen[letter] = seen.get(letter, 0) + 1
            p.label = f"{letter}{seen[letter]}"
