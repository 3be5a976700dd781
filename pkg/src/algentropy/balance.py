"""Degree balance: turning singularity patterns into degree sequences.

For a traced value w, every preimage of w under the n-th iterate lies
on some singularity pattern, so counting pattern occurrences with
multiplicity gives a census that must equal the degree d_n.  Each
traced value contributes one equation per index n; the unknowns are the
per-index values of the spontaneous pattern sequences together with d_n
itself, and the system is solved forward index by index over the
rationals.  Overdetermined rows act as consistency checks, as does an
optional externally supplied degree sequence: any contradiction raises
InconsistentBalanceError rather than producing a silently wrong answer.

The express route skips the exact solve: treating every unknown
sequence as a single geometric sequence lambda^n and dropping the
bounded source terms turns a pair of censuses into a polynomial
equation for lambda, the characteristic polynomial of the mapping.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from fractions import Fraction
from math import inf

import sympy as sp

from . import patterns as pt
from .errors import (DegenerateSequenceError, EmptyCensusError,
                     InconsistentBalanceError, UnsupportedTailError)
from .roots import LAMBDA, identify_constant, largest_real_root, recurrence_rate

# ---------------------------------------------------------------------------
# Census terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusTerm:
    """mult * X_{n-lag} for the sequence labelled seq."""

    seq: str
    lag: int
    mult: int


@dataclass(frozen=True)
class TailLagTerm:
    """mult * sum_k X_{n-start-k*period}: one lag per repetition of an
    unconfined periodic pattern."""

    seq: str
    start: int
    period: int
    mult: int


@dataclass(frozen=True)
class DeltaSource:
    """mult at the single index n == position; a fixed point of the
    pattern lattice, from anticonfined middles and inverse windows."""

    position: int
    mult: int


@dataclass(frozen=True)
class ResidueSource:
    """mult whenever n % period == residue; from cyclic patterns."""

    period: int
    residue: int
    mult: int


@dataclass
class RecurrenceSource:
    """Order of an anticonfined tail entry at index n.

    Orders observed from `start` onward, continued by the fitted linear
    recurrence; zero before the tail starts.
    """

    start: int
    orders: tuple
    rec: tuple

    def value(self, n):
        if n < self.start:
            return 0
        need = n - self.start + 1
        ext = pt.extend_orders(list(self.orders), self.rec, max(need, len(self.orders)))
        return ext[n - self.start]

    def rate(self):
        if len(self.rec) == 0:
            return sp.Float(0)
        return recurrence_rate(self.rec)


@dataclass
class Census:
    """All pattern occurrences of one traced value."""

    value: object
    label: str
    terms: list = dfield(default_factory=list)
    deltas: list = dfield(default_factory=list)
    residues: list = dfield(default_factory=list)
    recurrences: list = dfield(default_factory=list)
    valid_upto: float = inf   # horizon past which occurrences may be missing

    def is_clean(self):
        """Usable for the express route: no open-ended tail orders."""
        return not self.recurrences


def value_label(w):
    return "inf" if w is pt.INFINITY else str(w)


def _mult(entry):
    order = entry.order if entry.order is not None else 1
    return max(int(order), 1)


# ---------------------------------------------------------------------------
# Building censuses from an analysis
# ---------------------------------------------------------------------------


def build_censuses(analysis):
    """One census per traced value, from every pattern of the analysis."""
    censuses = [Census(value=p.seed, label=value_label(p.seed))
                for p in analysis.patterns]
    # the horizon of any aperiodic pattern caps every census: an
    # occurrence past the scanned prefix could match any value
    horizon = inf
    for p in analysis.patterns:
        if p.kind == "unconfined_aperiodic":
            horizon = min(horizon, len(p.entries))
        if p.kind == "inverse" and p.prefix_only:
            horizon = min(horizon, len(p.trace.forward))
    for census in censuses:
        census.valid_upto = horizon
        for p in analysis.patterns:
            _collect(census, p)
        if not (census.terms or census.deltas or census.residues
                or census.recurrences):
            raise EmptyCensusError(
                f"traced value {census.label} has no pattern occurrences")
    return censuses


def _collect(census, p):
    w = census.value
    if p.kind == "confined" or p.kind == "unconfined_aperiodic":
        for e in p.entries:
            if e.matches(w):
                census.terms.append(CensusTerm(p.label, e.position - 1, _mult(e)))
    elif p.kind == "unconfined_periodic":
        for e in p.entries:
            if e.matches(w):
                census.terms.append(
                    TailLagTerm(p.label, e.position - 1, p.period, _mult(e)))
    elif p.kind == "cyclic":
        for e in p.entries:
            if e.matches(w):
                census.residues.append(
                    ResidueSource(p.period, e.position % p.period, _mult(e)))
    elif p.kind == "inverse":
        for e in p.entries:
            if e.position >= 1 and e.matches(w):
                census.deltas.append(DeltaSource(e.position, _mult(e)))
    elif p.kind == "anticonfined":
        for e in p.middle:
            if e.position >= 1 and e.matches(w):
                census.deltas.append(DeltaSource(e.position, _mult(e)))
        tail = p.fwd_tail
        if tail.kind == "mixed":
            if w is pt.INFINITY or (w is not pt.INFINITY and not w):
                raise UnsupportedTailError(
                    "anticonfined tail mixes zeros and poles")
        elif (tail.kind == "infinity" and w is pt.INFINITY) or (
                tail.kind == "zero" and w is not pt.INFINITY and not w):
            census.recurrences.append(RecurrenceSource(
                tail.start, tuple(e.order for e in tail.entries), tail.rec))


# ---------------------------------------------------------------------------
# Exact forward solve
# ---------------------------------------------------------------------------


@dataclass
class BalanceResult:
    labels: list            # spontaneous sequence labels, in order
    sequences: dict         # label -> [X_1, ..., X_N]
    degrees: list           # [d_1, ..., d_N]
    censuses: list
    n_max: int

    def degree(self, n):
        if n <= 0:
            return 0 if n < 1 else self.degrees[0]
        return self.degrees[n - 1]


def _seq_at(sequences, label, m):
    if m <= 0:
        return 0
    return sequences[label][m - 1]


def _census_row(census, n, labels, sequences):
    """Unknown coefficients and known constant of one census at index n.

    Unknowns are ordered labels + [d_n]; the row expresses
    coeffs . unknowns = -const with the census sum moved left.
    """
    coeffs = {label: Fraction(0) for label in labels}
    const = Fraction(0)
    for t in census.terms:
        if isinstance(t, CensusTerm):
            m = n - t.lag
            if m == n:
                coeffs[t.seq] += t.mult
            elif m >= 1:
                const += t.mult * _seq_at(sequences, t.seq, m)
        else:
            m = n - t.start
            while m >= 1:
                if m == n:
                    coeffs[t.seq] += t.mult
                else:
                    const += t.mult * _seq_at(sequences, t.seq, m)
                m -= t.period
    for d in census.deltas:
        if n == d.position:
            const += d.mult
    for r in census.residues:
        if n % r.period == r.residue:
            const += r.mult
    for r in census.recurrences:
        const += r.value(n)
    return [coeffs[label] for label in labels] + [Fraction(-1)], -const


def _solve_exact(rows, rhs):
    """Gaussian elimination over Fractions.

    Returns the unique solution or raises: InconsistentBalanceError on a
    contradictory row, UnsupportedTailError when underdetermined.
    """
    m = len(rows)
    k = len(rows[0]) if rows else 0
    a = [list(row) + [r] for row, r in zip(rows, rhs)]
    pivots = []
    row_i = 0
    for col in range(k):
        piv = next((i for i in range(row_i, m) if a[i][col]), None)
        if piv is None:
            continue
        a[row_i], a[piv] = a[piv], a[row_i]
        lead = a[row_i][col]
        a[row_i] = [x / lead for x in a[row_i]]
        for i in range(m):
            if i != row_i and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row_i])]
        pivots.append(col)
        row_i += 1
        if row_i == m:
            break
    for i in range(row_i, m):
        if a[i][k]:
            raise InconsistentBalanceError(
                "census equations contradict each other")
    if len(pivots) < k:
        raise UnsupportedTailError(
            "census equations leave the balance underdetermined")
    sol = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        sol[col] = a[r][k]
    return sol


def solve_balance(analysis, n_max, censuses=None, expected=None):
    """Solve the balance forward to index n_max.

    ``expected`` is an optional externally computed degree list
    (d_1, d_2, ...); any disagreement with the solved degrees raises
    InconsistentBalanceError.
    """
    censuses = censuses if censuses is not None else build_censuses(analysis)
    labels = [p.label for p in analysis.spontaneous_patterns()]
    if not labels:
        raise DegenerateSequenceError("no spontaneous singularity patterns")
    sequences = {label: [] for label in labels}
    degrees = []
    for n in range(1, n_max + 1):
        live = [c for c in censuses if n <= c.valid_upto]
        if len(live) < len(labels) + 1:
            raise UnsupportedTailError(
                f"only {len(live)} census equations reach index {n}; "
                f"{len(labels) + 1} unknowns")
        rows, rhs = [], []
        for c in live:
            row, r = _census_row(c, n, labels, sequences)
            rows.append(row)
            rhs.append(r)
        sol = _solve_exact(rows, rhs)
        for v in sol:
            if v.denominator != 1 or v < 0:
                raise InconsistentBalanceError(
                    f"balance at index {n} has no nonnegative integer "
                    f"solution: {sol}")
        for label, v in zip(labels, sol):
            sequences[label].append(int(v))
        degrees.append(int(sol[-1]))
    if expected is not None:
        for i, (got, want) in enumerate(zip(degrees, expected), start=1):
            if got != want:
                raise InconsistentBalanceError(
                    f"balanced degree d_{i} = {got} disagrees with the "
                    f"supplied value {want}")
    return BalanceResult(labels=labels, sequences=sequences, degrees=degrees,
                         censuses=censuses, n_max=n_max)


# ---------------------------------------------------------------------------
# Express route
# ---------------------------------------------------------------------------


def _express_expr(census):
    """Census as a rational expression in lambda, for X_n = lambda^n.

    Bounded sources (deltas, residues) vanish against the exponential
    and are dropped.
    """
    expr = sp.Integer(0)
    for t in census.terms:
        if isinstance(t, CensusTerm):
            expr += t.mult * LAMBDA ** (-t.lag)
        else:
            expr += t.mult * LAMBDA ** (-t.start) / (1 - LAMBDA ** (-t.period))
    return expr


def express_char_poly(censuses):
    """Characteristic polynomial from the first informative census pair.

    Returns (poly, (label_a, label_b)) or (None, None) when every clean
    pair is degenerate.
    """
    clean = [c for c in censuses if c.is_clean()]
    for i in range(len(clean)):
        for j in range(i + 1, len(clean)):
            diff = sp.cancel(sp.together(
                _express_expr(clean[i]) - _express_expr(clean[j])))
            num, _ = sp.fraction(diff)
            poly = sp.Poly(sp.expand(num), LAMBDA)
            if poly.is_zero:
                continue
            # strip spurious lambda^k and normalize the sign and content
            while not poly.nth(0):
                poly = sp.Poly(poly.all_coeffs()[:-1], LAMBDA)
            _, poly = sp.Poly(poly, LAMBDA).primitive()
            if poly.LC() < 0:
                poly = -poly
            if poly.degree() < 1:
                continue
            return poly, (clean[i].label, clean[j].label)
    return None, None


# ---------------------------------------------------------------------------
# Dynamical degree
# ---------------------------------------------------------------------------


@dataclass
class DegreeEstimate:
    value: float
    char_poly: object       # sympy Poly or None
    census_pair: tuple
    note: str


def dynamical_degree(analysis, censuses=None):
    """Dynamical degree from the express route and the tail growth rates."""
    censuses = censuses if censuses is not None else build_censuses(analysis)
    poly, pair = express_char_poly(censuses)
    best = sp.Float(1)
    if poly is not None:
        root = largest_real_root(poly)
        if root is not None and root > best:
            best = root
    for c in censuses:
        for r in c.recurrences:
            rate = r.rate()
            if rate > best:
                best = rate
    note = identify_constant(best)
    return DegreeEstimate(value=float(best), char_poly=poly,
                          census_pair=pair, note=note)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


@dataclass
class ClosedForm:
    """sum over j of plain[j]*n^j + signed[j]*(-1)^n*n^j."""

    plain: tuple
    signed: tuple

    def evaluate(self, n):
        out = Fraction(0)
        sign = -1 if n % 2 else 1
        for j, c in enumerate(self.plain):
            out += c * n ** j
        for j, c in enumerate(self.signed):
            out += sign * c * n ** j
        return out

    def render(self):
        parts = []
        for coeffs, stem in ((self.plain, ""), (self.signed, "(-1)^n")):
            for j, c in enumerate(coeffs):
                if not c:
                    continue
                power = "" if j == 0 else ("n" if j == 1 else f"n^{j}")
                body = "*".join(x for x in (stem, power) if x) or "1"
                if c == 1 and body != "1":
                    parts.append(body)
                elif c == -1 and body != "1":
                    parts.append(f"-{body}")
                elif body == "1":
                    parts.append(str(c))
                else:
                    parts.append(f"{c}*{body}")
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text


def fit_closed_form(values, start=1, max_degree=3):
    """Exact quasi-polynomial fit c(n) + (-1)^n s(n) on values at
    n = start, start+1, ...; verified on every supplied point.

    Returns a ClosedForm or None.
    """
    pts = [(start + i, Fraction(v)) for i, v in enumerate(values)]
    for degree in range(0, max_degree + 1):
        k = 2 * (degree + 1)
        if len(pts) < k + 1:
            break
        rows = []
        rhs = []
        for n, v in pts[:k]:
            sign = -1 if n % 2 else 1
            rows.append([Fraction(n) ** j for j in range(degree + 1)]
                        + [sign * Fraction(n) ** j for j in range(degree + 1)])
            rhs.append(v)
        try:
            sol = _solve_exact(rows, rhs)
        except (InconsistentBalanceError, UnsupportedTailError):
            continue
        form = ClosedForm(plain=tuple(sol[: degree + 1]),
                          signed=tuple(sol[degree + 1:]))
        if all(form.evaluate(n) == v for n, v in pts):
            return form
    return None
