"""Assembled analysis results and their canonical JSON form.

The JSON layout is versioned under the key "format" as
"algentropy-report/1"; dumps are canonical (sorted keys, no spaces) so
that equal reports serialize to identical bytes and re-serializing a
parsed report reproduces them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dfield
from math import inf

from . import balance as bl
from . import oracle as oc
from . import patterns as pt
from .mapping import invert

FORMAT = "algentropy-report/1"

_DEFAULT_N = 16
_DEFAULT_ORACLE_N = 10
_LAMBDA_TOL = 1e-9


@dataclass
class Check:
    """One cross-check row: what was compared, at what tolerance."""

    name: str
    lhs: str
    rhs: str
    tolerance: str
    passed: bool


@dataclass
class Report:
    spec: object
    analysis: object
    censuses: list
    balance: object
    estimate: object
    closed_forms: dict
    oracle_degrees: list = None
    oracle_lambda: float = None
    checks: list = dfield(default_factory=list)

    @property
    def verdict(self):
        return "integrable" if abs(self.estimate.value - 1.0) < _LAMBDA_TOL \
            else "nonintegrable"

    @property
    def growth(self):
        """Degree growth description; polynomial order when integrable."""
        if self.verdict == "nonintegrable":
            return "exponential"
        entry = self.closed_forms.get("d")
        if entry is None:
            return "polynomial"
        form = entry[0]
        order = max((j for j, c in enumerate(form.plain) if c), default=0)
        return {0: "bounded", 1: "linear", 2: "quadratic",
                3: "cubic"}.get(order, f"degree {order}")

    def to_dict(self):
        return _to_dict(self)

    def to_json(self):
        return canonical_json(self.to_dict())


def build_report(spec, n_max=None, oracle_mode="modp", oracle_n=None,
                 oracle_kw=None, limits=None, tolerance=0.02,
                 reversal_check=False, extra_seeds=()):
    """Full pipeline: patterns, balance, growth, oracle cross-checks.

    The oracle degrees (when oracle_mode is not None) are fed back into
    the balance as the expected sequence, so a wrong pattern set raises
    InconsistentBalanceError instead of reporting a wrong answer.  The
    oracle horizon defaults to 10 because its cost grows with the
    degrees themselves; the balance runs on to n_max regardless.
    """
    analysis = pt.analyze(spec, limits, extra_seeds=extra_seeds)
    censuses = bl.build_censuses(analysis)
    horizon = min(c.valid_upto for c in censuses)
    if n_max is None:
        n_max = _DEFAULT_N if horizon == inf else min(_DEFAULT_N, int(horizon))
    oracle_degrees = None
    oracle_lambda = None
    expected = None
    checks = []
    if oracle_mode is not None:
        o_n = min(n_max, oracle_n or _DEFAULT_ORACLE_N)
        oracle_degrees = oc.degree_sequence(spec, o_n, mode=oracle_mode,
                                            **(oracle_kw or {}))
        oracle_lambda = oc.estimate_lambda(oracle_degrees)
        expected = oracle_degrees[1:]
    result = bl.solve_balance(analysis, n_max, censuses=censuses,
                              expected=expected)
    estimate = bl.dynamical_degree(analysis, censuses)
    if oracle_mode is not None:
        n_common = min(len(expected), n_max)
        checks.append(Check(
            name="balance degrees vs oracle degrees",
            lhs=f"d_1..d_{n_common} from the singularity balance",
            rhs=f"d_1..d_{n_common} from the {oracle_mode} oracle",
            tolerance="exact equality",
            passed=result.degrees[:n_common] == expected[:n_common]))
        checks.append(Check(
            name="express dynamical degree vs oracle growth estimate",
            lhs=f"lambda = {estimate.value!r}",
            rhs=f"oracle estimate {oracle_lambda!r}",
            tolerance=f"abs diff <= {tolerance}",
            passed=abs(estimate.value - oracle_lambda) <= tolerance))
    if reversal_check:
        checks.append(_reversal_check(spec, analysis, limits))
    closed = {}
    for label, values in list(result.sequences.items()) + [("d", result.degrees)]:
        form = bl.fit_closed_form(values)
        if form is not None:
            closed[label] = (form, 1)
        else:
            # an irregular first value is common; retry past it
            form = bl.fit_closed_form(values[1:], start=2)
            if form is not None:
                closed[label] = (form, 2)
    return Report(spec=spec, analysis=analysis, censuses=censuses,
                  balance=result, estimate=estimate, closed_forms=closed,
                  oracle_degrees=oracle_degrees, oracle_lambda=oracle_lambda,
                  checks=checks)


def _reversal_check(spec, analysis, limits):
    """Confined patterns of the backward map are the forward ones reversed."""
    backward = pt.analyze(invert(spec), limits)

    def bodies(an, flip):
        out = set()
        for p in an.patterns:
            if p.kind == "confined":
                body = [e.render() for e in p.entries]
                out.add(tuple(reversed(body)) if flip else tuple(body))
        return out

    fwd = bodies(analysis, flip=True)
    bwd = bodies(backward, flip=False)
    return Check(
        name="pattern reversal under the inverse mapping",
        lhs=f"forward confined patterns reversed: {sorted(fwd)}",
        rhs=f"backward confined patterns: {sorted(bwd)}",
        tolerance="set equality",
        passed=fwd == bwd)


def _pattern_dict(p):
    out = {
        "seed": bl.value_label(p.seed),
        "kind": p.kind,
        "rendered": p.render(),
        "spontaneous": p.spontaneous,
    }
    if p.label:
        out["label"] = p.label
    if p.period:
        out["period"] = p.period
    if p.kind == "anticonfined":
        out["tail_recurrence"] = [str(c) for c in p.fwd_tail.rec]
    return out


def _to_dict(report):
    spec = report.spec
    from .expr import format_expr
    data = {
        "format": FORMAT,
        "mapping": {
            "name": spec.name,
            "params": list(spec.params),
            "update": format_expr(spec.update),
            "inverse": format_expr(spec.inverse) if spec.inverse else None,
            "inverse_derived": spec.inverse_derived,
        },
        "patterns": [_pattern_dict(p) for p in report.analysis.patterns],
        "balance": {
            "labels": report.balance.labels,
            "sequences": report.balance.sequences,
            "degrees": report.balance.degrees,
            "n_max": report.balance.n_max,
        },
        "dynamical_degree": report.estimate.value,
        "verdict": report.verdict,
        "growth": report.growth,
        "closed_forms": {
            label: {"formula": form.render(), "from_n": start}
            for label, (form, start) in report.closed_forms.items()
        },
        "checks": [
            {"name": c.name, "lhs": c.lhs, "rhs": c.rhs,
             "tolerance": c.tolerance, "passed": c.passed}
            for c in report.checks
        ],
    }
    poly = report.estimate.char_poly
    data["char_poly"] = {
        "text": str(poly.as_expr()),
        "coeffs": [int(c) for c in poly.all_coeffs()],
    } if poly is not None else None
    if report.estimate.note:
        data["note"] = report.estimate.note
    if report.oracle_degrees is not None:
        data["oracle"] = {
            "degrees": list(report.oracle_degrees),
            "lambda_estimate": report.oracle_lambda,
        }
    return data


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True) + "\n"


def render_text(report):
    """Human-readable summary of a report."""
    lines = []
    spec = report.spec
    lines.append(f"mapping {spec.name}")
    lines.append("singularity patterns:")
    for p in report.analysis.patterns:
        tag = f" [{p.label}]" if p.label else ""
        lines.append(f"  seed {bl.value_label(p.seed):>6}  {p.kind:<20}{tag} "
                     f"{p.render()}")
    lines.append(f"degrees d_1..d_{report.balance.n_max}: "
                 + " ".join(str(d) for d in report.balance.degrees))
    for label, seq in report.balance.sequences.items():
        lines.append(f"  {label}: " + " ".join(str(v) for v in seq))
    for label, (form, start) in sorted(report.closed_forms.items()):
        suffix = "" if start == 1 else f"   (n >= {start})"
        lines.append(f"closed form {label}(n) = {form.render()}{suffix}")
    poly = report.estimate.char_poly
    if poly is not None:
        lines.append(f"characteristic polynomial: {poly.as_expr()}")
    lines.append(f"dynamical degree: {report.estimate.value:.12f}")
    if report.estimate.note:
        lines.append(f"  = {report.estimate.note}")
    lines.append(f"verdict: {report.verdict} ({report.growth} degree growth)")
    if report.oracle_degrees is not None:
        lines.append("oracle degrees:  "
                     + " ".join(str(d) for d in report.oracle_degrees))
        lines.append(f"oracle growth estimate: {report.oracle_lambda:.6f}")
    for c in report.checks:
        lines.append(f"check {'PASS' if c.passed else 'FAIL'}: {c.name} "
                     f"[{c.lhs} vs {c.rhs}; {c.tolerance}]")
    return "\n".join(lines) + "\n"
