"""Second-order rational mappings and their text format.

A mapping file is line-oriented; ``#`` starts a comment, blank lines
are skipped.  Recognized keys::

    name     dp1                      # optional label
    params   alpha beta               # optional, space/comma separated
    update   (alpha + beta*n)/x1 + 1/x1^2 - x0
    inverse  (alpha + beta*n)/x1 + 1/x1^2 - x2   # optional

The update gives x_{n+1} in terms of x0 = x_{n-1}, x1 = x_n and the
index symbol n, where n is the index of x1.  The inverse gives x_{n-1}
in terms of x1 = x_n, x2 = x_{n+1} and the same n.  When no inverse is
supplied and the update is Moebius in x0 it is derived automatically.

Names n, u, z, x0, x1, x2 are reserved and cannot be parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import expr
from .algebra import CoefficientField
from .errors import CannotInvertError, MappingSyntaxError, MappingValidationError

RESERVED = ("x0", "x1", "x2", "n", "u", "z")


@dataclass(frozen=True)
class MappingSpec:
    """A parsed mapping; ASTs are expr-module tuples."""

    update: tuple
    params: tuple = ()
    name: str = "mapping"
    inverse: tuple | None = None
    inverse_derived: bool = field(default=False, compare=False)

    def __post_init__(self):
        _validate(self)


def _validate(spec):
    for p in spec.params:
        if p in RESERVED:
            raise MappingValidationError(f"parameter name {p!r} is reserved")
    allowed = set(spec.params) | {"x0", "x1", "n"}
    free = expr.free_symbols(spec.update)
    extra = free - allowed
    if extra:
        raise MappingSyntaxError(f"undeclared symbols in update: {sorted(extra)}")
    if "x0" not in free:
        raise MappingValidationError(
            "update does not involve x0; the mapping is not second order")
    if spec.inverse is not None:
        inv_allowed = set(spec.params) | {"x1", "x2", "n"}
        inv_extra = expr.free_symbols(spec.inverse) - inv_allowed
        if inv_extra:
            raise MappingSyntaxError(
                f"undeclared symbols in inverse: {sorted(inv_extra)}")


def parse_mapping(text, name=None):
    """Parse mapping-file text into a MappingSpec."""
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 1)
        key = parts[0].lower()
        value = parts[1].strip() if len(parts) > 1 else ""
        if key not in ("name", "params", "update", "inverse"):
            raise MappingSyntaxError(f"unknown key {key!r}", lineno, 1)
        if key in fields:
            raise MappingSyntaxError(f"duplicate key {key!r}", lineno, 1)
        if not value:
            raise MappingSyntaxError(f"key {key!r} has no value", lineno, len(parts[0]) + 1)
        if key in ("update", "inverse"):
            fields[key] = expr.parse_expr(value, line=lineno)
        elif key == "params":
            fields[key] = tuple(p for p in value.replace(",", " ").split() if p)
        else:
            fields[key] = value
    if "update" not in fields:
        raise MappingSyntaxError("mapping file has no update line")
    return MappingSpec(
        update=fields["update"],
        params=fields.get("params", ()),
        name=name or fields.get("name", "mapping"),
        inverse=fields.get("inverse"),
    )


def load_mapping(path):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stem = str(path).rsplit("/", 1)[-1]
    stem = stem[:-4] if stem.endswith(".map") else stem
    return parse_mapping(text, name=None) if "name" in text else parse_mapping(text, name=stem)


def format_mapping(spec):
    """Render back to file text; parse_mapping(format_mapping(s)) == s."""
    lines = [f"name {spec.name}"]
    if spec.params:
        lines.append("params " + " ".join(spec.params))
    lines.append("update " + expr.format_expr(spec.update))
    if spec.inverse is not None and not spec.inverse_derived:
        lines.append("inverse " + expr.format_expr(spec.inverse))
    return "\n".join(lines) + "\n"


def step(spec, x0, x1, n, base_env):
    """Value at index n+1 given x0 at n-1 and x1 at n.

    base_env maps parameter names to domain values and "__const__" to a
    Fraction lifter; n is a domain value for the index of x1.
    """
    env = dict(base_env)
    env.update(x0=x0, x1=x1, n=n)
    return expr.eval_ast(spec.update, env)


def back_step(spec, x1, x2, n, base_env):
    """Value at index n-1 given x1 at n and x2 at n+1."""
    if spec.inverse is None:
        raise CannotInvertError(f"mapping {spec.name!r} has no inverse")
    env = dict(base_env)
    env.update(x1=x1, x2=x2, n=n)
    return expr.eval_ast(spec.inverse, env)


def _working_field(spec, extra=()):
    return CoefficientField(tuple(spec.params) + ("n",) + tuple(extra))


def _field_env(ctx):
    env = {name: ctx.gen(name) for name in ctx.symbols}
    env["__const__"] = ctx.const
    return env


def _element_to_ast(element):
    # FracElement str uses **, parentheses and rational coefficients,
    # all inside the expression grammar
    return expr.parse_expr(str(element))


def derive_inverse(spec):
    """Inverse AST for an update that is Moebius in x0."""
    ctx = _working_field(spec, extra=("x0", "x1"))
    env = _field_env(ctx)
    value = expr.eval_ast(spec.update, env)
    x0_gen = ctx.field.ring.gens[ctx.symbols.index("x0")]
    coeffs = {}
    for label, poly in (("num", value.numer), ("den", value.denom)):
        if poly.degree(x0_gen) > 1:
            raise CannotInvertError(
                f"update is degree {poly.degree(x0_gen)} in x0, not Moebius; "
                "supply an explicit inverse")
        parts = {0: ctx.field.ring.zero, 1: ctx.field.ring.zero}
        for monom, coeff in poly.terms():
            e = monom[ctx.symbols.index("x0")]
            reduced = tuple(m if i != ctx.symbols.index("x0") else 0
                            for i, m in enumerate(monom))
            parts[e] = parts[e] + ctx.field.ring.term_new(reduced, coeff)
        coeffs[label] = parts
    a = ctx.normalize(coeffs["num"][1], ctx.field.ring.one)
    b = ctx.normalize(coeffs["num"][0], ctx.field.ring.one)
    c = ctx.normalize(coeffs["den"][1], ctx.field.ring.one)
    d = ctx.normalize(coeffs["den"][0], ctx.field.ring.one)
    if not (a * d - b * c):
        raise CannotInvertError("update is constant in x0 (zero Moebius determinant)")
    x2 = ("sym", "x2")

    def times_x2(el):
        if not el:
            return None
        if el == ctx.one:
            return x2
        return ("mul", _element_to_ast(el), x2)

    def minus(lhs, rhs):
        if lhs is None and rhs is None:
            return ("num", Fraction(0))
        if lhs is None:
            return ("neg", rhs)
        if rhs is None:
            return lhs
        return ("sub", lhs, rhs)

    num_ast = minus(times_x2(d), _element_to_ast(b) if b else None)
    den_ast = minus(_element_to_ast(a) if a else None, times_x2(c))
    return ("div", num_ast, den_ast)


def ensure_inverse(spec):
    """Return a spec whose inverse is present and symbolically verified."""
    if spec.inverse is None:
        spec = replace(spec, inverse=derive_inverse(spec), inverse_derived=True)
    verify_inverse(spec)
    return spec


def verify_inverse(spec):
    """Check inverse(x1, update(x0, x1; n); n) == x0 in the exact field."""
    ctx = _working_field(spec, extra=("x0", "x1"))
    env = _field_env(ctx)
    x2 = expr.eval_ast(spec.update, env)
    back = expr.eval_ast(spec.inverse, {**env, "x2": x2})
    if back != env["x0"]:
        raise MappingValidationError(
            f"inverse of {spec.name!r} fails the round trip: got {back}")


def invert(spec):
    """The backward mapping as a spec of its own.

    Index convention: if w_m denotes x_{-m} then the inverted spec steps
    w_{m+1} = update'(w_{m-1}, w_m; m), so its index symbol runs against
    the original one.  Inverting twice restores the original update.
    """
    spec = ensure_inverse(spec)
    neg_n = ("neg", ("sym", "n"))
    new_update = expr.collapse_double_neg(expr.substitute(
        expr.rename_symbol(spec.inverse, "x2", "x0"), "n", neg_n))
    new_inverse = expr.collapse_double_neg(expr.substitute(
        expr.rename_symbol(spec.update, "x0", "x2"), "n", neg_n))
    name = spec.name[:-4] if spec.name.endswith("_inv") else spec.name + "_inv"
    return MappingSpec(update=new_update, params=spec.params,
                       name=name, inverse=new_inverse,
                       inverse_derived=spec.inverse_derived)
