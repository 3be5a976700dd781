from types import SimpleNamespace

import pytest

from algentropy.algebra import (CoefficientField, FieldDomain, GFDomain,
                                UniPoly, factor_roots_in_field, poly_gcd)
from algentropy.errors import BadSpecializationError, DivisionByZeroError


@pytest.fixture
def ctx():
    return CoefficientField(("c", "n", "u"))


def test_const_and_gen(ctx):
    half = ctx.const("1/2")
    assert 2 * half == ctx.one
    assert ctx.depends_on(ctx.gen("c"), "c")
    assert not ctx.depends_on(ctx.gen("c"), "u")


def test_from_string_reduces(ctx):
    el = ctx.from_string("(c**2 - 1)/(c - 1)")
    assert el == ctx.gen("c") + 1


def test_normalize_rejects_zero_denominator(ctx):
    with pytest.raises(DivisionByZeroError):
        ctx.normalize(ctx.field.ring.one, ctx.field.ring.zero)


def test_shift_and_eval_n(ctx):
    n = ctx.gen("n")
    el = (n + 1) / (n - 1)
    assert ctx.shift_n(el, 2) == (n + 3) / (n + 1)
    assert ctx.eval_n(el, 3) == ctx.const(2)


def test_specialize(ctx):
    cfg = SimpleNamespace(prime=101, assignment={"c": 5, "u": 7})
    el = (ctx.gen("c") + ctx.gen("n")) / ctx.gen("u")
    # (5 + 3) / 7 mod 101
    assert ctx.specialize(el, cfg, n_value=3) == 8 * pow(7, 99, 101) % 101


def test_specialize_zero_denominator(ctx):
    cfg = SimpleNamespace(prime=101, assignment={"c": 0, "u": 7})
    with pytest.raises(BadSpecializationError):
        ctx.specialize(ctx.one / ctx.gen("c"), cfg)


def test_unipoly_divmod_gcd():
    dom = GFDomain(13)
    # (x+1)^2 (x+2) and (x+1)(x+3)
    a = UniPoly(dom, [2, 5, 4, 1])
    b = UniPoly(dom, [3, 4, 1])
    q, r = a.divmod(b)
    assert (q * b + r).coeffs == a.coeffs
    g = poly_gcd(a, b)
    assert g.coeffs == (1, 1)   # monic x + 1


def test_unipoly_gcd_zero_convention():
    dom = GFDomain(13)
    z = UniPoly(dom, [])
    assert poly_gcd(z, z).is_zero()
    assert poly_gcd(UniPoly(dom, [2, 2]), z).coeffs == (1, 1)


def test_factor_roots(ctx):
    dom = FieldDomain(ctx)
    c = ctx.gen("c")
    # (x - c)(x + 1)(x^2 + 1): two rational-function roots, one unsolved
    x_minus_c = UniPoly(dom, [-c, ctx.one])
    x_plus_1 = UniPoly(dom, [ctx.one, ctx.one])
    quad = UniPoly(dom, [ctx.one, ctx.zero, ctx.one])
    poly = x_minus_c * x_plus_1 * quad
    roots, unsolved = factor_roots_in_field(ctx, poly)
    assert sorted(str(r) for r in roots) == ["-1", "c"]
    assert unsolved == [2]
