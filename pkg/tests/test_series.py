from math import inf

import pytest

from algentropy.algebra import CoefficientField
from algentropy.errors import DivisionByZeroError, InsufficientDepthSignal
from algentropy.series import LaurentSeries, SeriesContext


@pytest.fixture
def sc():
    return SeriesContext(CoefficientField(("n", "u")), depth=8)


def test_const_and_zero(sc):
    c = sc.const(3)
    assert c.valuation() == 0
    # relative precision is capped at the context depth on construction
    assert c.prec == sc.depth
    assert sc.zero().is_exact_zero()
    with pytest.raises(DivisionByZeroError):
        sc.zero().valuation()


def test_seed_shapes(sc):
    s = sc.seed_near(sc.field.const(5))
    assert s.valuation() == 0
    assert s.coeff(1) == sc.field.one
    t = sc.seed_near_infinity()
    assert t.valuation() == -1


def test_add_cancellation_keeps_precision(sc):
    s = sc.seed_near(sc.field.const(2))
    d = s - s
    assert d.is_empty()
    # the difference is O(eps^depth): unknown below the working depth,
    # not known to be zero
    assert d.prec == s.prec
    assert not d.is_exact_zero()


def test_mul_precision_rule(sc):
    f = sc.make(1, [sc.field.one] * 8, 9)        # eps + ... + O(eps^9)
    g = sc.make(-2, [sc.field.one] * 8, 6)       # eps^-2 + ... + O(eps^6)
    h = f * g
    # min(val_f + prec_g, val_g + prec_f) = min(1+6, -2+9) = 7
    assert h.valuation() == -1
    assert h.prec == 7


def test_inverse_of_exact_polynomial(sc):
    one = sc.field.one
    f = sc.make(0, [one, one], inf)              # 1 + eps, exact
    g = f.inverse()
    # geometric series to the working depth
    assert [g.coeff(k) for k in range(4)] == [one, -one, one, -one]
    assert (f * g - sc.const(1)).is_empty()


def test_inverse_precision_and_valuation(sc):
    f = sc.make(2, [sc.field.one] * 5, 7)
    g = f.inverse()
    assert g.valuation() == -2
    assert g.prec == 7 - 4
    prod = f * g
    assert prod.coeff(0) == sc.field.one


def test_division_by_truncated_zero_signals(sc):
    unknown = sc.make(0, [], 5)    # O(eps^5), leading term unknown
    with pytest.raises(InsufficientDepthSignal):
        unknown.valuation()
    with pytest.raises(InsufficientDepthSignal):
        sc.const(1) / unknown


def test_pow_negative(sc):
    f = sc.make(1, [sc.field.one], inf)          # exactly eps
    g = f ** -3
    assert g.valuation() == -3
    h = f ** 0
    assert h.coeff(0) == sc.field.one


def test_coeff_past_precision_raises(sc):
    f = sc.make(0, [sc.field.one], 3)
    assert f.coeff(2) == sc.field.zero
    with pytest.raises(InsufficientDepthSignal):
        f.coeff(3)


def test_relative_depth_cap(sc):
    f = sc.make(0, [sc.field.one] * 50, inf)
    assert f.prec == sc.depth     # capped at the context depth
    assert len(f.coeffs) == sc.depth
