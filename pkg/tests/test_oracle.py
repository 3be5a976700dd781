import pytest

from algentropy import oracle as oc
from algentropy.errors import (DegenerateSequenceError, ResourceCapExceeded,
                               UnstableSpecializationError)


def test_modp_deterministic_under_seed(specs):
    a = oc.degree_sequence_modp(specs["tsuda"], 8, seed=5)
    b = oc.degree_sequence_modp(specs["tsuda"], 8, seed=5)
    assert a == b


def test_modp_seed_independent_result(specs):
    a = oc.degree_sequence_modp(specs["lin3"], 10, seed=1)
    b = oc.degree_sequence_modp(specs["lin3"], 10, seed=2)
    assert a == b == [0, 1] + [2 * (n - 1) for n in range(2, 11)]


def test_modp_without_reduction_overcounts(specs):
    reduced = oc.degree_sequence_modp(specs["lin3"], 8)
    raw = oc.degree_sequence_modp(specs["lin3"], 8, reduce=False)
    assert raw[:3] == reduced[:3]
    assert raw[-1] > reduced[-1]    # uncancelled factors pile up


def test_modp_draw_cap(specs):
    with pytest.raises(UnstableSpecializationError):
        oc.degree_sequence_modp(specs["dp1"], 5, votes=3, max_draws=2)


def test_exact_budget_cap(specs):
    with pytest.raises(ResourceCapExceeded) as exc:
        oc.degree_sequence_exact(specs["tsuda"], 30, budget=0.0)
    assert exc.value.partial == [0, 1]


def test_exact_matches_modp(specs):
    # criterion-6 style property on the affordable part of the corpus
    for name, n in (("lin3", 14), ("tsuda", 8), ("bk", 10)):
        exact = oc.degree_sequence_exact(specs[name], n, budget=120)
        modp = oc.degree_sequence_modp(specs[name], n)
        assert exact == modp, name


def test_estimate_lambda_polynomial_growth():
    quadratic = [(2 * n * n + 1 - (-1) ** n) // 4 for n in range(1, 15)]
    assert oc.estimate_lambda(quadratic) == 1.0
    linear = [2 * (n - 1) for n in range(2, 15)]
    assert oc.estimate_lambda(linear) == 1.0


def test_estimate_lambda_geometric():
    fib = [1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    lam = oc.estimate_lambda(fib)
    assert abs(lam - 1.618033988749895) < 0.02


def test_estimate_lambda_too_short():
    with pytest.raises(DegenerateSequenceError):
        oc.estimate_lambda([0, 1, 2])


def test_csv_round_trip(tmp_path, specs):
    degrees = oc.degree_sequence_modp(specs["tsuda"], 6)
    path = tmp_path / "d.csv"
    oc.write_degrees_csv(path, degrees)
    assert oc.read_degrees_csv(path) == degrees


def test_mode_dispatch(specs):
    assert oc.degree_sequence(specs["lin3"], 5, mode="modp") == \
        oc.degree_sequence(specs["lin3"], 5, mode="exact")
    with pytest.raises(ValueError):
        oc.degree_sequence(specs["lin3"], 5, mode="nope")
