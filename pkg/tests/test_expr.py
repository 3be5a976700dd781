from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from algentropy.errors import MappingSyntaxError
from algentropy.expr import (eval_ast, format_expr, free_symbols, parse_expr,
                             rename_symbol, substitute)


def test_parse_simple():
    assert parse_expr("x0 + 1") == ("add", ("sym", "x0"), ("num", Fraction(1)))
    assert parse_expr("2*x1") == ("mul", ("num", Fraction(2)), ("sym", "x1"))


def test_power_both_spellings():
    assert parse_expr("x1^2") == parse_expr("x1**2")
    assert parse_expr("x1^-3") == ("pow", ("sym", "x1"), -3)


def test_precedence():
    ast = parse_expr("a + b*c^2")
    assert ast == ("add", ("sym", "a"),
                   ("mul", ("sym", "b"), ("pow", ("sym", "c"), 2)))


def test_unary_minus_chain():
    assert parse_expr("--x") == ("neg", ("neg", ("sym", "x")))
    assert parse_expr("-x^2") == ("neg", ("pow", ("sym", "x"), 2))


def test_syntax_error_position():
    with pytest.raises(MappingSyntaxError) as exc:
        parse_expr("x0 + $", line=3)
    assert exc.value.line == 3
    assert exc.value.column == 6


def test_non_integer_exponent_rejected():
    with pytest.raises(MappingSyntaxError):
        parse_expr("x1^x0")


def test_trailing_input_rejected():
    with pytest.raises(MappingSyntaxError):
        parse_expr("x0 x1")


def test_free_symbols():
    assert free_symbols(parse_expr("(a + b*n)/x1 - x0")) == {"a", "b", "n", "x0", "x1"}


def test_substitute_and_rename():
    ast = parse_expr("x0 + x0*x1")
    assert rename_symbol(ast, "x0", "y") == parse_expr("y + y*x1")
    assert substitute(ast, "x0", parse_expr("1/w")) == parse_expr("1/w + (1/w)*x1")


def _fraction_env(ast):
    env = {name: Fraction(i + 2) for i, name in enumerate(sorted(free_symbols(ast)))}
    env["__const__"] = Fraction
    return env


def test_eval_matches_python():
    ast = parse_expr("(a + 2*b)^2/(a - 1) - 3")
    a, b = Fraction(5), Fraction(7)
    assert eval_ast(ast, {"a": a, "b": b, "__const__": Fraction}) == \
        (a + 2 * b) ** 2 / (a - 1) - 3


_symbols = st.sampled_from(["x0", "x1", "n", "alpha", "b2"])


def _asts(depth):
    if depth == 0:
        return st.one_of(
            st.integers(min_value=0, max_value=99).map(lambda i: ("num", Fraction(i))),
            _symbols.map(lambda s: ("sym", s)))
    sub = _asts(depth - 1)
    return st.one_of(
        _asts(0),
        st.tuples(st.sampled_from(["add", "sub", "mul", "div"]), sub, sub),
        sub.map(lambda a: ("neg", a)),
        st.tuples(sub, st.integers(min_value=-4, max_value=4)).map(
            lambda t: ("pow", t[0], t[1])))


@given(_asts(3))
def test_format_parse_round_trip(ast):
    assert parse_expr(format_expr(ast)) == ast


@given(_asts(2))
def test_eval_after_round_trip_agrees(ast):
    env = {name: Fraction(i + 2) for i, name in enumerate(["x0", "x1", "n", "alpha", "b2"])}
    env["__const__"] = Fraction
    try:
        expected = eval_ast(ast, env)
    except ZeroDivisionError:
        return
    assert eval_ast(parse_expr(format_expr(ast)), env) == expected
