"""Parsing, evaluation, differentiation, and formatting of systems."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polycascade.polynomials import (ParseError, Polynomial, PolynomialSystem,
                                     UnknownVariableError, format_polynomial,
                                     format_system, parse_system)

from helpers import fd_jacobian, naive_poly_eval, points_st, polynomials_st, systems_st

WORKED = """
# embedded-point example
2
*
x1^2*x2;
x1^2*(x2^2 + x1);
"""


def test_parse_degrees_and_count():
    f = parse_system(WORKED)
    assert f.n_polys == 2 and f.n_vars == 2
    assert f.degrees() == (3, 4)


def test_evaluate_hand_checked():
    f = parse_system(WORKED)
    # f(1, 1) = (1^2*1, 1^2*(1+1)) = (1, 2)
    v = f.evaluate(np.array([1.0, 1.0], dtype=np.complex128))
    assert np.allclose(v, [1.0, 2.0])
    # f(2, i) = (4i, 4*(i^2+2)) = (4i, 4)
    v = f.evaluate(np.array([2.0, 1j], dtype=np.complex128))
    assert np.allclose(v, [4j, 4.0])


def test_jacobian_hand_checked():
    f = parse_system(WORKED)
    # d(x1^2 x2) = (2 x1 x2, x1^2); d(x1^2 x2^2 + x1^3) = (2 x1 x2^2 + 3 x1^2, 2 x1^2 x2)
    j = f.jacobian(np.array([1.0, 2.0], dtype=np.complex128))
    assert np.allclose(j, [[4.0, 1.0], [11.0, 4.0]])


def test_complex_coefficients_parse():
    f = parse_system("1\n*\n(1+2*i)*x1^4 + (-5+3*i);\n")
    p = f.polys[0]
    assert p.terms[(4,)] == 1 + 2j
    assert p.terms[(0,)] == -5 + 3j


def test_imaginary_unit_literal():
    f = parse_system("1\n*\ni*x1 - i;\n")
    assert f.polys[0].terms[(1,)] == 1j
    assert f.polys[0].terms[(0,)] == -1j


def test_named_variables_and_unknown():
    f = parse_system("2\nu v\nu*v - 1;\nu + v;\n")
    assert f.var_names == ("u", "v")
    with pytest.raises(UnknownVariableError) as err:
        parse_system("2\nu v\nu*w - 1;\nu + v;\n")
    assert err.value.name == "w"


@pytest.mark.parametrize("text,line,col_check", [
    ("2\n*\nx1 + ;\nx2;\n", 3, lambda c: c >= 4),
    ("2\n*\nx1^x2;\nx2;\n", 3, lambda c: c >= 3),
    ("2\n*\nx1)\n;x2;\n", 3, lambda c: c >= 3),
    ("not_a_number\n*\nx1;\n", 1, lambda c: c == 1),
])
def test_parse_errors_carry_location(text, line, col_check):
    with pytest.raises(ParseError) as err:
        parse_system(text)
    assert err.value.line == line
    assert col_check(err.value.col)


def test_missing_terminator():
    with pytest.raises(ParseError) as err:
        parse_system("1\n*\nx1 + 1\n")
    assert "';'" in str(err.value)


def test_non_square_parses_but_flags():
    f = parse_system("2\n*\nx1*x2 - 1;\n")
    assert not f.is_square()
    assert f.n_polys == 1 and f.n_vars == 2


def test_comments_and_blank_lines_ignored():
    f = parse_system("# header\n\n2\n*  # default names\nx1; # first\n\nx2;\n")
    assert f.n_polys == 2


def test_exponent_must_be_literal():
    with pytest.raises(ParseError):
        parse_system("1\n*\nx1^(2);\n")


def test_zero_polynomial_degree_sentinel():
    f = parse_system("2\n*\nx1 - x1;\nx2;\n")
    assert f.degrees() == (-1, 1)
    assert f.polys[0].is_zero()


def test_derivative_drops_vanishing_terms():
    p = Polynomial(2, {(0, 3): 2.0, (1, 0): 5.0})
    dp = p.derivative(0)
    assert dp.terms == {(0, 0): 5.0}
    assert p.derivative(1).terms == {(0, 2): 6.0}


@settings(max_examples=150)
@given(st.data())
def test_evaluation_matches_naive_oracle(data):
    n = data.draw(st.integers(1, 3))
    poly = data.draw(polynomials_st(n, max_degree=4, max_terms=5))
    x = data.draw(points_st(n))
    got = poly.evaluate(x)
    want = naive_poly_eval(poly, x)
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


@settings(max_examples=150)
@given(st.data())
def test_jacobian_matches_finite_differences(data):
    system = data.draw(systems_st(max_degree=3, max_terms=4))
    x = data.draw(points_st(system.n_vars, scale=1.0))
    exact = system.jacobian(x)
    approx = fd_jacobian(system.evaluate, x, h=1e-6)
    scale = max(1.0, float(np.max(np.abs(exact))))
    assert np.max(np.abs(exact - approx)) <= 5e-5 * scale


@settings(max_examples=150)
@given(st.data())
def test_format_parse_round_trip(data):
    system = data.draw(systems_st(max_degree=3, max_terms=4))
    again = parse_system(format_system(system))
    assert again == system


def test_format_specific_forms():
    p = Polynomial(2, {(4, 0): 1 + 2j, (0, 0): -5.0})
    text = format_polynomial(p, ("x1", "x2"))
    assert text == "(1+2*i)*x1^4 - 5"


@settings(max_examples=100)
@given(st.data())
def test_arithmetic_matches_naive(data):
    n = data.draw(st.integers(1, 2))
    a = data.draw(polynomials_st(n, max_degree=2, max_terms=3))
    b = data.draw(polynomials_st(n, max_degree=2, max_terms=3))
    x = data.draw(points_st(n, scale=1.0))
    want = naive_poly_eval(a, x) * naive_poly_eval(b, x) + naive_poly_eval(a, x)
    got = (a * b + a).evaluate(x)
    assert abs(got - want) <= 1e-9 * max(1.0, abs(want))
