"""Tests for exact polynomials, surds and root isolation"""

import math

import pytest
import sympy as sp

from exact_algebra import (
    CVAR,
    ExactAlgebraError,
    Interval,
    QuadraticSurd,
    RationalFn,
    content_free,
    exact_quotient,
    format_surd_pair,
    isolate_real_roots,
    make_poly,
    poly_gcd,
    solve_quadratic_exact,
    squarefree_part,
    strip_factors,
    sturm_count,
    to_rational,
)

c = CVAR


def test_to_rational():
    assert to_rational("3/2") == sp.Rational(3, 2)
    assert to_rational(4) == 4
    with pytest.raises(ExactAlgebraError):
        to_rational("x")


def test_gcd_of_zero_polynomials_is_undefined():
    zero = make_poly(0)
    with pytest.raises(ExactAlgebraError, match="undefined gcd"):
        poly_gcd(zero, zero)


def test_gcd_and_exact_quotient():
    p = make_poly((c - 1) * (c + 2))
    q = make_poly((c - 1) * (c - 3))
    g = poly_gcd(p, q)
    assert g.monic() == make_poly(c - 1)
    assert exact_quotient(p, g).monic() == make_poly(c + 2)
    with pytest.raises(ExactAlgebraError):
        exact_quotient(p, make_poly(c - 3))


def test_squarefree_part_drops_repeated_factors():
    p = make_poly((c - 1) ** 2 * (c + 2))
    assert squarefree_part(p).monic() == make_poly((c - 1) * (c + 2))


def test_strip_factors_removes_every_power_of_the_blocker():
    p = make_poly(c ** 3 * (c - 5))
    assert strip_factors(p, make_poly(c)).monic() == make_poly(c - 5)


def test_content_free_has_integer_coefficients_and_positive_leading_term():
    p = make_poly(-c ** 2 / 2 + c / 3)
    assert content_free(p).all_coeffs() == [3, -2, 0]


def test_rational_function_arithmetic():
    f = RationalFn.from_expr((c ** 2 - 1) / (2 * c))
    assert f.evaluate(2) == sp.Rational(3, 4)
    assert (f - f).is_zero
    g = f * f.reciprocal()
    assert g.evaluate(7) == 1
    assert math.isclose(f.evaluate_float(0.5), (0.25 - 1) / 1.0)


def test_rational_function_pole_raises():
    f = RationalFn.from_expr(1 / (c - 1))
    with pytest.raises(ExactAlgebraError):
        f.evaluate(1)


def test_surd_arithmetic_and_sign():
    x = QuadraticSurd.make(1, 1, 2)
    y = QuadraticSurd.make(1, -1, 2)
    assert x * y == QuadraticSurd.make(-1)
    assert (x * x.inverse()) == QuadraticSurd.make(1)
    assert QuadraticSurd.make(26, -8, 10).sign() == 1
    assert QuadraticSurd.make(3, -1, 10).sign() == -1
    assert QuadraticSurd.make(26, -8, 10) < 1


def test_surd_normalizes_the_radicand():
    assert QuadraticSurd.make(0, 1, 8) == QuadraticSurd.make(0, 2, 2)
    assert QuadraticSurd.make(1, 1, 4) == QuadraticSurd.make(3)


def test_surd_from_expr():
    s = QuadraticSurd.from_expr(sp.Rational(4, 3) + sp.sqrt(13) / 3)
    assert s == QuadraticSurd.make(sp.Rational(4, 3), sp.Rational(1, 3), 13)
    with pytest.raises(ExactAlgebraError):
        QuadraticSurd.from_expr(sp.pi)


def test_solve_quadratic_closed_form():
    roots = solve_quadratic_exact(make_poly(3 * c ** 2 - 8 * c + 1))
    assert [str(r.value) for r in roots] == ["(4-sqrt(13))/3", "(4+sqrt(13))/3"]
    assert format_surd_pair(roots[0].value, roots[1].value) == "(4±sqrt(13))/3"


def test_solve_quadratic_double_and_missing_roots():
    double = solve_quadratic_exact(make_poly((c - 2) ** 2))
    assert len(double) == 1 and double[0].multiplicity == 2
    assert solve_quadratic_exact(make_poly(c ** 2 + 1)) == []


def test_solve_quadratic_rejects_higher_degree():
    with pytest.raises(ExactAlgebraError, match="use isolation"):
        solve_quadratic_exact(make_poly(c ** 3 - 2))


def test_isolation_on_open_half_line():
    p = make_poly(c ** 2 - 2)
    found = isolate_real_roots(p, Interval(0, sp.oo))
    assert len(found) == 1
    assert math.isclose(found[0].midpoint, math.sqrt(2), rel_tol=1e-9)
    assert found[0].width < 1e-9


def test_isolation_against_surd_endpoint():
    p = make_poly((c ** 2 - 2) * (c ** 2 - 5))
    iv = Interval(QuadraticSurd.make(0, 1, 3), sp.oo)
    found = isolate_real_roots(p, iv)
    assert len(found) == 1
    assert math.isclose(found[0].midpoint, math.sqrt(5), rel_tol=1e-9)


def test_open_endpoint_root_is_excluded():
    p = make_poly(c * (c - 1))
    assert isolate_real_roots(p, Interval(0, 1)) == []
    assert sturm_count(p, Interval(-1, 2)) == 2


def test_isolation_requires_squarefree_input():
    with pytest.raises(ExactAlgebraError, match="squarefree"):
        isolate_real_roots(make_poly((c - 1) ** 2))


@pytest.mark.parametrize("coeffs,lo,count", [
    ([45, -360, 330, -32, 1], sp.Rational(1, 3), 2),
    ([1, -32, 330, -360, 45], sp.Integer(3), 0),
    ([1, -32, 330, -360, 45], sp.Integer(0), 2),
])
def test_sturm_counts_for_the_g2_quartics(coeffs, lo, count):
    p = make_poly(sum(a * c ** k for k, a in enumerate(reversed(coeffs))))
    assert sturm_count(p, Interval(lo, sp.oo)) == count
    assert len(isolate_real_roots(p, Interval(lo, sp.oo))) == count
