"""Tests for the Hermann and group biharmonic criteria"""

import pytest
import sympy as sp

from biharmonic_criterion import (
    CriterionPolynomial,
    build_criterion,
    group_criterion,
    hermann_criterion,
    proper_part,
)
from curvature import CurvatureError, harmonic_polynomial, tension_field
from exact_algebra import CVAR, content_free, make_poly

c = CVAR


def _polys(triad, edge, action):
    tf = tension_field(triad, edge, action)
    harm = harmonic_polynomial(tf)
    crit = build_criterion(triad, edge, tf, action)
    return harm, crit, proper_part(crit, harm)


def test_harmonic_factor_divides_the_full_criterion(catalog, edge_of):
    for name, index in (("SU(3),SO(3)", 1), ("Sp(2),U(2)", 1), ("SO(5)xSO(5),SO(5)", 2), ("SO(5)xSO(5),SO(5)", 3)):
        triad = catalog.lookup(name)
        harm, crit, _ = _polys(triad, edge_of(triad, index), "hermann")
        assert harm.degree() > 0
        assert crit.full.rem(harm).is_zero


def test_a2_hermann_proper_part(su3_so3, edge_of):
    _, _, proper = _polys(su3_so3, edge_of(su3_so3, 1), "hermann")
    assert proper.as_expr() == c ** 2 - 1


def test_c2_hermann_proper_part(sp2_u2, edge_of):
    _, _, proper = _polys(sp2_u2, edge_of(sp2_u2, 1), "hermann")
    assert content_free(proper).all_coeffs() == [3, 0, -8, 0, 1]


def test_group_criterion_on_a_sphere(catalog, edge_of):
    triad = catalog.lookup("SO(1+q),SO(q)", {"q": 3})
    harm, crit, proper = _polys(triad, edge_of(triad, 1), "group")
    assert harm.as_expr() == c
    assert proper.as_expr() == c ** 2 - sp.Rational(3, 2)
    assert crit.action == "group"


def test_group_and_hermann_criteria_differ(su3_so3, edge_of):
    edge = edge_of(su3_so3, 1)
    _, _, hermann = _polys(su3_so3, edge, "hermann")
    _, _, group = _polys(su3_so3, edge, "group")
    assert hermann != group


def test_proper_part_of_a_vanishing_criterion_raises():
    zero = make_poly(0)
    crit = CriterionPolynomial(zero, zero, make_poly(1), "hermann", "toy edge", None)
    with pytest.raises(CurvatureError, match="vanishes identically"):
        proper_part(crit, make_poly(c))


def test_dispatch_matches_direct_builders(sp2_u2, edge_of):
    edge = edge_of(sp2_u2, 2)
    tf = tension_field(sp2_u2, edge)
    assert hermann_criterion(sp2_u2, edge, tf).poly == build_criterion(sp2_u2, edge, tf, "hermann").poly
    group = group_criterion(sp2_u2, edge, tf)
    assert group.action == "group"
    assert group.poly == build_criterion(sp2_u2, edge, tf, "group").poly
