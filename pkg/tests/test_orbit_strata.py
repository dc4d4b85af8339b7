"""Tests for cells, edges and exact angle forms"""

import math

import pytest
import sympy as sp

from exact_algebra import Interval, QuadraticSurd
from orbit_strata import (
    AngleForm,
    StrataError,
    build_cell,
    edges,
    find_edge,
    parametrize_edge,
    rational_gcd,
    vertices,
)
from triad_catalog import RootVector


def test_rational_gcd():
    assert rational_gcd([sp.Rational(1, 2), sp.Rational(1, 4), 1]) == sp.Rational(1, 4)
    assert rational_gcd([sp.Rational(2, 3), sp.Rational(4, 3)]) == sp.Rational(2, 3)
    with pytest.raises(StrataError):
        rational_gcd([0])


def test_isotropy_cell_uses_highest_root(sp2_u2):
    cell = build_cell(sp2_u2)
    assert cell.top == RootVector.of([2, 0])
    assert cell.top_coords == (2, 1)
    assert cell.bound == sp.pi
    assert cell.in_interior([0.5, 0.5])
    assert not cell.in_interior([1.5, 0.5])


def test_hermann_cell_bound_is_half_pi(catalog):
    cell = build_cell(catalog.lookup("SO(10),SO(5)xSO(5),U(5)"))
    assert cell.bound == sp.pi / 2
    assert cell.top == RootVector.of([2, 0])


def test_rank_two_has_three_edges_and_three_vertices(su3_so3):
    found = edges(su3_so3)
    assert [e.index for e in found] == [1, 2, 3]
    assert [e.label for e in found] == ["{α₁, δ}", "{α₂, δ}", "{α₁, α₂}"]
    assert len(vertices(su3_so3)) == 3


def test_rank_one_has_a_single_family(catalog):
    (edge,) = edges(catalog.lookup("SO(1+q),SO(q)"))
    assert edge.label == "{α, δ}"


@pytest.mark.parametrize("label,index", [
    ("1", 1), ("a1,delta", 1), ("{α₁, δ}", 1), ("alpha2, top", 2), ("a1,a2", 3),
])
def test_find_edge_accepts_indices_and_labels(su3_so3, label, index):
    assert find_edge(su3_so3, label).index == index


def test_find_edge_rejects_unknown_labels(su3_so3):
    with pytest.raises(StrataError):
        find_edge(su3_so3, "4")
    with pytest.raises(StrataError):
        find_edge(su3_so3, "a3,delta")


def test_a2_first_edge(su3_so3, edge_of):
    edge = edge_of(su3_so3, 1)
    assert edge.psi_offset == 0
    assert edge.base_scale == 1
    assert edge.psi_domain == Interval(0, 1)
    assert edge.c_domain == Interval.real_line()
    assert edge.sigma_H == (RootVector.of([0, 1]),)
    assert edge.angles[RootVector.of([1, 0])] == AngleForm(0, 1)
    assert edge.angles[RootVector.of([1, 1])] == AngleForm(0, 1)


def test_c2_first_edge_doubles_the_long_root(sp2_u2, edge_of):
    edge = edge_of(sp2_u2, 1)
    assert edge.base_scale == sp.Rational(1, 2)
    assert edge.c_domain.lo == QuadraticSurd.make(0)
    assert edge.c_domain.hi == sp.oo
    assert edge.sigma_H == (RootVector.of([0, 2]),)
    assert edge.angles[RootVector.of([2, 0])] == AngleForm(0, 2)


def test_hermann_edge_with_quarter_pi_offsets(catalog, edge_of):
    triad = catalog.lookup("SO(10),SO(5)xSO(5),U(5)")
    edge = edge_of(triad, 3)
    assert edge.psi_offset == 0
    assert edge.base_scale == sp.Rational(1, 4)
    assert edge.angles[RootVector.of([0, 1])] == AngleForm(sp.Rational(1, 2), -1)
    assert edge.w_H == (RootVector.of([2, 0]),)
    assert RootVector.of([1, 0]) in edge.constant_roots


def test_simple_values_trace_the_edge(sp2_u2, edge_of):
    edge = edge_of(sp2_u2, 3)
    lo, hi = edge.psi_bounds()
    psi = (lo + hi) / 2
    values = edge.simple_values(psi)
    cell = build_cell(sp2_u2)
    assert all(v > 0 for v in values)
    assert cell.in_closure(values, tol=1e-9)
    assert math.isclose(cell.top_value(values), math.pi)


def test_vertex_is_not_an_edge(su3_so3):
    vertex = vertices(su3_so3)[0]
    with pytest.raises(StrataError, match="not an edge"):
        parametrize_edge(su3_so3, vertex.stratum)
