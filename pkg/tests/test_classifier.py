"""Tests for categories, closed forms and parameter scans"""

import math

import pytest

from classifier import (
    ClassifierError,
    classify_all,
    classify_entry,
    classify_family,
    classify_suite,
    discriminant_bounds,
    threshold_scan,
)
from exact_algebra import QuadraticSurd, content_free

I_B2 = "SO(2+a+b),SO(2+a)xSO(b),SO(2)xSO(a+b)"


def test_a2_first_edge_hermann(su3_so3):
    result = classify_family(su3_so3, "a1,delta", "hermann")
    assert result.category == "ii"
    assert sorted(round(r.psi_over_pi, 12) for r in result.proper_roots) == [0.25, 0.75]
    assert [round(r.psi_over_pi, 12) for r in result.harmonic_roots] == [0.5]
    assert set(result.closed_forms) == {"u = 1"}
    assert result.interleaved is True


def test_c2_closed_forms(sp2_u2):
    result = classify_family(sp2_u2, 1)
    assert result.display.variable == "u"
    assert content_free(result.display.poly).all_coeffs() == [3, -8, 1]
    assert result.closed_forms == ["u = (4-sqrt(13))/3", "u = (4+sqrt(13))/3"]


def test_sp4_closed_forms_and_harmonic_point(catalog):
    result = classify_family(catalog.lookup("Sp(4),Sp(2)xSp(2)"), 1)
    assert result.category == "ii"
    assert result.closed_forms == ["u = (13-2*sqrt(34))/11", "u = (13+2*sqrt(34))/11"]
    (harmonic,) = result.harmonic_roots
    assert math.isclose(harmonic.c_value ** 2, 3 / 11, rel_tol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_b2_family_is_type_ii_on_every_edge(catalog, n):
    entry = catalog.get("SO(4+n),SO(2)xSO(2+n)")
    assert [r.category for r in classify_entry(entry, "hermann", {"n": n})] == ["ii", "ii", "ii"]


def test_b2_second_edge_closed_forms(catalog):
    triad = catalog.lookup("SO(4+n),SO(2)xSO(2+n)", {"n": 2})
    result = classify_family(triad, 2)
    assert result.closed_forms == ["u = (5-2*sqrt(5))/5", "u = (5+2*sqrt(5))/5"]


def test_g2_quartics(catalog):
    triad = catalog.lookup("G2,SO(4)")
    first = classify_family(triad, 1)
    assert first.display.variable == "u"
    assert content_free(first.display.poly).all_coeffs() == [45, -360, 330, -32, 1]
    assert first.category == "ii"
    assert first.closed_forms == []

    third = classify_family(triad, 3)
    assert content_free(third.display.poly).all_coeffs() == [1, -32, 330, -360, 45]
    assert third.category == "iii"


def test_table_annotations_attached_at_default_parameters(catalog):
    entry = catalog.get("SU(3),SO(3)")
    results = classify_entry(entry, "hermann")
    assert [r.expected for r in results] == ["ii", "ii", "ii"]
    assert [r.codim for r in results] == ["3", "3", "3"]
    assert not any(r.deviates for r in results)


def test_annotations_only_for_the_table_action(catalog):
    entry = catalog.get("SU(3),SO(3)")
    assert all(r.expected is None for r in classify_entry(entry, "group"))


@pytest.mark.parametrize("params", [{"a": 1, "b": 3}, {"a": 2, "b": 3}, {"a": 1, "b": 4}])
def test_i_b2_third_edge_has_a_single_proper_orbit(catalog, params):
    triad = catalog.lookup(I_B2, params)
    result = classify_family(triad, 3)
    assert result.category == "i"
    (root,) = result.proper_roots
    assert math.isclose(root.psi_over_pi, 0.25, abs_tol=1e-12)


def test_i_b2_third_edge_degenerates_when_multiplicities_balance(catalog):
    triad = catalog.lookup(I_B2, {"a": 1, "b": 5})
    assert classify_family(triad, 3).category == "iii"


@pytest.mark.parametrize("name,index,category,expected", [
    (I_B2, 3, "i", "ii"),
    ("SO(6)xSO(6),Δ(SO(6)),K2[SO(3)xSO(3)]", 3, "i", "ii"),
    ("SU(4),SO(4),S(U(2)xU(2))", 3, "i", "ii"),
    ("SO(4+2a),SO(4)xSO(2a),U(2+a)", 2, "iii", "ii"),
])
def test_known_table_deviations(catalog, name, index, category, expected):
    result = classify_entry(catalog.get(name), "hermann")[index - 1]
    assert (result.category, result.expected) == (category, expected)
    assert result.deviates


def test_rank_one_sphere_group_action(catalog):
    triad = catalog.lookup("SO(1+q),SO(q)", {"q": 3})
    result = classify_family(triad, 1, "group")
    assert result.category == "ii"
    assert set(result.closed_forms) == {"u = 3/2"}
    assert result.theorem_list == 1


def test_rank_one_hermann_closed_forms(catalog):
    result = classify_family(catalog.lookup("SU(4),Sp(2),SO(4)"), 1, "group")
    assert result.closed_forms == ["u = (3-sqrt(5))/2", "u = (3+sqrt(5))/2"]


def test_category_iii_lands_in_the_second_list(catalog):
    result = classify_family(catalog.lookup("SO(6),U(3),SO(3)xSO(3)"), 1, "group")
    assert result.category == "iii"
    assert result.theorem_list == 2
    assert result.proper_roots == []


def test_symbolic_triads_are_refused(catalog):
    triad = catalog.get("SO(1+q),SO(q)").instantiate(symbolic=["q"])
    with pytest.raises(ClassifierError, match="symbolic"):
        classify_family(triad, 1, "group")


def test_unknown_suite(catalog):
    with pytest.raises(ClassifierError, match="unknown suite"):
        classify_suite("rank3", catalog)


def test_threshold_scan_for_su_family(catalog):
    report = threshold_scan(catalog.get("SU(1+q),SO(1+q),S(U(1)xU(q))"), "q", 2, 60)
    assert report.regimes == [(2, 52, "iii"), (53, 60, "ii")]
    assert report.discriminant == "q**2 - 54*q + 89"
    assert report.integer_roots == []
    assert report.verified is True
    assert report.proper_values()[0] == 53


def test_threshold_scan_for_sp_family(catalog):
    report = threshold_scan(catalog.get("Sp(1+q),U(1+q),Sp(1)xSp(q)"), "q", 2, 60)
    assert report.regimes == [(2, 2, "i"), (3, 45, "iii"), (46, 60, "ii")]
    # at q = 2 one quadratic root is the harmonic point, which the sign of the discriminant cannot see
    assert report.verified is False
    assert report.predicted[2] == "ii"
    assert all(report.predicted[q] == report.exhaustive[q] for q in range(3, 61))


def test_sp_family_at_q2_loses_an_orbit_to_the_harmonic_point(catalog):
    entry = catalog.get("Sp(1+q),U(1+q),Sp(1)xSp(q)")
    (result,) = classify_entry(entry, "group", {"q": 2})
    assert (result.category, result.expected) == ("i", "ii")
    assert result.deviates
    (proper,) = result.proper_roots
    (harmonic,) = result.harmonic_roots
    assert not math.isclose(proper.psi, harmonic.psi, abs_tol=1e-9)


def test_threshold_scan_rejects_unknown_parameter(catalog):
    with pytest.raises(ClassifierError, match="no parameter"):
        threshold_scan(catalog.get("SU(1+q),SO(1+q),S(U(1)xU(q))"), "p", 2, 5)


def test_discriminant_bounds_are_exact_surds(catalog):
    report = discriminant_bounds(catalog.get("SO(6),U(3),SO(3)xSO(3)"))
    assert report.symbols == ("m", "n")
    assert report.bounds == [QuadraticSurd.make(26, -8, 10), QuadraticSurd.make(26, 8, 10)]
    assert "26-8*sqrt(10)" in report.describe()


def test_rank_one_group_suite_covers_every_entry(catalog):
    results = classify_suite("rank1-group", catalog)
    assert len(results) == 17
    assert all(r.action == "group" for r in results)
    assert {r.family for r in results if r.category == "iii"} == {
        "SO(6),U(3),SO(3)xSO(3)",
        "SU(1+q),SO(1+q),S(U(1)xU(q))",
        "E6,SU(6).SU(2),F4",
    }


def test_classify_all_matches_the_suite(catalog):
    everything = classify_all("group", rank=1, catalog=catalog, max_workers=2)
    suite = classify_suite("rank1-group", catalog)
    assert {r.family: r.category for r in everything} == {r.family: r.category for r in suite}


def test_classify_all_takes_per_family_parameters(catalog):
    results = classify_all("group", rank=1, params={"SO(1+q),SO(q)": {"q": 3}}, catalog=catalog, max_workers=1)
    (sphere,) = [r for r in results if r.family == "SO(1+q),SO(q)"]
    assert sphere.params == {"q": 3}


@pytest.mark.parametrize("name,param,values,categories", [
    ("SU(1+q),SO(1+q),S(U(1)xU(q))", "q", (2, 30, 53), ("iii", "iii", "ii")),
    ("Sp(1+q),U(1+q),Sp(1)xSp(q)", "q", (3, 45, 46), ("iii", "iii", "ii")),
])
def test_rank_one_rows_at_three_parameter_points(catalog, name, param, values, categories):
    entry = catalog.get(name)
    found = tuple(classify_entry(entry, "group", {param: v})[0].category for v in values)
    assert found == categories


@pytest.mark.parametrize("name,points", [
    ("SO(2+2q),SO(2)xSO(2q),U(1+q)", ({"q": 2}, {"q": 3}, {"q": 5})),
    ("SU(1+b+c),S(U(1+b)xU(c)),S(U(1)xU(b+c))", ({"b": 1, "c": 2}, {"b": 2, "c": 3}, {"b": 3, "c": 2})),
])
def test_first_list_rows_keep_a_proper_orbit(catalog, name, points):
    entry = catalog.get(name)
    for params in points:
        (result,) = classify_entry(entry, "group", params)
        assert result.theorem_list == 1, params
        assert result.proper_roots


@pytest.mark.parametrize("params", [{"m": 1, "n": 1}, {"m": 2, "n": 1}, {"m": 1, "n": 3}])
def test_group_manifold_b2_rows_stay_harmonic_only(catalog, params):
    results = classify_entry(catalog.get("UxU,Δ(U),KxK[III-B2]"), "hermann", params)
    assert [r.category for r in results] == ["iii", "iii", "iii"]


@pytest.mark.slow
def test_at_most_one_harmonic_orbit_per_edge(catalog):
    results = classify_all("hermann", rank=2, catalog=catalog) + classify_all("group", rank=1, catalog=catalog)
    crowded = [(r.family, r.edge) for r in results if len(r.harmonic_roots) > 1]
    assert crowded == []
