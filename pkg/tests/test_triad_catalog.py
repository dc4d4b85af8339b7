"""Tests for catalog loading, lookup and triad validation"""

import json

import pytest

from triad_catalog import (
    CatalogError,
    RootVector,
    TriadCatalog,
    normalize_label,
    enumerate_families,
    normalize_name,
    validate,
)


def _single_entry(**overrides):
    entry = {
        "name": "toy", "type": "X", "rank": 1, "kind": "isotropy",
        "gram": [["1"]], "sigma_plus": [[1]], "m": {"0": "1"},
    }
    entry.update(overrides)
    return {"types": {}, "entries": [entry]}


def test_packaged_catalog_loads(catalog):
    assert len(catalog) == 60
    assert catalog.source.endswith("triad_catalog.json")


def test_every_packaged_entry_validates(catalog):
    problems = {entry.name: validate(entry.instantiate()) for entry in catalog}
    assert {name: p for name, p in problems.items() if p} == {}


def test_name_and_label_normalization(catalog):
    assert normalize_label("I-BC₂-B₂") == normalize_label("i-bc2-b2")
    assert normalize_name("SU(3) × SU(3), SU(3)") == normalize_name("SU(3)xSU(3),SU(3)")
    assert catalog.get("SU(3) × SU(3), SU(3)").name == "SU(3)xSU(3),SU(3)"


def test_unknown_name_raises(catalog):
    with pytest.raises(CatalogError, match="unknown triad"):
        catalog.get("SU(99),nothing")


def test_default_parameters_satisfy_constraints(catalog):
    entry = catalog.get("SO(2+a+b),SO(2+a)xSO(b),SO(2)xSO(a+b)")
    assert entry.default_params() == {"a": 1, "b": 3}
    triad = entry.instantiate()
    assert sorted(int(v) for v in triad.m.values()) == [1, 1, 1, 1]


def test_constraint_violation_is_reported(catalog):
    entry = catalog.get("SO(2+a+b),SO(2+a)xSO(b),SO(2)xSO(a+b)")
    with pytest.raises(CatalogError, match="constraint 2<b violated"):
        entry.instantiate({"a": 1, "b": 2})
    with pytest.raises(CatalogError, match="no parameters"):
        entry.instantiate({"z": 1})


def test_multiplicity_tuple_follows_table_columns(catalog):
    entry = catalog.get("SO(4+n),SO(2)xSO(2+n)")
    assert entry.multiplicity_tuple() == "(1, 1)"
    assert entry.multiplicity_tuple({"n": 3}) == "(3, 1)"
    assert entry.codims({"n": 3}) == ["5", "3", "3"]


def test_simple_system_and_top_root(catalog):
    a2 = catalog.lookup("SU(3),SO(3)")
    assert a2.simple_system() == (RootVector.of([1, 0]), RootVector.of([0, 1]))
    assert a2.top_root() == RootVector.of([1, 1])

    c2 = catalog.lookup("Sp(2),U(2)")
    assert c2.top_root() == RootVector.of([2, 0])

    ib2 = catalog.lookup("SO(2+a+b),SO(2+a)xSO(b),SO(2)xSO(a+b)")
    assert ib2.top_root() == RootVector.of([1, 0])
    assert ib2.height(RootVector.of([1, 1])) == 3


def test_symbolic_instantiation_keeps_parameters(catalog):
    entry = catalog.get("SU(1+q),SO(1+q),S(U(1)xU(q))")
    triad = entry.instantiate(symbolic=["q"])
    assert triad.is_symbolic
    assert [str(s) for s in triad.symbols] == ["q"]


def test_unknown_entry_field_is_rejected():
    with pytest.raises(CatalogError, match="unknown catalog fields"):
        TriadCatalog.from_dict(_single_entry(colour="red"))


def test_duplicate_names_are_rejected():
    data = _single_entry()
    data["entries"].append(dict(data["entries"][0], name="TOY"))
    with pytest.raises(CatalogError, match="duplicate"):
        TriadCatalog.from_dict(data)


def test_validation_flags_integrality():
    data = _single_entry(sigma_plus=[[1], [3]], m={"0": "1", "1": "1"})
    triad = TriadCatalog.from_dict(data).lookup("toy")
    assert any(v.startswith("integrality") for v in validate(triad))


def test_validation_flags_nonpositive_multiplicity():
    triad = TriadCatalog.from_dict(_single_entry(m={"0": "0"})).lookup("toy")
    assert any(v.startswith("positivity") for v in validate(triad))


def test_validation_flags_isotropy_with_w():
    data = _single_entry(w_plus=[[1]], n={"0": "1"})
    triad = TriadCatalog.from_dict(data).lookup("toy")
    assert "isotropy pair must have empty W" in validate(triad)


def test_missing_and_malformed_files(tmp_path):
    with pytest.raises(CatalogError, match="not found"):
        TriadCatalog.from_file(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(CatalogError, match="not valid JSON"):
        TriadCatalog.from_file(bad)


def test_round_trip_through_a_file(tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(json.dumps(_single_entry()), encoding="utf-8")
    catalog = TriadCatalog.from_file(path)
    assert [e.name for e in catalog] == ["toy"]
    assert validate(catalog.lookup("toy")) == []


def test_enumerate_families_filters(catalog):
    assert len(enumerate_families(rank=1, catalog=catalog)) == 17
    assert len(enumerate_families(rank=2, catalog=catalog)) == 43
    a2 = enumerate_families(triad_type="A₂", catalog=catalog)
    assert {e.name for e in a2} == {"SU(3),SO(3)", "SU(3)xSU(3),SU(3)", "SU(6),Sp(3)", "E6,F4"}
    assert all(e.kind == "hermann" for e in enumerate_families(kind="hermann", catalog=catalog))


def test_validation_flags_odd_pairing(catalog):
    with open(catalog.source, encoding="utf-8") as f:
        data = json.load(f)
    data["types"]["II-BC₂"]["n"]["0"] = "m2+1"
    triad = TriadCatalog.from_dict(data).lookup("SU(2+a),SO(2+a),S(U(2)xU(a))")
    problems = validate(triad)
    assert any(p.startswith("odd-pairing rule: m(e1-e2) must equal n(e1-e2)") for p in problems)


def test_packaged_odd_pairings_hold(catalog):
    triad = catalog.lookup("SU(2+a),SO(2+a),S(U(2)xU(a))")
    assert not [p for p in validate(triad) if p.startswith("odd-pairing")]
