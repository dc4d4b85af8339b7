"""Shared fixtures for the classifier tests"""

import pytest

from numeric_oracle import NumericProfile
from orbit_strata import find_edge, parametrize_edge
from triad_catalog import load_catalog


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def fast_profile():
    """Coarser grid than the default; every test family has well separated roots"""
    return NumericProfile(grid_n=4000)


@pytest.fixture
def su3_so3(catalog):
    return catalog.lookup("SU(3),SO(3)")


@pytest.fixture
def sp2_u2(catalog):
    return catalog.lookup("Sp(2),U(2)")


@pytest.fixture
def edge_of():
    def _edge(triad, label):
        return parametrize_edge(triad, find_edge(triad, str(label)))
    return _edge
