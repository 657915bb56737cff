import numpy as np
import pytest
from hypothesis import given, strategies as st

from magbilap import (CutoffFamily, HorizonError, InputError, build_example,
                      check_cutoff_properties, chi_values)

FAMILIES = {
    "half_line_unit": build_example("half_line_unit"),
    "half_line_sqrt": build_example("half_line_sqrt"),
    "tree_k0": build_example("radial_tree", kappa=0),
    "tree_k0.5": build_example("radial_tree", kappa=0.5),
    "tree_k1": build_example("radial_tree", kappa=1),
}


def test_formula_values():
    assert chi_values(3, 2) == 0.5
    assert chi_values(2, 2) == 1.0 and chi_values(4, 2) == 0.0
    assert chi_values(0, 1) == 1.0


def test_half_line_profiles():
    cf = CutoffFamily(FAMILIES["half_line_unit"])
    assert np.array_equal(np.real(cf.as_amplitudes(1, horizon=4).values), [1, 1, 0, 0, 0])
    assert np.array_equal(np.real(cf.as_amplitudes(2, horizon=5).values), [1, 1, 1, 0.5, 0, 0])
    assert cf.chi(2, "3") == 0.5


def test_tree_support():
    cf = CutoffFamily(FAMILIES["tree_k0"])
    a = cf.as_amplitudes(1)
    g = a.graph
    assert set(np.flatnonzero(a.values)) == set(np.flatnonzero(g.level <= 1))


def test_argument_errors():
    cf = CutoffFamily(FAMILIES["half_line_unit"])
    with pytest.raises(HorizonError):
        cf.as_amplitudes(3, horizon=5)
    with pytest.raises(InputError):
        chi_values(1, 0)
    with pytest.raises(InputError):
        cf.chi(1.5, "0")


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_properties_hold(name):
    f = FAMILIES[name]
    top = min(20, (f.max_horizon(64) - 1) // 2)
    assert top >= 1
    for n in range(1, top + 1):
        rep = check_cutoff_properties(f, n)
        assert rep.ok, rep.violations[:3]
        assert rep.checked_vertices == f.generate(2 * n + 1).n_vertices


def test_gradient_attains_one_over_n():
    g = FAMILIES["half_line_unit"].generate(10)
    for n in (2, 3, 4):
        chi = chi_values(g.level, n)
        steps = np.abs(np.diff(chi))
        assert steps.max() == pytest.approx(1 / n, rel=1e-15)
        assert np.all(steps <= 1 / n + 1e-15)


def test_report_json():
    rep = check_cutoff_properties(FAMILIES["tree_k1"], 2)
    doc = rep.to_json()
    assert doc["n"] == 2 and doc["violations"] == []
    assert doc["checked_edges"] == 2 * (doc["checked_vertices"] - 1)


@given(st.integers(1, 40), st.integers(0, 100))
def test_range_and_ratio(n, r):
    c = chi_values(r, n)
    assert 0 <= c <= 1
    # chi(y) <= 2 chi(x) for a neighbour y, whenever chi(x) > 0
    if c > 0:
        for rr in (max(r - 1, 0), r + 1):
            assert chi_values(rr, n) <= 2 * c
