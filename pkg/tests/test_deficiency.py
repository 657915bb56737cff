import json

import numpy as np
import pytest

from magbilap import (InputError, Potential, ProbeReport, build_example, consistency_probe,
                      rectangular_residual, shoot, shooting_probe)
from magbilap.deficiency import (CONCLUSIONS, ShootingConfig, _decreasing_collapse,
                                 dirichlet_floor, shoot_from)
from magbilap.operators import assemble_truncation
from magbilap.svd import min_singular_value


@pytest.fixture(scope="module")
def unit():
    return build_example("half_line_unit")


def test_basis_solutions_satisfy_equation(unit):
    W = unit.potential_model
    for sign in (1, -1):
        sols = shoot(unit, W, nu=1.0, sign=sign, horizon=120)
        assert [s.basis_index for s in sols] == ["e1", "e2", "min_growth"]
        for s in sols:
            assert s.residual <= 1e-8
            assert s.growth_class == "divergent"


def test_equation_against_operator(unit):
    # rescaled values satisfy (H u)(k) = i nu u(k) away from the far end
    W = unit.potential_model
    sol = shoot_from(unit, W, 1.0, 1, 30, (0.3, -0.7j))
    u = sol.values
    g = unit.generate(34)
    from magbilap import apply_H
    full = np.zeros(g.n_vertices, dtype=complex)
    full[:31] = u
    Hu = apply_H(g, W, full)
    assert np.allclose(Hu[:29], 1j * u[:29], rtol=0, atol=1e-8 * np.abs(u).max())


def test_linearity_and_dimension(unit):
    W = unit.potential_model
    h = 40
    e1 = shoot_from(unit, W, 2.0, 1, h, (1, 0)).values
    e2 = shoot_from(unit, W, 2.0, 1, h, (0, 1)).values
    a, b = 0.4 - 1.1j, 2.0 + 0.5j
    mix = shoot_from(unit, W, 2.0, 1, h, (a, b)).values
    assert np.allclose(mix, a * e1 + b * e2, rtol=1e-10, atol=0)
    # two independent solutions and nothing more
    M = np.vstack([e1, e2]).T
    assert np.linalg.matrix_rank(M[:4]) == 2
    coef = np.linalg.lstsq(M[:2], mix[:2], rcond=None)[0]
    assert np.allclose(M @ coef, mix, rtol=1e-10)


def test_log_scaling_survives_overflow(unit):
    sol = shooting_probe(unit, unit.potential_model, 1.0, horizon=200)
    ends = [s["log10_partial_norm_end"] for d in sol.diagnostics for s in d["solutions"]]
    assert min(ends) > 300
    assert sol.conclusion == "consistent_with_delta_zero"


def test_csv_columns(unit):
    sol = shoot(unit, unit.potential_model, horizon=20)[0]
    lines = sol.to_csv().splitlines()
    assert lines[0] == "k,abs_u,partial_norm,log10_abs_u,log10_partial_norm"
    assert len(lines) == 22
    assert np.all(np.diff(sol.log_partial_norms) >= 0)


def test_classification_thresholds(unit):
    # an absurd divergence factor turns every solution undetermined
    cfg = ShootingConfig(divergent_factor=1e300, decay_ratio=1e-300)
    sol = shoot(unit, unit.potential_model, horizon=40, config=cfg)
    assert {s.growth_class for s in sol} == {"undetermined"}
    rep = shooting_probe(unit, unit.potential_model, horizon=40, config=cfg)
    assert rep.conclusion == "inconclusive"


def test_shooting_errors(unit):
    tree = build_example("radial_tree", kappa=0.5)
    with pytest.raises(InputError, match="path"):
        shoot(tree, tree.potential_model)
    with pytest.raises(InputError):
        shoot(unit, unit.potential_model, horizon=9)
    with pytest.raises(InputError):
        shoot(unit, unit.potential_model, nu=0.0)
    with pytest.raises(InputError):
        shoot(unit, unit.potential_model, sign=2)


def test_rectangular_probe(unit):
    rep = rectangular_residual(unit, unit.potential_model, 1.0, horizons=(10, 20, 30))
    assert rep.conclusion == "consistent_with_delta_zero"
    s = [d["s_N"] for d in rep.diagnostics]
    assert min(s) > 0.4
    for d in rep.diagnostics:
        assert d["rows"] == d["N"] - 1 and d["columns"] == d["N"] + 1
        # the plain rectangular operator has sigma_min of order nu
        assert d["sigma_min_interior_rows"] >= 0.9


def test_rectangular_on_tree():
    tree = build_example("radial_tree", kappa=0.5, phase="random")
    rep = rectangular_residual(tree, tree.potential_model, 1.0, horizons=(6, 7, 8))
    assert rep.conclusion in CONCLUSIONS
    assert [d["columns"] for d in rep.diagnostics] == [tree.size(h) for h in (6, 7, 8)]


def test_rectangular_errors(unit):
    W = unit.potential_model
    with pytest.raises(InputError):
        rectangular_residual(unit, W, horizons=(5, 10))
    with pytest.raises(InputError):
        rectangular_residual(unit, W, horizons=(20, 10))
    tree = build_example("radial_tree", kappa=1.0)
    with pytest.raises(InputError, match="cap"):
        rectangular_residual(tree, tree.potential_model, horizons=(8,), max_columns=100)


def test_residual_of_compact_function_is_exact(unit):
    # once the ball holds the stencil, ||Aug_N w|| is the full-graph residual
    from magbilap import apply_H
    from magbilap.deficiency import _augmented
    W = unit.potential_model
    w = np.zeros(41, dtype=complex)
    w[:8] = 2.0 ** -np.arange(8)
    g = unit.generate(44)
    full = np.zeros(g.n_vertices, dtype=complex)
    full[:41] = w
    exact = np.linalg.norm(apply_H(g, W, full) - 1j * full)
    for N in (12, 20, 40):
        _, Aug = _augmented(unit, W, 1.0, 1, N, 4000)
        assert np.linalg.norm(Aug @ w[:N + 1]) == pytest.approx(exact, rel=1e-13)


def test_dirichlet_floor(unit):
    W = unit.potential_model
    for nu in (0.5, 1.0, 2.0):
        assert dirichlet_floor(unit, W, nu, 20) >= nu * (1 - 1e-12)
    assert dirichlet_floor(unit, W, 2.0, 20) >= 2 * (1 - 1e-12) * 1.0
    A = assemble_truncation(unit, W, 20).toarray()
    ref = np.linalg.svd(A - 1j * np.eye(A.shape[0]), compute_uv=False)[-1]
    assert min_singular_value(A - 1j * np.eye(A.shape[0])) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("seq, expected", [
    ([1.0, 0.9, 0.8, 0.3], True),
    ([1.0, 0.9, 0.8, 0.7], False),
    ([1.0, 0.2], False),
    ([1.0, 1.1, 0.5, 0.2], True),
    ([0.5, 0.52, 0.53, 0.53], False),
])
def test_decreasing_collapse(seq, expected):
    assert _decreasing_collapse(seq, 3, 0.5) is expected


def test_report_vocabulary():
    with pytest.raises(ValueError):
        ProbeReport("shooting", 1.0, [10], [], "proved")
    rep = ProbeReport("shooting", 1.0, [10], [], "inconclusive")
    assert "neither proves nor disproves" in json.loads(rep.dumps())["caveat"]


def test_consistency_defaults_to_rectangular_on_trees():
    tree = build_example("radial_tree", kappa=0.0, alpha=1.0)
    rep = consistency_probe(tree, tree.potential_model, nus=(1.0,), horizons=(6, 7, 8))
    assert {r.method for r in rep.reports} == {"rectangular_residual"}
    assert len(rep.reports) == 2
