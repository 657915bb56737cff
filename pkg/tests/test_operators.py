import math

import numpy as np
import pytest
import scipy.io
from hypothesis import given, strategies as st

from magbilap import (Amplitudes, InputError, MagneticGraph, MarginError, Potential,
                      apply_bilaplacian, apply_H, apply_laplacian, apply_P,
                      assemble_truncation, build_example, inner, norm, write_matrix_market)

from conftest import path_graph


def _oriented(g):
    """Both orientations of every undirected edge, from the edge table."""
    for x, y, b, t in zip(g.edge_u, g.edge_v, g.edge_b, g.edge_theta):
        yield x, y, b, np.exp(1j * t)
        yield y, x, b, np.exp(-1j * t)


def dense_laplacian(g, magnetic=True):
    n = g.n_vertices
    L = np.zeros((n, n), dtype=complex)
    for x, y, b, ph in _oriented(g):
        L[x, x] += b / g.mu[x]
        L[x, y] -= b * (ph if magnetic else 1.0) / g.mu[x]
    return L


def dense_P(g, psi, u):
    out = np.zeros(g.n_vertices, dtype=complex)
    for x, y, b, ph in _oriented(g):
        out[x] += b * (psi[x] - psi[y]) * (u[x] - ph * u[y]) / g.mu[x]
    return out


def interior(g, depth, rng):
    """Random complex amplitudes vanishing on the last ``depth`` levels."""
    u = rng.normal(size=g.n_vertices) + 1j * rng.normal(size=g.n_vertices)
    u[g.level > g.level.max() - depth] = 0
    return u


class TestStencils:
    def test_laplacian_delta_one(self):
        g = path_graph(5, frontier=True)
        out = apply_laplacian(g, Amplitudes.delta(g, "1"))
        assert np.allclose(out, [-1, 2, -1, 0, 0])

    def test_constant_on_interior(self):
        g = path_graph(6, frontier=True)
        u = np.ones(6)
        u[-1] = 0
        out = apply_laplacian(g, u)
        assert np.all(out[1:4] == 0)

    def test_single_edge_phase_pi(self):
        g = MagneticGraph(["x", "y"], np.ones(2), [0], [1], [1.0], [math.pi])
        out = apply_laplacian(g, Amplitudes.delta(g, "y"))
        assert out[0] == pytest.approx(1.0)

    def test_bilaplacian_delta_zero(self):
        g = path_graph(6, frontier=True)
        out = apply_bilaplacian(g, Amplitudes.delta(g, "0"))
        assert np.allclose(out, [2, -3, 1, 0, 0, 0])

    def test_two_pi_equivalent_phases(self, rng):
        g0 = path_graph(8, frontier=True)
        g1 = path_graph(8, theta=np.full(7, math.pi), frontier=True)
        g2 = path_graph(8, theta=np.full(7, -math.pi + 1e-300), frontier=True)
        u = interior(g0, 2, rng)
        assert np.allclose(apply_bilaplacian(g1, u), apply_bilaplacian(g2, u))
        assert np.allclose(apply_bilaplacian(g0, u), apply_bilaplacian(g0, u.copy()))

    def test_H_on_half_line(self):
        f = build_example("half_line_unit")
        g = f.generate(6)
        W = f.potential_model
        assert np.allclose(apply_H(g, W, Amplitudes.delta(g, "0"))[:3], [2, -3, 1])
        assert apply_H(g, W, Amplitudes.delta(g, "1"))[1] == pytest.approx(5.0)

    def test_H_zero_potential_is_bilaplacian(self, rng):
        g = build_example("radial_tree", kappa=0.5, phase="random").generate(6)
        u = interior(g, 2, rng)
        assert np.array_equal(apply_H(g, Potential.zero(), u), apply_bilaplacian(g, u))

    def test_P_hand_oracle(self):
        g = path_graph(5, frontier=True)
        d0 = Amplitudes.delta(g, "0")
        assert np.allclose(apply_P(g, d0, d0), [1, 1, 0, 0, 0])

    def test_P_constant_psi(self, rng):
        g = path_graph(7, frontier=True)
        u = interior(g, 1, rng)
        assert np.all(apply_P(g, np.full(7, 0.3), u) == 0)

    def test_P_complex_psi_rejected(self):
        g = path_graph(4, frontier=True)
        with pytest.raises(InputError):
            apply_P(g, np.array([1j, 0, 0, 0]), np.zeros(4))

    def test_margin_violation(self):
        g = path_graph(4, frontier=True)
        with pytest.raises(MarginError, match="margin violation"):
            apply_laplacian(g, Amplitudes.delta(g, "3"))
        with pytest.raises(MarginError):
            apply_bilaplacian(g, Amplitudes.delta(g, "2"))

    @pytest.mark.parametrize("kappa", [0.0, 0.5, 1.0])
    def test_against_dense_oracle(self, kappa, rng):
        g = build_example("radial_tree", kappa=kappa, phase="random", phase_seed=7).generate(5)
        u = interior(g, 1, rng)
        psi = rng.normal(size=g.n_vertices)
        assert np.allclose(apply_laplacian(g, u), dense_laplacian(g) @ u)
        assert np.allclose(apply_laplacian(g, u.real, magnetic=False),
                           dense_laplacian(g, False) @ u.real)
        assert np.allclose(apply_P(g, psi, u), dense_P(g, psi, u))


class TestInner:
    def test_weighted(self):
        g = path_graph(3, mu=np.array([3.0, 1.0, 1.0]))
        d0, d1 = Amplitudes.delta(g, "0"), Amplitudes.delta(g, "1")
        assert inner(g, d0, d0) == 3
        assert inner(g, d0, d1) == 0
        assert norm(g, d0) == pytest.approx(math.sqrt(3))

    def test_conjugate_linear_second_slot(self, rng):
        g = path_graph(4)
        u, v = rng.normal(size=4) + 1j, rng.normal(size=4) - 2j
        assert inner(g, u, 1j * v) == pytest.approx(-1j * inner(g, u, v))
        assert inner(g, v, u) == pytest.approx(np.conj(inner(g, u, v)))


class TestTruncation:
    def test_dirichlet_path(self):
        f = build_example("half_line_unit")
        A = assemble_truncation(f, Potential.zero(), 4).toarray()
        assert A.shape == (5, 5)
        assert np.allclose(A.imag, 0)
        assert np.array_equal(A, A.conj().T)
        assert np.allclose(A[2], [1, -4, 6, -4, 1])
        assert np.allclose(A[0], [2, -3, 1, 0, 0])
        assert np.all(np.triu(A, 3) == 0)

    @pytest.mark.parametrize("name, kw", [("half_line_sqrt", {}),
                                          ("radial_tree", {"kappa": 0.5, "phase": "random"})])
    def test_dirichlet_matvec_matches_operator(self, name, kw, rng):
        f = build_example(name, **kw)
        N = 7
        op = assemble_truncation(f, f.potential_model, N)
        assert op.hermitian
        A = op.toarray()
        assert np.array_equal(A, A.conj().T)
        g = f.generate(N + 1)
        cols = np.flatnonzero(g.level <= N)
        u = interior(g, 3, rng)
        want = apply_H(g, f.potential_model, u)[cols]
        assert np.allclose(op.apply(u[cols]), want, atol=1e-10)

    def test_interior_rows_exact(self, rng):
        f = build_example("radial_tree", kappa=1.0, phase="random")
        N = 6
        op = assemble_truncation(f, f.potential_model, N, boundary="interior_rows")
        g = f.generate(N + 2)
        cols = np.flatnonzero(g.level <= N)
        rows = np.flatnonzero(g.level <= N - 2)
        assert op.shape == (rows.size, cols.size)
        u = np.zeros(g.n_vertices, dtype=complex)
        u[cols] = rng.normal(size=cols.size) + 1j * rng.normal(size=cols.size)
        want = apply_H(g, f.potential_model, u)[rows]
        assert np.allclose(op.apply(u[cols]), want, atol=1e-10)

    def test_bad_arguments(self):
        f = build_example("half_line_unit")
        with pytest.raises(InputError):
            assemble_truncation(f, Potential.zero(), 3)
        with pytest.raises(InputError):
            assemble_truncation(f, Potential.zero(), 5, boundary="neumann")

    def test_matrix_market_round_trip(self, tmp_path):
        f = build_example("radial_tree", kappa=0.5, phase="random")
        op = assemble_truncation(f, f.potential_model, 6)
        path = tmp_path / "h.mtx"
        side = write_matrix_market(op, str(path))
        assert path.read_text().splitlines()[0] == "%%MatrixMarket matrix coordinate complex general"
        M = scipy.io.mmread(str(path)).toarray()
        assert np.array_equal(M, op.toarray())
        import json
        meta = json.loads(open(side).read())
        assert meta["rows"] == list(op.row_ids) and meta["boundary"] == "dirichlet"


class TestProperties:
    @given(st.integers(0, 2**31 - 1), st.sampled_from([0.0, 0.5, 1.0]))
    def test_product_rule(self, seed, kappa):
        rng = np.random.default_rng(seed)
        g = build_example("radial_tree", kappa=kappa, phase="random",
                          phase_seed=seed % 97).generate(5)
        u = interior(g, 1, rng)
        psi = rng.normal(size=g.n_vertices)
        psi[g.level == 5] = 0
        lhs = apply_laplacian(g, psi * u)
        rhs = (psi * apply_laplacian(g, u) - apply_P(g, psi, u)
               + u * apply_laplacian(g, psi, magnetic=False))
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(lhs))

    @given(st.integers(0, 2**31 - 1))
    def test_green_and_positivity(self, seed):
        rng = np.random.default_rng(seed)
        g = build_example("radial_tree", kappa=0.5, phase="random",
                          phase_seed=seed % 89).generate(6)
        u, v = interior(g, 2, rng), interior(g, 2, rng)
        Lu, Lv = apply_laplacian(g, u), apply_laplacian(g, v)
        scale = norm(g, Lu) * norm(g, Lv) + norm(g, u) * norm(g, v)
        assert abs(inner(g, Lu, v) - inner(g, u, Lv)) <= 1e-12 * scale
        assert abs(inner(g, apply_bilaplacian(g, u), v) - inner(g, Lu, Lv)) <= 1e-12 * (
            norm(g, apply_bilaplacian(g, u)) * norm(g, v) + norm(g, Lu) * norm(g, Lv))
        form = inner(g, Lu, u)
        assert form.real >= -1e-12 * norm(g, u) ** 2
        assert abs(form.imag) <= 1e-12 * max(1.0, abs(form))

    @given(st.integers(0, 2**31 - 1), st.complex_numbers(max_magnitude=10, allow_nan=False),
           st.floats(-5, 5))
    def test_linearity(self, seed, a, t):
        rng = np.random.default_rng(seed)
        g = build_example("radial_tree", kappa=1.0, phase="random").generate(5)
        u, v = interior(g, 2, rng), interior(g, 2, rng)
        psi, phi = rng.normal(size=g.n_vertices), rng.normal(size=g.n_vertices)
        for op in (apply_laplacian, apply_bilaplacian):
            assert np.allclose(op(g, a * u + v), a * op(g, u) + op(g, v))
        assert np.allclose(apply_P(g, t * psi + phi, u),
                           t * apply_P(g, psi, u) + apply_P(g, phi, u))
        assert np.allclose(apply_P(g, psi, a * u), a * apply_P(g, psi, u))

    def test_real_output_without_phase(self, rng):
        g = build_example("half_line_unit").generate(8)
        u = rng.normal(size=g.n_vertices)
        u[-1] = 0
        out = apply_laplacian(g, u, magnetic=False)
        assert not np.iscomplexobj(out)
