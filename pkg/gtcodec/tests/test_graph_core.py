"""
Grid topology, Laplacians, the deterministic eigendecomposition, the GFT and
the dual graph.

file: gtcodec/tests/test_graph_core.py
"""

import numpy as np
import pytest

from gtcodec.errors import (
    DimensionError,
    DomainError,
    EmptyGraphError,
    InvalidParameterError,
    NumericalError,
)
from gtcodec.graph import (
    build_dual_graph,
    build_grid_incidence,
    build_laplacian,
    eigendecompose,
    get_dual_graph,
    get_grid_graph,
    gft_forward,
    gft_inverse,
    smoothness,
)


class TestGridIncidence:
    def test_two_by_two_edge_order(self):
        g = build_grid_incidence(2)
        assert g.edge_list == [(0, 1), (2, 3), (0, 2), (1, 3)]

    def test_incidence_signs(self):
        g = build_grid_incidence(3)
        for e, (i, j) in enumerate(g.edge_list):
            assert i < j
            assert g.incidence[i, e] == 1.0
            assert g.incidence[j, e] == -1.0
        np.testing.assert_array_equal(g.incidence.sum(axis=0), np.zeros(g.edge_count))

    @pytest.mark.parametrize("side", [1, 2, 4, 8, 16])
    def test_edge_count(self, side):
        g = build_grid_incidence(side)
        assert g.node_count == side * side
        assert g.edge_count == 2 * side * (side - 1)

    def test_rectangular_path(self):
        g = build_grid_incidence(1, 3)
        assert g.edge_list == [(0, 1), (1, 2)]

    def test_invalid_side(self):
        with pytest.raises(InvalidParameterError):
            build_grid_incidence(0)

    def test_arrays_are_read_only(self):
        g = build_grid_incidence(2)
        with pytest.raises(ValueError):
            g.incidence[0, 0] = 5.0


class TestLaplacian:
    def test_structure(self):
        rng = np.random.default_rng(0)
        g = build_grid_incidence(4)
        w = rng.uniform(0.1, 1.0, g.edge_count)
        l = build_laplacian(g, w)

        np.testing.assert_allclose(l, l.T)
        np.testing.assert_allclose(l.sum(axis=1), 0.0, atol=1e-12)
        assert np.linalg.eigvalsh(l).min() > -1e-10

        adjacency = np.zeros_like(l)
        for weight, (i, j) in zip(w, g.edge_list):
            adjacency[i, j] = adjacency[j, i] = weight
        np.testing.assert_allclose(l, np.diag(adjacency.sum(axis=1)) - adjacency, atol=1e-12)

    def test_smoothness_matches_quadratic_form(self):
        rng = np.random.default_rng(1)
        g = build_grid_incidence(4)
        w = rng.uniform(0.1, 1.0, g.edge_count)
        x = rng.normal(size=g.node_count)
        assert smoothness(g, w, x) == pytest.approx(x @ build_laplacian(g, w) @ x)

    def test_nonpositive_weight(self):
        g = build_grid_incidence(2)
        with pytest.raises(DomainError):
            build_laplacian(g, np.array([1.0, 0.0, 1.0, 1.0]))

    def test_wrong_length(self):
        g = build_grid_incidence(2)
        with pytest.raises(DimensionError):
            build_laplacian(g, np.ones(3))


def _random_laplacian(rng: np.random.Generator, side: int = 16) -> np.ndarray:
    g = get_grid_graph(side)
    return build_laplacian(g, rng.uniform(1e-3, 1.0, g.edge_count))


class TestEigendecompose:
    def _check(self, l: np.ndarray) -> None:
        s = eigendecompose(l)
        psi = s.eigenvectors
        n = l.shape[0]
        np.testing.assert_allclose(psi.T @ psi, np.eye(n), atol=1e-9)
        np.testing.assert_allclose(psi @ np.diag(s.eigenvalues) @ psi.T, l, atol=1e-9 * max(1.0, np.abs(l).max()))
        assert np.all(np.diff(s.eigenvalues) >= -1e-12)
        assert abs(s.eigenvalues[0]) <= 1e-9

        significant = np.abs(psi) > 1e-12
        first = np.argmax(significant, axis=0)
        assert np.all(psi[first, np.arange(n)] > 0)

    def test_random_laplacians(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            self._check(_random_laplacian(rng))

    @pytest.mark.slow
    def test_many_random_laplacians(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            self._check(_random_laplacian(rng))

    def test_deterministic(self):
        l = _random_laplacian(np.random.default_rng(4))
        first = eigendecompose(l)
        second = eigendecompose(l.copy())
        np.testing.assert_array_equal(first.eigenvectors, second.eigenvectors)
        np.testing.assert_array_equal(first.eigenvalues, second.eigenvalues)

    def test_repeated_eigenvalues_ordered(self):
        # the uniform grid has many repeated eigenvalues
        g = get_grid_graph(4)
        s = eigendecompose(build_laplacian(g, np.ones(g.edge_count)))
        values, psi = s.eigenvalues, s.eigenvectors
        for k in range(values.shape[0] - 1):
            if values[k + 1] - values[k] <= 1e-10 * values.max():
                a, b = psi[:, k], psi[:, k + 1]
                differing = np.flatnonzero(a != b)
                assert a[differing[0]] > b[differing[0]]

    def test_diagonal_matrix(self):
        s = eigendecompose(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_allclose(s.eigenvalues, [1.0, 2.0, 3.0])
        np.testing.assert_allclose(s.eigenvectors, np.eye(3)[:, [1, 2, 0]])

    def test_empty(self):
        assert eigendecompose(np.zeros((0, 0))).size == 0

    def test_non_square(self):
        with pytest.raises(DimensionError):
            eigendecompose(np.zeros((2, 3)))

    def test_non_symmetric(self):
        with pytest.raises(DomainError):
            eigendecompose(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_solver_failure(self, monkeypatch):
        def diverge(matrix):
            raise np.linalg.LinAlgError("Eigenvalues did not converge")

        monkeypatch.setattr(np.linalg, "eigh", diverge)
        with pytest.raises(NumericalError, match="did not converge"):
            eigendecompose(np.eye(3))


class TestGft:
    def test_round_trip_and_parseval(self):
        rng = np.random.default_rng(5)
        s = eigendecompose(_random_laplacian(rng, 8))
        x = rng.uniform(0, 255, 64)
        xhat = gft_forward(s, x)
        np.testing.assert_allclose(gft_inverse(s, xhat), x, atol=1e-9)
        assert np.sum(xhat ** 2) == pytest.approx(np.sum(x ** 2))

    def test_rate_identity(self):
        rng = np.random.default_rng(6)
        g = get_grid_graph(8)
        w = rng.uniform(0.05, 1.0, g.edge_count)
        s = eigendecompose(build_laplacian(g, w))
        x = rng.uniform(0, 255, 64)
        xhat = gft_forward(s, x)
        assert s.eigenvalues @ xhat ** 2 == pytest.approx(smoothness(g, w, x))

    def test_two_node_path(self):
        g = build_grid_incidence(1, 2)
        s = eigendecompose(build_laplacian(g, np.ones(1)))
        np.testing.assert_allclose(s.eigenvalues, [0.0, 2.0], atol=1e-12)
        xhat = gft_forward(s, np.array([0.0, 1.0]))
        assert s.eigenvalues @ xhat ** 2 == pytest.approx(1.0)

    def test_constant_signal_is_dc(self):
        g = get_grid_graph(4)
        s = eigendecompose(build_laplacian(g, np.ones(g.edge_count)))
        xhat = gft_forward(s, np.full(16, 7.0))
        assert xhat[0] == pytest.approx(28.0)
        np.testing.assert_allclose(xhat[1:], 0.0, atol=1e-9)

    def test_length_mismatch(self):
        s = eigendecompose(np.eye(3))
        with pytest.raises(DimensionError):
            gft_forward(s, np.ones(4))


class TestDualGraph:
    def test_path(self, path3):
        _, d = path3
        np.testing.assert_array_equal(d.adjacency, [[0.0, 1.0], [1.0, 0.0]])

    def test_square_is_a_cycle(self, square2):
        _, d = square2
        np.testing.assert_array_equal(d.degrees, [2.0, 2.0, 2.0, 2.0])
        np.testing.assert_array_equal(d.adjacency, d.adjacency.T)

    def test_block_dual(self):
        g = get_grid_graph(16)
        d = get_dual_graph(g)
        assert d.node_count == 480
        assert d.degrees.max() <= 6
        assert np.all(np.diag(d.adjacency) == 0)
        np.testing.assert_allclose(d.laplacian.sum(axis=1), 0.0)

    def test_shared_endpoint(self):
        g = build_grid_incidence(3)
        d = build_dual_graph(g)
        for a, (i, j) in enumerate(g.edge_list):
            for b, (k, l) in enumerate(g.edge_list):
                shared = a != b and len({i, j} & {k, l}) == 1
                assert d.adjacency[a, b] == float(shared)

    def test_first_dual_vector_is_constant(self, square2):
        _, d = square2
        np.testing.assert_allclose(d.spectrum.eigenvectors[:, 0], 0.5)

    def test_single_pixel(self):
        with pytest.raises(EmptyGraphError):
            build_dual_graph(build_grid_incidence(1))

    def test_cached(self):
        g = get_grid_graph(4)
        assert get_dual_graph(g) is get_dual_graph(g)
        assert get_grid_graph(4) is g
