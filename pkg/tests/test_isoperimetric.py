"""
Tests for the quadrangle search and the random bounds sweep
"""
import math

import numpy as np
import pytest

from oval.core.config import Settings
from oval.core.exceptions import ConsistencyError, InvalidInputError
from oval.schemas.moduli import QuadrangleCandidate
from oval.services.isoperimetric_service import IsoperimetricService
from oval.services.moduli_service import KITE_U, KITE_V
from oval.utils.random_polygons import random_convex_polygon
from tests.conftest import KITE_QUOTIENT, SQUARE_QUOTIENT


@pytest.fixture(scope="module")
def quick_search():
    return IsoperimetricService(Settings(OVAL_THREADS=1, SEARCH_ITERATIONS=150))


class TestQuadrangles:
    """Normalized quadrangles with [B, E] as a diameter"""

    def test_square_candidate(self, isoperimetric):
        q = isoperimetric.quadrangle_quotient(QuadrangleCandidate(u0=0.0, u=1.0, v0=0.0, v=1.0))
        assert q == pytest.approx(SQUARE_QUOTIENT, abs=1e-8)

    def test_magic_kite_candidate(self, isoperimetric):
        q = isoperimetric.quadrangle_quotient(QuadrangleCandidate(u0=0.0, u=KITE_U, v0=0.0, v=KITE_V))
        assert q == pytest.approx(KITE_QUOTIENT, abs=1e-8)

    def test_vertex_order(self):
        xy = IsoperimetricService.quadrangle_vertices(QuadrangleCandidate(u0=0.1, u=0.9, v0=-0.2, v=0.4))
        np.testing.assert_allclose(xy, [[-1.0, 0.0], [-0.2, -0.4], [1.0, 0.0], [0.1, 0.9]])

    @pytest.mark.parametrize(
        "u0, u, v0, v",
        [
            (0.0, 0.0, 0.0, 0.5),
            (0.0, 1.0, 0.0, -0.2),
            (0.0, 1.9, 0.0, 0.5),
            (1.5, 0.5, 0.0, 0.5),
        ],
    )
    def test_inadmissible(self, isoperimetric, u0, u, v0, v):
        assert isoperimetric.quadrangle_quotient(QuadrangleCandidate(u0=u0, u=u, v0=v0, v=v)) is None

    def test_edge_diameter_layout(self, isoperimetric):
        c = QuadrangleCandidate(u0=0.5, u=0.8, v0=-0.5, v=0.8)
        polygon = isoperimetric.quadrangle_polygon(c, edge_diameter=True)
        assert polygon is not None
        assert polygon.diameter == pytest.approx(2.0)
        assert polygon.perimeter == pytest.approx(2.0 + 1.0 + 2.0 * math.hypot(0.5, 0.8))


class TestQuadrangleSearch:
    """Multi-restart pattern search"""

    def test_finds_quotient_below_square(self, quick_search):
        result = quick_search.quadrangle_search(seed=11, restarts=2)
        assert KITE_QUOTIENT - 1e-4 <= result.best_quotient < SQUARE_QUOTIENT
        assert result.best_quotient == min(result.restart_quotients)
        assert result.best_polygon.perimeter / result.best_quotient == pytest.approx(
            quick_search.sections.delta_value(result.best_polygon), rel=1e-9
        )

    def test_deterministic_for_seed(self, quick_search):
        first = quick_search.quadrangle_search(seed=5, restarts=1)
        second = quick_search.quadrangle_search(seed=5, restarts=1)
        assert first.best_quotient == second.best_quotient
        assert first.best == second.best

    def test_edge_diameter(self, quick_search):
        result = quick_search.quadrangle_search(seed=7, restarts=1, edge_diameter=True)
        assert result.edge_diameter
        assert result.best_quotient >= KITE_QUOTIENT - 1e-4

    def test_restarts_floor(self, quick_search):
        with pytest.raises(InvalidInputError):
            quick_search.quadrangle_search(restarts=0)

    def test_quotient_below_kite_raises(self, monkeypatch):
        service = IsoperimetricService(Settings(OVAL_THREADS=1))
        monkeypatch.setattr(service, "quadrangle_quotient", lambda c, edge_diameter=False: 3.0)
        with pytest.raises(ConsistencyError) as exc:
            service.quadrangle_search(seed=1, restarts=1, iterations=5)
        assert exc.value.exit_code == 6
        assert exc.value.details["quotient"] == 3.0


class TestBoundsSweep:
    """pi delta <= L <= 2 pi delta on random polygons"""

    def test_sweep(self, isoperimetric):
        result = isoperimetric.bounds_sweep(300, seed=3)
        assert result.conjecture_violations == 0
        assert math.pi <= result.min_quotient <= result.max_quotient <= 2.0 * math.pi
        assert result.count == 300
        assert result.argmin_polygon is not None

    def test_sweep_is_reproducible(self, isoperimetric):
        a = isoperimetric.bounds_sweep(40, seed=9, n_min=5, n_max=8)
        b = isoperimetric.bounds_sweep(40, seed=9, n_min=5, n_max=8)
        assert a.min_quotient == b.min_quotient
        assert a.max_quotient == b.max_quotient

    def test_count_floor(self, isoperimetric):
        with pytest.raises(InvalidInputError):
            isoperimetric.bounds_sweep(0, seed=1)


class TestRandomPolygons:
    """Random strictly convex polygons"""

    def test_vertex_count_in_range(self, geometry):
        rng = np.random.default_rng(1)
        for _ in range(50):
            polygon = random_convex_polygon(rng, 4, 7, geometry)
            assert 4 <= polygon.n <= 7
            assert geometry.signed_area(polygon.xy) > 0.0

    @pytest.mark.parametrize("n_min, n_max", [(2, 5), (6, 5)])
    def test_bad_range(self, geometry, n_min, n_max):
        with pytest.raises(InvalidInputError):
            random_convex_polygon(np.random.default_rng(0), n_min, n_max, geometry)

    @pytest.mark.parametrize("kind", ["ellipse", "cloud"])
    def test_each_family(self, geometry, kind):
        rng = np.random.default_rng(12)
        for _ in range(40):
            polygon = random_convex_polygon(rng, 3, 8, geometry, kind=kind)
            assert 3 <= polygon.n <= 8
            assert geometry.signed_area(polygon.xy) > 0.0

    def test_unknown_kind(self, geometry):
        with pytest.raises(InvalidInputError, match="unknown polygon kind"):
            random_convex_polygon(np.random.default_rng(0), 3, 8, geometry, kind="star")

    def test_same_seed_same_polygon(self, geometry):
        a = random_convex_polygon(np.random.default_rng(4), 3, 12, geometry)
        b = random_convex_polygon(np.random.default_rng(4), 3, 12, geometry)
        np.testing.assert_array_equal(a.xy, b.xy)
