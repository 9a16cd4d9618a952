"""
Tests for triangle regions, elliptic coordinates and kites
"""
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings as hyp_settings, strategies as st

from oval.core.config import Settings
from oval.core.exceptions import ConsistencyError, DomainError, InvalidInputError
from oval.schemas.moduli import RegionDistances
from oval.services.moduli_service import (
    KITE_U,
    KITE_V,
    ModuliService,
    cartesian_from_elliptic,
    elliptic_from_cartesian,
    kite_quotient,
    kite_v,
    psi1,
    psi3,
    psi_crossing,
)
from tests.conftest import KITE_QUOTIENT

SQRT3 = math.sqrt(3.0)


class TestSeparatingCurves:
    """psi1, psi3 and their crossing"""

    def test_psi1_endpoints(self):
        assert psi1(0.0) == pytest.approx(math.sqrt((math.sqrt(33.0) - 1.0) / 2.0))
        assert psi1(0.0) == pytest.approx(1.5402, abs=1e-4)
        assert psi1(1.0) == 0.0

    def test_psi3(self):
        assert psi3(0.2) == pytest.approx(1.2)

    def test_psi1_domain(self):
        with pytest.raises(DomainError):
            psi1(1.5)

    def test_crossing(self):
        x0 = psi_crossing()
        assert x0 == pytest.approx(0.2817015579, abs=1e-9)
        assert psi1(x0) == pytest.approx(psi3(x0), abs=1e-9)


class TestTriangleClosedForm:
    """Region formulas"""

    @pytest.mark.parametrize(
        "x, y, region, delta",
        [
            (0.3, 0.8, "disk", 1.0),
            (0.2, 1.4, "I", 1.4),
            (0.1, 1.3, "II", 1.3),
            (0.6, 0.9, "III", 3.37 / 3.2),
            (0.8, 0.7, "IV", (3.24 + 0.49) / 3.6),
        ],
    )
    def test_regions(self, moduli, x, y, region, delta):
        result = moduli.triangle_delta_closed_form(moduli.modulus(x, y))
        assert result.region == region
        assert result.delta == pytest.approx(delta, abs=1e-12)

    @pytest.mark.parametrize("x, y", [(0.3, 0.8), (0.2, 1.4), (0.1, 1.3), (0.6, 0.9), (0.8, 0.7), (0.0, SQRT3)])
    def test_matches_section_algorithm(self, moduli, sections, x, y):
        m = moduli.modulus(x, y)
        closed = moduli.triangle_delta_closed_form(m)
        assert sections.delta_value(moduli.triangle_polygon(m)) == pytest.approx(closed.delta, abs=1e-9)

    def test_equilateral_quotient(self, moduli):
        result = moduli.triangle_delta_closed_form(moduli.modulus(0.0, SQRT3))
        assert result.quotient == pytest.approx(2.0 * SQRT3, abs=1e-12)

    def test_outside_moduli_set(self, moduli):
        with pytest.raises(DomainError):
            moduli.modulus(1.0, 1.0)
        with pytest.raises(DomainError):
            moduli.modulus(-0.1, 1.0)

    def test_formulas_agree_on_separating_line(self, moduli):
        for x in np.linspace(0.0, 0.4, 9):
            d = moduli.region_distances(moduli.modulus(x, 1.0 + x))
            assert d.d3 == pytest.approx(d.d4, abs=1e-12)

    @pytest.mark.parametrize("x", [0.05, 0.2, 0.35])
    def test_separating_line_value(self, moduli, x):
        result = moduli.triangle_delta_closed_form(moduli.modulus(x, 1.0 + x))
        assert result.delta == pytest.approx(1.0 + x, abs=1e-12)

    @pytest.mark.parametrize("angle", [0.3, 0.6, 0.9, 1.2, 1.5])
    def test_unit_circle_value(self, moduli, angle):
        result = moduli.triangle_delta_closed_form(moduli.modulus(math.cos(angle), math.sin(angle)))
        assert result.delta == pytest.approx(1.0, abs=1e-12)

    def test_right_triangle_apex(self, moduli):
        assert moduli.triangle_delta_closed_form(moduli.modulus(0.6, 0.8)).delta == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("x, y", [(0.2, 1.2), (0.6, 0.8 + 1e-11)])
    def test_disagreeing_formulas_raise(self, monkeypatch, x, y):
        service = ModuliService(Settings(OVAL_THREADS=1))
        monkeypatch.setattr(
            service,
            "region_distances",
            lambda m: RegionDistances(d2=0.0, d3=m.y + 0.1, d4=m.y + 0.5, d5=0.0),
        )
        with pytest.raises(ConsistencyError) as exc:
            service.triangle_delta_closed_form(service.modulus(x, y))
        assert exc.value.exit_code == 6


class TestTriangleContinuity:
    """delta moves by at most 2 eps when the apex moves by eps"""

    @pytest.mark.parametrize("phi", np.linspace(0.1, math.pi / 3.0, 7))
    def test_outer_boundary(self, moduli, geometry, sections, phi):
        x, y = 2.0 * math.cos(phi) - 1.0, 2.0 * math.sin(phi)
        base = moduli.triangle_delta_closed_form(moduli.modulus(x, y)).delta
        assert sections.delta_value(moduli.triangle_polygon(moduli.modulus(x, y))) == pytest.approx(base, abs=1e-9)
        eps = 1e-3
        rng = np.random.default_rng(int(1000 * phi))
        for theta in rng.uniform(0.0, 2.0 * math.pi, 16):
            apex = (x + eps * math.cos(theta), y + eps * math.sin(theta))
            moved = geometry.validate_polygon([(-1.0, 0.0), (1.0, 0.0), apex])
            assert abs(sections.delta_value(moved) - base) <= 2.0 * eps + 1e-12

    @hyp_settings(max_examples=200, deadline=None)
    @given(x=st.floats(0.0, 1.0), y=st.floats(0.01, 1.99))
    def test_d5_exceeds_d4_inside(self, moduli, x, y):
        assume((x + 1.0) ** 2 + y ** 2 < 4.0 - 1e-6)
        d = moduli.region_distances(moduli.modulus(x, y))
        assert d.d5 > d.d4
        assert d.d2 == pytest.approx(math.hypot(x, y))


class TestEllipticCoordinates:
    """Forward and inverse maps"""

    def test_apex_of_equilateral(self):
        e = elliptic_from_cartesian(0.0, SQRT3)
        assert (e.u, e.v) == pytest.approx((2.0, 0.0))

    def test_vertex_b(self):
        e = elliptic_from_cartesian(1.0, 0.0)
        assert (e.u, e.v) == pytest.approx((1.0, 1.0))

    def test_roundtrip(self):
        rng = np.random.default_rng(17)
        worst = 0.0
        for _ in range(10_000):
            x, y = rng.uniform(0.0, 1.0), rng.uniform(0.25, 2.0)
            e = elliptic_from_cartesian(x, y)
            xb, yb = cartesian_from_elliptic(e.u, e.v)
            worst = max(worst, abs(xb - x), abs(yb - y))
        assert worst <= 1e-12

    def test_fundamental_region_image(self):
        rng = np.random.default_rng(23)
        for _ in range(2_000):
            x, y = rng.uniform(0.0, 1.0), rng.uniform(0.0, 2.0)
            if x * x + y * y < 1.0 or (x + 1.0) ** 2 + y ** 2 > 4.0:
                continue
            e = elliptic_from_cartesian(x, y)
            assert e.u ** 2 + e.v ** 2 >= 2.0 - 1e-12
            assert e.u + e.v <= 2.0 + 1e-12

    def test_inverse_domain(self):
        with pytest.raises(DomainError):
            cartesian_from_elliptic(0.5, 0.0)


class TestTriangleScan:
    """Grid scan of the moduli set"""

    def test_minimum_at_equilateral(self, moduli):
        result = moduli.triangle_scan(60)
        assert result.min_quotient >= 2.0 * SQRT3 - 1e-6
        assert result.argmin[0] <= 1.0 / 59 + 1e-12
        assert abs(result.argmin[1] - SQRT3) <= 2.0 / 60
        assert result.max_discrepancy <= 1e-9
        assert result.upper_bound_holds
        assert set(result.regions) == {"disk", "I", "II", "III", "IV"}

    def test_grid_floor(self, moduli):
        with pytest.raises(InvalidInputError):
            moduli.triangle_scan(10)


class TestKites:
    """Kite family and the magic kite"""

    def test_family_values(self):
        assert kite_quotient(1.0) == pytest.approx(4.0)
        assert kite_quotient(0.8) == pytest.approx(5.70434783, abs=1e-8)
        assert kite_v(1.0) == pytest.approx(1.0)

    def test_family_domain(self):
        with pytest.raises(DomainError):
            kite_quotient(0.5)

    def test_minimizer(self, moduli):
        optimum = moduli.kite_minimizer()
        root = math.sqrt(1.0 + 2.0 / SQRT3)
        assert optimum.u == pytest.approx(root, abs=1e-12)
        assert 3 * optimum.u ** 4 - 6 * optimum.u ** 2 - 1 == pytest.approx(0.0, abs=1e-8)
        assert optimum.quotient == pytest.approx(KITE_QUOTIENT, abs=1e-12)
        assert optimum.scalar_check == pytest.approx(root, abs=1e-5)
        assert optimum.v == pytest.approx(KITE_V, abs=1e-12)

    def test_magic_kite_vertices(self, moduli):
        xy = moduli.magic_kite().xy
        assert xy[3, 1] == pytest.approx(1.46788982501, abs=1e-10)
        assert xy[1, 1] == pytest.approx(-0.22708334621, abs=1e-10)

    def test_magic_kite_quotient(self, moduli, sections):
        kite = moduli.magic_kite()
        delta = sections.delta_value(kite)
        assert kite.perimeter / delta == pytest.approx(KITE_QUOTIENT, abs=1e-8)
        assert delta == pytest.approx(2.0 * KITE_U / math.sqrt(KITE_U ** 2 + 1.0), abs=1e-12)

    def test_family_member_is_magic_kite(self, moduli):
        np.testing.assert_allclose(moduli.kite_polygon(KITE_U).xy, moduli.magic_kite().xy, atol=1e-12)

    def test_square_is_not_a_kite(self, moduli):
        with pytest.raises(DomainError):
            moduli.kite_polygon(1.0)

    def test_square_polygon(self, moduli):
        assert moduli.square_polygon().perimeter == pytest.approx(4.0)
