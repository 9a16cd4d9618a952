"""
Tests for the section algorithm
"""
import math

import numpy as np
import pytest

from oval.core.config import Settings
from oval.core.exceptions import DegeneracyError, InvalidInputError
from oval.services.geometry_service import points_at_arclength, vertex_distances
from oval.services.moduli_service import ModuliService
from oval.services.section_service import SectionService
from oval.utils.random_polygons import random_convex_polygon
from tests.conftest import KITE_QUOTIENT, SQUARE_QUOTIENT


def chord_set(report, digits=9):
    return {
        (round(c.p0.point.x, digits) + 0.0, round(c.p0.point.y, digits) + 0.0, c.q0)
        for c in report.chords
    }


class TestKnownValues:
    """delta of figures with closed-form values"""

    def test_square(self, sections, square):
        report = sections.compute_delta(square)
        assert report.delta == pytest.approx(math.sqrt(5.0) / 2.0, abs=1e-9)
        assert report.quotient == pytest.approx(SQUARE_QUOTIENT, abs=1e-8)
        assert report.perimeter == pytest.approx(4.0)
        assert report.bounds_check.upper_bound_holds
        assert report.bounds_check.conjecture_holds

    def test_equilateral(self, sections, equilateral):
        report = sections.compute_delta(equilateral)
        assert report.delta == pytest.approx(math.sqrt(3.0), abs=1e-9)
        assert report.quotient == pytest.approx(2.0 * math.sqrt(3.0), abs=1e-9)

    def test_hexagon(self, sections, hexagon):
        assert sections.delta_value(hexagon) == pytest.approx(math.sqrt(13.0) / 2.0, abs=1e-9)

    def test_magic_kite(self, sections, magic_kite):
        report = sections.compute_delta(magic_kite)
        assert report.quotient == pytest.approx(KITE_QUOTIENT, abs=1e-8)
        lengths = [c.length for c in report.chords]
        assert len(lengths) >= 4
        assert max(lengths) - min(lengths) <= 1e-9

    def test_disk_triangle(self, sections, disk_triangle):
        assert sections.delta_value(disk_triangle) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [5, 8, 64, 127])
    def test_regular_polygons(self, geometry, sections, n):
        t = 2.0 * math.pi * np.arange(n) / n
        polygon = geometry.validate_polygon(np.column_stack([np.cos(t), np.sin(t)]))
        expected = math.sqrt(1.0 + 3.0 * math.cos(math.pi / n) ** 2) if n % 2 == 0 else None
        delta = sections.delta_value(polygon)
        if expected is not None:
            assert delta == pytest.approx(expected, abs=1e-9)
        assert math.pi * delta <= polygon.perimeter <= 2.0 * math.pi * delta


class TestSections:
    """Section points, sections and refinement"""

    def test_square_section_points(self, sections, square):
        dec = sections.build_sections(square)
        assert len(dec.section_points) == 8
        assert sum(sp.is_vertex for sp in dec.section_points) == 4
        starts = [s.start_s for s in dec.sections]
        assert starts == sorted(starts)
        np.testing.assert_allclose(starts, np.arange(8) * 0.5, atol=1e-12)

    def test_square_midpoint_pairs(self, sections, square):
        dec = sections.build_sections(square)
        midpoint = dec.section_points[1]
        assert midpoint.boundary_point.s == pytest.approx(0.5)
        assert midpoint.pairs == [(0, 1), (2, 3)]

    def test_disk_triangle_sections(self, sections, disk_triangle):
        dec = sections.build_sections(disk_triangle)
        assert len(dec.sections) == 6
        assert len(sections.refine_sections(disk_triangle, dec)) == 9
        assert not dec.retried

    def test_sections_cover_boundary(self, sections, hexagon):
        dec = sections.build_sections(hexagon)
        total = sum(s.length for s in dec.sections)
        assert total == pytest.approx(hexagon.perimeter, abs=1e-12)

    def test_farthest_vertex_constant_on_section(self, geometry, sections, equilateral):
        dec = sections.build_sections(equilateral)
        for section in dec.sections:
            for f in (0.1, 0.5, 0.9):
                s = section.start_s + f * section.length
                bp = geometry.point_at_arclength(equilateral, s)
                far = geometry.farthest_vertices(equilateral, bp.point)
                assert far.indices == [section.farthest_vertex]

    def test_refined_pieces_on_single_edges(self, sections, hexagon):
        dec = sections.build_sections(hexagon)
        for piece in sections.refine_sections(hexagon, dec):
            a = piece.segment.a.as_array()
            b = piece.segment.b.as_array()
            v0 = hexagon.xy[piece.edge_index]
            v1 = hexagon.xy[(piece.edge_index + 1) % hexagon.n]
            e = v1 - v0
            for p in (a, b):
                cross = e[0] * (p - v0)[1] - e[1] * (p - v0)[0]
                assert abs(cross) <= 1e-12

    def test_section_minimum_agrees(self, sections, fixture_polygons):
        for name, polygon in fixture_polygons.items():
            dec = sections.build_sections(polygon)
            assert sections.section_minimum(polygon, dec) == pytest.approx(
                sections.delta_value(polygon), abs=1e-12
            ), name

    def test_delta_value_matches_report(self, sections, fixture_polygons):
        for polygon in fixture_polygons.values():
            assert sections.delta_value(polygon) == sections.compute_delta(polygon).delta


class TestBisectors:
    """Bisector construction and boundary crossings"""

    def test_make_bisector(self, sections, square):
        bis = sections.make_bisector(square, 1, 0)
        assert (bis.i, bis.j) == (0, 1)
        assert (bis.midpoint.x, bis.midpoint.y) == (0.5, 0.0)
        assert (bis.normal.x, bis.normal.y) == (1.0, 0.0)

    def test_bisector_needs_distinct_vertices(self, sections, square):
        with pytest.raises(InvalidInputError):
            sections.make_bisector(square, 2, 2)
        with pytest.raises(InvalidInputError):
            sections.make_bisector(square, 0, 4)

    def test_equilateral_bisector_through_apex(self, sections, equilateral):
        cut = sections.bisector_boundary_intersections(equilateral, sections.make_bisector(equilateral, 0, 1))
        assert [round(p.s, 12) for p in cut.points] == [1.0, 4.0]
        assert cut.points[0].point.x == pytest.approx(0.0, abs=1e-15)
        assert cut.points[1].point.x == pytest.approx(0.0, abs=1e-12)
        assert cut.points[1].point.y == pytest.approx(math.sqrt(3.0))
        assert not cut.collinear_edge

    def test_triangle_bisectors_meet_base(self, geometry, sections):
        x, y = 0.2, 1.2
        triangle = geometry.validate_polygon([(-1, 0), (1, 0), (x, y)])
        x_plus = 0.5 * (1.0 - (x * x + y * y)) / (1.0 - x)
        x_minus = 0.5 * ((x * x + y * y) - 1.0) / (1.0 + x)
        for (i, j), expected in (((1, 2), x_plus), ((0, 2), x_minus)):
            cut = sections.bisector_boundary_intersections(triangle, sections.make_bisector(triangle, i, j))
            on_base = [p.point.x for p in cut.points if p.edge_index == 0]
            assert on_base == [pytest.approx(expected, abs=1e-12)]


class TestChords:
    """Distinguished chords"""

    def test_square_has_eight_chords(self, sections, square):
        report = sections.compute_delta(square)
        assert chord_set(report) == {
            (0.5, 0.0, 2), (0.5, 0.0, 3),
            (1.0, 0.5, 0), (1.0, 0.5, 3),
            (0.5, 1.0, 0), (0.5, 1.0, 1),
            (0.0, 0.5, 1), (0.0, 0.5, 2),
        }

    def test_disk_triangle_two_chords(self, sections, disk_triangle):
        assert chord_set(sections.compute_delta(disk_triangle)) == {(0.0, 0.0, 0), (0.0, 0.0, 1)}

    def test_right_triangle_three_chords(self, sections, right_triangle):
        report = sections.compute_delta(right_triangle)
        assert chord_set(report) == {(0.0, 0.0, 0), (0.0, 0.0, 1), (0.0, 0.0, 2)}
        assert {c.rule for c in report.chords} == {"nearest-point", "endpoint"}

    def test_chords_realise_delta(self, sections, fixture_polygons):
        for name, polygon in fixture_polygons.items():
            report = sections.compute_delta(polygon)
            tol = 1e-9 * polygon.diameter
            s = np.linspace(0.0, polygon.perimeter, 10_000, endpoint=False)
            _, _, _, boundary = points_at_arclength(polygon, s)
            for chord in report.chords:
                p0 = chord.p0.point.as_array()
                assert abs(chord.length - report.delta) <= tol, name
                reach = np.hypot(*(boundary - p0).T).max()
                assert reach <= report.delta + tol, name
                assert vertex_distances(polygon, p0).max() <= report.delta + tol, name

    def test_distinguished_chords_matches_report(self, sections, magic_kite):
        assert len(sections.distinguished_chords(magic_kite)) == len(sections.compute_delta(magic_kite).chords)


class TestOracleAgreement:
    """Section algorithm against dense sampling"""

    def test_random_polygons_inside_interval(self, geometry, sections, oracle):
        rng = np.random.default_rng(20240601)
        for _ in range(100):
            polygon = random_convex_polygon(rng, 3, 12, geometry)
            delta = sections.delta_value(polygon)
            result = oracle.delta_bruteforce(polygon, 1e5 / polygon.perimeter)
            assert result.contains(delta, slack=1e-12)
            assert result.width <= 0.5 * polygon.perimeter / 1e5

    def test_triangles_match_closed_form(self, sections):
        moduli = ModuliService(Settings(OVAL_THREADS=1))
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 10_000:
            x, y = rng.uniform(0.0, 1.0), rng.uniform(1e-3, 2.0)
            if (x + 1.0) ** 2 + y ** 2 > 4.0:
                continue
            m = moduli.modulus(x, y)
            closed = moduli.triangle_delta_closed_form(m)
            assert sections.delta_value(moduli.triangle_polygon(m)) == pytest.approx(closed.delta, abs=1e-9)
            checked += 1


class TestRandomPolygons:
    """Section invariants on random polygons"""

    @pytest.fixture(scope="class")
    def polygons(self, geometry):
        rng = np.random.default_rng(314)
        return [random_convex_polygon(rng, 3, 12, geometry) for _ in range(100)]

    def test_delta_between_half_diameter_and_diameter(self, sections, polygons):
        for polygon in polygons:
            delta = sections.delta_value(polygon)
            tol = 1e-9 * polygon.diameter
            assert 0.5 * polygon.diameter - tol <= delta <= polygon.diameter + tol

    def test_farthest_vertex_constant_on_sections(self, geometry, sections, polygons):
        for polygon in polygons:
            dec = sections.build_sections(polygon)
            for section in dec.sections:
                for f in (1 / 6, 2 / 6, 3 / 6, 4 / 6, 5 / 6):
                    bp = geometry.point_at_arclength(polygon, section.start_s + f * section.length)
                    far = geometry.farthest_vertices(polygon, bp.point)
                    assert section.farthest_vertex in far.indices

    def test_point_clouds_agree_with_oracle(self, geometry, sections, oracle):
        rng = np.random.default_rng(77)
        for _ in range(30):
            polygon = random_convex_polygon(rng, 3, 8, geometry, kind="cloud")
            delta = sections.delta_value(polygon)
            result = oracle.delta_bruteforce(polygon, 1e5 / polygon.perimeter)
            assert result.contains(delta, slack=1e-12)


class TestDegeneracy:
    """Farthest-vertex ties"""

    def test_unresolved_tie_raises(self, square):
        strict = SectionService(Settings(OVAL_THREADS=1, TIE_TOLERANCE=10.0))
        with pytest.raises(DegeneracyError) as exc:
            strict.compute_delta(square)
        assert exc.value.exit_code == 3
        assert exc.value.arclength is not None
