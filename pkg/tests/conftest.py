"""Pytest configuration and fixtures"""
import math
from pathlib import Path

import pytest

from oval.core.config import Settings
from oval.services.curve_service import CurveService
from oval.services.geometry_service import GeometryService
from oval.services.isoperimetric_service import IsoperimetricService
from oval.services.moduli_service import ModuliService
from oval.services.oracle_service import OracleService
from oval.services.section_service import SectionService
from oval.utils.polygon_io import parse_curve_file, parse_polygon_file

FIXTURES = Path(__file__).parent / "fixtures"

SQRT3 = math.sqrt(3.0)
KITE_QUOTIENT = 4.0 / 3.0 * math.sqrt(2.0 * SQRT3 + 3.0)
SQUARE_QUOTIENT = 8.0 / 5.0 * math.sqrt(5.0)


@pytest.fixture(scope="session")
def test_settings() -> Settings:
    """Settings with a single worker so tests are reproducible on any machine"""
    return Settings(OVAL_THREADS=1)


@pytest.fixture(scope="session")
def geometry(test_settings) -> GeometryService:
    return GeometryService(test_settings)


@pytest.fixture(scope="session")
def sections(test_settings) -> SectionService:
    return SectionService(test_settings)


@pytest.fixture(scope="session")
def oracle(test_settings) -> OracleService:
    return OracleService(test_settings)


@pytest.fixture(scope="session")
def curves(test_settings) -> CurveService:
    return CurveService(test_settings)


@pytest.fixture(scope="session")
def moduli(test_settings) -> ModuliService:
    return ModuliService(test_settings)


@pytest.fixture(scope="session")
def isoperimetric(test_settings) -> IsoperimetricService:
    return IsoperimetricService(test_settings)


def load_polygon(name: str):
    return parse_polygon_file(FIXTURES / name)


@pytest.fixture
def square():
    return load_polygon("square.txt")


@pytest.fixture
def equilateral():
    return load_polygon("equilateral.txt")


@pytest.fixture
def disk_triangle():
    """Apex (0.3, 0.8), strictly inside the unit disk"""
    return load_polygon("disk_triangle.txt")


@pytest.fixture
def right_triangle():
    """Apex (0.6, 0.8) on the unit circle"""
    return load_polygon("right_triangle.txt")


@pytest.fixture
def magic_kite():
    return load_polygon("magic_kite.txt")


@pytest.fixture
def hexagon():
    return load_polygon("hexagon.txt")


@pytest.fixture
def circle_curve():
    return parse_curve_file(FIXTURES / "circle.curve")


@pytest.fixture
def constant_width_curve():
    return parse_curve_file(FIXTURES / "constant_width.curve")


@pytest.fixture
def fixture_polygons(square, equilateral, disk_triangle, right_triangle, magic_kite, hexagon):
    return {
        "square": square,
        "equilateral": equilateral,
        "disk_triangle": disk_triangle,
        "right_triangle": right_triangle,
        "magic_kite": magic_kite,
        "hexagon": hexagon,
    }
