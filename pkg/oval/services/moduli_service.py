"""
Moduli Service

Closed-form delta of triangles normalized to A = (-1, 0), B = (1, 0),
C = (x, y), elliptic coordinates of the apex, and the symmetric kite family
with its minimizing "magic" member.
"""
import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError
from scipy.optimize import brentq, minimize_scalar

from oval.core.config import Settings, settings as default_settings
from oval.core.exceptions import ConsistencyError, DomainError, InvalidInputError
from oval.core.executor import parallel_map
from oval.schemas.geometry import ConvexPolygon
from oval.schemas.moduli import (
    EllipticCoords,
    KiteOptimum,
    KiteParams,
    RegionDistances,
    TriangleDelta,
    TriangleModulus,
    TriangleScanResult,
)
from oval.services.geometry_service import GeometryService
from oval.services.section_service import SectionService

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)
KITE_U = SQRT3 / 3.0 * math.sqrt(3.0 + 2.0 * SQRT3)
KITE_V = math.sqrt(2.0 * SQRT3 - 3.0) / 3.0
KITE_QUOTIENT = 4.0 / 3.0 * math.sqrt(2.0 * SQRT3 + 3.0)
SQUARE_QUOTIENT = 8.0 / 5.0 * math.sqrt(5.0)
MIN_SCAN_GRID = 50


def psi1(x: float) -> float:
    """Curve separating regions I/IV from II/III"""
    if not 0.0 <= x <= 1.0:
        raise DomainError("psi1 needs 0 <= x <= 1", {"x": x})
    return math.sqrt((1.0 - x) / 2.0) * math.sqrt(math.sqrt((9.0 - x) ** 2 - 48.0) - (1.0 - x))


def psi3(x: float) -> float:
    """Line y = 1 + x where C sees A and B at equal distance from the far side"""
    return 1.0 + x


def psi_crossing() -> float:
    """Root in [0, sqrt(2) - 1] of x^4 + 4x^3 - 6x^2 + 12x - 3 where psi1 = psi3"""
    return brentq(lambda x: x ** 4 + 4 * x ** 3 - 6 * x ** 2 + 12 * x - 3, 0.0, math.sqrt(2.0) - 1.0, xtol=1e-15)


def elliptic_from_cartesian(x: float, y: float) -> EllipticCoords:
    """(u, v) = half-sum and half-difference of the distances to A and B"""
    if y < 0.0:
        raise DomainError("elliptic coordinates are taken for y >= 0", {"y": y})
    r1 = math.hypot(x + 1.0, y)
    r2 = math.hypot(x - 1.0, y)
    return EllipticCoords(u=0.5 * (r1 + r2), v=0.5 * (r1 - r2))


def cartesian_from_elliptic(u: float, v: float) -> Tuple[float, float]:
    if u < 1.0 - 1e-12 or abs(v) > 1.0 + 1e-12:
        raise DomainError("need u >= 1 and |v| <= 1", {"u": u, "v": v})
    return u * v, math.sqrt(max(0.0, (u * u - 1.0) * (1.0 - v * v)))


def kite_v(u: float) -> float:
    """Lower apex height making both perpendicular feet equidistant"""
    if u <= 1.0 / SQRT3:
        raise DomainError("kite family needs u > 1/sqrt(3)", {"u": u})
    return u * (3.0 - u * u) / (3.0 * u * u - 1.0)


def kite_quotient(u: float) -> float:
    """f(u) = 4u (u^2 + 1) / (3u^2 - 1)"""
    if u <= 1.0 / SQRT3:
        raise DomainError("kite family needs u > 1/sqrt(3)", {"u": u})
    return 4.0 * u * (u * u + 1.0) / (3.0 * u * u - 1.0)


class ModuliService:
    """Triangle regions, elliptic coordinates and kites"""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings
        self.geometry = GeometryService(self.settings)
        self.sections = SectionService(self.settings)

    @staticmethod
    def modulus(x: float, y: float) -> TriangleModulus:
        try:
            return TriangleModulus(x=x, y=y)
        except ValidationError as e:
            raise DomainError(f"({x}, {y}) is not in the triangle moduli set", {"x": x, "y": y}) from e

    # ------------------------------------------------------------------
    # Triangles
    # ------------------------------------------------------------------

    def triangle_polygon(self, m: TriangleModulus) -> ConvexPolygon:
        return self.geometry.validate_polygon([(-1.0, 0.0), (1.0, 0.0), (m.x, m.y)])

    @staticmethod
    def region_distances(m: TriangleModulus) -> RegionDistances:
        x, y = m.x, m.y
        r2 = (1.0 + x) ** 2 + y ** 2
        return RegionDistances(
            d2=math.hypot(x, y),
            d3=y,
            d4=0.5 * r2 / (1.0 + x),
            d5=math.sqrt(r2) / (1.0 + x),
        )

    @staticmethod
    def region_label(m: TriangleModulus) -> str:
        x, y = m.x, m.y
        if x * x + y * y <= 1.0:
            return "disk"
        above_psi1 = y >= psi1(x)
        above_psi3 = y >= psi3(x)
        if above_psi1 and above_psi3:
            return "I"
        if above_psi3:
            return "II"
        if not above_psi1:
            return "III"
        return "IV"

    def _check_boundary_agreement(self, m: TriangleModulus, region: str, distances: RegionDistances) -> None:
        """Adjacent region formulas must coincide on y = psi3(x) and on the unit circle"""
        tol = self.settings.TRIANGLE_CONSISTENCY_TOLERANCE
        if region == "disk":
            return
        mismatch = None
        if abs(m.y - psi3(m.x)) <= tol and abs(distances.d3 - distances.d4) > 10.0 * tol:
            mismatch = ("y = 1 + x", distances.d3, distances.d4)
        elif abs(m.x * m.x + m.y * m.y - 1.0) <= tol:
            outside = distances.d3 if region in ("I", "II") else distances.d4
            if abs(outside - 1.0) > 10.0 * tol:
                mismatch = ("x^2 + y^2 = 1", outside, 1.0)
        if mismatch is not None:
            curve, a, b = mismatch
            raise ConsistencyError(
                f"region formulas disagree on {curve} at ({m.x:.10g}, {m.y:.10g}): {a:.12g} != {b:.12g}",
                {"x": m.x, "y": m.y, "region": region},
            )

    def triangle_delta_closed_form(self, m: TriangleModulus) -> TriangleDelta:
        """
        delta of the normalized triangle from its region

        disk: 1, regions I and II: y, regions III and IV: d4. On the
        separating curves both adjacent formulas agree.

        Raises:
            ConsistencyError: the formulas of two adjacent regions disagree on
                their common boundary
        """
        region = self.region_label(m)
        distances = self.region_distances(m)
        if region == "disk":
            delta = 1.0
        elif region in ("I", "II"):
            delta = distances.d3
        else:
            delta = distances.d4
        self._check_boundary_agreement(m, region, distances)
        perimeter = 2.0 + math.hypot(m.x + 1.0, m.y) + math.hypot(m.x - 1.0, m.y)
        return TriangleDelta(delta=delta, region=region, perimeter=perimeter)

    def _scan_point(self, xy: Tuple[float, float]) -> Tuple[float, float, str, bool]:
        m = TriangleModulus(x=xy[0], y=xy[1])
        closed = self.triangle_delta_closed_form(m)
        algorithm = self.sections.delta_value(self.triangle_polygon(m))
        return (
            closed.quotient,
            abs(closed.delta - algorithm),
            closed.region,
            closed.perimeter <= 2.0 * math.pi * closed.delta,
        )

    def triangle_grid(self, grid_n: int) -> List[Tuple[float, float]]:
        """Grid points of the moduli set with y > 0"""
        xs = np.linspace(0.0, 1.0, grid_n)
        ys = np.linspace(0.0, 2.0, grid_n + 1)[1:]
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        inside = (X + 1.0) ** 2 + Y ** 2 <= 4.0
        return list(zip(X[inside].tolist(), Y[inside].tolist()))

    def triangle_scan(self, grid_n: int) -> TriangleScanResult:
        """
        L / delta over a grid of the moduli set, every point cross-checked
        against the section algorithm

        Raises:
            ConsistencyError: closed form and algorithm disagree
        """
        if grid_n < MIN_SCAN_GRID:
            raise InvalidInputError(f"grid_n must be >= {MIN_SCAN_GRID}", {"grid_n": grid_n})
        points = self.triangle_grid(grid_n)
        results = parallel_map(self._scan_point, points, self.settings)

        tol = self.settings.TRIANGLE_CONSISTENCY_TOLERANCE
        regions: Dict[str, int] = {}
        best = 0
        max_discrepancy = 0.0
        for idx, (quotient, discrepancy, region, _) in enumerate(results):
            if discrepancy > tol:
                x, y = points[idx]
                raise ConsistencyError(
                    f"closed-form triangle delta differs by {discrepancy:.3g} at ({x:.10g}, {y:.10g})",
                    {"x": x, "y": y, "discrepancy": discrepancy},
                )
            max_discrepancy = max(max_discrepancy, discrepancy)
            regions[region] = regions.get(region, 0) + 1
            if quotient < results[best][0]:
                best = idx

        logger.info("Triangle scan finished: grid %d, %d points", grid_n, len(points))
        return TriangleScanResult(
            grid_n=grid_n,
            points=len(points),
            min_quotient=results[best][0],
            argmin=points[best],
            max_discrepancy=max_discrepancy,
            upper_bound_holds=all(r[3] for r in results),
            regions=dict(sorted(regions.items())),
        )

    # ------------------------------------------------------------------
    # Kites
    # ------------------------------------------------------------------

    def kite_polygon(self, u: float) -> ConvexPolygon:
        """Kite (-1, 0), (0, -v(u)), (1, 0), (0, u)"""
        try:
            params = KiteParams(u=u, v=kite_v(u))
        except ValidationError as e:
            raise DomainError(f"u = {u} does not give a kite", {"u": u}) from e
        return self.geometry.validate_polygon(
            [(-1.0, 0.0), (0.0, -params.v), (1.0, 0.0), (0.0, params.u)]
        )

    @staticmethod
    def kite_minimizer() -> KiteOptimum:
        """Root of f'(u) ~ 3u^4 - 6u^2 - 1 checked by bounded minimisation of f"""
        u = brentq(lambda t: 3 * t ** 4 - 6 * t ** 2 - 1, 1.0, 2.0, xtol=1e-15)
        check = minimize_scalar(kite_quotient, bounds=(0.7, 3.0), method="bounded", options={"xatol": 1e-12})
        return KiteOptimum(u=u, v=kite_v(u), quotient=kite_quotient(u), scalar_check=float(check.x))

    def magic_kite(self) -> ConvexPolygon:
        return self.geometry.validate_polygon(
            [(-1.0, 0.0), (0.0, -KITE_V), (1.0, 0.0), (0.0, KITE_U)]
        )

    def square_polygon(self) -> ConvexPolygon:
        return self.geometry.validate_polygon([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
