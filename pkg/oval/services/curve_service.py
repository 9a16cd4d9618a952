"""
Curve Service

Strictly convex curves given by a trigonometric support function

    h(t) = a0 + sum over m >= 2 of a_m cos(m t) + b_m sin(m t)

with curvature radius rho = h + h''. Inscribed polygons carry the two-sided
bound delta(P) <= delta(curve) <= delta(P) + lam * tan(k * lam), valid while
the longest arc lam between vertices stays below pi / (2k).
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from oval.core.config import Settings, settings as default_settings
from oval.core.exceptions import HypothesisViolationError, InvalidCurveError, InvalidInputError
from oval.schemas.curve import CurveMetrics, DeltaBounds, InscribedPolygon, SupportCurve
from oval.schemas.geometry import Point
from oval.services.geometry_service import GeometryService
from oval.services.section_service import SectionService

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MIN_QUADRATURE_POINTS = 64
HYPOTHESIS_SLACK = 1e-12


def _coefficients(curve: SupportCurve) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = np.array([hm.m for hm in curve.harmonics], dtype=float)
    a = np.array([hm.a for hm in curve.harmonics], dtype=float)
    b = np.array([hm.b for hm in curve.harmonics], dtype=float)
    return m, a, b


class CurveService:
    """Support-function curves, inscribed polygons and delta bounds"""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings
        self.geometry = GeometryService(self.settings)
        self.sections = SectionService(self.settings)

    # ------------------------------------------------------------------
    # Support function
    # ------------------------------------------------------------------

    @staticmethod
    def support_values(curve: SupportCurve, theta) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """h, h' and h'' at theta (scalar or array)"""
        t = np.asarray(theta, dtype=float)
        m, a, b = _coefficients(curve)
        if m.size == 0:
            zero = np.zeros_like(t)
            return curve.a0 + zero, zero, zero
        mt = np.multiply.outer(t, m)
        c, s = np.cos(mt), np.sin(mt)
        h = curve.a0 + c @ a + s @ b
        dh = s @ (-m * a) + c @ (m * b)
        d2h = c @ (-m * m * a) + s @ (-m * m * b)
        return h, dh, d2h

    def curvature_radius(self, curve: SupportCurve, theta) -> np.ndarray:
        h, _, d2h = self.support_values(curve, theta)
        return h + d2h

    def curve_points(self, curve: SupportCurve, theta) -> np.ndarray:
        """(..., 2) points with outward normal (cos t, sin t)"""
        t = np.asarray(theta, dtype=float)
        h, dh, _ = self.support_values(curve, t)
        c, s = np.cos(t), np.sin(t)
        return np.stack([h * c - dh * s, h * s + dh * c], axis=-1)

    def curve_point(self, curve: SupportCurve, theta: float) -> Point:
        return Point.from_array(self.curve_points(curve, float(theta)))

    @staticmethod
    def arclength_at(curve: SupportCurve, theta) -> np.ndarray:
        """Arclength from t = 0 to t = theta, integrating rho in closed form"""
        t = np.asarray(theta, dtype=float)
        m, a, b = _coefficients(curve)
        s = curve.a0 * t
        if m.size:
            mt = np.multiply.outer(t, m)
            w = (1.0 - m * m) / m
            s = s + np.sin(mt) @ (w * a) + (1.0 - np.cos(mt)) @ (w * b)
        return s

    # ------------------------------------------------------------------
    # Metrics
    # ------------------------------------------------------------------

    def curve_metrics(self, curve: SupportCurve, quadrature_n: Optional[int] = None) -> CurveMetrics:
        """
        Perimeter, curvature bound k = max 1/rho and breadth range

        The periodic trapezoid rule is exact for the perimeter once
        quadrature_n exceeds twice the top harmonic.

        Raises:
            InvalidInputError: quadrature_n < 64
            InvalidCurveError: rho is not positive everywhere
        """
        N = quadrature_n or self.settings.QUADRATURE_POINTS
        if N < MIN_QUADRATURE_POINTS:
            raise InvalidInputError(
                f"quadrature_n must be >= {MIN_QUADRATURE_POINTS}", {"quadrature_n": N}
            )
        if N <= 2 * curve.top_harmonic:
            logger.warning("Quadrature with %d points under-resolves harmonic %d", N, curve.top_harmonic)

        theta = np.arange(N) * (TWO_PI / N)
        h, _, d2h = self.support_values(curve, theta)
        rho = h + d2h
        j = int(np.argmin(rho))
        if rho[j] <= 0.0:
            raise InvalidCurveError(
                f"curvature radius {rho[j]:.6g} <= 0 at theta = {theta[j]:.6g}",
                {"theta": float(theta[j]), "rho": float(rho[j])},
            )
        step = TWO_PI / N
        refined = minimize_scalar(
            lambda t: float(self.curvature_radius(curve, t)),
            bounds=(theta[j] - step, theta[j] + step),
            method="bounded",
            options={"xatol": 1e-13},
        )
        rho_min = min(float(rho[j]), float(refined.fun))
        if rho_min <= 0.0:
            raise InvalidCurveError(
                f"curvature radius {rho_min:.6g} <= 0 near theta = {float(refined.x):.6g}",
                {"theta": float(refined.x), "rho": rho_min},
            )

        h_opposite, _, _ = self.support_values(curve, theta + math.pi)
        breadth = h + h_opposite
        return CurveMetrics(
            perimeter=float(h.sum() * step),
            curvature_bound=1.0 / rho_min,
            rho_min=rho_min,
            breadth_min=float(breadth.min()),
            breadth_max=float(breadth.max()),
            quadrature_n=N,
        )

    @staticmethod
    def constant_breadth(curve: SupportCurve) -> bool:
        """Only a0 and odd harmonics: h(t) + h(t + pi) = 2 a0"""
        return all(hm.m % 2 == 1 for hm in curve.harmonics if hm.a != 0.0 or hm.b != 0.0)

    # ------------------------------------------------------------------
    # Inscribed polygons
    # ------------------------------------------------------------------

    def _invert_arclength(self, curve: SupportCurve, targets: np.ndarray) -> np.ndarray:
        grid = np.linspace(0.0, TWO_PI, self.settings.QUADRATURE_POINTS + 1)
        table = self.arclength_at(curve, grid)
        theta = np.interp(targets, table, grid)
        for _ in range(self.settings.ARCLENGTH_NEWTON_STEPS):
            theta = theta - (self.arclength_at(curve, theta) - targets) / self.curvature_radius(curve, theta)
        return theta

    def inscribe_polygon(self, curve: SupportCurve, n: int) -> InscribedPolygon:
        """
        Polygon with n vertices on the curve at equal arclength steps

        Raises:
            HypothesisViolationError: lam >= pi / (2k); carries the smallest
                vertex count that satisfies the bound
        """
        if n < 3:
            raise InvalidInputError("n >= 3 required", {"n": n})
        metrics = self.curve_metrics(curve)
        k = metrics.curvature_bound
        L = TWO_PI * curve.a0

        theta = self._invert_arclength(curve, np.arange(n) * (L / n))
        s = self.arclength_at(curve, theta)
        lam = float(np.max(np.diff(np.append(s, s[0] + L))))
        if lam >= math.pi / (2.0 * k) * (1.0 - HYPOTHESIS_SLACK):
            minimal_n = int(math.floor(L * 2.0 * k / math.pi)) + 1
            raise HypothesisViolationError(lam, k, minimal_n)

        polygon = self.geometry.validate_polygon(self.curve_points(curve, theta))
        logger.debug("Inscribed %d-gon: lambda = %.6g, k = %.6g", n, lam, k)
        return InscribedPolygon(
            polygon=polygon,
            thetas=theta.tolist(),
            lam=lam,
            k=k,
            curve_perimeter=L,
        )

    def delta_bounds(self, curve: SupportCurve, n: int) -> DeltaBounds:
        """delta(P) <= delta(curve) <= delta(P) + lam tan(k lam) for the inscribed n-gon"""
        inscribed = self.inscribe_polygon(curve, n)
        delta_p = self.sections.delta_value(inscribed.polygon)
        lam, k = inscribed.lam, inscribed.k
        bounds = DeltaBounds(
            delta_low=delta_p,
            delta_high=delta_p + lam * math.tan(k * lam),
            delta_polygon=delta_p,
            lam=lam,
            k=k,
            n=n,
            curve_perimeter=inscribed.curve_perimeter,
            polygon_perimeter=inscribed.polygon.perimeter,
        )
        logger.info("Delta bounds for n = %d: [%.12g, %.12g]", n, bounds.delta_low, bounds.delta_high)
        return bounds
