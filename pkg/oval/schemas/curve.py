"""Smooth convex curve schemas"""
from typing import List

from pydantic import BaseModel, Field, field_validator

from oval.schemas.geometry import ConvexPolygon


class Harmonic(BaseModel):
    """Term a cos(m t) + b sin(m t) of a support function"""
    m: int = Field(..., ge=2, description="m = 1 is a translation and is excluded")
    a: float = 0.0
    b: float = 0.0


class SupportCurve(BaseModel):
    """Closed convex curve given by a trigonometric support function"""
    a0: float = Field(..., gt=0)
    harmonics: List[Harmonic] = []
    
    @field_validator("harmonics")
    @classmethod
    def unique_orders(cls, value: List[Harmonic]) -> List[Harmonic]:
        orders = [h.m for h in value]
        if len(orders) != len(set(orders)):
            raise ValueError("each harmonic order may appear once")
        return sorted(value, key=lambda h: h.m)
    
    @property
    def top_harmonic(self) -> int:
        return max((h.m for h in self.harmonics), default=0)


class CurveMetrics(BaseModel):
    """Perimeter, curvature bound and breadth of a support curve"""
    perimeter: float
    curvature_bound: float
    rho_min: float
    breadth_min: float
    breadth_max: float
    quadrature_n: int
    
    @property
    def constant_breadth(self) -> bool:
        return abs(self.breadth_max - self.breadth_min) <= 1e-10 * self.breadth_max


class InscribedPolygon(BaseModel):
    """Polygon with vertices on the curve"""
    polygon: ConvexPolygon
    thetas: List[float]
    lam: float = Field(..., description="Max arclength of the curve between consecutive vertices")
    k: float = Field(..., description="Curvature bound")
    curve_perimeter: float


class DeltaBounds(BaseModel):
    """Two-sided bound delta_low <= delta(curve) <= delta_high"""
    delta_low: float
    delta_high: float
    delta_polygon: float
    lam: float
    k: float
    n: int
    curve_perimeter: float
    polygon_perimeter: float
    
    @property
    def width(self) -> float:
        return self.delta_high - self.delta_low
    
    @property
    def quotient_low(self) -> float:
        return self.curve_perimeter / self.delta_high
    
    @property
    def quotient_high(self) -> float:
        return self.curve_perimeter / self.delta_low
