"""Triangle moduli, kite family and search schemas"""
import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from oval.schemas.geometry import ConvexPolygon


class TriangleModulus(BaseModel):
    """
    Apex C = (x, y) of the triangle A = (-1, 0), B = (1, 0), C.
    
    [A, B] is a diameter exactly when (x + 1)^2 + y^2 <= 4.
    """
    x: float = Field(..., ge=0.0)
    y: float = Field(..., gt=0.0)
    
    @model_validator(mode="after")
    def check_moduli_set(self) -> "TriangleModulus":
        if (self.x + 1.0) ** 2 + self.y ** 2 > 4.0 * (1.0 + 1e-12):
            raise ValueError("apex outside the moduli set: (x+1)^2 + y^2 > 4")
        return self


class TriangleDelta(BaseModel):
    """Closed-form delta of a normalized triangle"""
    delta: float
    region: str = Field(..., description="'disk', 'I', 'II', 'III' or 'IV'")
    perimeter: float
    
    @property
    def quotient(self) -> float:
        return self.perimeter / self.delta


class RegionDistances(BaseModel):
    """Closed-form section distances of the acute subcase"""
    d2: float
    d3: float
    d4: float
    d5: float


class EllipticCoords(BaseModel):
    """Half-sum u and half-difference v of the distances to A and B"""
    u: float = Field(..., ge=1.0 - 1e-12)
    v: float = Field(..., ge=-1.0 - 1e-12, le=1.0 + 1e-12)


class KiteParams(BaseModel):
    """Symmetric kite (-1,0), (0,-v), (1,0), (0,u) with equal perpendiculars"""
    u: float = Field(..., gt=1.0 / math.sqrt(3.0))
    v: float = Field(..., gt=0.0)
    
    @model_validator(mode="after")
    def check_not_square(self) -> "KiteParams":
        if abs(self.u - self.v) <= 1e-12:
            raise ValueError("u = v describes the square, not a kite")
        return self


class KiteOptimum(BaseModel):
    """Minimum of the kite quotient f"""
    u: float
    v: float
    quotient: float
    scalar_check: float = Field(..., description="Minimiser found by bounded scalar minimisation")


class TriangleScanResult(BaseModel):
    """Grid scan of L / delta over the triangle moduli set"""
    grid_n: int
    points: int
    min_quotient: float
    argmin: Tuple[float, float]
    max_discrepancy: float = Field(..., description="Max |closed form - section algorithm|")
    upper_bound_holds: bool
    regions: dict = Field(default_factory=dict, description="Grid points per region label")


class QuadrangleCandidate(BaseModel):
    """Free vertices A = (u0, u) and C = (v0, -v) of a quadrangle with B, E fixed"""
    u0: float
    u: float
    v0: float
    v: float
    
    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.u0, self.u, self.v0, self.v


class QuadrangleSearchResult(BaseModel):
    """Best quadrangle found by the pattern search"""
    best_quotient: float
    best: QuadrangleCandidate
    best_polygon: ConvexPolygon
    restarts: int
    evaluations: int
    skipped: int = Field(..., description="Inadmissible candidates (nonconvex or [B,E] not a diameter)")
    edge_diameter: bool = False
    restart_quotients: List[float] = []


class BoundsSweepResult(BaseModel):
    """Random polygon sweep of the isoperimetric bounds"""
    count: int
    seed: int
    min_quotient: float
    max_quotient: float
    conjecture_violations: int = Field(..., description="Polygons with L < pi delta")
    skipped: int = 0
    argmin_polygon: Optional[ConvexPolygon] = None
