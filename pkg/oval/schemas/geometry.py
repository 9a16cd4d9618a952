"""Planar geometry schemas"""
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, PrivateAttr, model_validator


class Point(BaseModel):
    """Point of the plane"""
    model_config = ConfigDict(frozen=True)
    
    x: FiniteFloat
    y: FiniteFloat
    
    @classmethod
    def from_array(cls, xy) -> "Point":
        return cls(x=float(xy[0]), y=float(xy[1]))
    
    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)
    
    def distance(self, other: "Point") -> float:
        return float(np.hypot(self.x - other.x, self.y - other.y))


class Segment(BaseModel):
    """Closed segment [a, b]"""
    model_config = ConfigDict(frozen=True)
    
    a: Point
    b: Point
    
    @model_validator(mode="after")
    def check_nondegenerate(self) -> "Segment":
        if self.a.x == self.b.x and self.a.y == self.b.y:
            raise ValueError("segment endpoints coincide")
        return self
    
    @property
    def length(self) -> float:
        return self.a.distance(self.b)


class ConvexPolygon(BaseModel):
    """
    Strictly convex polygon, vertices counter-clockwise.
    
    Build instances through GeometryService.validate_polygon; the numpy
    views below are derived once and shared by every service.
    """
    model_config = ConfigDict(frozen=True)
    
    vertices: List[Point] = Field(..., min_length=3)
    cum_arclength: List[float]
    perimeter: float = Field(..., gt=0)
    diameter: float = Field(..., gt=0)
    length_tolerance: float = Field(..., gt=0)
    area_tolerance: float = Field(..., gt=0)
    
    _xy: np.ndarray = PrivateAttr()
    _edges: np.ndarray = PrivateAttr()
    _edge_lengths: np.ndarray = PrivateAttr()
    _cum: np.ndarray = PrivateAttr()
    
    def model_post_init(self, __context) -> None:
        xy = np.array([[v.x, v.y] for v in self.vertices], dtype=float)
        edges = np.roll(xy, -1, axis=0) - xy
        self._xy = xy
        self._edges = edges
        self._edge_lengths = np.hypot(edges[:, 0], edges[:, 1])
        self._cum = np.array(self.cum_arclength, dtype=float)
    
    @property
    def n(self) -> int:
        return len(self.vertices)
    
    @property
    def xy(self) -> np.ndarray:
        """(n, 2) vertex coordinates"""
        return self._xy
    
    @property
    def edge_vectors(self) -> np.ndarray:
        """(n, 2) vectors v_{i+1} - v_i"""
        return self._edges
    
    @property
    def edge_lengths(self) -> np.ndarray:
        return self._edge_lengths
    
    @property
    def cum(self) -> np.ndarray:
        """Arclength of every vertex, cum[0] = 0"""
        return self._cum


class BoundaryPoint(BaseModel):
    """Point of the polygon boundary addressed by edge and arclength"""
    model_config = ConfigDict(frozen=True)
    
    edge_index: int = Field(..., ge=0)
    t: float = Field(..., ge=0.0, le=1.0)
    s: float = Field(..., ge=0.0)
    point: Point


class FarthestVertices(BaseModel):
    """Vertices at maximal distance from a point (ties kept)"""
    indices: List[int]
    mu: float


class DiameterResult(BaseModel):
    """Longest vertex-to-vertex distance"""
    i: int
    j: int
    length: float
    tied_pairs: List[Tuple[int, int]] = []
