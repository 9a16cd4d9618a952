"""Section decomposition and delta report schemas"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from oval.schemas.geometry import BoundaryPoint, Point, Segment


class Bisector(BaseModel):
    """Perpendicular bisector of the vertices i < j"""
    i: int
    j: int
    midpoint: Point
    direction: Point = Field(..., description="Unit vector along the bisector line")
    normal: Point = Field(..., description="Unit vector (v_j - v_i) / |v_j - v_i|")


class BisectorCut(BaseModel):
    """Crossings of one bisector line with the boundary, sorted by arclength"""
    bisector: Bisector
    points: List[BoundaryPoint]
    collinear_edge: bool = False


class SectionPoint(BaseModel):
    """Boundary point lying on at least one vertex-pair bisector"""
    index: int
    boundary_point: BoundaryPoint
    pairs: List[Tuple[int, int]]
    is_vertex: bool = False


class Section(BaseModel):
    """Open arc between consecutive section points"""
    index: int
    start_s: float
    end_s: float = Field(..., description="May exceed the perimeter for the wraparound section")
    farthest_vertex: int
    start_bp: BoundaryPoint
    end_bp: BoundaryPoint
    
    @property
    def length(self) -> float:
        return self.end_s - self.start_s


class RefinedSection(BaseModel):
    """Part of a section lying on a single edge"""
    section_index: int
    edge_index: int
    start_s: float
    end_s: float
    segment: Segment
    farthest_vertex: int
    z_star: Point
    z_star_s: float
    d: float


class SectionDecomposition(BaseModel):
    """Section points, sections and their farthest vertices"""
    section_points: List[SectionPoint]
    sections: List[Section]
    dedup_tolerance: float
    retried: bool = False
    collinear_edges: List[Tuple[int, int]] = Field(
        default_factory=list,
        description="Vertex pairs whose bisector contains a whole edge",
    )


class DistinguishedChord(BaseModel):
    """Chord [p0, v_q0] realising delta"""
    p0: BoundaryPoint
    q0: int
    q0_point: Point
    length: float
    rule: str = Field(..., description="'nearest-point' or 'endpoint'")


class BoundsCheck(BaseModel):
    """Isoperimetric bounds for L / delta"""
    upper_bound_holds: bool = Field(..., description="L <= 2 pi delta")
    conjecture_holds: bool = Field(..., description="L >= pi delta")


class DeltaReport(BaseModel):
    """Result of the section algorithm"""
    delta: float
    perimeter: float
    diameter: float
    quotient: float
    chords: List[DistinguishedChord] = []
    sections: SectionDecomposition
    refined_sections: List[RefinedSection]
    minimizing_sections: List[int] = Field(
        default_factory=list,
        description="Indices into refined_sections attaining delta",
    )
    bounds_check: BoundsCheck
    degenerate: bool = False
    note: Optional[str] = None
