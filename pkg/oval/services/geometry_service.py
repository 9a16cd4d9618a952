"""
Geometry Service
Planar primitives: segments, convex polygon validation, arclength addressing,
farthest vertices and diameter
"""
import logging
import math
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from oval.core.config import Settings, settings as default_settings
from oval.core.exceptions import InvalidInputError, PolygonValidationError
from oval.schemas.geometry import (
    BoundaryPoint,
    ConvexPolygon,
    DiameterResult,
    FarthestVertices,
    Point,
    Segment,
)

logger = logging.getLogger(__name__)

PointLike = Union[Point, Sequence[float], np.ndarray]


def as_xy(p: PointLike) -> np.ndarray:
    """Coordinates of a point-like value as a float array of shape (2,)"""
    if isinstance(p, Point):
        return np.array([p.x, p.y], dtype=float)
    return np.asarray(p, dtype=float).reshape(2)


def closest_points(z: np.ndarray, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Nearest points on closed segments, vectorised.

    Args:
        z, a, b: arrays broadcastable to (..., 2)

    Returns:
        (z_star, t, d) with t the unclamped foot parameter
    """
    ab = b - a
    t = np.einsum("...i,...i->...", z - a, ab) / np.einsum("...i,...i->...", ab, ab)
    z_star = a + np.clip(t, 0.0, 1.0)[..., None] * ab
    diff = z - z_star
    return z_star, t, np.hypot(diff[..., 0], diff[..., 1])


def points_at_arclength(polygon: ConvexPolygon, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Boundary points for an array of arclengths (taken modulo the perimeter).

    Returns:
        (edge_index, t, s_mod, xy)
    """
    L = polygon.perimeter
    s_mod = np.mod(np.asarray(s, dtype=float), L)
    s_mod = np.where(s_mod >= L, 0.0, s_mod)
    edge = np.searchsorted(polygon.cum, s_mod, side="right") - 1
    edge = np.clip(edge, 0, polygon.n - 1)
    t = (s_mod - polygon.cum[edge]) / polygon.edge_lengths[edge]
    t = np.clip(t, 0.0, 1.0)
    # rounding can land exactly on the next vertex
    wrap = t >= 1.0
    if np.any(wrap):
        edge = np.where(wrap, (edge + 1) % polygon.n, edge)
        t = np.where(wrap, 0.0, t)
        s_mod = np.where(wrap, polygon.cum[edge], s_mod)
    xy = polygon.xy[edge] + t[..., None] * polygon.edge_vectors[edge]
    return edge, t, s_mod, xy


def vertex_distances(polygon: ConvexPolygon, xy: np.ndarray) -> np.ndarray:
    """(m, n) distances from m points to the n vertices"""
    return cdist(np.atleast_2d(xy), polygon.xy)


class GeometryService:
    """Exact planar primitives on validated convex polygons"""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings

    # ------------------------------------------------------------------
    # Segments
    # ------------------------------------------------------------------

    @staticmethod
    def _check_segment(seg: Segment, tolerance: float) -> Tuple[np.ndarray, np.ndarray]:
        a, b = seg.a.as_array(), seg.b.as_array()
        if float(np.hypot(*(b - a))) <= tolerance:
            raise InvalidInputError(
                "degenerate segment",
                {"a": [seg.a.x, seg.a.y], "b": [seg.b.x, seg.b.y], "tolerance": tolerance},
            )
        return a, b

    def closest_point_on_segment(
        self,
        z: PointLike,
        seg: Segment,
        tolerance: float = 0.0
    ) -> Tuple[Point, float]:
        """
        Nearest point z* of the closed segment to z

        Args:
            z: query point
            seg: segment [a, b]
            tolerance: segments not longer than this are rejected

        Returns:
            (z_star, t) where t = <z - a, b - a> / |b - a|^2 is not clamped
        """
        a, b = self._check_segment(seg, tolerance)
        z_star, t, _ = closest_points(as_xy(z), a, b)
        return Point.from_array(z_star), float(t)

    def distance_to_segment(self, z: PointLike, seg: Segment, tolerance: float = 0.0) -> float:
        """Distance of z to the closed segment"""
        a, b = self._check_segment(seg, tolerance)
        zz = as_xy(z)
        ab = b - a
        t = float(np.dot(zz - a, ab) / np.dot(ab, ab))
        if t <= 0.0:
            return float(np.hypot(*(zz - a)))
        if t >= 1.0:
            return float(np.hypot(*(zz - b)))
        # interior foot: |(z - a) ^ (b - a)| / |b - a|
        u = zz - a
        return abs(float(u[0] * ab[1] - u[1] * ab[0])) / float(np.hypot(*ab))

    # ------------------------------------------------------------------
    # Polygons
    # ------------------------------------------------------------------

    @staticmethod
    def signed_area(xy: np.ndarray) -> float:
        """Shoelace area, positive for counter-clockwise loops"""
        x, y = xy[:, 0], xy[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def validate_polygon(self, raw_vertices: Iterable[PointLike]) -> ConvexPolygon:
        """
        Validate a vertex loop and build the polygon

        Clockwise input is reversed (vertex 0 stays first). Nonconvex,
        collinear or duplicate vertices raise PolygonValidationError naming
        the offending index of the input list.
        """
        raw = [as_xy(p) for p in raw_vertices]
        n = len(raw)
        if n < 3:
            raise PolygonValidationError(f"n >= 3 required, got {n} vertices")
        xy = np.vstack(raw)
        bad = np.flatnonzero(~np.all(np.isfinite(xy), axis=1))
        if bad.size:
            raise PolygonValidationError(f"non-finite coordinates at vertex {bad[0]}", int(bad[0]))

        dist = cdist(xy, xy)
        diam = float(dist.max())
        if diam <= 0.0:
            raise PolygonValidationError("all vertices coincide", 0)
        eps_len = self.settings.LENGTH_TOLERANCE * diam
        eps_area = self.settings.AREA_TOLERANCE * diam * diam

        close = np.argwhere(np.triu(dist <= eps_len, k=1))
        if close.size:
            i, j = (int(k) for k in close[0])
            raise PolygonValidationError(f"duplicate vertices {i} and {j}", j)

        order = np.arange(n)
        if self.signed_area(xy) < 0.0:
            order = np.concatenate([order[:1], order[:0:-1]])
            xy = xy[order]
            logger.debug("Reversed clockwise vertex loop")

        edges = np.roll(xy, -1, axis=0) - xy
        nxt = np.roll(edges, -1, axis=0)
        cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
        dot = np.einsum("ij,ij->i", edges, nxt)
        for k in range(n):
            middle = int(order[(k + 1) % n])
            if abs(cross[k]) <= eps_area:
                raise PolygonValidationError(f"collinear triple at vertex {middle}", middle)
            if cross[k] < 0.0:
                raise PolygonValidationError(f"reflex vertex {middle}: polygon is not convex", middle)
        turning = float(np.sum(np.arctan2(cross, dot)))
        if abs(turning - 2.0 * math.pi) > 1e-6:
            raise PolygonValidationError(
                f"vertex loop winds {turning / (2.0 * math.pi):.3f} times", int(order[0])
            )

        lengths = np.hypot(edges[:, 0], edges[:, 1])
        cum = np.concatenate([[0.0], np.cumsum(lengths[:-1])])
        return ConvexPolygon(
            vertices=[Point(x=float(p[0]), y=float(p[1])) for p in xy],
            cum_arclength=cum.tolist(),
            perimeter=float(lengths.sum()),
            diameter=diam,
            length_tolerance=eps_len,
            area_tolerance=eps_area,
        )

    def transform_polygon(
        self,
        polygon: ConvexPolygon,
        angle: float = 0.0,
        translation: Tuple[float, float] = (0.0, 0.0),
        scale: float = 1.0
    ) -> ConvexPolygon:
        """Apply x -> scale * R(angle) x + translation and revalidate"""
        if scale <= 0.0:
            raise InvalidInputError("scale must be positive", {"scale": scale})
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        xy = scale * polygon.xy @ rot.T + np.asarray(translation, dtype=float)
        return self.validate_polygon(xy)

    # ------------------------------------------------------------------
    # Arclength addressing
    # ------------------------------------------------------------------

    def point_at_arclength(self, polygon: ConvexPolygon, s: float) -> BoundaryPoint:
        """Boundary point at arclength s (mod L) from vertex 0"""
        edge, t, s_mod, xy = points_at_arclength(polygon, np.array([s]))
        return BoundaryPoint(
            edge_index=int(edge[0]),
            t=float(t[0]),
            s=float(s_mod[0]),
            point=Point.from_array(xy[0]),
        )

    def arclength_of(self, polygon: ConvexPolygon, bp: BoundaryPoint) -> float:
        """Arclength of a boundary point, recomputed from its edge parameter"""
        s = polygon.cum[bp.edge_index] + bp.t * polygon.edge_lengths[bp.edge_index]
        return float(s) if s < polygon.perimeter else 0.0

    def boundary_points(self, polygon: ConvexPolygon, s_values: Sequence[float]) -> list:
        """Vectorised point_at_arclength"""
        edge, t, s_mod, xy = points_at_arclength(polygon, np.asarray(s_values, dtype=float))
        return [
            BoundaryPoint(edge_index=int(e), t=float(tt), s=float(ss), point=Point.from_array(p))
            for e, tt, ss, p in zip(edge, t, s_mod, xy)
        ]

    # ------------------------------------------------------------------
    # Farthest vertices and diameter
    # ------------------------------------------------------------------

    def farthest_vertices(
        self,
        polygon: ConvexPolygon,
        x: PointLike,
        tolerance: Optional[float] = None
    ) -> FarthestVertices:
        """
        Vertices at maximal distance from x, with the maximum mu(x)

        The maximum over the whole boundary is attained at a vertex, so this
        is mu(x) for the polygon. Vertices within tolerance of the maximum
        (default: the polygon's length tolerance) are all returned.
        """
        tol = polygon.length_tolerance if tolerance is None else tolerance
        d = vertex_distances(polygon, as_xy(x))[0]
        mu = float(d.max())
        return FarthestVertices(indices=[int(i) for i in np.flatnonzero(d >= mu - tol)], mu=mu)

    def mu(self, polygon: ConvexPolygon, x: PointLike) -> float:
        return float(vertex_distances(polygon, as_xy(x)).max())

    def diameter(self, polygon: ConvexPolygon) -> DiameterResult:
        """Longest vertex pair; ties listed, the smallest index pair reported"""
        dist = cdist(polygon.xy, polygon.xy)
        length = float(dist.max())
        tied = [
            (int(i), int(j))
            for i, j in np.argwhere(np.triu(dist >= length - polygon.length_tolerance, k=1))
        ]
        tied.sort()
        i, j = tied[0]
        return DiameterResult(i=i, j=j, length=length, tied_pairs=tied)
