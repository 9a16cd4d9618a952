"""
Random convex polygons

Two families. "ellipse": vertices at sorted random angles on the unit circle,
pushed through a random affine map. "cloud": the convex hull of a gaussian or
uniform point cloud, which gives uneven edge lengths and near-flat corners the
ellipse family never produces. The hull keeps vertices counter-clockwise.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull

from oval.core.exceptions import InvalidInputError, PolygonValidationError
from oval.schemas.geometry import ConvexPolygon
from oval.services.geometry_service import GeometryService

logger = logging.getLogger(__name__)

MIN_ANGLE_GAP = 1e-2
MAX_ATTEMPTS = 100
KINDS = ("ellipse", "cloud")


def _ellipse_points(rng: np.random.Generator, n_min: int, n_max: int) -> Optional[np.ndarray]:
    n = int(rng.integers(n_min, n_max + 1))
    theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
    gaps = np.diff(np.append(theta, theta[0] + 2.0 * math.pi))
    if gaps.min() < MIN_ANGLE_GAP:
        return None
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    shear = rng.uniform(-0.5, 0.5)
    stretch = rng.uniform(0.3, 1.0)
    affine = np.array([[1.0, shear], [0.0, stretch]])
    pts = pts @ affine.T + rng.uniform(-1.0, 1.0, 2)
    hull = ConvexHull(pts)
    if len(hull.vertices) < n:
        return None
    return pts[hull.vertices]


def _cloud_points(rng: np.random.Generator, n_min: int, n_max: int) -> Optional[np.ndarray]:
    size = int(rng.integers(n_min, 3 * n_max + 1))
    if rng.random() < 0.5:
        pts = rng.normal(0.0, 1.0, (size, 2))
    else:
        pts = rng.uniform(-1.0, 1.0, (size, 2))
    hull = ConvexHull(pts)
    if not n_min <= len(hull.vertices) <= n_max:
        return None
    return pts[hull.vertices]


def random_convex_polygon(
    rng: np.random.Generator,
    n_min: int = 3,
    n_max: int = 12,
    geometry: Optional[GeometryService] = None,
    kind: Optional[str] = None,
) -> ConvexPolygon:
    """
    Draw one strictly convex polygon with n_min <= n <= n_max vertices

    kind is "ellipse", "cloud" or None, which picks a family per attempt.
    """
    if n_min < 3 or n_max < n_min:
        raise InvalidInputError("need 3 <= n_min <= n_max", {"n_min": n_min, "n_max": n_max})
    if kind is not None and kind not in KINDS:
        raise InvalidInputError(f"unknown polygon kind {kind!r}", {"kind": kind, "kinds": list(KINDS)})
    geometry = geometry or GeometryService()

    for _ in range(MAX_ATTEMPTS):
        family = kind or KINDS[int(rng.integers(0, len(KINDS)))]
        if family == "ellipse":
            pts = _ellipse_points(rng, n_min, n_max)
        else:
            pts = _cloud_points(rng, n_min, n_max)
        if pts is None:
            continue
        try:
            return geometry.validate_polygon(pts)
        except PolygonValidationError as e:
            logger.debug("Rejected random %s polygon: %s", family, e.message)

    raise InvalidInputError("could not draw a strictly convex polygon", {"attempts": MAX_ATTEMPTS})
