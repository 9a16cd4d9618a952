"""
Oracle Service

Brute-force estimate of delta from dense boundary samples. The farthest
distance mu is 1-Lipschitz, so the best sample value is an upper bound and
subtracting half the sample spacing gives a certified lower bound.
"""
import logging
import math
from typing import List, Optional

import numpy as np
from scipy.spatial.distance import cdist

from oval.core.config import Settings, settings as default_settings
from oval.core.exceptions import InvalidInputError, ResourceLimitError
from oval.core.executor import parallel_map
from oval.schemas.geometry import ConvexPolygon
from oval.schemas.oracle import MuProfile, OracleResult, PointSetDelta, ProfileSample
from oval.services.geometry_service import points_at_arclength, vertex_distances

logger = logging.getLogger(__name__)


class OracleService:
    """Sampling estimators used to cross-check the section algorithm"""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings

    def _mu_blocks(self, polygon: ConvexPolygon, xy: np.ndarray) -> np.ndarray:
        """mu at every row of xy, evaluated block-wise on the worker pool"""
        rows = max(1, self.settings.BLOCK_ELEMENTS // polygon.n)
        starts = range(0, len(xy), rows)
        blocks = parallel_map(
            lambda lo: vertex_distances(polygon, xy[lo:lo + rows]).max(axis=1),
            starts,
            self.settings,
        )
        return np.concatenate(blocks)

    def delta_bruteforce(self, polygon: ConvexPolygon, samples_per_unit: float) -> OracleResult:
        """
        Certified interval for delta

        The boundary is cut into m = 2^k equal arclength steps with
        m >= L * samples_per_unit; vertices are added as extra samples.

        Raises:
            InvalidInputError: samples_per_unit is not positive
            ResourceLimitError: more than ORACLE_MAX_SAMPLES samples needed
        """
        if not (samples_per_unit > 0.0 and math.isfinite(samples_per_unit)):
            raise InvalidInputError(
                "samples_per_unit must be positive", {"samples_per_unit": samples_per_unit}
            )
        L = polygon.perimeter
        m = 1 << max(0, math.ceil(math.log2(max(L * samples_per_unit, 1.0))))
        if m + polygon.n > self.settings.ORACLE_MAX_SAMPLES:
            raise ResourceLimitError(
                f"oracle needs {m + polygon.n} samples, limit is {self.settings.ORACLE_MAX_SAMPLES}",
                {"samples": m + polygon.n, "limit": self.settings.ORACLE_MAX_SAMPLES},
            )
        h = L / m
        s = np.union1d(np.arange(m) * h, polygon.cum)
        _, _, s, xy = points_at_arclength(polygon, s)
        mu = self._mu_blocks(polygon, xy)
        best = int(np.argmin(mu))
        upper = float(mu[best])

        logger.info("Oracle finished: %d samples, spacing %.3g, upper %.12g", s.size, h, upper)
        return OracleResult(
            lower=upper - 0.5 * h,
            upper=upper,
            argmin_s=float(s[best]),
            samples=int(s.size),
            spacing=h,
        )

    def mu_profile(self, polygon: ConvexPolygon, m: int) -> MuProfile:
        """mu at m arclength-uniform samples starting at vertex 0"""
        if m < polygon.n:
            raise InvalidInputError(
                f"profile needs at least n = {polygon.n} samples", {"m": m, "n": polygon.n}
            )
        s = np.arange(m) * (polygon.perimeter / m)
        _, _, s, xy = points_at_arclength(polygon, s)
        mu = self._mu_blocks(polygon, xy)
        return MuProfile(
            samples=[
                ProfileSample(s=float(si), x=float(p[0]), y=float(p[1]), mu=float(v))
                for si, p, v in zip(s, xy, mu)
            ]
        )

    @staticmethod
    def lipschitz_violation(profile: MuProfile) -> float:
        """max |mu(p) - mu(q)| - |p - q| over cyclically consecutive samples"""
        xy = np.array([[p.x, p.y] for p in profile.samples])
        mu = np.array([p.mu for p in profile.samples])
        step = np.roll(xy, -1, axis=0) - xy
        chord = np.hypot(step[:, 0], step[:, 1])
        return float(np.max(np.abs(np.roll(mu, -1) - mu) - chord))

    def delta_of_point_set(self, points: np.ndarray) -> PointSetDelta:
        """
        min over p of max over q of |p - q| for a finite point set

        Args:
            points: (N, 2) array of sample coordinates

        Returns:
            the value with the minimising p and its farthest q
        """
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
            raise InvalidInputError("need an (N, 2) array with N >= 2", {"shape": list(pts.shape)})
        rows = max(1, self.settings.BLOCK_ELEMENTS // len(pts))
        mu: List[np.ndarray] = []
        far: List[np.ndarray] = []
        for lo in range(0, len(pts), rows):
            D = cdist(pts[lo:lo + rows], pts)
            far.append(np.argmax(D, axis=1))
            mu.append(D[np.arange(len(D)), far[-1]])
        mu_all = np.concatenate(mu)
        p = int(np.argmin(mu_all))
        return PointSetDelta(delta=float(mu_all[p]), p_index=p, q_index=int(np.concatenate(far)[p]))
