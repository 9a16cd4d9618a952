"""
Isoperimetric Service

Searches and sweeps of the quotient L / delta. The bounds
pi * delta <= L <= 2 pi * delta are checked on random polygons; the upper
one is proven and enforced, the lower one is only counted.

Quadrangles are normalized to the diameter B = (-1, 0), E = (1, 0) with free
vertices A = (u0, u) above and C = (v0, -v) below the x-axis. With
edge_diameter the second free vertex is (v0, v), also above, so [B, E] is
an edge.
"""
import logging
import math
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from oval.core.config import Settings, settings as default_settings
from oval.core.exceptions import ConsistencyError, DegeneracyError, InvalidInputError, PolygonValidationError
from oval.core.executor import parallel_map
from oval.schemas.geometry import ConvexPolygon
from oval.schemas.moduli import BoundsSweepResult, QuadrangleCandidate, QuadrangleSearchResult
from oval.services.geometry_service import GeometryService
from oval.services.moduli_service import KITE_QUOTIENT
from oval.services.section_service import SectionService
from oval.utils.random_polygons import random_convex_polygon

logger = logging.getLogger(__name__)

DIAMETER_SLACK = 1e-12
PENALTY = 1e6
KITE_TOLERANCE = 1e-9
START_ATTEMPTS = 200


def _pattern_directions(dim: int = 4) -> np.ndarray:
    """+-e_i and +-e_i +- e_j"""
    eye = np.eye(dim)
    dirs = [sign * eye[i] for i in range(dim) for sign in (1.0, -1.0)]
    for i, j in combinations(range(dim), 2):
        for si in (1.0, -1.0):
            for sj in (1.0, -1.0):
                dirs.append(si * eye[i] + sj * eye[j])
    return np.array(dirs)


DIRECTIONS = _pattern_directions()


class IsoperimetricService:
    """Quadrangle search and random bounds sweep"""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings
        self.geometry = GeometryService(self.settings)
        self.sections = SectionService(self.settings)

    # ------------------------------------------------------------------
    # Quadrangles
    # ------------------------------------------------------------------

    @staticmethod
    def quadrangle_vertices(c: QuadrangleCandidate, edge_diameter: bool = False) -> np.ndarray:
        if edge_diameter:
            return np.array([[-1.0, 0.0], [1.0, 0.0], [c.u0, c.u], [c.v0, c.v]])
        return np.array([[-1.0, 0.0], [c.v0, -c.v], [1.0, 0.0], [c.u0, c.u]])

    def quadrangle_polygon(self, c: QuadrangleCandidate, edge_diameter: bool = False) -> Optional[ConvexPolygon]:
        """Polygon of an admissible candidate, None otherwise"""
        if c.u <= 0.0 or c.v <= 0.0:
            return None
        xy = self.quadrangle_vertices(c, edge_diameter)
        diff = xy[:, None, :] - xy[None, :, :]
        if np.max(np.hypot(diff[..., 0], diff[..., 1])) > 2.0 * (1.0 + DIAMETER_SLACK):
            return None
        try:
            return self.geometry.validate_polygon(xy)
        except PolygonValidationError:
            return None

    def quadrangle_quotient(self, c: QuadrangleCandidate, edge_diameter: bool = False) -> Optional[float]:
        """L / delta of an admissible candidate, None otherwise"""
        polygon = self.quadrangle_polygon(c, edge_diameter)
        if polygon is None:
            return None
        try:
            return polygon.perimeter / self.sections.delta_value(polygon)
        except DegeneracyError:
            return None

    def _start(self, rng: np.random.Generator, edge_diameter: bool) -> np.ndarray:
        for _ in range(START_ATTEMPTS):
            if edge_diameter:
                x = np.array([
                    rng.uniform(0.0, 1.0), rng.uniform(0.1, 1.5),
                    rng.uniform(-1.0, 0.0), rng.uniform(0.1, 1.5),
                ])
            else:
                x = np.array([
                    rng.uniform(-0.5, 0.5), rng.uniform(0.3, 1.7),
                    rng.uniform(-0.5, 0.5), rng.uniform(0.05, 1.0),
                ])
            if self.quadrangle_quotient(QuadrangleCandidate(u0=x[0], u=x[1], v0=x[2], v=x[3]), edge_diameter) is not None:
                return x
        raise InvalidInputError("no admissible starting quadrangle found", {"attempts": START_ATTEMPTS})

    def _restart(self, job: Tuple[np.random.SeedSequence, bool, int]) -> Tuple[float, np.ndarray, int, int]:
        seed_seq, edge_diameter, iterations = job
        rng = np.random.default_rng(seed_seq)
        evaluations = 0
        skipped = 0

        def f(x: np.ndarray) -> Optional[float]:
            nonlocal evaluations, skipped
            evaluations += 1
            q = self.quadrangle_quotient(
                QuadrangleCandidate(u0=float(x[0]), u=float(x[1]), v0=float(x[2]), v=float(x[3])),
                edge_diameter,
            )
            if q is None:
                skipped += 1
            return q

        x = self._start(rng, edge_diameter)
        fx = f(x)
        step = self.settings.SEARCH_INITIAL_STEP
        for _ in range(iterations):
            if step < self.settings.SEARCH_MIN_STEP:
                break
            for d in DIRECTIONS:
                trial = x + step * d
                ft = f(trial)
                if ft is not None and ft < fx:
                    x, fx = trial, ft
                    break
            else:
                step *= 0.5

        def penalized(z: np.ndarray) -> float:
            q = f(z)
            return PENALTY if q is None else q

        polish = minimize(
            penalized,
            x,
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 2000},
        )
        if polish.fun < fx:
            x, fx = polish.x, float(polish.fun)
        return fx, x, evaluations, skipped

    def quadrangle_search(
        self,
        seed: Optional[int] = None,
        restarts: Optional[int] = None,
        edge_diameter: bool = False,
        iterations: Optional[int] = None
    ) -> QuadrangleSearchResult:
        """
        Multi-restart pattern search for the smallest L / delta among
        quadrangles having [B, E] as a diameter

        Restarts draw independent seeds from one SeedSequence and run on the
        worker pool; the best restart (first on ties) is reported.

        Raises:
            ConsistencyError: the best quotient lies below the magic kite value
        """
        seed = self.settings.SEARCH_SEED if seed is None else seed
        restarts = self.settings.SEARCH_RESTARTS if restarts is None else restarts
        iterations = self.settings.SEARCH_ITERATIONS if iterations is None else iterations
        if restarts < 1 or iterations < 0:
            raise InvalidInputError(
                "restarts must be >= 1 and iterations >= 0", {"restarts": restarts, "iterations": iterations}
            )

        children = np.random.SeedSequence(seed).spawn(restarts)
        results = parallel_map(self._restart, [(c, edge_diameter, iterations) for c in children], self.settings)
        best = min(range(restarts), key=lambda i: (results[i][0], i))
        fx, x, _, _ = results[best]
        candidate = QuadrangleCandidate(u0=float(x[0]), u=float(x[1]), v0=float(x[2]), v=float(x[3]))

        logger.info(
            "Quadrangle search finished: %d restart(s), best L/delta %.12g (edge_diameter=%s)",
            restarts, fx, edge_diameter,
        )
        if fx < KITE_QUOTIENT - KITE_TOLERANCE:
            raise ConsistencyError(
                f"quadrangle with L/delta = {fx:.12g} below the magic kite value {KITE_QUOTIENT:.12g}",
                {"quotient": fx, "kite_quotient": KITE_QUOTIENT, "candidate": candidate.as_tuple()},
            )
        return QuadrangleSearchResult(
            best_quotient=fx,
            best=candidate,
            best_polygon=self.quadrangle_polygon(candidate, edge_diameter),
            restarts=restarts,
            evaluations=sum(r[2] for r in results),
            skipped=sum(r[3] for r in results),
            edge_diameter=edge_diameter,
            restart_quotients=[r[0] for r in results],
        )

    # ------------------------------------------------------------------
    # Random sweep
    # ------------------------------------------------------------------

    def _sweep_one(self, polygon: ConvexPolygon) -> Optional[float]:
        try:
            return polygon.perimeter / self.sections.delta_value(polygon)
        except DegeneracyError as e:
            logger.debug("Sweep skipped degenerate polygon: %s", e.message)
            return None

    def bounds_sweep(self, count: int, seed: int, n_min: int = 3, n_max: int = 12) -> BoundsSweepResult:
        """
        L / delta over seeded random convex polygons

        A polygon with L > 2 pi delta aborts the sweep with ConsistencyError;
        polygons with L < pi delta are counted.
        """
        if count < 1:
            raise InvalidInputError("count must be >= 1", {"count": count})
        rng = np.random.default_rng(seed)
        polygons: List[ConvexPolygon] = [
            random_convex_polygon(rng, n_min, n_max, self.geometry) for _ in range(count)
        ]
        quotients = parallel_map(self._sweep_one, polygons, self.settings)

        valid = [(q, i) for i, q in enumerate(quotients) if q is not None]
        if not valid:
            raise InvalidInputError("every polygon of the sweep was degenerate", {"count": count})
        q_min, i_min = min(valid)
        violations = sum(1 for q, _ in valid if q < math.pi)
        if violations:
            logger.warning("%d polygon(s) with L < pi * delta", violations)

        return BoundsSweepResult(
            count=count,
            seed=seed,
            min_quotient=q_min,
            max_quotient=max(q for q, _ in valid),
            conjecture_violations=violations,
            skipped=count - len(valid),
            argmin_polygon=polygons[i_min],
        )
