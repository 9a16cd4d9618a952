"""
Section Service

Partition of the boundary into sections (open arcs on which the farthest
vertex is constant), their refinement at vertices, and the minimax value

    delta(P) = min over boundary points x of max over vertices v of |x - v|

computed as the smallest distance from a refined section to its farthest
vertex. Everything runs on numpy arrays; pydantic objects are only built for
the full report.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from oval.core.config import Settings, settings as default_settings
from oval.core.exceptions import ConsistencyError, DegeneracyError, InvalidInputError
from oval.schemas.geometry import ConvexPolygon, Point, Segment
from oval.schemas.sections import (
    Bisector,
    BisectorCut,
    BoundsCheck,
    DeltaReport,
    DistinguishedChord,
    RefinedSection,
    Section,
    SectionDecomposition,
    SectionPoint,
)
from oval.services.geometry_service import (
    GeometryService,
    closest_points,
    points_at_arclength,
    vertex_distances,
)

logger = logging.getLogger(__name__)

UPPER_BOUND_SLACK = 1e-12


@dataclass
class _Crossings:
    """Raw bisector/boundary crossings of all vertex pairs"""
    s: np.ndarray
    pair: np.ndarray
    is_vertex: np.ndarray
    collinear: List[Tuple[int, int]]


@dataclass
class _Sections:
    """Deduplicated section points and the farthest vertex of every section"""
    start: np.ndarray
    is_vertex: np.ndarray
    farthest: np.ndarray
    group: np.ndarray
    order: np.ndarray
    tolerance: float
    retried: bool
    crossings: _Crossings
    pairs_i: np.ndarray
    pairs_j: np.ndarray


@dataclass
class _Pieces:
    """Refined sections as parallel arrays"""
    section: np.ndarray
    edge: np.ndarray
    start: np.ndarray
    end: np.ndarray
    a: np.ndarray
    b: np.ndarray
    farthest: np.ndarray
    z_star: np.ndarray
    z_star_s: np.ndarray
    d: np.ndarray


class SectionService:
    """Section decomposition and the delta of a convex polygon"""

    def __init__(self, config: Optional[Settings] = None):
        self.settings = config or default_settings
        self.geometry = GeometryService(self.settings)

    def _rows_per_block(self, n: int) -> int:
        return max(1, self.settings.BLOCK_ELEMENTS // max(n, 1))

    # ------------------------------------------------------------------
    # Bisectors
    # ------------------------------------------------------------------

    def make_bisector(self, polygon: ConvexPolygon, i: int, j: int) -> Bisector:
        """Perpendicular bisector of the vertices v_i, v_j"""
        n = polygon.n
        if not (0 <= i < n and 0 <= j < n):
            raise InvalidInputError("vertex index out of range", {"i": i, "j": j, "n": n})
        if i == j:
            raise InvalidInputError("bisector needs two distinct vertices", {"i": i, "j": j})
        i, j = min(i, j), max(i, j)
        vi, vj = polygon.xy[i], polygon.xy[j]
        normal = (vj - vi) / float(np.hypot(*(vj - vi)))
        return Bisector(
            i=i,
            j=j,
            midpoint=Point.from_array(0.5 * (vi + vj)),
            direction=Point(x=float(-normal[1]), y=float(normal[0])),
            normal=Point.from_array(normal),
        )

    def _crossings(self, polygon: ConvexPolygon, I: np.ndarray, J: np.ndarray) -> _Crossings:
        V = polygon.xy
        n = polygon.n
        tol = polygon.length_tolerance
        s_out, pair_out, vertex_out = [], [], []
        collinear: List[Tuple[int, int]] = []
        rows = self._rows_per_block(n)

        for lo in range(0, len(I), rows):
            ii, jj = I[lo:lo + rows], J[lo:lo + rows]
            diff = V[jj] - V[ii]
            nrm = diff / np.hypot(diff[:, 0], diff[:, 1])[:, None]
            mid = 0.5 * (V[ii] + V[jj])
            # signed distance of every vertex to every bisector line
            F = np.einsum("pkc,pc->pk", V[None, :, :] - mid[:, None, :], nrm)
            on = np.abs(F) < tol
            F_next = np.roll(F, -1, axis=1)
            on_next = np.roll(on, -1, axis=1)

            p, k = np.nonzero(on)
            s_out.append(polygon.cum[k])
            pair_out.append(p + lo)
            vertex_out.append(np.ones(p.size, dtype=bool))

            strict = ~on & ~on_next & (F * F_next < 0.0)
            p, k = np.nonzero(strict)
            t = F[p, k] / (F[p, k] - F_next[p, k])
            s_out.append(polygon.cum[k] + t * polygon.edge_lengths[k])
            pair_out.append(p + lo)
            vertex_out.append(np.zeros(p.size, dtype=bool))

            p, k = np.nonzero(on & on_next)
            for pp in np.unique(p):
                collinear.append((int(ii[pp]), int(jj[pp])))

        s = np.concatenate(s_out) if s_out else np.empty(0)
        s = np.where(s >= polygon.perimeter, s - polygon.perimeter, s)
        return _Crossings(
            s=s,
            pair=np.concatenate(pair_out).astype(int) if pair_out else np.empty(0, dtype=int),
            is_vertex=np.concatenate(vertex_out) if vertex_out else np.empty(0, dtype=bool),
            collinear=collinear,
        )

    def bisector_boundary_intersections(self, polygon: ConvexPolygon, bisector: Bisector) -> BisectorCut:
        """
        Boundary points on the bisector line, sorted by arclength

        A strictly convex boundary meets a line in at most two points unless
        the line contains an edge, which is flagged instead of enumerated.
        """
        cr = self._crossings(polygon, np.array([bisector.i]), np.array([bisector.j]))
        s = np.sort(cr.s)
        if s.size > 1:
            keep = np.concatenate([[True], np.diff(s) > polygon.length_tolerance])
            s = s[keep]
        return BisectorCut(
            bisector=bisector,
            points=self.geometry.boundary_points(polygon, s),
            collinear_edge=bool(cr.collinear),
        )

    # ------------------------------------------------------------------
    # Sections
    # ------------------------------------------------------------------

    def _group(self, polygon: ConvexPolygon, cr: _Crossings, tol: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Merge crossings closer than tol (circularly) into section points"""
        L = polygon.perimeter
        order = np.argsort(cr.s, kind="stable")
        s = cr.s[order]
        is_vertex = cr.is_vertex[order]
        new_group = np.concatenate([[True], np.diff(s) > tol])
        group = np.cumsum(new_group) - 1
        K = int(group[-1]) + 1
        if K > 1 and s[0] + L - s[-1] <= tol:
            group[group == K - 1] = 0
            K -= 1
        first = np.flatnonzero(new_group)[:K]

        vertex_s = np.full(K, np.inf)
        np.minimum.at(vertex_s, group, np.where(is_vertex, s, np.inf))
        has_vertex = np.isfinite(vertex_s)
        start = np.where(has_vertex, vertex_s, s[first])
        return start, has_vertex, group, order

    def _sample_farthest(self, polygon: ConvexPolygon, start: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Farthest vertex at every section midpoint and its margin over the runner-up"""
        L = polygon.perimeter
        end = np.append(start[1:], start[0] + L)
        _, _, _, xy = points_at_arclength(polygon, 0.5 * (start + end))
        rows = self._rows_per_block(polygon.n)
        farthest = np.empty(len(start), dtype=int)
        gap = np.empty(len(start))
        for lo in range(0, len(start), rows):
            D = vertex_distances(polygon, xy[lo:lo + rows])
            top = np.partition(D, polygon.n - 2, axis=1)
            farthest[lo:lo + rows] = np.argmax(D, axis=1)
            gap[lo:lo + rows] = top[:, -1] - top[:, -2]
        return farthest, gap

    def _decompose(self, polygon: ConvexPolygon) -> _Sections:
        I, J = np.triu_indices(polygon.n, k=1)
        cr = self._crossings(polygon, I, J)
        tol = polygon.length_tolerance
        tie = self.settings.TIE_TOLERANCE * polygon.diameter

        for attempt in range(2):
            start, has_vertex, group, order = self._group(polygon, cr, tol)
            farthest, gap = self._sample_farthest(polygon, start)
            tied = np.flatnonzero(gap <= tie)
            if tied.size == 0:
                if attempt:
                    logger.info("Section farthest-vertex tie resolved at tolerance %.3g", tol)
                return _Sections(
                    start=start,
                    is_vertex=has_vertex,
                    farthest=farthest,
                    group=group,
                    order=order,
                    tolerance=tol,
                    retried=attempt > 0,
                    crossings=cr,
                    pairs_i=I,
                    pairs_j=J,
                )
            logger.warning(
                "Farthest vertex tied in %d section(s) at tolerance %.3g", tied.size, tol
            )
            tol *= 0.5

        s_bad = float(start[tied[0]])
        raise DegeneracyError(f"farthest vertex is not unique on the section at s = {s_bad:.10g}", s_bad)

    def build_sections(self, polygon: ConvexPolygon) -> SectionDecomposition:
        """Section points, sections and their farthest vertices"""
        return self._decomposition_model(polygon, self._decompose(polygon))

    def _decomposition_model(
        self,
        polygon: ConvexPolygon,
        sec: _Sections
    ) -> SectionDecomposition:
        cr, I, J = sec.crossings, sec.pairs_i, sec.pairs_j
        K = len(sec.start)
        L = polygon.perimeter
        pairs: List[set] = [set() for _ in range(K)]
        for g, p in zip(sec.group, cr.pair[sec.order]):
            pairs[int(g)].add((int(I[p]), int(J[p])))

        bps = self.geometry.boundary_points(polygon, sec.start)
        end = np.append(sec.start[1:], sec.start[0] + L)
        section_points = [
            SectionPoint(index=k, boundary_point=bps[k], pairs=sorted(pairs[k]), is_vertex=bool(sec.is_vertex[k]))
            for k in range(K)
        ]
        sections = [
            Section(
                index=k,
                start_s=float(sec.start[k]),
                end_s=float(end[k]),
                farthest_vertex=int(sec.farthest[k]),
                start_bp=bps[k],
                end_bp=bps[(k + 1) % K],
            )
            for k in range(K)
        ]
        return SectionDecomposition(
            section_points=section_points,
            sections=sections,
            dedup_tolerance=sec.tolerance,
            retried=sec.retried,
            collinear_edges=sorted(set(cr.collinear)),
        )

    # ------------------------------------------------------------------
    # Refinement
    # ------------------------------------------------------------------

    def _refine(self, polygon: ConvexPolygon, start: np.ndarray, farthest: np.ndarray, tol: float) -> _Pieces:
        L = polygon.perimeter
        K = len(start)
        cum, lengths = polygon.cum, polygon.edge_lengths

        # vertices that do not already coincide with a section point
        pos = np.searchsorted(start, cum)
        before = np.mod(cum - start[(pos - 1) % K], L)
        after = np.mod(start[pos % K] - cum, L)
        keep = np.minimum(before, after) > tol
        breaks = np.sort(np.concatenate([start, cum[keep]]))

        b0 = breaks
        b1 = np.append(breaks[1:], breaks[0] + L)
        mid = np.mod(0.5 * (b0 + b1), L)
        half = 0.5 * (b1 - b0)
        section = np.searchsorted(start, mid, side="right") - 1
        section[section < 0] = K - 1
        edge = np.clip(np.searchsorted(cum, mid, side="right") - 1, 0, polygon.n - 1)

        offset = mid - cum[edge]
        t0 = np.clip((offset - half) / lengths[edge], 0.0, 1.0)
        t1 = np.clip((offset + half) / lengths[edge], 0.0, 1.0)
        V, E = polygon.xy, polygon.edge_vectors
        a = V[edge] + t0[:, None] * E[edge]
        b = V[edge] + t1[:, None] * E[edge]
        y = farthest[section]

        z_star, t, d = closest_points(V[y], a, b)
        z_t = t0 + np.clip(t, 0.0, 1.0) * (t1 - t0)
        z_s = cum[edge] + z_t * lengths[edge]
        z_s = np.where(z_s >= L, z_s - L, z_s)
        return _Pieces(
            section=section,
            edge=edge,
            start=cum[edge] + t0 * lengths[edge],
            end=cum[edge] + t1 * lengths[edge],
            a=a,
            b=b,
            farthest=y,
            z_star=z_star,
            z_star_s=z_s,
            d=d,
        )

    def refine_sections(self, polygon: ConvexPolygon, decomposition: SectionDecomposition) -> List[RefinedSection]:
        """Split every section at the vertices it contains"""
        pieces = self._refine(
            polygon,
            np.array([s.start_s for s in decomposition.sections]),
            np.array([s.farthest_vertex for s in decomposition.sections], dtype=int),
            decomposition.dedup_tolerance,
        )
        return self._refined_models(pieces)

    @staticmethod
    def _refined_models(pieces: _Pieces) -> List[RefinedSection]:
        return [
            RefinedSection(
                section_index=int(pieces.section[r]),
                edge_index=int(pieces.edge[r]),
                start_s=float(pieces.start[r]),
                end_s=float(pieces.end[r]),
                segment=Segment(a=Point.from_array(pieces.a[r]), b=Point.from_array(pieces.b[r])),
                farthest_vertex=int(pieces.farthest[r]),
                z_star=Point.from_array(pieces.z_star[r]),
                z_star_s=float(pieces.z_star_s[r]),
                d=float(pieces.d[r]),
            )
            for r in range(len(pieces.d))
        ]

    # ------------------------------------------------------------------
    # Delta
    # ------------------------------------------------------------------

    def _check_upper_bound(self, polygon: ConvexPolygon, delta: float) -> None:
        if polygon.perimeter > 2.0 * math.pi * delta * (1.0 + UPPER_BOUND_SLACK):
            raise ConsistencyError(
                "perimeter exceeds 2 pi delta",
                {"perimeter": polygon.perimeter, "delta": delta},
            )

    def delta_value(self, polygon: ConvexPolygon) -> float:
        """delta(P) without building the report"""
        sec = self._decompose(polygon)
        pieces = self._refine(polygon, sec.start, sec.farthest, sec.tolerance)
        delta = float(pieces.d.min())
        self._check_upper_bound(polygon, delta)
        return delta

    def _chords(self, polygon: ConvexPolygon, pieces: _Pieces, delta: float) -> List[Tuple[float, int, str]]:
        tol = polygon.length_tolerance
        L = polygon.perimeter
        found: List[Tuple[float, int, str]] = []
        for r in np.flatnonzero(pieces.d <= delta + tol):
            y = int(pieces.farthest[r])
            found.append((float(pieces.z_star_s[r]), y, "nearest-point"))
            for xy, s in ((pieces.a[r], pieces.start[r]), (pieces.b[r], pieces.end[r])):
                D = vertex_distances(polygon, xy)[0]
                if abs(D[y] - delta) > tol:
                    continue
                s = float(s) - L if s >= L else float(s)
                for q in np.flatnonzero(np.abs(D - delta) <= tol):
                    if q != y:
                        found.append((s, int(q), "endpoint"))

        found.sort(key=lambda c: (c[0], c[1]))
        chords: List[Tuple[float, int, str]] = []
        for s, q, rule in found:
            duplicate = any(
                q == q0 and min(abs(s - s0), L - abs(s - s0)) <= tol
                for s0, q0, _ in chords
            )
            if not duplicate:
                chords.append((s, q, rule))
        return chords

    def distinguished_chords(self, polygon: ConvexPolygon) -> List[DistinguishedChord]:
        """Chords [p0, v_q0] of length delta with p0 on a minimizing refined section"""
        sec = self._decompose(polygon)
        pieces = self._refine(polygon, sec.start, sec.farthest, sec.tolerance)
        return self._chord_models(polygon, pieces)

    def _chord_models(self, polygon: ConvexPolygon, pieces: _Pieces) -> List[DistinguishedChord]:
        delta = float(pieces.d.min())
        chords = self._chords(polygon, pieces, delta)
        bps = self.geometry.boundary_points(polygon, [c[0] for c in chords])
        models = []
        for bp, (_, q, rule) in zip(bps, chords):
            q_point = polygon.vertices[q]
            models.append(
                DistinguishedChord(
                    p0=bp,
                    q0=q,
                    q0_point=q_point,
                    length=bp.point.distance(q_point),
                    rule=rule,
                )
            )
        return models

    def compute_delta(self, polygon: ConvexPolygon) -> DeltaReport:
        """
        delta(P) with sections, refined sections and distinguished chords

        Raises:
            DegeneracyError: a farthest-vertex tie survives the retry
            ConsistencyError: L > 2 pi delta
        """
        sec = self._decompose(polygon)
        pieces = self._refine(polygon, sec.start, sec.farthest, sec.tolerance)
        delta = float(pieces.d.min())
        self._check_upper_bound(polygon, delta)

        L = polygon.perimeter
        minimizing = np.flatnonzero(pieces.d <= delta + polygon.length_tolerance)
        decomposition = self._decomposition_model(polygon, sec)
        note = None
        if decomposition.collinear_edges:
            note = f"{len(decomposition.collinear_edges)} bisector(s) contain a whole edge"
        logger.debug(
            "delta = %.12g for n = %d (%d sections, %d refined)", delta, polygon.n, len(sec.start), len(pieces.d)
        )
        return DeltaReport(
            delta=delta,
            perimeter=L,
            diameter=polygon.diameter,
            quotient=L / delta,
            chords=self._chord_models(polygon, pieces),
            sections=decomposition,
            refined_sections=self._refined_models(pieces),
            minimizing_sections=[int(r) for r in minimizing],
            bounds_check=BoundsCheck(
                upper_bound_holds=True,
                conjecture_holds=L >= math.pi * delta,
            ),
            degenerate=sec.retried,
            note=note,
        )

    def section_minimum(self, polygon: ConvexPolygon, decomposition: SectionDecomposition) -> float:
        """
        min over sections of the distance from the section's closure to its
        farthest vertex, evaluated on the unrefined arcs
        """
        best = math.inf
        L = polygon.perimeter
        for section in decomposition.sections:
            y = polygon.vertices[section.farthest_vertex]
            inner = sorted(
                (polygon.cum[k] + shift, k)
                for k in range(polygon.n)
                for shift in (0.0, L)
                if section.start_s < polygon.cum[k] + shift < section.end_s
            )
            inner = [polygon.vertices[k] for _, k in inner]
            chain = [section.start_bp.point] + inner + [section.end_bp.point]
            for p, q in zip(chain[:-1], chain[1:]):
                if p.distance(q) == 0.0:
                    best = min(best, p.distance(y))
                    continue
                best = min(best, self.geometry.distance_to_segment(y, Segment(a=p, b=q)))
        return best
