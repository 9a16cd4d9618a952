"""
Command line entry point
"""
import functools
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click

from oval.core.config import settings
from oval.core.exceptions import ConsistencyError, OvalError
from oval.core.logging import setup_logging
from oval.schemas.report import ErrorReport, RunReport
from oval.services.curve_service import CurveService
from oval.services.isoperimetric_service import IsoperimetricService
from oval.services.moduli_service import KITE_QUOTIENT, SQUARE_QUOTIENT, ModuliService, kite_quotient
from oval.services.oracle_service import OracleService
from oval.services.section_service import SectionService
from oval.utils.polygon_io import parse_curve_file, parse_polygon_file
from oval.utils.report_formatter import chord_lines, format_report, inputs_digest
from oval.utils.svg_renderer import emit_svg

logger = logging.getLogger(__name__)

USAGE_EXIT_CODE = 64
REFERENCE_TOLERANCE = 1e-8


def report_options(fn: Callable) -> Callable:
    """--json and --timing for every subcommand; the command returns a RunReport"""
    @click.option("--json", "as_json", is_flag=True, help="Print one JSON object")
    @click.option("--timing", is_flag=True, help="Include wall-clock time in the report")
    @functools.wraps(fn)
    def wrapper(as_json: bool, timing: bool, **kwargs):
        start = time.perf_counter()
        report: RunReport = fn(**kwargs)
        if timing:
            report = report.model_copy(update={"timing_ms": (time.perf_counter() - start) * 1e3})
        click.echo(format_report(report, as_json=as_json))
    return wrapper


def _delta_report(command: str, path: Path, extra: Optional[Dict[str, Any]] = None) -> RunReport:
    polygon = parse_polygon_file(path)
    report = SectionService().compute_delta(polygon)
    values: Dict[str, Any] = {
        "n": polygon.n,
        "diameter": report.diameter,
        "sections": len(report.sections.sections),
        "refined_sections": len(report.refined_sections),
        "upper_bound_holds": report.bounds_check.upper_bound_holds,
        "conjecture_holds": report.bounds_check.conjecture_holds,
    }
    values.update(extra or {})
    return RunReport(
        command=command,
        inputs_digest=inputs_digest(command, path),
        delta=report.delta,
        perimeter=report.perimeter,
        quotient=report.quotient,
        chords=chord_lines(report.chords),
        values=values,
        degenerate=report.degenerate or bool(report.sections.collinear_edges),
    )


@click.group()
@click.version_option(settings.VERSION, prog_name=settings.APP_NAME)
def cli():
    """Minimax invariant delta of convex polygons and curves"""
    setup_logging()


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@report_options
def delta(path: Path) -> RunReport:
    """delta, perimeter and L / delta of a polygon file"""
    return _delta_report("delta", path)


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@report_options
def chords(path: Path) -> RunReport:
    """Distinguished chords of a polygon file"""
    polygon = parse_polygon_file(path)
    found = SectionService().distinguished_chords(polygon)
    return RunReport(
        command="chords",
        inputs_digest=inputs_digest("chords", path),
        chords=chord_lines(found),
        values={"rules": [c.rule for c in found]},
    )


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@click.option("--spacing", type=click.FloatRange(min=0.0, min_open=True), required=True, help="Max arclength between samples")
@report_options
def oracle(path: Path, spacing: float) -> RunReport:
    """Certified sampling interval for delta"""
    polygon = parse_polygon_file(path)
    result = OracleService().delta_bruteforce(polygon, 1.0 / spacing)
    return RunReport(
        command="oracle",
        inputs_digest=inputs_digest("oracle", path, repr(spacing)),
        perimeter=polygon.perimeter,
        values={
            "lower": result.lower,
            "upper": result.upper,
            "width": result.width,
            "spacing": result.spacing,
            "samples": result.samples,
            "argmin_s": result.argmin_s,
        },
    )


@cli.command()
@click.option("--curve", "curve_path", type=click.Path(path_type=Path), required=True, help="Support function descriptor")
@click.option("--n", "n", type=int, required=True, help="Vertices of the inscribed polygon")
@report_options
def approx(curve_path: Path, n: int) -> RunReport:
    """Two-sided bound for delta of a smooth curve"""
    curve = parse_curve_file(curve_path)
    bounds = CurveService().delta_bounds(curve, n)
    return RunReport(
        command="approx",
        inputs_digest=inputs_digest("approx", curve_path, str(n)),
        perimeter=bounds.curve_perimeter,
        values={
            "n": n,
            "delta_low": bounds.delta_low,
            "delta_high": bounds.delta_high,
            "lambda": bounds.lam,
            "k": bounds.k,
            "quotient_low": bounds.quotient_low,
            "quotient_high": bounds.quotient_high,
            "polygon_perimeter": bounds.polygon_perimeter,
        },
    )


@cli.command("scan-triangles")
@click.option("--grid", "grid_n", type=int, default=200, show_default=True)
@report_options
def scan_triangles(grid_n: int) -> RunReport:
    """L / delta over the triangle moduli set"""
    result = ModuliService().triangle_scan(grid_n)
    return RunReport(
        command="scan-triangles",
        inputs_digest=inputs_digest("scan-triangles", str(grid_n)),
        quotient=result.min_quotient,
        values={
            "points": result.points,
            "argmin_x": result.argmin[0],
            "argmin_y": result.argmin[1],
            "max_discrepancy": result.max_discrepancy,
            "upper_bound_holds": result.upper_bound_holds,
            "regions": result.regions,
        },
    )


@cli.command("search-quads")
@click.option("--seed", type=int, default=None, help="Defaults to SEARCH_SEED")
@click.option("--restarts", type=click.IntRange(min=1), default=None, help="Defaults to SEARCH_RESTARTS")
@click.option("--edge-diameter", is_flag=True, help="Keep the diameter as an edge")
@click.option("--iterations", type=click.IntRange(min=0), default=None, help="Defaults to SEARCH_ITERATIONS")
@report_options
def search_quads(
    seed: Optional[int], restarts: Optional[int], edge_diameter: bool, iterations: Optional[int]
) -> RunReport:
    """Pattern search for the smallest L / delta among quadrangles"""
    service = IsoperimetricService()
    result = service.quadrangle_search(
        seed=seed, restarts=restarts, edge_diameter=edge_diameter, iterations=iterations
    )
    return RunReport(
        command="search-quads",
        inputs_digest=inputs_digest(
            "search-quads", str(seed), str(restarts), str(edge_diameter), str(iterations)
        ),
        perimeter=result.best_polygon.perimeter,
        quotient=result.best_quotient,
        values={
            "u0": result.best.u0,
            "u": result.best.u,
            "v0": result.best.v0,
            "v": result.best.v,
            "restarts": result.restarts,
            "evaluations": result.evaluations,
            "skipped": result.skipped,
            "edge_diameter": result.edge_diameter,
        },
    )


def _reference_report(command: str, polygon, reference: float, extra: Dict[str, Any]) -> RunReport:
    report = SectionService().compute_delta(polygon)
    if abs(report.quotient - reference) > REFERENCE_TOLERANCE:
        raise ConsistencyError(
            f"{command}: quotient {report.quotient:.12g} differs from {reference:.12g}",
            {"quotient": report.quotient, "reference": reference},
        )
    return RunReport(
        command=command,
        inputs_digest=inputs_digest(command),
        delta=report.delta,
        perimeter=report.perimeter,
        quotient=report.quotient,
        chords=chord_lines(report.chords),
        values=extra,
    )


@cli.command()
@report_options
def kite() -> RunReport:
    """The magic kite and the minimum of the kite family"""
    moduli = ModuliService()
    optimum = moduli.kite_minimizer()
    return _reference_report(
        "kite",
        moduli.magic_kite(),
        KITE_QUOTIENT,
        {
            "u": optimum.u,
            "v": optimum.v,
            "family_quotient": kite_quotient(optimum.u),
            "scalar_check": optimum.scalar_check,
        },
    )


@cli.command()
@report_options
def square() -> RunReport:
    """The unit square"""
    return _reference_report("square", ModuliService().square_polygon(), SQUARE_QUOTIENT, {})


@cli.command()
@click.argument("path", type=click.Path(path_type=Path))
@click.option("-o", "--output", "out_path", type=click.Path(path_type=Path), required=True)
@report_options
def svg(path: Path, out_path: Path) -> RunReport:
    """Figure with section points and distinguished chords"""
    polygon = parse_polygon_file(path)
    report = SectionService().compute_delta(polygon)
    emit_svg(polygon, report, out_path, title=path.name)
    return RunReport(
        command="svg",
        inputs_digest=inputs_digest("svg", path),
        delta=report.delta,
        quotient=report.quotient,
        values={
            "output": str(out_path),
            "section_points": len(report.sections.section_points),
            "chords": len(report.chords),
        },
    )


@cli.command()
@click.option("--count", type=click.IntRange(min=1), default=100000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n-min", type=click.IntRange(min=3), default=3, show_default=True)
@click.option("--n-max", type=click.IntRange(min=3), default=12, show_default=True)
@report_options
def sweep(count: int, seed: int, n_min: int, n_max: int) -> RunReport:
    """Random polygon sweep of pi <= L / delta <= 2 pi"""
    result = IsoperimetricService().bounds_sweep(count, seed, n_min, n_max)
    return RunReport(
        command="sweep",
        inputs_digest=inputs_digest("sweep", str(count), str(seed), str(n_min), str(n_max)),
        quotient=result.min_quotient,
        values={
            "count": result.count,
            "min_quotient": result.min_quotient,
            "max_quotient": result.max_quotient,
            "conjecture_violations": result.conjecture_violations,
            "skipped": result.skipped,
        },
    )


def _report_error(exc: OvalError, as_json: bool) -> None:
    if as_json:
        error = ErrorReport(message=exc.message, error=type(exc).__name__, details=exc.details)
        click.echo(json.dumps(error.model_dump(), default=str), err=True)
    else:
        click.echo(f"error: {exc.message}", err=True)


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and map errors to exit codes"""
    args: List[str] = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = cli.main(args=args, prog_name=settings.APP_NAME, standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return USAGE_EXIT_CODE
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        return 1
    except OvalError as e:
        logger.debug("Command failed", exc_info=True)
        _report_error(e, "--json" in args)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unhandled exception: {e}", exc_info=True)
        return 1
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
