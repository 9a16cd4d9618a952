"""SVG figures: polygon outline, section points as crosses, distinguished chords dashed"""
import logging
from pathlib import Path
from typing import Union

from jinja2 import Environment, FileSystemLoader, select_autoescape

from oval.core.exceptions import OutputError
from oval.schemas.geometry import ConvexPolygon
from oval.schemas.sections import DeltaReport

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"
MARGIN = 0.05
STROKE = 0.005
CROSS = 0.015
PIXELS = 600

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    autoescape=select_autoescape(["svg", "j2"]),
    keep_trailing_newline=True,
)


def _num(value: float) -> str:
    text = f"{value:.10g}"
    return "0" if text == "-0" else text


def render_svg(polygon: ConvexPolygon, report: DeltaReport, title: str = "delta") -> str:
    """SVG document text; y is flipped so the figure reads with y up"""
    xy = polygon.xy
    xmin, ymin = xy.min(axis=0)
    xmax, ymax = xy.max(axis=0)
    pad_x = MARGIN * (xmax - xmin)
    pad_y = MARGIN * (ymax - ymin)
    w = xmax - xmin + 2.0 * pad_x
    h = ymax - ymin + 2.0 * pad_y
    stroke = STROKE * polygon.diameter
    arm = CROSS * polygon.diameter

    crosses = []
    for sp in report.sections.section_points:
        p = sp.boundary_point.point
        crosses.append({
            "x0": _num(p.x - arm), "x1": _num(p.x + arm),
            "y0": _num(-p.y - arm), "y1": _num(-p.y + arm),
        })
    chords = [
        {
            "x1": _num(c.p0.point.x), "y1": _num(-c.p0.point.y),
            "x2": _num(c.q0_point.x), "y2": _num(-c.q0_point.y),
        }
        for c in report.chords
    ]
    scale = PIXELS / max(w, h)
    return _env.get_template("figure.svg.j2").render(
        view_box=" ".join(_num(v) for v in (xmin - pad_x, -(ymax + pad_y), w, h)),
        width=_num(round(w * scale)),
        height=_num(round(h * scale)),
        title=title,
        outline=" ".join(f"{_num(x)},{_num(-y)}" for x, y in xy),
        stroke=_num(stroke),
        dash=f"{_num(3.0 * stroke)} {_num(2.0 * stroke)}",
        chords=chords,
        crosses=crosses,
    )


def emit_svg(polygon: ConvexPolygon, report: DeltaReport, out_path: Union[str, Path], title: str = "delta") -> Path:
    """Write the figure; unwritable paths raise OutputError"""
    path = Path(out_path)
    try:
        path.write_text(render_svg(polygon, report, title))
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror}", {"path": str(path)}) from e
    logger.info("Wrote %s", path)
    return path
