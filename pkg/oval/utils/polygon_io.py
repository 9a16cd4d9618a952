"""
Polygon and curve file parsing

Polygon files hold one vertex per line (two numbers separated by
whitespace). Curve files hold `a0 = <value>` and lines `cos <m> <value>` or
`sin <m> <value>`. In both, blank lines and lines starting with `#` are
ignored.
"""
import math
import re
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from oval.core.exceptions import InvalidCurveError, PolygonFileError
from oval.schemas.curve import Harmonic, SupportCurve
from oval.schemas.geometry import ConvexPolygon
from oval.services.geometry_service import GeometryService

PathLike = Union[str, Path]

A0_PATTERN = re.compile(r"^a0\s*=\s*(\S+)$")
HARMONIC_PATTERN = re.compile(r"^(cos|sin)\s+(\d+)\s+(\S+)$")


def _to_float(token: str) -> Optional[float]:
    try:
        value = float(token)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def validate_vertex_line(line: str) -> Tuple[bool, Optional[str], Optional[Tuple[float, float]]]:
    """
    Validate one vertex line

    Returns:
        Tuple of (is_valid, error_message, vertex)
    """
    tokens = line.split()
    if len(tokens) != 2:
        return False, f"expected two numbers, got {len(tokens)} field(s)", None
    x, y = _to_float(tokens[0]), _to_float(tokens[1])
    if x is None or y is None:
        return False, f"not a finite number pair: {line.strip()!r}", None
    return True, None, (x, y)


def _content_lines(path: PathLike) -> List[Tuple[int, str]]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise PolygonFileError(f"cannot read {path}: {e.strerror}") from e
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            lines.append((number, line))
    return lines


def read_vertices(path: PathLike) -> List[Tuple[float, float]]:
    vertices = []
    for number, line in _content_lines(path):
        is_valid, error, vertex = validate_vertex_line(line)
        if not is_valid:
            raise PolygonFileError(error, number)
        vertices.append(vertex)
    return vertices


def parse_polygon_file(path: PathLike, geometry: Optional[GeometryService] = None) -> ConvexPolygon:
    """Read and validate a polygon file; validation errors pass through unchanged"""
    geometry = geometry or GeometryService()
    return geometry.validate_polygon(read_vertices(path))


def parse_curve_file(path: PathLike) -> SupportCurve:
    """Read a support-function descriptor"""
    a0: Optional[float] = None
    terms: Dict[int, Dict[str, float]] = {}
    for number, line in _content_lines(path):
        match = A0_PATTERN.match(line)
        if match:
            if a0 is not None:
                raise PolygonFileError("a0 given twice", number)
            a0 = _to_float(match.group(1))
            if a0 is None:
                raise PolygonFileError(f"a0 is not a finite number: {match.group(1)!r}", number)
            continue
        match = HARMONIC_PATTERN.match(line)
        if not match:
            raise PolygonFileError(f"expected 'a0 = <value>' or 'cos|sin <m> <value>': {line!r}", number)
        kind, m, value = match.group(1), int(match.group(2)), _to_float(match.group(3))
        if value is None:
            raise PolygonFileError(f"coefficient is not a finite number: {match.group(3)!r}", number)
        if m < 2:
            raise PolygonFileError(f"harmonic order must be >= 2, got {m}", number)
        slot = terms.setdefault(m, {})
        key = "a" if kind == "cos" else "b"
        if key in slot:
            raise PolygonFileError(f"{kind} {m} given twice", number)
        slot[key] = value

    if a0 is None:
        raise PolygonFileError("missing 'a0 = <value>' line")
    try:
        return SupportCurve(a0=a0, harmonics=[Harmonic(m=m, **coeffs) for m, coeffs in terms.items()])
    except ValidationError as e:
        raise InvalidCurveError(f"invalid support function: {e.errors()[0]['msg']}") from e
