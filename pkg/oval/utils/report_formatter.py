"""
Run report formatting

Text output is one `key = value` line per field in model field order;
JSON output is a single object. Floats use a fixed number of significant
digits so identical runs print identical bytes.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Iterable, List, Optional, Union

from oval.core.config import settings
from oval.schemas.report import ChordLine, RunReport
from oval.schemas.sections import DistinguishedChord


def format_number(value: float, digits: Optional[int] = None) -> str:
    digits = digits or settings.OUTPUT_DIGITS
    text = f"{value:.{digits}g}"
    return "0" if text == "-0" else text


def _round(value: Any, digits: int) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(format_number(value, digits))
    if isinstance(value, dict):
        return {k: _round(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round(v, digits) for v in value]
    return value


def _text(value: Any, digits: int) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_number(value, digits)
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_text(v, digits) for v in value) + ")"
    return str(value)


def _lines(prefix: str, value: Any, digits: int) -> List[str]:
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            out.extend(_lines(f"{prefix}.{k}", v, digits))
        return out
    return [f"{prefix} = {_text(value, digits)}"]


def chord_lines(chords: Iterable[DistinguishedChord]) -> List[ChordLine]:
    return [
        ChordLine(p0_x=c.p0.point.x, p0_y=c.p0.point.y, p0_s=c.p0.s, q0=c.q0, length=c.length)
        for c in chords
    ]


def inputs_digest(*parts: Union[str, bytes, Path]) -> str:
    """sha256 over file contents and argument strings, first 16 hex digits"""
    h = hashlib.sha256()
    for part in parts:
        if isinstance(part, Path):
            h.update(part.read_bytes())
        elif isinstance(part, bytes):
            h.update(part)
        else:
            h.update(part.encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def format_report(report: RunReport, as_json: bool = False, digits: Optional[int] = None) -> str:
    """Render a run report; fields left as None are omitted"""
    digits = digits or settings.OUTPUT_DIGITS
    data = report.model_dump(exclude_none=True)
    if as_json:
        return json.dumps(_round(data, digits), separators=(", ", ": "))

    lines: List[str] = []
    for key, value in data.items():
        if key == "chords":
            lines.append(f"chords = {len(value)}")
            for i, c in enumerate(value):
                lines.append(
                    f"chord[{i}] = p0=({format_number(c['p0_x'], digits)}, {format_number(c['p0_y'], digits)}) "
                    f"s={format_number(c['p0_s'], digits)} q0={c['q0']} length={format_number(c['length'], digits)}"
                )
        elif key == "values":
            for k, v in value.items():
                lines.extend(_lines(k, v, digits))
        else:
            lines.extend(_lines(key, value, digits))
    return "\n".join(lines)
