#!/usr/bin/env python3
"""
Script to render an SVG figure for every polygon fixture
"""
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from oval.core.exceptions import OvalError
from oval.services.section_service import SectionService
from oval.utils.polygon_io import parse_polygon_file
from oval.utils.svg_renderer import emit_svg

FIXTURES = Path(__file__).parent.parent / "tests" / "fixtures"


def render_fixtures(out_dir: Path) -> int:
    """Write <name>.svg for each tests/fixtures/*.txt that parses"""
    out_dir.mkdir(parents=True, exist_ok=True)
    sections = SectionService()
    failures = 0

    for path in sorted(FIXTURES.glob("*.txt")):
        try:
            polygon = parse_polygon_file(path)
            report = sections.compute_delta(polygon)
            target = emit_svg(polygon, report, out_dir / f"{path.stem}.svg", title=path.stem)
            print(f"Wrote: {target}  (delta = {report.delta:.10g}, chords = {len(report.chords)})")
        except OvalError as e:
            # error fixtures are expected to fail
            print(f"Skipped {path.name}: {e.message}")
            failures += 1

    print(f"\nRendered {len(list(out_dir.glob('*.svg')))} figure(s), skipped {failures}")
    return 0


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("figures")
    sys.exit(render_fixtures(target))
