"""Text and JSON renderings of a report bundle."""

import logging
from pathlib import Path
from typing import Optional, Tuple, Union

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from app.config import settings
from app.models import ReportBundle

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).parent / "templates"

_environment = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
    autoescape=False,
)


def sorted_bundle(bundle: ReportBundle) -> ReportBundle:
    """Scenarios merged by name so that concurrent runs report identically"""
    return bundle.model_copy(update={"scenarios": sorted(bundle.scenarios, key=lambda s: s.name)})


def render_text(bundle: ReportBundle) -> str:
    return _environment.get_template("report.txt.j2").render(bundle=sorted_bundle(bundle))


def render_json(bundle: ReportBundle) -> str:
    return sorted_bundle(bundle).model_dump_json(indent=2) + "\n"


def write_reports(bundle: ReportBundle, json_path: Union[str, Path]) -> Tuple[Path, Path]:
    """Write the JSON report and its .txt sibling"""
    json_path = Path(json_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    text_path = json_path.with_suffix(".txt")
    json_path.write_text(render_json(bundle), encoding="utf-8")
    text_path.write_text(render_text(bundle), encoding="utf-8")
    logger.info(f"Reports written to {json_path} and {text_path}")
    return json_path, text_path


def default_report_path(name: str, report_dir: Optional[str] = None) -> Path:
    return Path(report_dir or settings.REPORT_DIR) / f"{name}.json"
