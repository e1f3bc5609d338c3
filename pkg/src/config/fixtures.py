"""
Packaged run configurations rendered with string.Template ($NAME, $SEED)
"""
import logging
from pathlib import Path
from string import Template
from typing import List, Optional, Sequence

from .validation import ValidationError

logger = logging.getLogger("lagexp.config.fixtures")

TEMPLATE_DIR = Path(__file__).parent / "templates"


def available_fixtures() -> List[str]:
    return sorted(p.stem for p in TEMPLATE_DIR.glob("*.yml"))


def render_fixture(name: str, seed: int = 0) -> str:
    path = TEMPLATE_DIR / f"{name}.yml"
    if not path.exists():
        raise ValidationError(f"Unknown fixture '{name}'; available: {', '.join(available_fixtures())}")
    with open(path, 'r') as f:
        template = Template(f.read())
    return template.safe_substitute({'NAME': name, 'SEED': seed})


def write_fixtures(out_dir: Path, seed: int = 0, names: Optional[Sequence[str]] = None) -> List[Path]:
    """Render the named fixtures (all by default) into out_dir/<name>.yml"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in names or available_fixtures():
        path = out_dir / f"{name}.yml"
        path.write_text(render_fixture(name, seed))
        logger.debug(f"Rendered fixture {name} to {path}")
        written.append(path)
    return written
