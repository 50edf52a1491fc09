import logging
from typing import Optional, Tuple

from tools.serrin import bump_report
from tools.settings import Settings, get_settings
from tools.specs import load_bump_disks, parse_domain

logger = logging.getLogger(__name__)


def run_bump_pipeline(disks: str, domain: str, margin: Optional[float] = None,
                      settings: Optional[Settings] = None) -> Tuple[int, dict]:
    """Bumps that vanish to all orders solve the overdetermined problem with c = 0 without being radial."""
    settings = settings or get_settings()
    margin = settings.bump_margin if margin is None else margin
    u = load_bump_disks(disks).build(settings, margin=margin)
    region = parse_domain(domain, settings)
    report = bump_report(u, region, margin, settings)
    logger.info("bump counterexample %s", "holds" if report.passed else "fails")
    return (0 if report.passed else 2), {"field": u.describe(), "domain": region.describe(), **report.to_dict()}
