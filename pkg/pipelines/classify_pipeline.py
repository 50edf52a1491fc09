import logging
from typing import Optional, Tuple

from tools.classify import LemmaViolation, classification_report
from tools.errors import InputError
from tools.serrin import polynomial_of
from tools.settings import Settings, get_settings
from tools.specs import load_field, parse_point

logger = logging.getLogger(__name__)


def run_classify_pipeline(field: str, point: str, settings: Optional[Settings] = None) -> Tuple[int, dict]:
    """Classify the degenerate point of a polynomial field at an exact rational point."""
    settings = settings or get_settings()
    poly = polynomial_of(load_field(field, settings))
    if poly is None:
        raise InputError("classification needs a polynomial field")
    report = classification_report(poly, parse_point(point))
    logger.info("classified %s: %s", point, report.result.tag if report.result else "not in U")
    code = 2 if isinstance(report.result, LemmaViolation) else 0
    return code, report.to_dict()
