import logging
from typing import Optional, Tuple

from tools.algebra import format_rational
from tools.errors import InputError, NonConvergent
from tools.linefield import index_report, line_index
from tools.settings import Settings, get_settings
from tools.specs import load_field, parse_point

logger = logging.getLogger(__name__)


def run_index_pipeline(field: str, center: str, radius: float, boundary: bool = False,
                       tangent: Optional[str] = None, settings: Optional[Settings] = None) -> Tuple[int, dict]:
    """
    Line-field index at a point, checked at r, r/2 and r/4.

    With boundary=True the point lies on ∂Ω with unit tangent T and the inward
    normal is T rotated by +90°.
    """
    settings = settings or get_settings()
    if radius <= 0:
        raise InputError("radius must be positive")
    u = load_field(field, settings)
    p = tuple(float(c) for c in parse_point(center))
    if boundary:
        if tangent is None:
            raise InputError("--boundary needs --tangent TX,TY")
        tx, ty = (float(c) for c in parse_point(tangent))
        normal = (-ty, tx)
        report = index_report(u, p, radius, "boundary", normal, settings)
    else:
        report = index_report(u, p, radius, "interior", settings=settings)
    if not report.converged:
        raise NonConvergent(report.error)
    payload = report.to_dict()
    if not boundary:
        payload["branch_index"] = {f"L{b}": format_rational(line_index(u, p, radius, b, settings)) for b in (1, 2)}
    logger.info("index at %s: %s", center, report.index)
    return 0, payload
