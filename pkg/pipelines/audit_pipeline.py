import logging
from typing import Optional, Tuple

from tools.errors import VerdictError
from tools.serrin import OverdeterminedSpec, theorem1_audit
from tools.settings import Settings, get_settings
from tools.specs import load_field, parse_domain

logger = logging.getLogger(__name__)


def run_audit_pipeline(field: str, domain: str, c: str, settings: Optional[Settings] = None) -> Tuple[int, dict]:
    settings = settings or get_settings()
    spec = OverdeterminedSpec(load_field(field, settings), parse_domain(domain, settings), c)
    logger.info("auditing %s on %s with c = %s", field, domain, spec.c)
    try:
        verdict = theorem1_audit(spec, settings)
    except VerdictError as e:
        logger.warning("audit found a violation: %s", e)
        conclusion = {"tag": "violation", "error": type(e).__name__, "message": str(e)}
        if e.report is not None:
            conclusion["report"] = e.report.to_dict()
        return 2, {"spec": spec.describe(), "conclusion": conclusion}
    return verdict.exit_code, {"spec": spec.describe(), **verdict.to_dict()}
