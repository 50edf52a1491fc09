import logging
from typing import Callable, Dict, Tuple

from pipelines.annulus_pipeline import run_annulus_pipeline
from pipelines.audit_pipeline import run_audit_pipeline
from pipelines.bump_pipeline import run_bump_pipeline
from pipelines.classify_pipeline import run_classify_pipeline
from pipelines.identities_pipeline import run_identities_pipeline
from pipelines.index_pipeline import run_index_pipeline
from pipelines.ode_pipeline import run_ode_pipeline
from tools.errors import InputError

logger = logging.getLogger(__name__)

PIPELINES: Dict[str, Callable[..., Tuple[int, dict]]] = {
    "classify": run_classify_pipeline,
    "index": run_index_pipeline,
    "audit": run_audit_pipeline,
    "annulus": run_annulus_pipeline,
    "bump": run_bump_pipeline,
    "identities": run_identities_pipeline,
    "ode": run_ode_pipeline,
}


def dispatch(command: str, **kwargs) -> Tuple[int, dict]:
    """
    Routes a subcommand to its pipeline.

    Returns:
        (exit code, JSON payload) where the code is 0 for consistent results and 2 for
        contradictions or violations
    """
    try:
        pipeline = PIPELINES[command]
    except KeyError:
        raise InputError(f"unknown command {command!r}") from None
    logger.info("running %s", command)
    return pipeline(**kwargs)
