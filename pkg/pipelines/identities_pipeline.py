import logging
from typing import Optional, Tuple

from tools.identities import run_identity_suite
from tools.settings import Settings, get_settings

logger = logging.getLogger(__name__)


def run_identities_pipeline(max_n: int, max_m: int, trials: int, seed: int,
                            settings: Optional[Settings] = None) -> Tuple[int, dict]:
    settings = settings or get_settings()
    suite = run_identity_suite(max_n, max_m, trials, seed, settings)
    logger.info("identity suite all true: %s", suite.all_true)
    return (0 if suite.all_true else 2), suite.to_dict()
