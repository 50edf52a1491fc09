import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int = 1,
                 desc: Optional[str] = None, progress: bool = False) -> List[R]:
    """
    Apply fn to every item and return the results in input order.

    Args:
        fn: pure function of one item
        items: work items
        threads: worker cap; 1 runs inline
        desc: label for the progress bar
        progress: show a tqdm bar on stderr

    Returns:
        list of results, ordered like items
    """
    items = list(items)
    bar = tqdm(total=len(items), desc=desc, disable=not progress, leave=False)
    try:
        if threads <= 1 or len(items) <= 1:
            results = []
            for item in items:
                results.append(fn(item))
                bar.update()
            return results
        logger.debug("mapping %d items on %d threads", len(items), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(fn, item) for item in items]
            results = []
            for future in futures:
                results.append(future.result())
                bar.update()
            return results
    finally:
        bar.close()
