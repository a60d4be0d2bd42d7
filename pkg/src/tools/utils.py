import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# A prime below 2**31, so products of residues stay inside int64.
DEFAULT_PRIME = int(os.getenv("SEGRE_PRIME", "2147483629"))
DEFAULT_PAD = int(os.getenv("SEGRE_PAD", "2"))
DEFAULT_PAD_CHECK = os.getenv("SEGRE_PAD_CHECK", "true").lower() in ("1", "true", "yes")
DEFAULT_WINDOW = int(os.getenv("SEGRE_WINDOW", "3"))
DEFAULT_POINTS = int(os.getenv("SEGRE_POINTS", "64"))
DEFAULT_MAX_ATTEMPTS = int(os.getenv("SEGRE_MAX_ATTEMPTS", "20"))
EXT_MAX_CHARGE = int(os.getenv("SEGRE_EXT_MAX_CHARGE", "4"))
DEFAULT_GRID = int(os.getenv("SEGRE_GRID", "0"))
DEFAULT_JOBS = int(os.getenv("SEGRE_JOBS", "1"))
LOG_LEVEL = os.getenv("SEGRE_LOG_LEVEL", "INFO")
LOG_FILE = os.getenv("SEGRE_LOG_FILE", "segre_instantons.log")


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    Configure root logging for command-line runs.

    Logs go to stderr and, unless `log_file` is empty, to a log file, so that
    stdout carries only machine output.

    Args:
        level: Logging level name; defaults to SEGRE_LOG_LEVEL.
        log_file: Path of the log file; defaults to SEGRE_LOG_FILE.
    """
    level = (level or LOG_LEVEL).upper()
    log_file = LOG_FILE if log_file is None else log_file
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> List[R]:
    """Map `fn` over `items`, in worker processes when jobs > 1; result order follows input order."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Dispatching {len(items)} tasks to {jobs} workers")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))
