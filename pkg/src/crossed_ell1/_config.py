"""Runtime switches read from the environment.

``CROSSED_ELL1_NO_JIT=1`` forces the pure-numpy kernels even when numba is
importable.  ``CROSSED_ELL1_THREADS`` caps numba's thread pool.
"""

from __future__ import annotations

import logging
import os

logger = logging.getLogger(__name__)

_TRUTHY = {"1", "true", "yes", "on"}


def jit_disabled() -> bool:
    return os.environ.get("CROSSED_ELL1_NO_JIT", "").strip().lower() in _TRUTHY


def thread_cap() -> int | None:
    raw = os.environ.get("CROSSED_ELL1_THREADS")
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        logger.warning("ignoring non-integer CROSSED_ELL1_THREADS=%r", raw)
        return None
    return max(1, value)
