"""Kernel path selection: numba-jitted loops vs pure-numpy fallbacks.

The env var ``PVISREC_NUMBA`` picks the path:

* ``1`` / ``on``  — require numba, fail loudly if it cannot be imported
* ``0`` / ``off`` — force the pure-numpy fallback
* unset           — use numba when importable, else fall back silently

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

from __future__ import annotations

import os

_ENV_VAR = "PVISREC_NUMBA"


def _resolve() -> bool:
    raw = os.environ.get(_ENV_VAR, "").strip().lower()
    if raw in ("0", "off", "false", "no", "numpy"):
        return False
    if raw in ("1", "on", "true", "yes", "numba"):
        import numba  # noqa: F401  (raises if unavailable, which is the point)

        return True
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED: bool = _resolve()


def active_path() -> str:
    """Name of the kernel path in effect, for run metadata."""
    return "numba" if NUMBA_ENABLED else "numpy"
