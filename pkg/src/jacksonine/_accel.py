"""Optional numba acceleration.

Set ``JACKSONINE_NO_NUMBA=1`` to force the pure-numpy code paths (they are
always importable and give the same results to rounding).
"""

from __future__ import annotations

import os

ENV_FLAG = "JACKSONINE_NO_NUMBA"

try:
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    HAVE_NUMBA = False


def numba_enabled() -> bool:
    return HAVE_NUMBA and os.environ.get(ENV_FLAG, "").strip() not in {"1", "true", "yes"}


def optional_njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""

    def decorator(func):
        if HAVE_NUMBA:
            return _njit(*args, **kwargs)(func)
        return func

    if len(args) == 1 and callable(args[0]) and not kwargs:
        func, args = args[0], ()
        return decorator(func)
    return decorator
