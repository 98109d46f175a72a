"""Backend selection for the numeric kernels.

Set ``COMPCAUSE_DISABLE_NUMBA=1`` (or numba's own ``NUMBA_DISABLE_JIT=1``)
to force the pure-numpy path. Both paths are required to agree exactly.
"""

import os


def _flag(name):
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


USE_NUMBA = not (_flag("COMPCAUSE_DISABLE_NUMBA") or _flag("NUMBA_DISABLE_JIT"))

if USE_NUMBA:
    try:
        import numba  # noqa: F401
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

BACKEND = "numba" if USE_NUMBA else "numpy"
