"""Hot loops: NSRPS substitution and history-code counting.

The NSRPS kernels follow the backend chosen by :mod:`compcause._accel`.
Transfer-entropy counting always uses the numpy path: its sort-based counting
beats the compiled loop (see ``benchmarks/bench_kernels.py``). Both backends
stay importable so tests and benchmarks can compare them.
"""

from .._accel import BACKEND, USE_NUMBA
from . import _numpy as numpy_backend

if USE_NUMBA:
    from . import _numba as numba_backend

    _nsrps = numba_backend
else:
    numba_backend = None
    _nsrps = numpy_backend

nsrps_run = _nsrps.nsrps_run
nsrps_step = _nsrps.nsrps_step
etc_iterations = _nsrps.etc_iterations
window_codes = numpy_backend.window_codes
te_nats = numpy_backend.te_nats

__all__ = [
    "BACKEND", "etc_iterations", "nsrps_run", "nsrps_step", "numba_backend", "numpy_backend",
    "te_nats", "window_codes",
]
