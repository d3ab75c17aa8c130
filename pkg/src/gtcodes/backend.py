"""Kernel backend selection.

The hot kernels exist twice: numba ``@njit`` versions and pure-numpy
fallbacks with identical semantics.  Selection order:

* ``GTCODES_BACKEND=numpy``  force the numpy fallback
* ``GTCODES_BACKEND=numba``  require numba (ImportError if missing)
* unset / ``auto``           numba when importable, numpy otherwise
"""

from __future__ import annotations

import os

_requested = os.environ.get("GTCODES_BACKEND", "auto").lower()
if _requested not in {"auto", "numba", "numpy"}:
    raise ValueError(
        f"GTCODES_BACKEND must be 'numba', 'numpy' or 'auto', got {_requested!r}")

if _requested == "numpy":
    from . import kernels_numpy as _impl
    BACKEND_NAME = "numpy"
else:
    try:
        from . import kernels_numba as _impl
        BACKEND_NAME = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        from . import kernels_numpy as _impl
        BACKEND_NAME = "numpy"

gv_greedy_fill = _impl.gv_greedy_fill
pairwise_stats = _impl.pairwise_stats
experiment_trials = _impl.experiment_trials


def get_backend(name: str):
    """Explicit backend module by name (used by tests and benchmarks)."""
    if name == "numpy":
        from . import kernels_numpy
        return kernels_numpy
    if name == "numba":
        from . import kernels_numba
        return kernels_numba
    raise ValueError(f"unknown backend {name!r}")


def set_threads(threads: int | None) -> None:
    """Cap worker parallelism for the numba backend (no-op for numpy)."""
    if threads is None or BACKEND_NAME != "numba":
        return
    import numba

    numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
