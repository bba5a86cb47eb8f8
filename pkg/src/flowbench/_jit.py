"""JIT plumbing for the solver kernels.

Kernels are plain functions over numpy arrays; numba compiles them when
available. Set FLOWBENCH_NO_JIT=1 to run them as interpreted Python
(orders of magnitude slower, but steppable in a debugger).
"""

import os

_disabled = os.environ.get("FLOWBENCH_NO_JIT", "") not in ("", "0")

if not _disabled:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _njit = None
else:
    _njit = None

JIT_ENABLED = _njit is not None


def kernel(func):
    """Compile an array kernel with numba, or return it unchanged."""
    if _njit is None:
        return func
    return _njit(cache=True)(func)
