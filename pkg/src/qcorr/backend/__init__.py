"""Backend selection for the optimizer hot loops.

The default backend jit-compiles the kernels with numba.  Setting the
environment variable ``QCORR_BACKEND=numpy`` before import selects the
vectorized pure-numpy fallback; ``QCORR_BACKEND=numba`` makes a missing
numba installation a hard error instead of falling back silently.
"""

import os

from . import _impl_numpy

ENV_VAR = "QCORR_BACKEND"

_requested = os.environ.get(ENV_VAR, "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"{ENV_VAR} must be one of auto/numba/numpy, got {_requested!r}")

_active = None
if _requested in ("auto", "numba"):
    try:
        from . import _impl_numba as _active
    except ImportError:
        if _requested == "numba":
            raise
if _active is None:
    _active = _impl_numpy

BACKEND_NAME = _active.NAME


def get_impl(name: str | None = None):
    """Return a backend module by name (used by parity tests and benchmarks)."""
    if name is None:
        return _active
    if name == "numpy":
        return _impl_numpy
    if name == "numba":
        from . import _impl_numba

        return _impl_numba
    raise ValueError(f"unknown backend {name!r}")


def evaluate(objective: str, payload: tuple, x, impl=None) -> float:
    mod = impl or _active
    return float(mod.OBJECTIVES[objective](x, payload))


def minimize(
    objective: str,
    payload: tuple,
    x0,
    method: str = "simplex",
    max_iters: int = 2000,
    value_tol: float = 1e-8,
    step_tol: float = 1e-10,
    init_step: float = 0.25,
    impl=None,
):
    """Run one local search; returns (value, x, iterations, converged)."""
    mod = impl or _active
    f = mod.OBJECTIVES[objective]
    if method == "simplex":
        driver = mod.nelder_mead
    elif method == "adaptive-direct-search":
        driver = mod.direct_search
    else:
        raise ValueError(f"unknown method {method!r}")
    value, x, iters, converged = driver(
        f, payload, x0, max_iters, value_tol, step_tol, init_step
    )
    return float(value), x, int(iters), bool(converged)


def decode_unitary(x, k):
    return _active.decode_unitary(x, k)


def decode_isometry(x, rows, cols):
    return _active.decode_isometry(x, rows, cols)
