"""JIT plumbing: numba kernels with a pure numpy/Python fallback.

Set the environment variable ``MFQLAB_DISABLE_JIT=1`` before import to force
the fallback implementations everywhere (useful for debugging and for the
benchmark in ``benchmarks/bench_accel.py``). The fallback is also selected
automatically when numba is not installed, and per-call for model variants
the compiled kernels cannot express (custom choice functions, injected drift
callables).
"""

from __future__ import annotations

import os

ENV_FLAG = "MFQLAB_DISABLE_JIT"


def _env_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


HAVE_NUMBA = False
if not _env_disabled():
    try:
        from numba import njit  # noqa: F401

        HAVE_NUMBA = True
    except ImportError:
        pass

if not HAVE_NUMBA:
    def njit(*args, **kwargs):  # type: ignore[misc]
        """No-op decorator stand-in; kernels decorated with it are never called."""
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


def jit_available() -> bool:
    """True when compiled kernels are usable in this process."""
    return HAVE_NUMBA


def resolve_jit(use_jit) -> bool:
    """Resolve a per-call ``use_jit`` override (None means 'if available')."""
    if use_jit is None:
        return HAVE_NUMBA
    return bool(use_jit) and HAVE_NUMBA
