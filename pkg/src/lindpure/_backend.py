"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-numpy
fallback is used otherwise. Set LINDPURE_PURE_PYTHON=1 to force the
fallback (used by the benchmark and the backend-agreement tests).
"""

import os

if os.environ.get("LINDPURE_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels


def backend_name() -> str:
    """Which kernel implementation is active: 'cython' or 'python'."""
    return kernels.BACKEND_NAME
