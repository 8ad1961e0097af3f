"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
twin is used. Setting ``CAKECUT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("CAKECUT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

BACKEND = _impl.BACKEND
PiecewiseLinear = _impl.PiecewiseLinear
fp_simulate = _impl.fp_simulate

__all__ = ["BACKEND", "PiecewiseLinear", "fp_simulate"]
