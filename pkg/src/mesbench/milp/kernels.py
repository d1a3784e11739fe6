"""Backend selection for the simplex pivot kernel.

The compiled extension is preferred when it imported cleanly; setting
MESBENCH_PURE_PY=1 forces the numpy fallback.  Both backends implement the
same arithmetic in the same order, so a solve is reproducible bit for bit
regardless of which one is active.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("MESBENCH_PURE_PY", "") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

eliminate = _impl.eliminate


def kernel_backend() -> str:
    """Name of the active pivot backend: 'compiled' or 'numpy'."""
    return _impl.BACKEND
