"""Kernel selection: compiled extension if available, pure Python otherwise.

Set SATCURV_FORCE_PY=1 to force the Python fallback (used by the parity
tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SATCURV_FORCE_PY"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION = _impl.IMPLEMENTATION
UNSAT = _kernels_py.UNSAT
SAT = _kernels_py.SAT
UNKNOWN = _kernels_py.UNKNOWN

bfc_edges = _impl.bfc_edges
orc_bipartite_edges = _impl.orc_bipartite_edges
dpll = _impl.dpll
