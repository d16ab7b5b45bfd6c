"""Kernel backend selection.

Prefers the compiled Cython extension; falls back to the numpy/pure-Python
implementations when the extension is absent. Set EVENTGRAPH_KERNELS=python
to force the fallback (used by the benchmark and equivalence tests).
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("EVENTGRAPH_KERNELS", "").lower() == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

# BLAS already wins the dense matrix product (see benchmarks/bench_kernels.py),
# so that kernel stays on the numpy path regardless of backend.
cosine_distance_matrix = _pykernels.cosine_distance_matrix
dbscan_labels = _impl.dbscan_labels
bounded_edit_distance = _impl.bounded_edit_distance

__all__ = [
    "BACKEND",
    "cosine_distance_matrix",
    "dbscan_labels",
    "bounded_edit_distance",
]
