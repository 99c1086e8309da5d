"""Kernel backend selection.

The hot geometry and solver loops exist twice: a numba-compiled version in
``_numba`` and a pure-numpy reference in ``_numpy``.  The environment
variable ``HARDYLAB_BACKEND`` picks one at import time:

    HARDYLAB_BACKEND=numba   compiled kernels (default when numba imports)
    HARDYLAB_BACKEND=numpy   pure-numpy fallback

``backend_name`` reports the active choice; ``benchmarks/kernel_bench.py``
times the two side by side.
"""

import os

from . import _numpy as _np_impl

_requested = os.environ.get("HARDYLAB_BACKEND", "numba").strip().lower()

if _requested == "numpy":
    _impl = _np_impl
    backend_name = "numpy"
else:
    try:
        from . import _numba as _nb_impl
        _impl = _nb_impl
        backend_name = "numba"
    except ImportError:
        _impl = _np_impl
        backend_name = "numpy"

winding_numbers = _impl.winding_numbers
min_edge_distances = _impl.min_edge_distances
segments_clear = _impl.segments_clear
raster_segments = _impl.raster_segments
hildreth_sweep = _impl.hildreth_sweep

numpy_impl = _np_impl
try:
    from . import _numba as numba_impl
except ImportError:
    numba_impl = None

__all__ = [
    "winding_numbers", "min_edge_distances", "segments_clear",
    "raster_segments", "hildreth_sweep", "backend_name",
    "numpy_impl", "numba_impl",
]
