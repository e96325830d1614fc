"""Numeric kernel backend selection.

The compiled extension is preferred when it was built; setting EGOWORDS_PURE=1
in the environment forces the NumPy fallback. Both backends implement the same
contracts (see ``_pure`` docstrings); ``BACKEND`` names the one in use.
"""

import os

if os.environ.get("EGOWORDS_PURE") == "1":
    from . import _pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl

        BACKEND = "pure"

shift_seeds = _impl.shift_seeds
knn_distances = _impl.knn_distances
tail_scan = _impl.tail_scan

__all__ = ["BACKEND", "shift_seeds", "knn_distances", "tail_scan"]
