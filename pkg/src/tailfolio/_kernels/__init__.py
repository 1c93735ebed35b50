"""Hot numerical kernels with a compiled fast path and a NumPy fallback.

The compiled extension (``tailfolio._kernels._core``, built from Cython) is
preferred when importable; otherwise the semantically identical NumPy
implementations in :mod:`tailfolio._kernels.fallback` are used.  Set the
environment variable ``TAILFOLIO_FORCE_FALLBACK=1`` to force the fallback,
e.g. when benchmarking the two backends against each other.
"""

import os

from . import fallback as _fallback

_impl = _fallback
BACKEND = "numpy"

if not os.environ.get("TAILFOLIO_FORCE_FALLBACK"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

quartic_accumulate = _impl.quartic_accumulate
max_drawdown_scan = _impl.max_drawdown_scan

__all__ = ["BACKEND", "quartic_accumulate", "max_drawdown_scan"]
