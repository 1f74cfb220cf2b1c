"""Pick the kernel implementation at import time.

The compiled ``_kernels`` extension is used when importable; setting
``IOLAT_PURE=1`` forces the pure-Python kernels.
"""
import os

from . import _pykernels

if os.environ.get("IOLAT_PURE") == "1":
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        kernels = _pykernels

BACKEND = "pure" if kernels is _pykernels else "compiled"
