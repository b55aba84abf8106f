"""Kernel backend selection.

Imports the compiled Cython kernels when available, falling back to the
pure-Python twin.  Set UHFREE_PURE_PYTHON=1 to force the fallback (used
by the benchmark and by tests that compare the two backends).
"""

import os

if os.environ.get("UHFREE_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND
