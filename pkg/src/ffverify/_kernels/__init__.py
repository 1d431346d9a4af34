"""Hot GF(2) kernels: compiled when available, pure Python otherwise.

Set ``FFVERIFY_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
if not os.environ.get("FFVERIFY_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

rank_table = _impl.rank_table
sweep_gf2 = _impl.sweep_gf2

__all__ = ["BACKEND", "rank_table", "sweep_gf2"]
