"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``F5LAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pycore
from ._pycore import BudgetExhausted

if os.environ.get("F5LAB_PURE_PYTHON"):
    _impl = _pycore
else:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built
        _impl = _pycore

BACKEND = "compiled" if _impl is not _pycore else "python"
max_free_bnb = _impl.max_free_bnb
best_partition = _impl.best_partition

__all__ = ["BACKEND", "BudgetExhausted", "best_partition", "max_free_bnb"]
