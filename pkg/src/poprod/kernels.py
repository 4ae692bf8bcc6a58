"""Kernel backend chosen at import: compiled if available, else pure Python.

Set ``POPROD_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python_backend

compiled_backend = None
if not os.environ.get("POPROD_PURE_PYTHON"):
    try:
        from . import _ckernels as compiled_backend
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = active.BACKEND

greedy_decompose = active.greedy_decompose
interval_greedy = active.interval_greedy
partition = active.partition
