"""Selects the compiled batch kernel when available, else the pure-Python one.

Set ``NUCOHERENCE_BACKEND=python`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

python_probability_rows = _kernels_py.probability_rows

try:
    from . import _kernels
except ImportError:  # extension not built
    compiled_probability_rows = None
else:
    # a leftover build from older sources must not be used
    if getattr(_kernels, "KERNEL_ABI", None) == _kernels_py.KERNEL_ABI:
        compiled_probability_rows = _kernels.probability_rows
    else:
        compiled_probability_rows = None

if compiled_probability_rows is not None and os.environ.get("NUCOHERENCE_BACKEND", "").lower() != "python":
    BACKEND = "cython"
    probability_rows = compiled_probability_rows
else:
    BACKEND = "python"
    probability_rows = python_probability_rows

__all__ = ["BACKEND", "probability_rows", "python_probability_rows", "compiled_probability_rows"]
