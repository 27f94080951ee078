"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``RDHEI_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _purepy

kernels = _purepy
NAME = "python"

if not os.environ.get("RDHEI_PURE_PYTHON"):
    try:
        from . import _kernels as kernels  # noqa: F811
        NAME = "cython"
    except ImportError:  # extension not built
        pass
