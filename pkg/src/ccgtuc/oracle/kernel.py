"""Selects the compiled path-search kernel when it is built, else the Python one.

Set ``CCGTUC_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from ccgtuc.oracle import _enumerate_py

try:
    from ccgtuc.oracle import _enumerate as _compiled
except ImportError:  # extension not built
    _compiled = None

__all__ = ["KERNEL", "compiled_available", "active_kernel", "enumerate_paths"]


def compiled_available() -> bool:
    return _compiled is not None


def _use_python(pure_python: bool | None) -> bool:
    if pure_python is None:
        pure_python = os.environ.get("CCGTUC_PURE_PYTHON", "") not in ("", "0")
    return pure_python or _compiled is None


def active_kernel(pure_python: bool | None = None) -> str:
    return "python" if _use_python(pure_python) else "cython"


KERNEL = active_kernel()


def enumerate_paths(tab, pure_python: bool | None = None):
    """``(cost, path indices, nodes visited)`` for the tables of one plant."""
    if _use_python(pure_python):
        return _enumerate_py.enumerate_paths(tab)
    return _compiled.enumerate_paths(tab)
