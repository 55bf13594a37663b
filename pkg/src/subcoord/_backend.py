"""Kernel backend selection.

The compiled Cython module is used when it imports; otherwise the pure-Python
twin takes over. Set ``SUBCOORD_BACKEND=python`` to force the fallback.
"""
import os

from . import _kernels_py

kernels = _kernels_py
NAME = "python"

if os.environ.get("SUBCOORD_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        NAME = "compiled"


def available():
    """Names of the backends importable in this environment."""
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return names
    return ["compiled"] + names


def get(name):
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
