"""Selects the compiled batch kernel when it was built, numpy otherwise.

Set ``DUMBBELL_ENERGY_PURE=1`` to force the numpy path.
"""

import os

from . import _fallback

try:
    if os.environ.get("DUMBBELL_ENERGY_PURE", "") == "1":
        raise ImportError("pure-Python backend requested")
    from . import _core
except ImportError:
    _core = None

DEFAULT = "cython" if _core is not None else "python"
AVAILABLE = ("cython", "python") if _core is not None else ("python",)


def get(name: str = "auto"):
    if name == "auto":
        name = DEFAULT
    if name == "cython":
        if _core is None:
            raise RuntimeError("compiled core is not built; reinstall the package with a C compiler")
        return _core.batch_log_sum
    if name == "python":
        return _fallback.batch_log_sum
    raise ValueError(f"unknown backend {name!r}")
