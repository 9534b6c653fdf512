"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``WUNKLAB_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _rk4_py

_compiled = None
if os.environ.get("WUNKLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _rk4 as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKENDS = {"python": _rk4_py}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"


def get_kernel(name=None):
    name = name or BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
