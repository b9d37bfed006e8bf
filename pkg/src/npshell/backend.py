"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set ``NPSHELL_FORCE_PYTHON=1`` in the environment to force the numpy
fallback even when the compiled module is importable (used by the parity
tests and the benchmark).
"""

import os

from . import _kernels_np

_FORCED = os.environ.get("NPSHELL_FORCE_PYTHON", "") not in ("", "0")

if _FORCED:
    kernels = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        kernels = _kernels_np
        BACKEND = "numpy"
    else:
        kernels = _compiled
        BACKEND = "compiled"


def get_backends():
    """Return {name: module} of all importable kernel backends."""
    out = {"numpy": _kernels_np}
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        out["compiled"] = _compiled
    return out
