"""Backend selection for the graph kernels.

The compiled ``_ckernels`` module is used when it imports; otherwise the
pure-Python ``_pykernels`` module. Set ``GAIFMAN_MC_PURE=1`` to force the
fallback.
"""
import os

from . import _pykernels

if os.environ.get("GAIFMAN_MC_PURE") == "1":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"


def available_backends():
    """Name -> module for every backend importable in this environment."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


ball = _impl.ball
distances = _impl.distances
bfs_forest = _impl.bfs_forest
peleg = _impl.peleg
kernel_sets = _impl.kernel_sets
