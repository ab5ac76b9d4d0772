"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (built from ``_ext.pyx``) is preferred when importable;
otherwise the numpy-assisted fallback is used.  Both implement the same
integer-exact contracts, so every downstream result is identical whichever
backend is active.  Set ``SEMCLOUD_NO_EXT=1`` to force the fallback.
"""

import os

from . import fallback

_BACKENDS = {"python": fallback}

try:
    from . import _ext  # compiled; absent unless built

    _BACKENDS["ext"] = _ext
except ImportError:
    _ext = None

if os.environ.get("SEMCLOUD_NO_EXT"):
    _active = fallback
else:
    _active = _BACKENDS.get("ext", fallback)


def active():
    """The kernel module currently in use."""
    return _active


def backend_name() -> str:
    return "ext" if _active is _BACKENDS.get("ext") else "python"


def available() -> list[str]:
    return sorted(_BACKENDS)


def use(name: str):
    """Switch backends (testing/benchmark hook).  Returns the new module."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available()})")
    _active = _BACKENDS[name]
    return _active
