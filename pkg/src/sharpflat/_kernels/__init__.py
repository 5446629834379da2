"""Hot-kernel selection.

The compiled extension (_core, Cython) and the pure-Python fallback expose
the same functions.  Import picks the compiled one when present; setting
SHARPFLAT_PURE=1 in the environment forces the fallback.  `select(pure=...)`
rebinds `active` at runtime, which the benchmark uses to compare both.
"""

import os

from . import pure

try:
    from . import _core  # type: ignore[attr-defined]
    HAVE_COMPILED = True
except ImportError:
    _core = None
    HAVE_COMPILED = False

if HAVE_COMPILED and os.environ.get("SHARPFLAT_PURE", "") not in ("1", "true"):
    active = _core
else:
    active = pure


def select(pure_only: bool = False):
    """Rebind the active kernel set; returns the module now in use."""
    global active
    if pure_only or not HAVE_COMPILED:
        active = pure
    else:
        active = _core
    return active
