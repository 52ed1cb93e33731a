"""Kernel backend selection.

The compiled extension is preferred when present; the pure-Python twin is the
fallback.  Set SPINECYCLES_BACKEND=pure or =compiled to force a choice
(forcing "compiled" raises if the extension is not built).
"""

import os

_choice = os.environ.get("SPINECYCLES_BACKEND", "").strip().lower()

if _choice == "pure":
    from . import _pure as _impl
elif _choice == "compiled":
    from . import _fastkernel as _impl  # type: ignore[attr-defined]
elif _choice:
    raise ImportError(f"unknown SPINECYCLES_BACKEND {_choice!r} (use 'pure' or 'compiled')")
else:
    try:
        from . import _fastkernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

BACKEND = _impl.BACKEND
MAX_POLY_DEGREE = _impl.MAX_POLY_DEGREE
poly_roots = _impl.poly_roots
PhiMod = _impl.PhiMod
curve_ap = _impl.curve_ap
first_ss_j = _impl.first_ss_j
closed_walks = _impl.closed_walks
