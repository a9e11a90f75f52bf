"""Import-time selection of the agglomeration kernel.

The compiled extension is preferred when importable; otherwise the NumPy
implementation takes over.  ``HCBM_BACKEND`` forces the choice: ``compiled``
(error if unavailable), ``python``, or ``auto`` (default).
"""

from __future__ import annotations

import os

from . import _lw_python

_requested = os.environ.get("HCBM_BACKEND", "auto").lower()
if _requested not in ("auto", "compiled", "python"):
    raise RuntimeError(
        f"HCBM_BACKEND={_requested!r} not understood; use auto, compiled or python"
    )

if _requested == "python":
    _kernel = _lw_python
    BACKEND = "python"
else:
    try:
        from . import _lw_kernel as _kernel  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise RuntimeError(
                "HCBM_BACKEND=compiled but the extension is not built; "
                "reinstall the package with a working C toolchain"
            ) from None
        _kernel = _lw_python
        BACKEND = "python"


def backend_name() -> str:
    return BACKEND


def kernel_agglomerate(dist, code: int):
    return _kernel.lw_agglomerate(dist, code)
