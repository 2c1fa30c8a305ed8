"""Kernel backend selection: compiled extension if available, else Python.

NBGLARMA_BACKEND=c forces the extension (ImportError if missing);
NBGLARMA_BACKEND=py forces the pure-Python twin.
"""

import os

_requested = os.environ.get("NBGLARMA_BACKEND", "").strip().lower()
if _requested not in ("", "c", "py"):
    raise ImportError(f"NBGLARMA_BACKEND must be 'c' or 'py', got {_requested!r}")

if _requested == "py":
    from . import _cdkernel_py as _impl

    BACKEND = "py"
else:
    try:
        from . import _cdkernel as _impl  # type: ignore[attr-defined]

        BACKEND = "c"
    except ImportError:
        if _requested == "c":
            raise
        from . import _cdkernel_py as _impl

        BACKEND = "py"

cd_solve = _impl.cd_solve
cd_path = _impl.cd_path


def backend_name() -> str:
    """Which kernel is active: 'c' (compiled) or 'py' (pure Python)."""
    return BACKEND
