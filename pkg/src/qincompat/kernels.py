"""Backend selection for the hot estimation kernels.

The compiled Cython extension is preferred when it imported cleanly; the
pure-numpy module is the always-available fallback.  The two backends are
numerically interchangeable (they differ only by summation order, at the
1e-14 level); within one install the selection is fixed, so seeded outputs
stay byte-reproducible.
"""
from __future__ import annotations

from . import _kernels_py

try:  # pragma: no cover - exercised indirectly
    from . import _kernels_c
    HAVE_COMPILED = True
except ImportError:  # pragma: no cover
    _kernels_c = None
    HAVE_COMPILED = False

_active = _kernels_c if HAVE_COMPILED else _kernels_py


def backend_name() -> str:
    """Name of the active backend: ``"compiled"`` or ``"python"``."""
    return "compiled" if _active is _kernels_c else "python"


def set_backend(name: str) -> None:
    """Force a backend (``"compiled"``/``"python"``); used by benchmarks."""
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernels are not available")
        _active = _kernels_c
    else:
        raise ValueError(f"unknown backend {name!r}")


def assemble_qu(dtilde, x, support_tol: float = 0.0):
    """Dispatch to the active backend; see ``_kernels_py.assemble_qu``."""
    return _active.assemble_qu(dtilde, x, support_tol)
