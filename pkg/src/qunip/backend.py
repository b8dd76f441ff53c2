"""Kernel backend selection.

Hot numeric loops (gate application, oracle sign flips, path sums) exist in
two implementations: numba-jitted loops and pure-numpy array code. The active
backend is chosen once at import from the ``QUNIP_BACKEND`` environment
variable ("numba" or "numpy"); it defaults to numba when importable and can
be switched at runtime with :func:`set_backend` (used by tests and the
backend benchmark).
"""

import os

ENV_VAR = "QUNIP_BACKEND"

try:
    import numba  # noqa: F401

    _NUMBA_OK = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _NUMBA_OK = False


def numba_available() -> bool:
    return _NUMBA_OK


def _resolve_default() -> str:
    requested = os.environ.get(ENV_VAR, "").strip().lower()
    if requested in ("numba", "numpy"):
        if requested == "numba" and not _NUMBA_OK:
            return "numpy"
        return requested
    return "numba" if _NUMBA_OK else "numpy"


_active = _resolve_default()


def active_backend() -> str:
    """Name of the backend in use: "numba" or "numpy"."""
    return _active


def set_backend(name: str) -> None:
    """Switch kernel backend at runtime ("numba" or "numpy")."""
    global _active
    name = name.strip().lower()
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")
    if name == "numba" and not _NUMBA_OK:
        raise ValueError("numba backend requested but numba is not importable")
    _active = name
