"""Kernel backend selection: numba-accelerated or pure numpy.

The env var SKEWLAB_BACKEND picks the path at import time ("auto",
"numba", "numpy"); set_backend() overrides it at runtime.  "auto" means
numba when importable, numpy otherwise.  Both paths are required to
produce identical results, witnesses included.
"""
from __future__ import annotations

import os

VALID = ("auto", "numba", "numpy")

_requested = os.environ.get("SKEWLAB_BACKEND", "auto").strip().lower() or "auto"
_numba_ok: bool | None = None


def numba_available() -> bool:
    """True when numba imports cleanly (probed once)."""
    global _numba_ok
    if _numba_ok is None:
        try:
            import numba  # noqa: F401

            _numba_ok = True
        except Exception:
            _numba_ok = False
    return _numba_ok


def set_backend(name: str) -> None:
    """Force the kernel path; name is one of "auto", "numba", "numpy"."""
    global _requested
    name = name.strip().lower()
    if name not in VALID:
        raise ValueError(f"unknown backend {name!r}, expected one of {VALID}")
    if name == "numba" and not numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    _requested = name


def requested_backend() -> str:
    """The raw request ("auto" included), before resolution."""
    if _requested not in VALID:
        raise ValueError(
            f"SKEWLAB_BACKEND={_requested!r} is invalid, expected one of {VALID}"
        )
    return _requested


def get_backend() -> str:
    """The resolved kernel path: "numba" or "numpy"."""
    req = requested_backend()
    if req == "numpy":
        return "numpy"
    if req == "numba":
        if not numba_available():
            raise RuntimeError("SKEWLAB_BACKEND=numba but numba is not importable")
        return "numba"
    return "numba" if numba_available() else "numpy"
