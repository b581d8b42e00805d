"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python fallback
is always available and produces bit-identical results. Set the environment
variable RECPOMDP_BACKEND to "python" or "cython" to pin a backend at import
time, or call set_backend() at runtime (mainly for tests and benchmarks).
"""

from __future__ import annotations

import os

from . import pyfallback

_BACKENDS = {"python": pyfallback}
try:
    from . import _core

    _BACKENDS["cython"] = _core
except ImportError:
    _core = None


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def _default_backend() -> str:
    requested = os.environ.get("RECPOMDP_BACKEND", "").strip().lower()
    if not requested:
        return "cython" if "cython" in _BACKENDS else "python"
    if requested not in _BACKENDS:
        raise ImportError(
            f"RECPOMDP_BACKEND={requested!r} is not available; choices: {available_backends()}"
        )
    return requested


_active = _default_backend()


def active_backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choices: {available_backends()}")
    _active = name


def get(name: str | None = None):
    """Return the kernel module for `name` (default: the active backend)."""
    return _BACKENDS[name if name is not None else _active]
