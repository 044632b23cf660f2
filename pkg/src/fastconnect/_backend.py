"""Select the compiled kernels when available, the numpy fallback otherwise.

Set ``FASTCONNECT_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from types import ModuleType

from . import _fallback

_compiled: ModuleType | None
try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

KERNEL_NAMES = (
    "direct_l2c",
    "direct_c2l",
    "band_l2c",
    "band_c2l",
    "lambda_dd",
    "oracle_l2c",
    "oracle_c2l",
)


def available() -> tuple[str, ...]:
    return ("compiled", "python") if _compiled is not None else ("python",)


def get(name: str | None = None) -> ModuleType:
    """Kernel module by name; ``None`` picks the default for this process."""
    if name is None:
        name = "python" if os.environ.get("FASTCONNECT_PURE") or _compiled is None else "compiled"
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels were not built; reinstall with Cython and a C compiler")
        return _compiled
    if name == "python":
        return _fallback
    raise ValueError(f"unknown backend {name!r}")


def default_name() -> str:
    return "compiled" if get() is _compiled else "python"
