"""Backend selection for the enumeration kernels.

Imports the compiled extension when available; falls back to the numpy
implementation otherwise.  Set NCDET_PURE=1 to force the fallback.
"""

from __future__ import annotations

import os

from . import kernels_py

if os.environ.get("NCDET_PURE"):
    _impl = kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = kernels_py

perm_enum_sum = _impl.perm_enum_sum
word_products_sum = _impl.word_products_sum
word_products_readout = _impl.word_products_readout


def backend_name() -> str:
    return _impl.BACKEND


def available_backends() -> tuple[str, ...]:
    names = ["pure"]
    try:
        from . import _kernels  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return tuple(names)
