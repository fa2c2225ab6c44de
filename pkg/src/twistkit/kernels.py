"""Backend selection for the modular kernels.

The compiled extension is used when it imports; setting
``TWISTKIT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

# 2**62 - 57, prime; residues and products stay within the compiled kernel's word size.
DEFAULT_PRIME = 4611686018427387847

_force_py = os.environ.get("TWISTKIT_PURE_PYTHON", "") not in ("", "0")

if _force_py:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

rank_mod_p = _impl.rank_mod_p
det_mod_p = _impl.det_mod_p
eval_terms_mod_p = _impl.eval_terms_mod_p

__all__ = ["BACKEND", "DEFAULT_PRIME", "rank_mod_p", "det_mod_p", "eval_terms_mod_p"]
