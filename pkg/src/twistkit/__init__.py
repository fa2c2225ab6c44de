"""Exact symbolic verification of the first-order deformation computation for
lines on degree-d hypersurfaces."""

from __future__ import annotations

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    PreconditionError,
    StructureError,
    TwistkitError,
    UnknownParameterError,
    VerificationError,
)
from .kernels import BACKEND  # noqa: E402

__all__ = [
    "__version__",
    "BACKEND",
    "TwistkitError",
    "PreconditionError",
    "StructureError",
    "UnknownParameterError",
    "VerificationError",
]
