"""Exact computations for the crepant resolution correspondence of A_{n-1} surface and threefold singularities."""
from __future__ import annotations

from .errors import CrepantError
from .exact import Cyclotomic
from .tau import tau_correlator

__all__ = ["CrepantError", "Cyclotomic", "tau_correlator"]
__version__ = "0.1.0"
