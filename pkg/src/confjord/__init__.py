"""Exact-arithmetic kernel and verifier for conformal algebras."""

from .foundation import MalformedInput
from .report import VerificationReport

__version__ = "0.1.0"
__all__ = ["MalformedInput", "VerificationReport", "__version__"]
