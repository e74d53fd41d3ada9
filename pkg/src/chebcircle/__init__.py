"""Desk-scale numerical verification of ternary-Goldbach-type counts with
primes constrained to Chebotarev classes: exact representation counts,
singular-series main terms, generating functions and their sieved
approximants, exponential sums, and an elliptic-curve application."""

__version__ = "0.1.0"

from .errors import (ChebCircleError, DegenerateAlpha, DomainError,
                     InconsistentSpec, NotFoundWithinLimit, ResourceLimit,
                     UnsupportedCharacter, UnsupportedInstantiation,
                     ValidationError)
from .galois import (ClassSpec, FrobeniusResult, GaloisSpec, builtin_spec,
                     frobenius_class, validate_spec)
from .instance import FieldClass, ProblemInstance, classical_instance

__all__ = [
    "ChebCircleError", "ClassSpec", "DegenerateAlpha", "DomainError",
    "FieldClass", "FrobeniusResult", "GaloisSpec", "InconsistentSpec",
    "NotFoundWithinLimit", "ProblemInstance", "ResourceLimit",
    "UnsupportedCharacter", "UnsupportedInstantiation", "ValidationError",
    "builtin_spec", "classical_instance", "frobenius_class",
    "validate_spec",
]
