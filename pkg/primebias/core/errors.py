"""
Error hierarchy
Every error carries the process exit code the CLI reports for it.
"""


class PrimeBiasError(Exception):
    """Base class for all toolkit errors"""
    exit_code = 1


class DomainError(PrimeBiasError, ValueError):
    """Input outside the mathematical domain of an operation"""


class EmptyRangeError(DomainError):
    """Requested range contains nothing to compute"""


class ConstraintError(DomainError):
    """A ConstraintSpec breaks its divisibility hypotheses"""

    def __init__(self, prime: int, reason: str):
        self.prime = prime
        super().__init__(f"prime {prime} {reason}")


class UsageError(PrimeBiasError):
    """Invalid command-line usage"""
    exit_code = 1


class CapacityError(PrimeBiasError):
    """Limit or window exceeds configured capacity"""
    exit_code = 2


class VerificationError(PrimeBiasError):
    """One or more acceptance checks failed"""
    exit_code = 3
