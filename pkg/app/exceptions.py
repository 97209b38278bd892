"""Custom exception classes."""

from typing import Any, Dict, Optional


class AppException(Exception):
    """Base application exception."""

    def __init__(
        self,
        message: str,
        exit_code: int = 1,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class ConfigError(AppException):
    """Invalid configuration, arguments or settings."""

    def __init__(self, message: str = "Invalid configuration", details: Optional[Dict] = None):
        super().__init__(message, exit_code=2, details=details)


# ===== DATA FILES =====


class DataError(AppException):
    """Data file could not be read."""

    def __init__(self, message: str = "Data file error", details: Optional[Dict] = None):
        super().__init__(message, exit_code=1, details=details)


class FormatError(DataError):
    """Malformed record in a data file."""

    def __init__(self, message: str = "Malformed record", line: int = 0, details: Optional[Dict] = None):
        self.line = line
        super().__init__(f"line {line}: {message}", details={"line": line, **(details or {})})


class SchemaError(DataError):
    """Records are individually valid but violate a collection rule."""

    def __init__(self, message: str = "Schema violation", details: Optional[Dict] = None):
        super().__init__(message, details=details)


# ===== GAME RULES =====


class RuleViolation(AppException):
    """An engine operation was called with an illegal argument."""

    def __init__(self, message: str = "Illegal game action", details: Optional[Dict] = None):
        super().__init__(message, exit_code=1, details=details)


class WrongPhase(RuleViolation):
    """Operation called outside its phase."""


class NotInHand(RuleViolation):
    """Card is not in the player's hand."""


class Unaffordable(RuleViolation):
    """Card costs more than the resource pool."""


class NotOnTable(RuleViolation):
    """Character is not on the table."""


class NotReady(RuleViolation):
    """Character is exhausted or already committed."""


class TransientCommit(RuleViolation):
    """Transient allies cannot be committed to a quest."""


class InvalidDefender(RuleViolation):
    """Defender is not a ready, uncommitted character on the table."""


class DoubleAssignment(RuleViolation):
    """One defender was assigned to more than one attacker."""


class AttackerNotEngaged(RuleViolation):
    """Attacker is not in the engagement area."""


# ===== POLICIES =====


class PolicyError(AppException):
    """Agent or bundle error."""

    def __init__(self, message: str = "Policy error", details: Optional[Dict] = None):
        super().__init__(message, exit_code=1, details=details)


class EmptyMask(PolicyError):
    """No legal option to choose from."""


class BundleMismatch(PolicyError):
    """Agent bundle does not fit the slot it was assigned to."""


class DivergenceError(PolicyError):
    """Network parameters became non-finite."""
