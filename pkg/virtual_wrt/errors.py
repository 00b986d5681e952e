"""Exception hierarchy shared by every module."""

from typing import Optional


class VirtualWrtError(Exception):
    """Base class for computation errors (CLI exit code 1)."""


class DiagramSyntaxError(VirtualWrtError, ValueError):
    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DiagramValidationError(VirtualWrtError, ValueError):
    pass


class DomainError(VirtualWrtError, ValueError):
    """Label, colour or factorial argument outside the range allowed at a level."""


class BudgetExceededError(VirtualWrtError):
    pass


class MoveError(VirtualWrtError, ValueError):
    pass


class CalibrationError(VirtualWrtError):
    pass
