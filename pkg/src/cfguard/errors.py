"""Shared exception types."""


class CfguardError(Exception):
    pass


class InstanceTooLargeError(CfguardError):
    """Raised when a brute-force routine would exceed its enumeration budget."""


class FormatError(CfguardError):
    """Raised on malformed graph/terrain/report files."""


class InternalConsistencyError(CfguardError):
    """Raised when a guaranteed color budget is exhausted without a solution."""
