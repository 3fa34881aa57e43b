"""
Error types shared across the toolkit.
Each error knows the process exit code the CLI reports for it.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1
    stage: str = "computation"


class GroupSpecError(ToolkitError, ValueError):
    """Malformed or invalid group specification."""

    stage = "validation"


class WordSyntaxError(ToolkitError, ValueError):
    """Malformed word or a generator index the group does not have."""

    stage = "validation"


class TrivialClassError(ToolkitError, ValueError):
    """A statistic was requested for the trivial conjugacy class."""

    stage = "validation"


class CommonRootError(ToolkitError, ValueError):
    """Two requested classes share a root, so the independence statements do not apply."""

    stage = "validation"


class NoRootsError(ToolkitError, ValueError):
    """The permutation has no p-th root."""


class CapExceededError(ToolkitError):
    """A configured computational cap was exceeded."""

    exit_code = 2

    def __init__(self, message: str, guidance: str = ""):
        self.guidance = guidance
        super().__init__(f"{message} {guidance}".strip())


class RetryCeilingError(ToolkitError):
    """Rejection sampling exceeded its retry ceiling."""

    exit_code = 2
    stage = "sampling"


class InconsistencyError(ToolkitError):
    """An exact identity that must hold was violated."""

    exit_code = 3


class VerificationError(ToolkitError):
    """A verification run reported failing identities."""

    exit_code = 3
    stage = "verification"
