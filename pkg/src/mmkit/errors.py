"""Exception types shared across the package."""


class MMKitError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(MMKitError, ValueError):
    """An operation was called with arguments outside its domain."""


class FormatError(MMKitError, ValueError):
    """A space file could not be parsed or failed schema validation."""

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        msg = reason if not detail else f"{reason}: {detail}"
        super().__init__(msg)


class InvariantViolationError(FormatError):
    """A loaded or constructed space violates a structural invariant."""


class DisconnectedSpaceError(MMKitError, ValueError):
    """The edge graph of a space is not connected."""

    def __init__(self, components):
        self.components = [sorted(c) for c in components]
        super().__init__(
            f"space is disconnected into {len(self.components)} components: "
            + "; ".join(str(c) for c in self.components)
        )


class CapExceededError(MMKitError, ValueError):
    """An exact enumeration cap was exceeded; a heuristic route exists."""

    def __init__(self, message: str, suggestion: str = ""):
        self.suggestion = suggestion
        super().__init__(message if not suggestion else f"{message} ({suggestion})")
