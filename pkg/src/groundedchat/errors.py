"""Exception hierarchy shared across the package."""


class GroundedChatError(Exception):
    """Base class for all package errors."""


class ConfigurationError(GroundedChatError):
    """Invalid or incomplete configuration (empty registry, bad params, ...)."""


class PreconditionError(GroundedChatError, ValueError):
    """An operation was called with inputs that violate its contract."""


class BackendError(GroundedChatError):
    """Base class for completion-backend failures."""


class TransportError(BackendError):
    """Network-level failure (connection refused, timeout)."""


class RemoteError(BackendError):
    """The remote endpoint answered with an error status."""

    def __init__(self, status_code: int, body: str):
        super().__init__(f"remote error {status_code}: {body[:500]}")
        self.status_code = status_code
        self.body = body


class ContextOverflowError(BackendError):
    """The remote signalled that the prompt exceeds its token limit."""


class FixtureError(BackendError):
    """Base class for scripted-backend fixture failures."""


class FixtureExhausted(FixtureError):
    """The scripted fixture has no entries left."""


class FixtureMismatch(FixtureError):
    """The next fixture entry does not accept the actual prompt."""

    def __init__(self, expected: str, actual: str, match_kind: str):
        super().__init__(
            f"fixture mismatch ({match_kind}):\n"
            f"  expected: {expected!r}\n"
            f"  actual:   {actual!r}"
        )
        self.expected = expected
        self.actual = actual
        self.match_kind = match_kind


class ActionError(GroundedChatError):
    """A parsed action could not be executed against the world."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class WorldError(GroundedChatError):
    """Invalid table mutation (duplicate add, missing object, out of bounds)."""
