"""Exception hierarchy shared by the engine and the command line."""


class RepairCountError(Exception):
    """Base class for every error raised by this package."""


class ParseError(RepairCountError, ValueError):
    """Malformed schema, fact, query or DIMACS text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(RepairCountError, ValueError):
    """Unknown relation or attribute, or an arity mismatch."""


class PreconditionError(RepairCountError, ValueError):
    """An operation was called outside the inputs it is defined for."""


class NoLhsChainError(PreconditionError):
    """The FD set has no left-hand side chain, even up to equivalence."""


class SelfJoinError(PreconditionError):
    """The query mentions some relation more than once."""


class UnsafeQueryError(PreconditionError):
    """Exact evaluation was requested for a query that is not safe."""


class OracleCapExceeded(RepairCountError):
    """The brute-force oracle refused an input above its fact cap."""
