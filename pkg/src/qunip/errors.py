"""Exception hierarchy shared by all qunip modules."""


class QunipError(Exception):
    """Base class for all qunip errors."""


class CapacityError(QunipError):
    """A requested size exceeds the configured desk-scale limits."""


class DomainError(QunipError, ValueError):
    """An argument is outside the operation's domain."""


class ValidationError(QunipError, ValueError):
    """An input value fails a structural check (e.g. a non-unitary gate)."""


class PostSelectionError(QunipError):
    """Conditioning on a measurement outcome with (near-)zero probability."""


class DivergenceError(QunipError, RuntimeError):
    """Training produced a non-finite loss."""
