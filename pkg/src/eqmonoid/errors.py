"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class EqMonoidError(Exception):
    code = "error"
    exit_status = 1


class MalformedInput(EqMonoidError, ValueError):
    code = "malformed-input"


class GroupTooLarge(EqMonoidError):
    code = "group-too-large"
    exit_status = 2


class CapExceeded(EqMonoidError):
    code = "cap-exceeded"
    exit_status = 2


class UnsupportedCase(EqMonoidError):
    code = "unsupported-case"
    exit_status = 2


class InfeasibleMap(EqMonoidError, ValueError):
    """An image violates stabilizer containment (no equivariant map exists)."""
    code = "infeasible-map"


class NotRepresentativeClosed(EqMonoidError, ValueError):
    code = "not-representative-closed"


class UnsupportedTail(EqMonoidError):
    code = "unsupported-tail"
    exit_status = 2


class MetricsUndecidable(EqMonoidError):
    code = "metrics-undecidable"
    exit_status = 2


class FactorizationError(EqMonoidError):
    code = "factorization-failed"
