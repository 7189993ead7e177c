"""Exception hierarchy. Every error carries a stable ``code`` string."""


class Gpdz2Error(Exception):
    code = "ERROR"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ValidationError(Gpdz2Error):
    """Raised by validators; ``code`` names the first violated axiom."""

    def __init__(self, code, message, witness=None):
        super().__init__(message, witness)
        self.code = code


class BudgetExceeded(Gpdz2Error):
    code = "BUDGET_EXCEEDED"


class PoolExhausted(Gpdz2Error):
    code = "POOL_EXHAUSTED"

    def __init__(self, message, fiber_size=None, pool=None):
        super().__init__(message, witness=fiber_size)
        self.fiber_size = fiber_size
        self.pool = pool


class NotAFibration(Gpdz2Error):
    code = "NOT_A_FIBRATION"


class NotACovering(Gpdz2Error):
    code = "NOT_A_COVERING"


class NotAcyclicCofibration(Gpdz2Error):
    code = "NOT_ACYCLIC_COFIBRATION"


class DomainNotFibrant(Gpdz2Error):
    code = "DOMAIN_NOT_FIBRANT"


class NotFibrant(Gpdz2Error):
    code = "NOT_FIBRANT"


class UnknownName(Gpdz2Error):
    code = "UNKNOWN_NAME"


class SchemaViolation(Gpdz2Error):
    code = "SCHEMA_VIOLATION"

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message, witness=path)
        self.path = path


class EngineError(AssertionError):
    """A construction failed its own verification; this indicates a bug, never bad input."""
