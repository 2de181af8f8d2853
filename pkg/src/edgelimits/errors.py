"""Exception types. The CLI maps each to a distinct exit status."""


class EdgeLimitsError(Exception):
    pass


class ShapeError(EdgeLimitsError, ValueError):
    """Operands disagree in order, dimension or block structure."""


class PreconditionError(EdgeLimitsError, ValueError):
    """An input violates a stated hypothesis (ball membership, orthogonality...)."""


class BudgetExceeded(EdgeLimitsError, RuntimeError):
    """An exact enumeration would exceed its configured size budget."""


class ParseError(EdgeLimitsError, ValueError):
    def __init__(self, source, field, message):
        self.source = source
        self.field = field
        super().__init__(f"{source}: field {field!r}: {message}")
