"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ParseError(ValueError):
    """Polynomial text does not match the grammar."""

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class InfeasibleError(RuntimeError):
    """A computation would exceed its configured work or size budget."""


class SingularMatrixError(DomainError):
    pass


class NotCompanionError(DomainError):
    pass


class NonDiagonalizableError(DomainError):
    """The eigenvalue -a0 coincides with 1, so the eigenbasis is undefined."""
