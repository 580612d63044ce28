"""Shared exception types for size caps and file validation."""


class SizeLimit(RuntimeError):
    """A chain space or enumeration exceeded its configured cap."""


class ParseError(ValueError):
    """A structured text file did not parse."""


class InvariantViolation(ValueError):
    """A loaded structure fails a declared identity.

    which: short name of the identity; witness: indices/elements involved.
    """

    def __init__(self, which, witness):
        self.which = which
        self.witness = witness
        super().__init__(f"{which} fails at {witness}")
