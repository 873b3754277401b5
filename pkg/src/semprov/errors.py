"""Exception hierarchy shared by all modules."""


class ProvenanceError(Exception):
    """Base class for every error raised by semprov."""

    exit_code = 1


class ParseError(ProvenanceError):
    """Malformed polynomial, formula or input file."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None and column is not None:
            where = f" at line {line}, column {column}"
        elif column is not None:
            where = f" at position {column}"
        super().__init__(f"{message}{where}")


class CarrierError(ProvenanceError, TypeError):
    """A value does not belong to the carrier of the semiring it was used with."""


class CapabilityError(ProvenanceError):
    """The semiring (or polynomial tag) does not support the requested operation."""

    exit_code = 2


class TagMismatchError(ProvenanceError, TypeError):
    """Polynomials with different semiring tags were combined."""


class ExpansionCapError(ProvenanceError):
    """Expanding a circuit produced more monomials than the configured cap."""

    exit_code = 3

    def __init__(self, cap, reached):
        self.cap = cap
        self.reached = reached
        super().__init__(f"expansion exceeded the cap of {cap} monomials (reached {reached})")


class DualConsistencyError(ProvenanceError):
    """A token assignment maps a complementary pair to values whose product is nonzero."""

    def __init__(self, token, value, twin_value):
        self.token = token
        super().__init__(
            f"assignment is not dual-consistent: {token} -> {value} and "
            f"{token.twin()} -> {twin_value} have a nonzero product"
        )


class VocabularyError(ProvenanceError):
    """Unknown relation symbol, arity mismatch, or value outside the universe."""


class ClassificationError(ProvenanceError):
    """The interpretation is not of the class an operation requires."""

    exit_code = 4


class PreconditionError(ProvenanceError):
    """An analysis was asked a question its preconditions rule out."""

    exit_code = 4


class NoRepairError(PreconditionError):
    """No update within the permitted insertions and deletions satisfies the sentence."""


class EnumerationLimitError(ProvenanceError):
    """Proof-tree enumeration would exceed its cap."""

    exit_code = 3
