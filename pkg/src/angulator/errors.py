"""Exception hierarchy; ``exit_code`` is what the CLI returns for each family."""


class AngulatorError(Exception):
    exit_code = 1


class DomainError(AngulatorError, ValueError):
    """An argument lies outside the domain of an operation."""


class ParseError(DomainError):
    pass


class MalformedDiagonalError(ParseError):
    pass


class ArityError(ParseError):
    pass


class GapConditionError(ParseError):
    """Vertices out of range or violating the gap conditions of the index set."""


class UnknownObjectError(DomainError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PreconditionError(DomainError):
    pass


class HypothesisError(DomainError):
    """A model fails a structural hypothesis required by the requested operation."""


class UnsupportedError(AngulatorError):
    pass


class CapacityError(AngulatorError):
    exit_code = 3
