"""Exception hierarchy shared by every module."""


class RHSError(Exception):
    """Base class for all errors raised by the package."""


class InputError(RHSError):
    """Invalid user input: bad parameters, malformed specs, wrong group kinds."""


class BudgetError(RHSError):
    """A configured size or work budget would be exceeded."""


class DegreeMismatch(InputError):
    pass


class OrderBoundExceeded(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


class NotAnAction(InputError):
    pass


class NotNormal(InputError):
    pass


class NotPrime(InputError):
    pass


class NotA2Group(InputError):
    pass


class NotAPGroup(InputError):
    pass


class InvalidCocycle(InputError):
    pass


class SubgroupMismatch(InputError):
    pass


class BadParameter(InputError):
    pass


class Unrecognized(RHSError):
    """A period-four group that matches no constructible catalog family."""


class BadInvariantFactors(InputError):
    pass


class WrongType(InputError):
    pass


class NotCentralCyclic(InputError):
    pass


class EvenD(InputError):
    pass


class BadPrimes(InputError):
    pass


class SpecSyntaxError(InputError):
    """Parse failure in a group spec; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ElaborationError(InputError):
    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
