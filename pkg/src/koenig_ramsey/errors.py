"""Exception types.

``InvalidInput`` subclasses signal malformed data (the CLI maps them to exit
code 2).  ``PreconditionFailed`` subclasses signal that an algorithm's
hypotheses do not hold on a valid input.
"""


class InvalidInput(ValueError):
    def __init__(self, message, *ids):
        super().__init__(message)
        self.ids = ids


class UnknownReference(InvalidInput):
    pass


class UnknownObject(UnknownReference):
    pass


class UnknownArrow(UnknownReference):
    pass


class MissingIdentity(InvalidInput):
    pass


class CompositionNotClosed(InvalidInput):
    pass


class UnitLawViolated(InvalidInput):
    pass


class AssociativityViolated(InvalidInput):
    pass


class MissingCarrier(InvalidInput):
    pass


class MissingAction(InvalidInput):
    pass


class NotAFunction(InvalidInput):
    pass


class FunctorialityViolated(InvalidInput):
    pass


class InvalidColorCount(InvalidInput):
    pass


class NotAFunctor(InvalidInput):
    pass


class NotSurjective(InvalidInput):
    pass


class NotFibration(InvalidInput):
    pass


class EmptyCarrier(InvalidInput):
    pass


class NotNatural(InvalidInput):
    pass


class NotASolution(InvalidInput):
    pass


class SignatureMismatch(InvalidInput):
    pass


class SignatureOverlap(InvalidInput):
    pass


class NotDomainPreserving(InvalidInput):
    pass


class NotClosed(InvalidInput):
    pass


class BoundTooSmall(InvalidInput):
    pass


class PreconditionFailed(RuntimeError):
    def __init__(self, message, *ids):
        super().__init__(message)
        self.ids = ids


class NotAWitness(PreconditionFailed):
    pass


class NoCocone(PreconditionFailed):
    pass


class NoWitness(PreconditionFailed):
    pass


class ConfluentPair(PreconditionFailed):
    pass


class NoAmalgam(PreconditionFailed):
    pass
