"""Exception hierarchy shared by every module of the package."""


class SkewAlgError(Exception):
    """Base class; the CLI maps these to exit code 2 unless noted."""

    exit_code = 2


class ResourceCapExceeded(SkewAlgError):
    exit_code = 3


# exact linear algebra
class CharacteristicMismatch(SkewAlgError):
    pass


class ShapeError(SkewAlgError):
    pass


# algebras
class PresentationError(SkewAlgError):
    pass


class NotFiniteDimensional(ResourceCapExceeded):
    pass


class InvalidAlgebra(SkewAlgError):
    pass


class NotIdempotent(SkewAlgError):
    pass


class InvalidPoset(SkewAlgError):
    pass


# groups and actions
class InvalidPermutation(SkewAlgError):
    pass


class GroupTooLarge(ResourceCapExceeded):
    pass


class InvalidPrime(SkewAlgError):
    pass


class ENotClosed(SkewAlgError):
    pass


class ActionError(SkewAlgError):
    pass


class FreeActionRequired(SkewAlgError):
    pass


# modules
class AlgebraMismatch(SkewAlgError):
    pass


class UnsupportedOverQ(SkewAlgError):
    pass


# transporter categories
class NotAPosetAction(SkewAlgError):
    pass


class ConnectedRequired(SkewAlgError):
    pass


class TrivialGroup(SkewAlgError):
    pass


# graded algebras
class GradingInconsistent(SkewAlgError):
    pass


class NotDegreeOneGenerated(SkewAlgError):
    pass


class NotGradePreserving(SkewAlgError):
    pass


class PreconditionFailed(SkewAlgError):
    pass
