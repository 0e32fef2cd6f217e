"""Exception hierarchy.

Two families matter to the command line: configuration problems (bad
descriptor, bad input file, group too large) and invariant failures, which
mean a computed structure disagrees with what the theory guarantees.
"""


class CambrianError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(CambrianError):
    pass


class InvariantFailure(CambrianError):
    pass


class InvalidDescriptor(ConfigurationError):
    pass


class GuardExceeded(ConfigurationError):
    pass


class BadCustomRoots(ConfigurationError):
    pass


class RankNot3(ConfigurationError):
    pass


class IndexOutOfRange(ConfigurationError):
    pass


class NotUnit(CambrianError):
    pass


class NotARoot(CambrianError):
    pass


class SingularMatrix(InvariantFailure):
    pass


class DegenerateCone(InvariantFailure):
    pass


class SimpleSystemSizeMismatch(InvariantFailure):
    pass


class RhoInconsistent(InvariantFailure):
    pass


class MismatchWithDirectAX(InvariantFailure):
    pass


class FacetSizeMismatch(InvariantFailure):
    pass


class NotInNCP(InvariantFailure):
    pass


class RoundTripFailure(InvariantFailure):
    pass


class ChamberUnassigned(InvariantFailure):
    pass


class ChamberMultiplyAssigned(InvariantFailure):
    pass
