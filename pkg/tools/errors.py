"""Exception hierarchy shared by the tools, pipelines and the CLI.

Every failure that a caller is expected to handle derives from HessfieldError,
so the CLI can turn any of them into a one-line diagnostic.
"""


class HessfieldError(Exception):
    """Base class for all hessfield failures."""


class InputError(HessfieldError):
    """Malformed or inconsistent user input (files, flags, parameters)."""


class PolyFormatError(InputError):
    """A polynomial file violates the {"terms": [[i, j, "num/den"], ...]} format."""


# algebra

class NotHomogeneous(HessfieldError):
    pass


class DegreeUnderflow(HessfieldError):
    pass


class NotPolynomial(HessfieldError):
    """A polar form c(θ)ϱ^d has no polynomial counterpart."""


# fields and domains

class OutOfDomain(HessfieldError):
    pass


class NearSingular(HessfieldError):
    pass


class OutsideSupport(HessfieldError):
    pass


class NotInBand(OutOfDomain):
    pass


class IllConditioned(NearSingular):
    pass


class EmbeddingError(HessfieldError):
    """The normal map of a curve cannot be an embedding of the band."""


# classification and indices

class NotInU(HessfieldError):
    """The point is not in the degenerate set (D²u is not a multiple of Id)."""


class Degenerate(HessfieldError):
    pass


class DegenerateOnCircle(Degenerate):
    pass


class NonConvergent(HessfieldError):
    pass


class NonIntegerWinding(HessfieldError):
    pass


# overdetermined problems and identities

class ZeroScale(InputError):
    pass


class InvalidConstant(InputError):
    pass


class DegenerateSystem(HessfieldError):
    pass


class VerdictError(HessfieldError):
    """A check failed in a way that is itself an answer; the failing report rides along."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class PDEInconsistent(VerdictError):
    pass


class BoundaryViolation(VerdictError):
    pass
