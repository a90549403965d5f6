"""Exception hierarchy. Each class carries the CLI exit code it maps to."""

PARSE = 64
VALIDATION = 65
SEARCH = 66
CERTIFICATE = 67
INTERNAL = 70


class DiophError(Exception):
    exit_code = VALIDATION


class ParseError(DiophError):
    exit_code = PARSE


# validation-class failures
class ReducibleOrNonMonogenic(DiophError):
    pass


class RingMismatch(DiophError):
    pass


class ZeroIdeal(DiophError):
    pass


class NotAnInvolution(DiophError):
    pass


class NotRealQuadratic(DiophError):
    pass


class Undecidable(DiophError):
    pass


class ZeroInput(DiophError):
    pass


class MissingInclusion(DiophError):
    pass


class AllZero(DiophError):
    pass


class BoxTooLarge(DiophError):
    pass


class CapExceeded(DiophError):
    pass


class MissingAutomorphisms(DiophError):
    pass


class PreconditionFailed(DiophError):
    pass


class NonPrincipalCoordinateIdeal(DiophError):
    pass


class IdentityPoint(DiophError):
    pass


class BadReduction(DiophError):
    def __init__(self, primes):
        self.primes = list(primes)
        super().__init__(f"bad reduction at {self.primes}")


class NotInKernel(DiophError):
    pass


class NotComputable(DiophError):
    pass


class NotABasisElement(DiophError):
    pass


class NoSuchB(DiophError):
    pass


class NoInfiniteOrderGenerator(DiophError):
    pass


class UnsupportedInstance(DiophError):
    pass


class ArithmeticDomain(DiophError):
    pass


class NotDivisible(DiophError):
    pass


# search failures
class SearchExhausted(DiophError):
    exit_code = SEARCH


class SequenceExhausted(SearchExhausted):
    pass


class NoGoodPrimesFound(SearchExhausted):
    pass


class NormTooLargeToFactor(SearchExhausted):
    pass


# certificate failures
class CertificateInvalid(DiophError):
    exit_code = CERTIFICATE

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        super().__init__(f"{clause}: {detail}" if detail else clause)


class ConditionsNotCertified(CertificateInvalid):
    pass


class WitnessInvalid(CertificateInvalid):
    pass


class ResidualNonzero(CertificateInvalid):
    def __init__(self, index: int, name: str = ""):
        self.index = index
        super().__init__("residual", f"polynomial {index} {name}".strip())


# internal errors: a theorem's conclusion failed, so some upstream check is wrong
class InternalError(DiophError):
    exit_code = INTERNAL


class NotInSubring(InternalError):
    pass


class CrossCheckMismatch(InternalError):
    pass


class StabilityViolation(InternalError):
    pass
