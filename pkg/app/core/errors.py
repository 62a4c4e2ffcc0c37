"""
Exception hierarchy for the q-character engine

Every error carries the CLI exit code and the HTTP status it maps to.
"""


class QCharError(Exception):
    """Base class for all engine errors"""
    exit_code = 3
    http_status = 422

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


# ========== USAGE ERRORS ==========

class UsageError(QCharError):
    exit_code = 2
    http_status = 400


class IllegalRank(UsageError):
    """Rank outside the legal range of the family"""


class UnknownType(UsageError):
    """Type selector string not recognised"""


class UnknownNode(UsageError):
    """Node id not in I_sigma"""


class NegativeK(UsageError):
    """Negative KR length"""


class UnknownLetter(UsageError):
    """Letter not in the alphabet of the tableau variant"""


class UnsupportedNode(UsageError):
    """No tableau formula for this node/k"""


class TypeMismatch(UsageError):
    """Polynomial variables do not belong to the expected type"""


class NotDominant(UsageError):
    """Weight or monomial expected to be dominant"""


class ParseError(UsageError):
    """Malformed text or JSON document"""


# ========== ENGINE ERRORS ==========

class EngineError(QCharError):
    exit_code = 3
    http_status = 422


class Budget(EngineError):
    """Configured monomial cap exceeded"""


class NotDivisible(EngineError):
    """Exact division left a remainder"""


class NotSpecial(EngineError):
    """A second dominant monomial was generated"""


class DirectionConflict(EngineError):
    """Two directions require different multiplicities"""


class NotLocallyDominant(EngineError):
    """Local monomial cannot be written as strings in general position"""


class NotBelow(EngineError):
    """Monomial is not below the reference in the partial order"""


class NotInKernel(EngineError):
    """Direction decomposition failed"""


class NegativeResidue(EngineError):
    """Branching met a negative multiplicity"""


class TruncationUnsound(EngineError):
    """Fermionic sum has nonzero terms on the margin"""


class EngineDisagreement(EngineError):
    """Two engines produced different characters"""
