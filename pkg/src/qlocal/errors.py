"""Exception hierarchy shared by all qlocal modules.

Three families matter to callers (and to the CLI exit codes): resource
limits, violated mathematical preconditions, and malformed codes.
"""


class QlocalError(Exception):
    """Base class for all library-specific errors."""


class ResourceLimitError(QlocalError):
    """A configured bound was hit; the answer is unknown, not negative."""


class FactorizationLimitExceeded(ResourceLimitError):
    """Input exceeds the configured factorization bit bound."""


class SearchExhausted(ResourceLimitError):
    """A bounded search ran out of candidates before finding a witness."""


class PreconditionError(QlocalError):
    """An operation was invoked outside its stated hypotheses."""


class HypothesisViolated(PreconditionError):
    """A congruence hypothesis of a semi-local ring lemma fails."""


class WholeFieldRing(PreconditionError):
    """Operation undefined when the semi-local ring is all of the rationals."""


class NotASimpleRoot(PreconditionError):
    """Residue is not a simple root: f(a) != 0 mod p or f'(a) == 0 mod p."""


class NegativeValuation(PreconditionError):
    """A p-adic integer was required but the value has negative valuation."""


class CodingError(QlocalError):
    """Malformed token sequence or integer code."""


class UnknownToken(CodingError):
    """Token not present in the registered code table."""


class NotACode(CodingError):
    """Integer is not the code of any registered token sequence."""
