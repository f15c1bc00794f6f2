"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class TorsionError(Exception):
    code = "ERROR"


class ConductorMismatch(TorsionError, ValueError):
    code = "CONDUCTOR_MISMATCH"


class NotDivisible(TorsionError, ArithmeticError):
    code = "NOT_DIVISIBLE"


class NotDivisor(TorsionError, ValueError):
    code = "NOT_DIVISOR"


class SizeMismatch(TorsionError, ValueError):
    code = "SIZE_MISMATCH"


class ClosureBudgetExceeded(TorsionError, RuntimeError):
    code = "CLOSURE_BUDGET_EXCEEDED"


class InternalDivisibilityFailure(TorsionError, AssertionError):
    code = "INTERNAL_DIVISIBILITY_FAILURE"


class DimensionMismatch(TorsionError, ValueError):
    code = "DIMENSION_MISMATCH"


class InvalidSeifert(TorsionError, ValueError):
    code = "INVALID_SEIFERT"


class InadmissiblePsi(TorsionError, ValueError):
    code = "INADMISSIBLE_PSI"


class RankTooLarge(TorsionError, ArithmeticError):
    code = "RANK_TOO_LARGE"


class RankJumps(TorsionError, ArithmeticError):
    code = "RANK_JUMPS"


class CrossCheckMismatch(TorsionError, AssertionError):
    code = "CROSS_CHECK_MISMATCH"


class NotPGroup(TorsionError, ValueError):
    code = "NOT_P_GROUP"


class FactorizationBudgetExceeded(TorsionError, RuntimeError):
    code = "FACTORIZATION_BUDGET_EXCEEDED"


class SearchBudgetExceeded(TorsionError, RuntimeError):
    code = "SEARCH_BUDGET_EXCEEDED"


class InputError(TorsionError, ValueError):
    """Malformed or unreadable input file / option."""
    code = "INPUT_ERROR"


class CertificateRejected(TorsionError, ValueError):
    """A saved report whose certificate does not re-verify."""
    code = "CERTIFICATE_REJECTED"
