from enum import Enum
from typing import Optional


class StatusCodes(str, Enum):
    SUCCESS = "success"
    ERROR = "error"
    FAILED = "failed"

class CommonErrorCodes(str, Enum):
    TOOL_ERROR = "TOOL_ERROR"
    UNKNOWN_ERROR = "UNKNOWN_ERROR"
    PRECONDITION = "PRECONDITION"


class ChowErrorCode(str, Enum):
    NEGATIVE_MULTIPLICITY = "NEGATIVE_MULTIPLICITY"
    NON_INTEGRAL = "NON_INTEGRAL"
    ODD_CHERN_DATA = "ODD_CHERN_DATA"
    BAD_RANK = "BAD_RANK"

class FieldErrorCode(str, Enum):
    FIELD_MISMATCH = "FIELD_MISMATCH"
    NOT_PRIME = "NOT_PRIME"
    NEGATIVE_DEGREE = "NEGATIVE_DEGREE"
    UNDERDETERMINED = "UNDERDETERMINED"
    INCONSISTENT = "INCONSISTENT"

class MonadErrorCode(str, Enum):
    BAD_SHAPE = "BAD_SHAPE"
    GENERATION_EXHAUSTED = "GENERATION_EXHAUSTED"
    DEFICIENT_NOT_SEPARABLE = "DEFICIENT_NOT_SEPARABLE"
    KERNEL_TOO_SMALL = "KERNEL_TOO_SMALL"

class MonadFileErrorCode(str, Enum):
    FILE_NOT_FOUND = "FILE_NOT_FOUND"
    JSONDecodeError = "JSONDecodeError"
    BAD_FORMAT = "BAD_FORMAT"

class CohomologyErrorCode(str, Enum):
    PAD_UNSTABLE = "PAD_UNSTABLE"
    CHI_MISMATCH = "CHI_MISMATCH"
    NOT_A_COMPLEX = "NOT_A_COMPLEX"
    CHARGE_TOO_LARGE = "CHARGE_TOO_LARGE"

class LinesErrorCode(str, Enum):
    DEGENERATE_RESTRICTION = "DEGENERATE_RESTRICTION"
    UNEXPECTED_BIDEGREE = "UNEXPECTED_BIDEGREE"
    IDENTICALLY_ZERO = "IDENTICALLY_ZERO"

class StabilityErrorCode(str, Enum):
    WRONG_CHARGE = "WRONG_CHARGE"


class VerdictStatus(str, Enum):
    VERIFIED = "verified-probabilistically"
    FAILED = "failed"
    SKIPPED = "skipped"

class StabilityLevel(str, Enum):
    STABLE_WITHIN_WINDOW = "stable-within-window"
    STRICTLY_SEMISTABLE_WITNESS = "strictly-semistable-witness"
    UNSTABLE_WITNESS = "unstable-witness"
    UNDETERMINED = "undetermined"


class SegreError(Exception):
    """Base error; `code` is one of the error-code enums above."""

    def __init__(self, message: str, code: Enum = CommonErrorCodes.UNKNOWN_ERROR):
        super().__init__(message)
        self.code = code


class ChernDataError(SegreError):
    pass


class FieldMismatchError(SegreError):
    def __init__(self, message: str):
        super().__init__(message, FieldErrorCode.FIELD_MISMATCH)


class DegreeError(SegreError):
    def __init__(self, message: str):
        super().__init__(message, FieldErrorCode.NEGATIVE_DEGREE)


class MonadShapeError(SegreError):
    def __init__(self, message: str):
        super().__init__(message, MonadErrorCode.BAD_SHAPE)


class GenerationExhaustedError(SegreError):
    def __init__(self, message: str, stats=None, code: Enum = MonadErrorCode.GENERATION_EXHAUSTED):
        super().__init__(message, code)
        self.stats = stats


class MonadFormatError(SegreError):
    """Malformed monad document; `offset` is the byte position when known."""

    def __init__(self, message: str, offset: Optional[int] = None, code: Enum = MonadFileErrorCode.BAD_FORMAT):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message, code)
        self.offset = offset


class PadInstabilityError(SegreError):
    def __init__(self, message: str, dims_at_pad=None, dims_at_larger_pad=None):
        super().__init__(message, CohomologyErrorCode.PAD_UNSTABLE)
        self.dims_at_pad = dims_at_pad
        self.dims_at_larger_pad = dims_at_larger_pad


class EulerCharacteristicMismatch(SegreError):
    def __init__(self, message: str, expected: int, observed: int):
        super().__init__(message, CohomologyErrorCode.CHI_MISMATCH)
        self.expected = expected
        self.observed = observed


class EngineError(SegreError):
    def __init__(self, message: str):
        super().__init__(message, CohomologyErrorCode.NOT_A_COMPLEX)


class PreconditionError(SegreError):
    def __init__(self, message: str, code: Enum = CommonErrorCodes.PRECONDITION):
        super().__init__(message, code)


class InterpolationError(SegreError):
    def __init__(self, message: str, code: Enum = FieldErrorCode.INCONSISTENT, data=None):
        super().__init__(message, code)
        self.data = data


class DegenerateRestrictionError(SegreError):
    def __init__(self, message: str):
        super().__init__(message, LinesErrorCode.DEGENERATE_RESTRICTION)
