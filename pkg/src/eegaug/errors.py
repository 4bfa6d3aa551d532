"""Exception hierarchy shared by all eegaug modules."""


class EegAugError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(EegAugError):
    """Container file does not look like an EABF file."""


class TruncationError(EegAugError):
    """Container header and payload sizes disagree."""


class DataError(EegAugError):
    """Sample data violates an invariant (non-finite values, bad shape)."""


class IoError(EegAugError):
    """Underlying file could not be read or written."""


class PairingError(EegAugError):
    """Channel names cannot be resolved into left/right pairs."""


class ParamError(EegAugError):
    """Transform parameter outside its legal domain."""


class BandError(EegAugError):
    """Requested filter band does not fit below the Nyquist frequency."""


class SizeError(EegAugError):
    """Input vector too short for the requested operation."""


class DomainError(EegAugError):
    """Numeric argument outside the function's domain."""


class SingularityError(EegAugError):
    """Spline system is singular (e.g. coincident sensor positions)."""


class MissingPositionsError(EegAugError):
    """Montage carries no sensor geometry but the operation needs it."""


class ConfigError(EegAugError):
    """Policy or run configuration is inconsistent with the data."""


class SplitError(EegAugError):
    """Cross-validation split cannot be constructed."""


class StratifyError(EegAugError):
    """Stratified subsampling would empty a class."""


class TrainError(EegAugError):
    """Classifier training preconditions violated."""


class InputError(EegAugError):
    """Metric inputs malformed (length mismatch, empty)."""
