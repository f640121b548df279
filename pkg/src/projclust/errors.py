"""Exception types raised across the package."""


class ProjClustError(Exception):
    """Base class for all errors raised by projclust."""


class DimensionMismatch(ProjClustError, ValueError):
    pass


class InvalidSignal(ProjClustError, ValueError):
    """Empty, non-finite or otherwise unusable vector."""


class ZeroSignal(InvalidSignal):
    pass


class NotOrthonormal(ProjClustError, ValueError):
    pass


class InvalidPartition(ProjClustError, ValueError):
    pass


class AlreadySpanned(ProjClustError, ValueError):
    """The residual of a signal against the machine is numerically zero."""


class NotAFrame(ProjClustError, ValueError):
    pass


class MissingFrame(ProjClustError, ValueError):
    pass


class NyquistError(ProjClustError, ValueError):
    """A harmonic would land above the last spectral bin."""


class WavError(ProjClustError):
    pass


class BadMagic(WavError):
    pass


class UnsupportedEncoding(WavError):
    pass


class UnsupportedSampleRate(WavError):
    pass


class DatasetError(ProjClustError, ValueError):
    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class RaggedRow(DatasetError):
    pass


class NonNumericCell(DatasetError):
    pass


class UnknownLabel(DatasetError):
    pass


class OutOfRange(DatasetError):
    pass


class EmptyClass(ProjClustError, ValueError):
    pass


class ClassesExhausted(EmptyClass):
    """Tie resolution removed every record of a class."""

    def __init__(self, message, tie_rounds=0):
        super().__init__(message)
        self.tie_rounds = tie_rounds


class UnknownProjector(ProjClustError, KeyError):
    pass
