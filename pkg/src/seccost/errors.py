"""Exception hierarchy shared by every analyzer module."""


class SeccostError(Exception):
    """Base class for data/model errors (CLI exit code 2)."""


class InvalidFrame(SeccostError):
    pass


class UnsupportedProtocol(SeccostError):
    pass


class UnstableQueue(SeccostError):
    pass


class ProfileError(SeccostError):
    pass


class UnknownCipher(SeccostError):
    pass


class MtuTooSmall(SeccostError):
    pass


class InconsistentColoring(SeccostError):
    pass


class UnsupportedFormat(SeccostError):
    pass


class TruncatedCapture(SeccostError):
    def __init__(self, index: int, message: str):
        super().__init__(f"record {index}: {message}")
        self.index = index


class EmptySelection(SeccostError):
    pass


class ConfigError(SeccostError):
    pass
