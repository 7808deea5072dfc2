"""Exception types shared across the package."""


class FontOcrError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(FontOcrError):
    """A file is malformed (bad magic, truncated payload, corrupt header).

    ``offset`` is the byte position at which decoding failed, when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ValidationError(FontOcrError):
    """A value or input violates a documented contract."""
