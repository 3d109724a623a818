"""Exception hierarchy shared by every stage of the codec."""


class SdeqrError(Exception):
    """Base class for all errors raised by this package."""


# cipher
class EmptyPassword(SdeqrError, ValueError):
    pass


class Overflow16(SdeqrError, ValueError):
    def __init__(self, index, value):
        super().__init__(f"value {value} at index {index} does not fit in 16 bits")
        self.index = index
        self.value = value


class InvalidWord(SdeqrError, ValueError):
    def __init__(self, index, value):
        super().__init__(f"word at index {index} decrypts to invalid scalar {value}")
        self.index = index
        self.value = value


class MalformedEntity(SdeqrError, ValueError):
    pass


class OddLength(SdeqrError, ValueError):
    pass


# gf256 / qrdecode
class DecodeFailure(SdeqrError):
    pass


# qrencode
class EmptyInput(SdeqrError, ValueError):
    pass


class InvalidCharacter(SdeqrError, ValueError):
    def __init__(self, position, char, mode):
        super().__init__(f"character {char!r} at position {position} not valid in {mode} mode")
        self.position = position
        self.char = char
        self.mode = mode


class TooLarge(SdeqrError, ValueError):
    pass


class InvalidForcedVersion(SdeqrError, ValueError):
    pass


# qrdecode
class FormatUnreadable(SdeqrError):
    pass


class MalformedBitstream(SdeqrError):
    pass


# pipeline
class ChecksumMismatch(SdeqrError):
    pass


class OrderMismatch(SdeqrError):
    pass


# rendering / parsing
class MalformedInput(SdeqrError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)
        self.line = line
        self.column = column
