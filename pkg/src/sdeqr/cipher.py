"""Password-keyed substitution cipher over 16-bit words.

Encryption is three reversible steps applied in order:

1. add a small integer code, derived from the password, to every character;
2. reverse the resulting word sequence;
3. complement all 16 bits of every word.

The ciphertext model is a sequence of 16-bit unsigned words. Text forms
(``&#NNN;`` entities) and raw big-endian bytes are serializations of it.
"""
import enum
import re
from dataclasses import dataclass

import numpy as np

from .errors import EmptyPassword, InvalidWord, MalformedEntity, OddLength, Overflow16

WORD_MASK = 0xFFFF


class Stage(enum.Enum):
    ADDED = "added"
    REVERSED = "reversed"
    FINAL = "final"


class Format(enum.Enum):
    ENTITY = "entity"
    RAW16 = "raw16"


@dataclass(frozen=True)
class SecretCode:
    password: bytes
    plen: int
    n: int
    code: int


@dataclass(frozen=True)
class CipherWords:
    words: tuple
    stage: Stage = Stage.FINAL

    def __post_init__(self):
        arr = np.asarray(self.words, dtype=np.int64).reshape(-1)
        bad = np.flatnonzero((arr < 0) | (arr > WORD_MASK))
        if bad.size:
            raise Overflow16(int(bad[0]), int(arr[bad[0]]))
        object.__setattr__(self, "words", tuple(arr.tolist()))

    @classmethod
    def _from_array(cls, arr, stage):
        # caller guarantees 0 <= arr <= 0xFFFF
        obj = object.__new__(cls)
        object.__setattr__(obj, "words", tuple(arr.tolist()))
        object.__setattr__(obj, "stage", stage)
        return obj

    def array(self):
        return np.array(self.words, dtype=np.int64)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def password_bytes(password):
    """Accept bytes as-is; text must consist of code points 0-255."""
    if isinstance(password, (bytes, bytearray, memoryview)):
        return bytes(password)
    out = bytearray()
    for i, ch in enumerate(password):
        cp = ord(ch)
        if cp > 255:
            raise ValueError(f"password character {ch!r} at index {i} is outside 0-255")
        out.append(cp)
    return bytes(out)


def digit_sum(n):
    return sum(int(d) for d in str(n))


def derive_code(password):
    """Derive the cipher key from a password.

    ``n`` is ``plen**2`` times the sum of the password byte values and
    ``code`` is the decimal digit sum of ``n``, taken once (127292 -> 23).
    """
    pw = password_bytes(password)
    if not pw:
        raise EmptyPassword("password must not be empty")
    plen = len(pw)
    n = plen * plen * sum(pw)
    return SecretCode(password=pw, plen=plen, n=n, code=digit_sum(n))


def _code_value(code):
    return code.code if isinstance(code, SecretCode) else int(code)


def _code_points(message):
    raw = message.encode("utf-32-le", "surrogatepass")
    return np.frombuffer(raw, dtype="<u4").astype(np.int64)


def _added(message, k):
    words = _code_points(message) + k
    over = np.flatnonzero(words > WORD_MASK)
    if over.size:
        raise Overflow16(int(over[0]), int(words[over[0]]))
    return words


def add_code(message, code):
    return CipherWords._from_array(_added(message, _code_value(code)), Stage.ADDED)


def reverse_words(words):
    """Reverse word order. ADDED -> REVERSED when encrypting, REVERSED -> ADDED when undoing."""
    if words.stage is Stage.ADDED:
        stage = Stage.REVERSED
    elif words.stage is Stage.REVERSED:
        stage = Stage.ADDED
    else:
        raise ValueError("reverse_words expects ADDED or REVERSED words")
    return CipherWords._from_array(words.array()[::-1], stage)


def complement16(words):
    """XOR every word with 0xFFFF. REVERSED <-> FINAL."""
    if words.stage is Stage.REVERSED:
        stage = Stage.FINAL
    elif words.stage is Stage.FINAL:
        stage = Stage.REVERSED
    else:
        raise ValueError("complement16 expects REVERSED or FINAL words")
    return CipherWords._from_array(words.array() ^ WORD_MASK, stage)


def encrypt(message, password):
    secret = derive_code(password)
    return CipherWords._from_array(_added(message, secret.code)[::-1] ^ WORD_MASK, Stage.FINAL)


def decrypt(words, password):
    secret = derive_code(password)
    if not isinstance(words, CipherWords):
        words = CipherWords(tuple(words), Stage.FINAL)
    elif words.stage is not Stage.FINAL:
        raise ValueError("decrypt expects FINAL-stage ciphertext")
    values = (words.array() ^ WORD_MASK)[::-1] - secret.code
    # surrogates are not Unicode scalar values
    bad = np.flatnonzero((values < 0) | ((values >= 0xD800) & (values <= 0xDFFF)))
    if bad.size:
        raise InvalidWord(int(bad[0]), int(values[bad[0]]))
    return values.astype("<u4").tobytes().decode("utf-32-le")


def serialize(words, fmt=Format.ENTITY):
    fmt = Format(fmt)
    values = words.words if isinstance(words, CipherWords) else tuple(words)
    if fmt is Format.ENTITY:
        return "".join(f"&#{w};" for w in values).encode("ascii")
    return np.asarray(values, dtype=">u2").tobytes()


_TOKEN = re.compile(r"#([0-9]+);?")


def deserialize(data, fmt=Format.ENTITY):
    fmt = Format(fmt)
    data = bytes(data)
    if fmt is Format.RAW16:
        if len(data) % 2:
            raise OddLength(f"RAW16 data has odd length {len(data)}")
        return CipherWords._from_array(np.frombuffer(data, dtype=">u2"), Stage.FINAL)

    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise MalformedEntity(f"non-ASCII byte at offset {exc.start}") from None
    if not text:
        return CipherWords((), Stage.FINAL)
    head, *tokens = text.split("&")
    if head:
        raise MalformedEntity(f"text before first '&': {head[:16]!r}")
    words = []
    for i, tok in enumerate(tokens):
        m = _TOKEN.fullmatch(tok)
        if m is None:
            raise MalformedEntity(f"bad entity token #{i}: {'&' + tok!r}")
        v = int(m.group(1))
        if v > WORD_MASK:
            raise MalformedEntity(f"entity token #{i} value {v} exceeds 16 bits")
        words.append(v)
    return CipherWords(tuple(words), Stage.FINAL)
