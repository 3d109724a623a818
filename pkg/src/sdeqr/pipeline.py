"""Message -> ciphertext -> one or more QR symbols, and back.

A manifest sidecar records the symbol count, chunk lengths and a CRC-32 of the
serialized ciphertext so a receiver can restore order and detect corruption.
"""
import json
import zlib
from dataclasses import dataclass, field

from . import cipher
from .cipher import Format
from .errors import ChecksumMismatch, OrderMismatch
from .qrdecode import decode_symbol
from .qrencode import EcLevel, encode_symbol

DEFAULT_LIMIT = 1264


def _token_boundaries(data):
    # offsets where an ENTITY chunk may end
    return [i for i in range(1, len(data)) if data[i] == ord("&")] + [len(data)]


def split_payload(data, limit=DEFAULT_LIMIT, fmt=None):
    """Greedy split into chunks of at most ``limit`` bytes.

    ENTITY payloads are cut only before an '&'; RAW16 payloads only on word
    boundaries. Concatenating the chunks gives back ``data``.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    data = bytes(data)
    fmt = Format(fmt) if fmt is not None else None
    if fmt is Format.RAW16:
        if limit < 2:
            raise ValueError("RAW16 chunks need a limit of at least 2 bytes")
        limit -= limit % 2
    if fmt is not Format.ENTITY:
        return [data[i:i + limit] for i in range(0, len(data), limit)]

    chunks = []
    start = 0
    cut = 0
    for b in _token_boundaries(data):
        if b - start > limit:
            if cut == start:
                raise ValueError(f"entity token at offset {start} is longer than limit {limit}")
            chunks.append(data[start:cut])
            start = cut
            if b - start > limit:
                raise ValueError(f"entity token at offset {start} is longer than limit {limit}")
        cut = b
    if start < len(data):
        chunks.append(data[start:])
    return chunks


@dataclass
class Manifest:
    total: int
    serialization: Format
    ec_level: EcLevel
    chunk_lengths: list
    crc32: int

    def __post_init__(self):
        self.serialization = Format(self.serialization)
        self.ec_level = EcLevel.coerce(self.ec_level)
        self.chunk_lengths = [int(n) for n in self.chunk_lengths]
        if self.total != len(self.chunk_lengths):
            raise ValueError(f"manifest total {self.total} != {len(self.chunk_lengths)} chunk lengths")

    def to_dict(self):
        return {
            "total": self.total,
            "serialization": self.serialization.value,
            "ec_level": self.ec_level.name,
            "chunk_lengths": list(self.chunk_lengths),
            "crc32": self.crc32,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d):
        missing = {"total", "serialization", "ec_level", "chunk_lengths", "crc32"} - set(d)
        if missing:
            raise ValueError(f"manifest missing fields: {sorted(missing)}")
        return cls(total=int(d["total"]), serialization=d["serialization"], ec_level=d["ec_level"],
                   chunk_lengths=d["chunk_lengths"], crc32=int(d["crc32"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass
class SymbolSet:
    symbols: list
    manifest: Manifest
    masks: list = field(default_factory=list)
    versions: list = field(default_factory=list)


def encrypt_to_symbols(message, password, ec=EcLevel.H, serialization=Format.ENTITY,
                       mask=None, version=None, limit=DEFAULT_LIMIT):
    """Encrypt, serialize, split and encode one symbol per chunk.

    An empty message yields an empty ciphertext, which the encoder rejects
    with EmptyInput.
    """
    ec = EcLevel.coerce(ec)
    serialization = Format(serialization)
    data = cipher.serialize(cipher.encrypt(message, password), serialization)
    chunks = split_payload(data, limit, serialization) or [b""]
    encoded = [encode_symbol(chunk, ec, mask=mask, version=version) for chunk in chunks]
    manifest = Manifest(total=len(chunks), serialization=serialization, ec_level=ec,
                        chunk_lengths=[len(c) for c in chunks], crc32=zlib.crc32(data))
    return SymbolSet(symbols=[e.matrix for e in encoded], manifest=manifest,
                     masks=[e.mask for e in encoded], versions=[e.version for e in encoded])


def decode_payloads(matrices):
    return [decode_symbol(m).payload for m in matrices]


def decrypt_from_symbols(matrices, password, manifest=None, serialization=Format.ENTITY):
    """Inverse of :func:`encrypt_to_symbols`.

    Without a manifest the symbols are joined in the given order and no
    checksum is verified.
    """
    payloads = decode_payloads(matrices)
    if manifest is not None:
        if len(payloads) != manifest.total:
            raise OrderMismatch(f"manifest lists {manifest.total} symbols, got {len(payloads)}")
        lengths = [len(p) for p in payloads]
        if lengths != manifest.chunk_lengths:
            raise OrderMismatch(f"chunk lengths {lengths} disagree with manifest {manifest.chunk_lengths}")
        serialization = manifest.serialization
    data = b"".join(payloads)
    if manifest is not None and zlib.crc32(data) != manifest.crc32:
        raise ChecksumMismatch("ciphertext CRC-32 does not match the manifest")
    words = cipher.deserialize(data, serialization)
    return cipher.decrypt(words, password)
