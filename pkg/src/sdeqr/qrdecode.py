"""Decode an already-sampled module matrix back to its payload bytes."""
from dataclasses import dataclass

import numpy as np

from . import tables
from .errors import DecodeFailure, FormatUnreadable, MalformedBitstream
from .gf256 import rs_decode
from .qrencode import (
    MAX_VERSION, MIN_VERSION, PAD_BYTES, EcLevel, ModuleMatrix, Mode, block_structure,
    build_function_patterns, char_count_bits, data_positions, format_positions, format_word,
    mask_grid, version_word, _version_positions,
)

MAX_FORMAT_ERRORS = 3
MAX_VERSION_ERRORS = 3


@dataclass(frozen=True)
class DecodedSymbol:
    payload: bytes
    version: int
    ec: EcLevel
    mask: int
    errors_corrected: int


def _hamming(a, b):
    return bin(a ^ b).count("1")


_FORMAT_TABLE = [(format_word(ec, mask), ec, mask) for ec in EcLevel for mask in range(8)]


def decode_format_word(word):
    """Nearest valid (ec, mask) and its bit distance."""
    dist, i = min((_hamming(word, w), i) for i, (w, _, _) in enumerate(_FORMAT_TABLE))
    _, ec, mask = _FORMAT_TABLE[i]
    return ec, mask, dist


def _read_word(modules, positions):
    w = 0
    for i, (r, c) in enumerate(positions):
        if modules[r, c]:
            w |= 1 << i
    return w


def version_from_size(size):
    v, rem = divmod(size - 17, 4)
    if rem or not MIN_VERSION <= v <= MAX_VERSION:
        raise FormatUnreadable(f"side length {size} is not 4*v+17 for any version 1-40")
    return v


def _modules_of(matrix):
    if isinstance(matrix, ModuleMatrix):
        return matrix.modules
    grid = np.asarray(matrix, dtype=bool)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise FormatUnreadable(f"matrix must be square, got shape {grid.shape}")
    return grid


def read_format(matrix):
    """Recover (EcLevel, mask) from the better of the two format copies."""
    modules = _modules_of(matrix)
    version_from_size(modules.shape[0])
    best = None
    for positions in format_positions(modules.shape[0]):
        ec, mask, dist = decode_format_word(_read_word(modules, positions))
        if best is None or dist < best[2]:
            best = (ec, mask, dist)
    if best[2] > MAX_FORMAT_ERRORS:
        raise FormatUnreadable(f"format information has at least {best[2]} bit errors")
    return best[0], best[1]


def read_version(matrix):
    """Version from side length, cross-checked against version information when v >= 7."""
    modules = _modules_of(matrix)
    version = version_from_size(modules.shape[0])
    if version < 7:
        return version
    words = []
    positions = _version_positions(version)
    words.append(_read_word(modules, positions))
    words.append(_read_word(modules, [(c, r) for r, c in positions]))
    dist, found = min((_hamming(w, version_word(v)), v) for w in words for v in range(7, MAX_VERSION + 1))
    if dist > MAX_VERSION_ERRORS:
        raise FormatUnreadable("version information unreadable")
    if found != version:
        raise FormatUnreadable(f"version information says {found}, side length says {version}")
    return version


def extract_codewords(matrix, version, mask):
    """Unmask data modules and read them back in placement order."""
    modules = _modules_of(matrix)
    template = build_function_patterns(version)
    if modules.shape != template.modules.shape:
        raise ValueError(f"matrix size {modules.shape[0]} does not match version {version}")
    unmasked = modules ^ (mask_grid(mask, template.size) & ~template.function_mask)
    rows, cols = data_positions(version)
    total = tables.TOTAL_CODEWORDS[version]
    bits = unmasked[rows[:8 * total], cols[:8 * total]]
    return np.packbits(bits).tolist()


def deinterleave(codewords, version, ec):
    """Inverse of the encoder's interleave: list of (data + ec) blocks."""
    structure = block_structure(version, ec)
    lengths = structure.block_data_lengths
    nblocks = len(lengths)
    if len(codewords) != structure.total_codewords:
        raise ValueError(f"expected {structure.total_codewords} codewords, got {len(codewords)}")
    blocks = [[] for _ in range(nblocks)]
    pos = 0
    for i in range(max(lengths)):
        for b in range(nblocks):
            if i < lengths[b]:
                blocks[b].append(codewords[pos])
                pos += 1
    for _ in range(structure.ec_per_block):
        for b in range(nblocks):
            blocks[b].append(codewords[pos])
            pos += 1
    return blocks


def correct_blocks(codewords, version, ec):
    """RS-correct every block; returns (data codewords, errors corrected)."""
    structure = block_structure(version, ec)
    data = []
    fixed = 0
    for i, block in enumerate(deinterleave(codewords, version, ec)):
        try:
            corrected, n = rs_decode(block, structure.ec_per_block)
        except DecodeFailure as exc:
            raise DecodeFailure(f"block {i}: {exc}") from None
        data.extend(corrected[:len(block) - structure.ec_per_block])
        fixed += n
    return data, fixed


class _BitReader:
    def __init__(self, data):
        self.bits = np.unpackbits(np.asarray(data, dtype=np.uint8))
        self.pos = 0

    @property
    def remaining(self):
        return len(self.bits) - self.pos

    def read(self, n):
        if n > self.remaining:
            raise MalformedBitstream(f"truncated segment: need {n} bits, {self.remaining} left")
        v = 0
        for b in self.bits[self.pos:self.pos + n]:
            v = (v << 1) | int(b)
        self.pos += n
        return v


_MODES = {m.indicator: m for m in Mode}


def parse_bitstream(data, version):
    """Parse segments from data codewords and verify terminator/padding."""
    reader = _BitReader(data)
    out = bytearray()
    charset = tables.ALPHANUMERIC_CHARSET
    while reader.remaining >= 4:
        indicator = reader.read(4)
        if indicator == 0:
            break
        mode = _MODES.get(indicator)
        if mode is None or mode is Mode.KANJI:
            raise MalformedBitstream(f"unsupported mode indicator {indicator:04b}")
        count = reader.read(char_count_bits(version, mode))
        if mode is Mode.NUMERIC:
            for k in range(0, count, 3):
                digits = min(3, count - k)
                v = reader.read(3 * digits + 1)
                if v >= 10 ** digits:
                    raise MalformedBitstream(f"numeric group value {v} out of range")
                out += str(v).zfill(digits).encode("ascii")
        elif mode is Mode.ALPHANUMERIC:
            for _ in range(count // 2):
                v = reader.read(11)
                if v >= 45 * 45:
                    raise MalformedBitstream(f"alphanumeric pair value {v} out of range")
                out += (charset[v // 45] + charset[v % 45]).encode("ascii")
            if count % 2:
                v = reader.read(6)
                if v >= 45:
                    raise MalformedBitstream(f"alphanumeric value {v} out of range")
                out += charset[v].encode("ascii")
        else:
            for _ in range(count):
                out.append(reader.read(8))

    # after the terminator: zero bits to the byte boundary, then the pad cycle
    if reader.read(-reader.pos % 8):
        raise MalformedBitstream("non-zero bits after terminator")
    k = 0
    while reader.remaining >= 8:
        if reader.read(8) != PAD_BYTES[k % 2]:
            raise MalformedBitstream("invalid pad byte sequence")
        k += 1
    return bytes(out)


def decode_symbol(matrix):
    modules = _modules_of(matrix)
    version = read_version(modules)
    ec, mask = read_format(modules)
    codewords = extract_codewords(modules, version, mask)
    data, fixed = correct_blocks(codewords, version, ec)
    payload = parse_bitstream(data, version)
    return DecodedSymbol(payload=payload, version=version, ec=ec, mask=mask, errors_corrected=fixed)
