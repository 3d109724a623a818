"""QR symbol construction: segments, bit streams, blocks, placement, masks.

Matrices are numpy boolean arrays indexed ``[row, col]`` with True = dark.
"""
import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Union

import numpy as np

from . import tables
from .errors import EmptyInput, InvalidCharacter, InvalidForcedVersion, TooLarge
from .gf256 import rs_encode

MIN_VERSION = 1
MAX_VERSION = 40

PAD_BYTES = (0xEC, 0x11)
FORMAT_XOR = 0x5412
FORMAT_POLY = 0x537
VERSION_POLY = 0x1F25


class Mode(enum.Enum):
    NUMERIC = 0b0001
    ALPHANUMERIC = 0b0010
    BYTE = 0b0100
    KANJI = 0b1000

    @property
    def indicator(self):
        return self.value


# character-count field widths for versions 1-9, 10-26, 27-40
_COUNT_BITS = {
    Mode.NUMERIC: (10, 12, 14),
    Mode.ALPHANUMERIC: (9, 11, 13),
    Mode.BYTE: (8, 16, 16),
    Mode.KANJI: (8, 10, 12),
}


class EcLevel(enum.Enum):
    L = 0b01
    M = 0b00
    Q = 0b11
    H = 0b10

    @property
    def format_bits(self):
        return self.value

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        return cls[str(value).upper()]


def side_length(version):
    return 4 * version + 17


def _check_version(version):
    if not MIN_VERSION <= version <= MAX_VERSION:
        raise ValueError(f"version must be in {MIN_VERSION}..{MAX_VERSION}, got {version}")


# ---------------------------------------------------------------------------
# Segments and bit streams
# ---------------------------------------------------------------------------

_ALNUM_VALUE = {c: i for i, c in enumerate(tables.ALPHANUMERIC_CHARSET)}


def select_mode(text):
    """Smallest standard character set covering ``text`` (str or bytes)."""
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("latin-1")
    if not text:
        raise EmptyInput("cannot select a mode for empty input")
    if all("0" <= c <= "9" for c in text):
        return Mode.NUMERIC
    if all(c in _ALNUM_VALUE for c in text):
        return Mode.ALPHANUMERIC
    return Mode.BYTE


def char_count_bits(version, mode):
    _check_version(version)
    band = 0 if version <= 9 else 1 if version <= 26 else 2
    return _COUNT_BITS[mode][band]


@dataclass(frozen=True)
class Segment:
    mode: Mode
    data: bytes

    @classmethod
    def auto(cls, payload):
        payload = bytes(payload)
        return cls(select_mode(payload), payload)

    @property
    def num_chars(self):
        return len(self.data)


class BitString:
    """Append-only bit sequence, most significant bit first."""

    def __init__(self, bits=()):
        self._bits = [int(b) & 1 for b in bits]

    def append(self, value, width):
        if width < 0 or value >> width:
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._bits.extend((value >> i) & 1 for i in range(width - 1, -1, -1))

    def extend(self, other):
        self._bits.extend(other._bits if isinstance(other, BitString) else other)

    def __len__(self):
        return len(self._bits)

    def __iter__(self):
        return iter(self._bits)

    def __getitem__(self, item):
        return self._bits[item]

    def __eq__(self, other):
        if isinstance(other, BitString):
            return self._bits == other._bits
        return NotImplemented

    def __str__(self):
        return "".join(map(str, self._bits))

    def __repr__(self):
        return f"BitString('{self}')"

    def to_bytes(self):
        if len(self._bits) % 8:
            raise ValueError("bit length is not a multiple of 8")
        out = bytearray()
        for i in range(0, len(self._bits), 8):
            byte = 0
            for b in self._bits[i:i + 8]:
                byte = (byte << 1) | b
            out.append(byte)
        return bytes(out)


def _payload_bits(segment):
    bits = BitString()
    data = segment.data
    if segment.mode is Mode.NUMERIC:
        for i, b in enumerate(data):
            if not 0x30 <= b <= 0x39:
                raise InvalidCharacter(i, chr(b), segment.mode.name)
        for i in range(0, len(data), 3):
            group = data[i:i + 3]
            bits.append(int(group.decode("ascii")), 3 * len(group) + 1)
    elif segment.mode is Mode.ALPHANUMERIC:
        values = []
        for i, b in enumerate(data):
            v = _ALNUM_VALUE.get(chr(b))
            if v is None:
                raise InvalidCharacter(i, chr(b), segment.mode.name)
            values.append(v)
        for i in range(0, len(values) - 1, 2):
            bits.append(values[i] * 45 + values[i + 1], 11)
        if len(values) % 2:
            bits.append(values[-1], 6)
    elif segment.mode is Mode.BYTE:
        for b in data:
            bits.append(b, 8)
    else:
        raise ValueError("KANJI segments are not generated")
    return bits


def encode_segment(segment, version):
    """Mode indicator + character count + payload bits."""
    width = char_count_bits(version, segment.mode)
    if segment.num_chars >> width:
        raise TooLarge(f"{segment.num_chars} characters overflow the {width}-bit count field")
    bits = BitString()
    bits.append(segment.mode.indicator, 4)
    bits.append(segment.num_chars, width)
    bits.extend(_payload_bits(segment))
    return bits


def segment_bit_length(segment, version):
    n = segment.num_chars
    if segment.mode is Mode.NUMERIC:
        payload = 10 * (n // 3) + (0, 4, 7)[n % 3]
    elif segment.mode is Mode.ALPHANUMERIC:
        payload = 11 * (n // 2) + 6 * (n % 2)
    elif segment.mode is Mode.BYTE:
        payload = 8 * n
    else:
        payload = 13 * n
    return 4 + char_count_bits(version, segment.mode) + payload


# ---------------------------------------------------------------------------
# Capacity and block structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockStructure:
    version: int
    ec: EcLevel
    ec_per_block: int
    groups: tuple  # ((block_count, data_codewords_per_block), ...)

    @property
    def block_data_lengths(self):
        return [d for count, d in self.groups for _ in range(count)]

    @property
    def num_blocks(self):
        return sum(count for count, _ in self.groups)

    @property
    def data_codewords(self):
        return sum(count * d for count, d in self.groups)

    @property
    def total_codewords(self):
        return self.data_codewords + self.num_blocks * self.ec_per_block


@lru_cache(maxsize=None)
def block_structure(version, ec):
    _check_version(version)
    ec = EcLevel.coerce(ec)
    ec_per = tables.EC_CODEWORDS_PER_BLOCK[ec.name][version]
    nblocks = tables.NUM_BLOCKS[ec.name][version]
    total = tables.TOTAL_CODEWORDS[version]
    short_count = nblocks - total % nblocks
    short_data = total // nblocks - ec_per
    groups = [(short_count, short_data)]
    if short_count < nblocks:
        groups.append((nblocks - short_count, short_data + 1))
    return BlockStructure(version, ec, ec_per, tuple(groups))


def data_codeword_count(version, ec):
    return block_structure(version, EcLevel.coerce(ec)).data_codewords


def _segments_bits(segments, version):
    return sum(segment_bit_length(s, version) for s in segments)


def _fits(segments, version, ec):
    for s in segments:
        if s.num_chars >> char_count_bits(version, s.mode):
            return False
    return _segments_bits(segments, version) <= 8 * data_codeword_count(version, ec)


def choose_version(segments, ec):
    """Smallest version whose data capacity holds all segments."""
    segments = list(segments)
    if not segments:
        raise EmptyInput("no segments to encode")
    ec = EcLevel.coerce(ec)
    for version in range(MIN_VERSION, MAX_VERSION + 1):
        if _fits(segments, version, ec):
            return version
    raise TooLarge(f"payload exceeds version {MAX_VERSION}-{ec.name} capacity")


def assemble_codewords(segments, version, ec):
    """Concatenate segments, terminate, pad to the data codeword count."""
    ec = EcLevel.coerce(ec)
    capacity = 8 * data_codeword_count(version, ec)
    bits = BitString()
    for s in segments:
        bits.extend(encode_segment(s, version))
    if len(bits) > capacity:
        raise TooLarge(f"{len(bits)} bits exceed capacity {capacity} of version {version}-{ec.name}")
    bits.append(0, min(4, capacity - len(bits)))
    bits.append(0, -len(bits) % 8)
    out = list(bits.to_bytes())
    i = 0
    while len(out) < capacity // 8:
        out.append(PAD_BYTES[i % 2])
        i += 1
    return out


def split_blocks(data, version, ec):
    structure = block_structure(version, EcLevel.coerce(ec))
    if len(data) != structure.data_codewords:
        raise ValueError(f"expected {structure.data_codewords} data codewords, got {len(data)}")
    blocks = []
    pos = 0
    for n in structure.block_data_lengths:
        blocks.append(list(data[pos:pos + n]))
        pos += n
    return blocks


def interleave(blocks):
    """Column-wise interleave of possibly ragged blocks."""
    out = []
    for i in range(max((len(b) for b in blocks), default=0)):
        for b in blocks:
            if i < len(b):
                out.append(b[i])
    return out


def interleave_blocks(data, version, ec):
    """Split into blocks, append RS codewords, interleave data then EC."""
    structure = block_structure(version, EcLevel.coerce(ec))
    blocks = split_blocks(data, version, ec)
    ec_blocks = [rs_encode(b, structure.ec_per_block) for b in blocks]
    return interleave(blocks) + interleave(ec_blocks)


# ---------------------------------------------------------------------------
# Module matrix
# ---------------------------------------------------------------------------

class ModuleMatrix:
    """Square grid of modules (True = dark) plus a mask of reserved function modules."""

    def __init__(self, modules, function_mask=None):
        modules = np.asarray(modules, dtype=bool)
        if modules.ndim != 2 or modules.shape[0] != modules.shape[1]:
            raise ValueError(f"module grid must be square, got shape {modules.shape}")
        if function_mask is None:
            function_mask = np.zeros_like(modules)
        function_mask = np.asarray(function_mask, dtype=bool)
        if function_mask.shape != modules.shape:
            raise ValueError("function mask shape differs from module grid")
        self.modules = modules
        self.function_mask = function_mask

    @property
    def size(self):
        return self.modules.shape[0]

    @property
    def version(self):
        v, rem = divmod(self.size - 17, 4)
        if rem or not MIN_VERSION <= v <= MAX_VERSION:
            return None
        return v

    def copy(self):
        return ModuleMatrix(self.modules.copy(), self.function_mask.copy())

    def __eq__(self, other):
        if not isinstance(other, ModuleMatrix):
            return NotImplemented
        return (self.modules.shape == other.modules.shape
                and np.array_equal(self.modules, other.modules)
                and np.array_equal(self.function_mask, other.function_mask))

    def __repr__(self):
        return f"ModuleMatrix(size={self.size}, dark={int(self.modules.sum())})"


def _set_function(mat, fn, row, col, dark):
    mat[row, col] = dark
    fn[row, col] = True


def _draw_finder(mat, fn, top, left):
    n = mat.shape[0]
    for dr in range(-1, 8):
        for dc in range(-1, 8):
            r, c = top + dr, left + dc
            if not (0 <= r < n and 0 <= c < n):
                continue
            # distance from centre picks ring: 3 dark border, 2 light, <=1 dark core; 4 separator
            d = max(abs(dr - 3), abs(dc - 3))
            _set_function(mat, fn, r, c, d not in (2, 4))


def alignment_centers(version):
    pos = tables.ALIGNMENT_POSITIONS[version]
    last = len(pos) - 1
    centers = []
    for i, r in enumerate(pos):
        for j, c in enumerate(pos):
            # the three corners overlapping finders are skipped
            if (i, j) in ((0, 0), (0, last), (last, 0)):
                continue
            centers.append((r, c))
    return centers


@lru_cache(maxsize=None)
def _template(version):
    _check_version(version)
    n = side_length(version)
    mat = np.zeros((n, n), dtype=bool)
    fn = np.zeros((n, n), dtype=bool)

    for i in range(n):
        _set_function(mat, fn, 6, i, i % 2 == 0)
        _set_function(mat, fn, i, 6, i % 2 == 0)

    _draw_finder(mat, fn, 0, 0)
    _draw_finder(mat, fn, 0, n - 7)
    _draw_finder(mat, fn, n - 7, 0)

    for r, c in alignment_centers(version):
        for dr in range(-2, 3):
            for dc in range(-2, 3):
                _set_function(mat, fn, r + dr, c + dc, max(abs(dr), abs(dc)) != 1)

    # format areas reserved light; filled in once EC level and mask are known
    for i in range(9):
        if i != 6:
            _set_function(mat, fn, 8, i, False)
            _set_function(mat, fn, i, 8, False)
    for i in range(8):
        _set_function(mat, fn, 8, n - 1 - i, False)
        _set_function(mat, fn, n - 1 - i, 8, False)
    _set_function(mat, fn, n - 8, 8, True)

    if version >= 7:
        for (r, c), bit in zip(_version_positions(version), version_bits(version)[::-1]):
            _set_function(mat, fn, r, c, bool(bit))
            _set_function(mat, fn, c, r, bool(bit))

    mat.setflags(write=False)
    fn.setflags(write=False)
    return mat, fn


def build_function_patterns(version):
    """Template holding finders, separators, timing, alignment, dark module and reserved areas."""
    mat, fn = _template(version)
    return ModuleMatrix(mat.copy(), fn.copy())


@lru_cache(maxsize=None)
def data_positions(version):
    """(rows, cols) of every data module in placement order."""
    _, fn = _template(version)
    n = fn.shape[0]
    rows, cols = [], []
    right = n - 1
    while right >= 1:
        if right == 6:
            right = 5
        upward = ((right + 1) & 2) == 0
        for vert in range(n):
            r = n - 1 - vert if upward else vert
            for c in (right, right - 1):
                if not fn[r, c]:
                    rows.append(r)
                    cols.append(c)
        right -= 2
    rows = np.array(rows, dtype=np.intp)
    cols = np.array(cols, dtype=np.intp)
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def codewords_to_bits(codewords):
    return np.unpackbits(np.asarray(codewords, dtype=np.uint8)).astype(bool)


def place_data(template, codewords):
    """Write codeword bits along the two-column zigzag; remainder bits stay light."""
    version = template.version
    rows, cols = data_positions(version)
    bits = codewords_to_bits(codewords)
    if len(bits) > len(rows):
        raise ValueError(f"{len(codewords)} codewords exceed the data area of version {version}")
    out = template.copy()
    out.modules[rows, cols] = False
    out.modules[rows[:len(bits)], cols[:len(bits)]] = bits
    return out


# ---------------------------------------------------------------------------
# Masks, format and version information
# ---------------------------------------------------------------------------

_MASK_PREDICATES = (
    lambda i, j: (i + j) % 2 == 0,
    lambda i, j: i % 2 == 0,
    lambda i, j: j % 3 == 0,
    lambda i, j: (i + j) % 3 == 0,
    lambda i, j: (i // 2 + j // 3) % 2 == 0,
    lambda i, j: (i * j) % 2 + (i * j) % 3 == 0,
    lambda i, j: ((i * j) % 2 + (i * j) % 3) % 2 == 0,
    lambda i, j: ((i + j) % 2 + (i * j) % 3) % 2 == 0,
)


@lru_cache(maxsize=None)
def mask_grid(mask, size):
    if not 0 <= mask <= 7:
        raise ValueError(f"mask must be in 0..7, got {mask}")
    i, j = np.indices((size, size))
    grid = _MASK_PREDICATES[mask](i, j)
    grid.setflags(write=False)
    return grid


def apply_mask(matrix, mask):
    """Toggle data modules where the mask predicate holds. Involution."""
    flip = mask_grid(mask, matrix.size) & ~matrix.function_mask
    return ModuleMatrix(matrix.modules ^ flip, matrix.function_mask.copy())


def _bch_remainder(value, poly, degree):
    rem = value
    for _ in range(degree):
        rem = (rem << 1) ^ ((rem >> (degree - 1)) * poly)
    return rem & ((1 << degree) - 1)


def format_word(ec, mask):
    ec = EcLevel.coerce(ec)
    if not 0 <= mask <= 7:
        raise ValueError(f"mask must be in 0..7, got {mask}")
    data = (ec.format_bits << 3) | mask
    return ((data << 10) | _bch_remainder(data, FORMAT_POLY, 10)) ^ FORMAT_XOR


def format_bits(ec, mask):
    """15 format-information bits, most significant first."""
    w = format_word(ec, mask)
    return tuple((w >> i) & 1 for i in range(14, -1, -1))


def version_word(version):
    if not 7 <= version <= MAX_VERSION:
        raise ValueError(f"version information exists only for versions 7-40, got {version}")
    return (version << 12) | _bch_remainder(version, VERSION_POLY, 12)


def version_bits(version):
    """18 version-information bits, most significant first."""
    w = version_word(version)
    return tuple((w >> i) & 1 for i in range(17, -1, -1))


def _version_positions(version):
    # (row, col) of bit i (LSB first) in the bottom-left block; the top-right block is transposed
    n = side_length(version)
    return [(n - 11 + i % 3, i // 3) for i in range(18)]


def format_positions(size):
    """Both copies of the format field as (row, col) lists, bit 0 (LSB) first."""
    first = [(i, 8) for i in range(6)] + [(7, 8), (8, 8), (8, 7)] + [(8, 14 - i) for i in range(9, 15)]
    second = [(8, size - 1 - i) for i in range(8)] + [(size - 15 + i, 8) for i in range(8, 15)]
    return first, second


def draw_format(matrix, ec, mask):
    out = matrix.copy()
    w = format_word(ec, mask)
    for copy in format_positions(out.size):
        for i, (r, c) in enumerate(copy):
            out.modules[r, c] = bool((w >> i) & 1)
    return out


# ---------------------------------------------------------------------------
# Penalty scoring
# ---------------------------------------------------------------------------

_FINDER_LIKE = (
    np.array([1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0], dtype=bool),
    np.array([0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1], dtype=bool),
)


def _run_penalty(grid):
    total = 0
    for lines in (grid, grid.T):
        a = lines.astype(np.int8)
        sep = np.full((a.shape[0], 1), 2, dtype=np.int8)
        flat = np.hstack([sep, a, sep]).ravel()
        edges = np.flatnonzero(flat[1:] != flat[:-1])
        runs = np.diff(edges)
        # separator runs never reach 5
        long_runs = runs[runs >= 5]
        total += int((long_runs - 2).sum())
    return total


def _block_penalty(grid):
    same = ((grid[:-1, :-1] == grid[1:, :-1])
            & (grid[:-1, :-1] == grid[:-1, 1:])
            & (grid[:-1, :-1] == grid[1:, 1:]))
    return 3 * int(same.sum())


def _finder_penalty(grid):
    count = 0
    for lines in (grid, grid.T):
        # the surrounding quiet zone counts as light
        padded = np.pad(lines, ((0, 0), (4, 4)), constant_values=False)
        windows = np.lib.stride_tricks.sliding_window_view(padded, 11, axis=1)
        for pattern in _FINDER_LIKE:
            count += int(np.all(windows == pattern, axis=2).sum())
    return 40 * count


def _balance_penalty(grid):
    total = grid.size
    dark = int(grid.sum())
    return 10 * (abs(20 * dark - 10 * total) // total)


def penalty_breakdown(matrix):
    grid = matrix.modules if isinstance(matrix, ModuleMatrix) else np.asarray(matrix, dtype=bool)
    return (_run_penalty(grid), _block_penalty(grid), _finder_penalty(grid), _balance_penalty(grid))


def penalty_score(matrix):
    """Sum of the four scanability rules.

    1. each run of >= 5 same-colour modules in a row/column: 3 + (length - 5)
    2. each 2x2 same-colour block (overlapping): 3
    3. each 1:1:3:1:1 finder-like run with 4 light modules on one side: 40
    4. 10 per full 5% the dark share deviates from 50%
    """
    return sum(penalty_breakdown(matrix))


# ---------------------------------------------------------------------------
# Whole-symbol encoding
# ---------------------------------------------------------------------------

class EncodedSymbol(NamedTuple):
    matrix: ModuleMatrix
    mask: int
    version: int


def render_candidate(codewords, version, ec, mask):
    placed = place_data(build_function_patterns(version), codewords)
    return draw_format(apply_mask(placed, mask), ec, mask)


def best_mask(codewords, version, ec):
    """(mask, matrix) of minimum penalty; ties go to the lowest mask index."""
    best = None
    for mask in range(8):
        candidate = render_candidate(codewords, version, ec, mask)
        score = penalty_score(candidate)
        if best is None or score < best[0]:
            best = (score, mask, candidate)
    return best[1], best[2]


def encode_symbol(payload, ec=EcLevel.H, mask: Optional[int] = None,
                  version: Union[int, str, None] = None):
    """Encode ``payload`` bytes as one QR symbol.

    ``mask`` and ``version`` are None/"auto" for automatic choice, or an int to force.
    """
    ec = EcLevel.coerce(ec)
    payload = bytes(payload)
    if not payload:
        raise EmptyInput("payload must not be empty")
    segments = [Segment.auto(payload)]
    if version is None or version == "auto":
        version = choose_version(segments, ec)
    else:
        version = int(version)
        _check_version(version)
        if not _fits(segments, version, ec):
            raise InvalidForcedVersion(f"payload of {len(payload)} bytes does not fit version {version}-{ec.name}")
    data = assemble_codewords(segments, version, ec)
    codewords = interleave_blocks(data, version, ec)
    if mask is None or mask == "auto":
        mask, matrix = best_mask(codewords, version, ec)
    else:
        mask = int(mask)
        matrix = render_candidate(codewords, version, ec, mask)
    return EncodedSymbol(matrix, mask, version)
