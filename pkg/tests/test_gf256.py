import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sdeqr import gf256
from sdeqr.errors import DecodeFailure
from sdeqr.gf256 import EXP, LOG, gf_mul, poly_eval, rs_decode, rs_encode, rs_generator


def slow_mul(a, b):
    """Carry-less multiply then reduce by 0x11D; independent of the log tables."""
    p = 0
    while b:
        if b & 1:
            p ^= a
        a <<= 1
        if a & 0x100:
            a ^= 0x11D
        b >>= 1
    return p


def slow_remainder(dividend, divisor):
    """Schoolbook polynomial long division over GF(256), highest degree first."""
    out = list(dividend)
    for i in range(len(dividend) - len(divisor) + 1):
        coef = out[i]
        if coef:
            for j, d in enumerate(divisor):
                out[i + j] ^= slow_mul(coef, d)
    return out[len(dividend) - len(divisor) + 1:]


# full 256 x 256 product table, computed once by the oracle
MUL = np.array([[gf_mul(a, b) for b in range(256)] for a in range(256)], dtype=np.int64)


def test_mul_matches_bitwise_oracle_exhaustively():
    oracle = np.array([[slow_mul(a, b) for b in range(256)] for a in range(256)])
    assert np.array_equal(MUL, oracle)


def test_mul_examples():
    assert gf_mul(2, 2) == 4
    assert all(gf_mul(a, 1) == a for a in range(256))
    assert EXP[8] == 0x1D


def test_field_axioms_exhaustive():
    a = np.arange(256)
    assert not np.any(a ^ a)
    assert np.array_equal(MUL, MUL.T)
    # associativity: (a*b)*c == a*(b*c) for all triples, via table lookups
    for c in range(256):
        assert np.array_equal(MUL[MUL, c], MUL[a[:, None], MUL[:, c][None, :]])
    # distributivity: a*(b^c) == a*b ^ a*c
    for c in range(256):
        assert np.array_equal(MUL[:, a ^ c], MUL ^ MUL[:, c][:, None])


def test_inverses():
    for a in range(1, 256):
        assert gf_mul(a, gf256.gf_inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        gf256.gf_inv(0)


def test_exp_log_consistency():
    assert sorted(EXP[:255]) == list(range(1, 256))
    for a in range(1, 256):
        assert EXP[LOG[a]] == a
    for i in range(255):
        assert EXP[i + 255] == EXP[i]


def test_generator_small():
    assert rs_generator(1) == [1, 1]
    # (x + 1)(x + 2) = x^2 + 3x + 2
    assert rs_generator(2) == [1, 3, 2]


@pytest.mark.parametrize("n_ec", range(1, 69))
def test_generator_roots(n_ec):
    g = rs_generator(n_ec)
    assert len(g) == n_ec + 1 and g[0] == 1
    for j in range(n_ec):
        assert poly_eval(g, EXP[j]) == 0


@pytest.mark.parametrize("bad", [0, 69])
def test_generator_range(bad):
    with pytest.raises(ValueError):
        rs_generator(bad)


def test_encode_zero_data():
    assert rs_encode([0] * 9, 7) == [0] * 7


def test_encode_long_division_example():
    # 0x40 x^2 mod (x^2 + 3x + 2) = 0x40 (3x + 2)
    assert slow_remainder([0x40, 0, 0], [1, 3, 2]) == [0xC0, 0x80]
    assert rs_encode([0x40], 2) == [0xC0, 0x80]


def test_encode_known_qr_block():
    # 1-M "HELLO WORLD" data codewords and their published EC codewords
    data = [32, 91, 11, 120, 209, 114, 220, 77, 67, 64, 236, 17, 236, 17, 236, 17]
    assert rs_encode(data, 10) == [196, 35, 39, 119, 235, 215, 231, 226, 93, 23]


@settings(max_examples=200)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=60), st.integers(1, 30))
def test_encode_matches_long_division_and_is_divisible(data, n_ec):
    ec = rs_encode(data, n_ec)
    assert ec == slow_remainder(data + [0] * n_ec, rs_generator(n_ec))
    block = data + ec
    assert all(poly_eval(block, EXP[j]) == 0 for j in range(n_ec))


def test_decode_clean_block():
    data = list(range(10))
    block = data + rs_encode(data, 10)
    assert rs_decode(block, 10) == (block, 0)


def corrupt(block, k, rng):
    out = list(block)
    for p in rng.sample(range(len(block)), k):
        out[p] ^= rng.randrange(1, 256)
    return out


@pytest.mark.parametrize("k", range(6))
def test_decode_up_to_capacity(k):
    rng = random.Random(k)
    for _ in range(50):
        data = [rng.randrange(256) for _ in range(10)]
        block = data + rs_encode(data, 10)
        fixed, n = rs_decode(corrupt(block, k, rng), 10)
        assert fixed == block and n == k


def test_decode_beyond_capacity_never_returns_original_silently():
    rng = random.Random(7)
    for _ in range(200):
        data = [rng.randrange(256) for _ in range(10)]
        block = data + rs_encode(data, 10)
        received = corrupt(block, 6, rng)
        try:
            fixed, n = rs_decode(received, 10)
        except DecodeFailure:
            continue
        # a mis-decode lands on another codeword within distance 5
        assert fixed != block
        assert not any(gf256.syndromes(fixed, 10))
        assert sum(a != b for a, b in zip(fixed, received)) == n <= 5


def all_codewords(k, n_ec):
    return np.array([list(d) + rs_encode(list(d), n_ec) for d in itertools.product(range(256), repeat=k)],
                    dtype=np.uint8)


@pytest.mark.parametrize("k,n_ec", [(1, 2), (1, 4), (2, 3), (2, 4), (1, 6)])
def test_decode_agrees_with_brute_force_nearest_codeword(k, n_ec):
    code = all_codewords(k, n_ec)
    t = n_ec // 2
    rng = random.Random(k * 100 + n_ec)
    for trial in range(300):
        sent = code[rng.randrange(len(code))].tolist()
        received = corrupt(sent, rng.randint(0, min(len(sent), t + 2)), rng)
        dist = (code != np.array(received, dtype=np.uint8)).sum(axis=1)
        best = int(dist.min())
        if best <= t:
            nearest = code[int(dist.argmin())].tolist()
            assert rs_decode(received, n_ec) == (nearest, best)
        else:
            with pytest.raises(DecodeFailure):
                rs_decode(received, n_ec)


def test_decode_requires_longer_block():
    with pytest.raises(ValueError):
        rs_decode([1, 2], 2)
