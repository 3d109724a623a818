import json
import zlib

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from sdeqr import cipher, pipeline
from sdeqr.cipher import Format
from sdeqr.errors import ChecksumMismatch, EmptyInput, InvalidWord, OrderMismatch
from sdeqr.pipeline import Manifest, decrypt_from_symbols, encrypt_to_symbols, split_payload
from sdeqr.qrdecode import decode_symbol
from sdeqr.qrencode import EcLevel

MESSAGE = "I love you ýþý"
PASSWORD = "Hello World"


def test_split_threshold_boundary():
    assert split_payload(b"a" * 1264) == [b"a" * 1264]
    chunks = split_payload(b"a" * 1265)
    assert [len(c) for c in chunks] == [1264, 1]


def test_split_entity_respects_tokens():
    data = b"&#96;&#55;&#131;&#7;"
    chunks = split_payload(data, 7, Format.ENTITY)
    assert chunks == [b"&#96;", b"&#55;", b"&#131;", b"&#7;"]
    for c in chunks:
        cipher.deserialize(c, Format.ENTITY)


@given(st.lists(st.integers(0, 0xFFFF), min_size=1, max_size=300), st.integers(8, 200))
def test_split_entity_chunks_parse_independently(words, limit):
    data = cipher.serialize(words, Format.ENTITY)
    chunks = split_payload(data, limit, Format.ENTITY)
    assert b"".join(chunks) == data
    assert all(len(c) <= limit for c in chunks)
    parsed = [w for c in chunks for w in cipher.deserialize(c, Format.ENTITY).words]
    assert parsed == words


def test_split_entity_token_longer_than_limit():
    with pytest.raises(ValueError):
        split_payload(b"&#65535;", 4, Format.ENTITY)


@given(st.binary(max_size=400).filter(lambda b: len(b) % 2 == 0), st.integers(2, 99))
def test_split_raw16_on_word_boundaries(data, limit):
    chunks = split_payload(data, limit, Format.RAW16)
    assert b"".join(chunks) == data
    assert all(len(c) % 2 == 0 and len(c) <= limit for c in chunks)


def test_split_rejects_bad_limit():
    with pytest.raises(ValueError):
        split_payload(b"x", 0)


def test_worked_scenario_single_symbol():
    s = encrypt_to_symbols(MESSAGE, PASSWORD)
    assert s.manifest.total == 1 and len(s.symbols) == 1
    assert s.manifest.ec_level is EcLevel.H
    data = cipher.serialize(cipher.encrypt(MESSAGE, PASSWORD), Format.ENTITY)
    assert decode_symbol(s.symbols[0]).payload == data
    assert s.manifest.crc32 == zlib.crc32(data)
    assert decrypt_from_symbols(s.symbols, PASSWORD, s.manifest) == MESSAGE


def test_two_chunk_message():
    # each 'a' becomes "&#65415;" (8 bytes): 250 characters -> 2000 bytes -> 2 chunks
    message = "a" * 250
    s = encrypt_to_symbols(message, PASSWORD)
    assert s.manifest.total == 2
    assert s.manifest.chunk_lengths == [1264, 736]
    payloads = [decode_symbol(m).payload for m in s.symbols]
    assert b"".join(payloads) == cipher.serialize(cipher.encrypt(message, PASSWORD))
    assert decrypt_from_symbols(s.symbols, PASSWORD, s.manifest) == message


def test_empty_message_is_rejected_by_encoder():
    with pytest.raises(EmptyInput):
        encrypt_to_symbols("", PASSWORD)


def test_swapped_symbols_detected():
    s = encrypt_to_symbols("a" * 250, PASSWORD)
    with pytest.raises((OrderMismatch, ChecksumMismatch, InvalidWord)):
        decrypt_from_symbols(s.symbols[::-1], PASSWORD, s.manifest)


def test_swapped_equal_length_chunks_fail_checksum():
    # lowercase letters all encrypt to 5-digit tokens; 100 % 26 != 0 keeps the halves distinct
    s = encrypt_to_symbols("".join(chr(97 + i % 26) for i in range(200)), PASSWORD, limit=800)
    assert s.manifest.chunk_lengths == [800, 800]
    with pytest.raises(ChecksumMismatch):
        decrypt_from_symbols(s.symbols[::-1], PASSWORD, s.manifest)


def test_wrong_symbol_count():
    s = encrypt_to_symbols("a" * 250, PASSWORD)
    with pytest.raises(OrderMismatch):
        decrypt_from_symbols(s.symbols[:1], PASSWORD, s.manifest)


@pytest.mark.parametrize("wrong", ["Hello world", "wrong password", "g" * 57 + "G"])
def test_wrong_password_never_reproduces_message(wrong):
    s = encrypt_to_symbols(MESSAGE, PASSWORD)
    try:
        assert decrypt_from_symbols(s.symbols, wrong, s.manifest) != MESSAGE
    except InvalidWord:
        pass


def test_without_manifest_uses_given_order():
    s = encrypt_to_symbols(MESSAGE, PASSWORD, serialization="raw16")
    assert decrypt_from_symbols(s.symbols, PASSWORD, serialization=Format.RAW16) == MESSAGE


def test_default_chunks_never_exceed_limit():
    s = encrypt_to_symbols("Zz9" * 700, PASSWORD, ec="L")
    assert max(s.manifest.chunk_lengths) <= 1264
    assert sum(s.manifest.chunk_lengths) == len(cipher.serialize(cipher.encrypt("Zz9" * 700, PASSWORD)))


def test_manifest_json_fields():
    s = encrypt_to_symbols(MESSAGE, PASSWORD, ec="Q", serialization="raw16")
    doc = json.loads(s.manifest.to_json())
    assert set(doc) == {"total", "serialization", "ec_level", "chunk_lengths", "crc32"}
    assert doc["serialization"] == "raw16" and doc["ec_level"] == "Q"
    assert Manifest.from_json(s.manifest.to_json()) == s.manifest
    # only ciphertext is covered; plaintext never appears
    assert MESSAGE not in s.manifest.to_json()


def test_manifest_validation():
    with pytest.raises(ValueError):
        Manifest(total=2, serialization="entity", ec_level="H", chunk_lengths=[3], crc32=0)
    with pytest.raises(ValueError):
        Manifest.from_dict({"total": 1})


text = st.text(alphabet=st.characters(max_codepoint=0xFFFF - 72, blacklist_categories=("Cs",)),
               min_size=1, max_size=120)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(text, st.binary(min_size=1, max_size=64), st.sampled_from(list(EcLevel)), st.sampled_from(list(Format)))
def test_end_to_end_identity(message, password, ec, fmt):
    s = encrypt_to_symbols(message, password, ec=ec, serialization=fmt, mask=0)
    manifest = Manifest.from_json(s.manifest.to_json())
    assert decrypt_from_symbols(s.symbols, password, manifest) == message
