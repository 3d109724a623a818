import pytest
from hypothesis import given, strategies as st

from sdeqr import cipher
from sdeqr.cipher import CipherWords, Format, Stage
from sdeqr.errors import EmptyPassword, InvalidWord, MalformedEntity, OddLength, Overflow16

MESSAGE = "I love you ýþý"
# characters 255, 254, 253: the ones the worked value list is computed from
WORKED_MESSAGE = "I love you \u00ff\u00fe\u00fd"
PASSWORD = "Hello World"
ADDED = [96, 55, 131, 134, 141, 124, 55, 144, 134, 140, 55, 278, 277, 276]

passwords = st.binary(min_size=1, max_size=64)
words16 = st.lists(st.integers(0, 0xFFFF), max_size=200)


# a <=64 byte password gives n <= 64**3 * 255, at most 8 digits, so code <= 72
safe_text = st.text(alphabet=st.characters(max_codepoint=0xFFFF - 72, blacklist_categories=("Cs",)),
                    max_size=300)


def test_derive_code_worked_example():
    s = cipher.derive_code(PASSWORD)
    assert (s.plen, s.n, s.code) == (11, 127292, 23)


def test_derive_code_single_byte():
    # 1^2 * 65 = 65, digit sum 6 + 5
    s = cipher.derive_code(b"A")
    assert (s.n, s.code) == (65, 11)


def test_derive_code_digit_sum_applied_once():
    # 127292 -> 23, not further reduced to 5
    assert cipher.derive_code(PASSWORD).code == 23


def test_empty_password():
    with pytest.raises(EmptyPassword):
        cipher.derive_code("")
    with pytest.raises(EmptyPassword):
        cipher.encrypt("x", b"")


def test_password_text_outside_latin1_rejected():
    with pytest.raises(ValueError):
        cipher.derive_code("passĀ")


def test_equal_length_and_byte_sum_collide():
    assert cipher.derive_code("ab").code == cipher.derive_code("ba").code


def test_add_code_worked_example():
    assert cipher.add_code("I", 23).words == (96,)
    out = cipher.add_code(WORKED_MESSAGE, cipher.derive_code(PASSWORD))
    assert list(out.words) == ADDED
    assert out.stage is Stage.ADDED


def test_add_code_literal_yacute_message():
    # U+00FD is 253, so the first of the three trailing characters adds to 276, not 278
    assert list(cipher.add_code(MESSAGE, 23).words) == ADDED[:11] + [276, 277, 276]


def test_add_code_empty():
    assert cipher.add_code("", 23).words == ()


def test_add_code_overflow_reports_index():
    with pytest.raises(Overflow16) as info:
        cipher.add_code("ab￿", 1)
    assert info.value.index == 2


def test_reverse_words():
    w = CipherWords((96, 55, 131), Stage.ADDED)
    out = cipher.reverse_words(w)
    assert out.words == (131, 55, 96) and out.stage is Stage.REVERSED
    assert cipher.reverse_words(CipherWords((), Stage.ADDED)).words == ()


def test_reverse_rejects_final_stage():
    with pytest.raises(ValueError):
        cipher.reverse_words(CipherWords((1,), Stage.FINAL))


@given(words16)
def test_reverse_is_involution(ws):
    w = CipherWords(ws, Stage.ADDED)
    assert cipher.reverse_words(cipher.reverse_words(w)) == w


def test_complement16_examples():
    out = cipher.complement16(CipherWords((0x0114, 0x0000), Stage.REVERSED))
    assert out.words == (0xFEEB, 0xFFFF)
    assert format(out.words[0], "016b") == "1111111011101011"
    assert out.stage is Stage.FINAL


def test_complement16_rejects_added_stage():
    with pytest.raises(ValueError):
        cipher.complement16(CipherWords((1,), Stage.ADDED))


@given(words16)
def test_complement16_is_involution(ws):
    w = CipherWords(ws, Stage.REVERSED)
    assert cipher.complement16(cipher.complement16(w)) == w


def test_encrypt_worked_example():
    out = cipher.encrypt(WORKED_MESSAGE, PASSWORD)
    assert list(out.words) == [w ^ 0xFFFF for w in reversed(ADDED)]
    assert out.words[0] == 0xFEEB
    out = cipher.encrypt(MESSAGE, PASSWORD)
    assert out.words[0] == 0xFEEB
    assert out.stage is Stage.FINAL


def test_encrypt_empty_message():
    assert cipher.encrypt("", "x").words == ()


@given(safe_text, passwords)
def test_encrypt_is_composition_of_stages(message, password):
    code = cipher.derive_code(password)
    by_hand = [((ord(c) + code.code) ^ 0xFFFF) for c in reversed(message)]
    assert list(cipher.encrypt(message, password).words) == by_hand
    composed = cipher.complement16(cipher.reverse_words(cipher.add_code(message, code)))
    assert cipher.encrypt(message, password) == composed


@given(safe_text, passwords)
def test_decrypt_inverts_encrypt(message, password):
    ct = cipher.encrypt(message, password)
    assert len(ct) == len(message)
    assert cipher.decrypt(ct, password) == message


@pytest.mark.parametrize("message", [MESSAGE, WORKED_MESSAGE])
def test_decrypt_worked_example(message):
    assert cipher.decrypt(cipher.encrypt(message, PASSWORD), PASSWORD) == message


def test_decrypt_negative_value_is_invalid_word():
    # 0xFFFF complements to 0, and 0 - 23 < 0
    with pytest.raises(InvalidWord) as info:
        cipher.decrypt(CipherWords((0xFFFF,), Stage.FINAL), PASSWORD)
    assert info.value.value == -23


def test_decrypt_surrogate_is_invalid_word():
    word = (0xD800 + 23) ^ 0xFFFF
    with pytest.raises(InvalidWord):
        cipher.decrypt([word], PASSWORD)


def test_decrypt_wrong_password_never_silently_equal():
    ct = cipher.encrypt(MESSAGE, PASSWORD)
    for wrong in ["Hello world", "wrong password", "letmein", "g" * 57 + "G"]:
        try:
            assert cipher.decrypt(ct, wrong) != MESSAGE
        except InvalidWord:
            pass


def test_serialize_entity():
    assert cipher.serialize([96, 55], Format.ENTITY) == b"&#96;&#55;"


def test_serialize_raw16():
    assert cipher.serialize(CipherWords((0xFEEB,)), Format.RAW16) == b"\xfe\xeb"


def test_deserialize_entity_examples():
    assert cipher.deserialize(b"&#96;&#55;", "entity").words == (96, 55)
    assert cipher.deserialize(b"&#96&#55", "entity").words == (96, 55)
    assert cipher.deserialize(b"", "entity").words == ()


@pytest.mark.parametrize("bad", [b"&#70000;", b"96;", b"&96;", b"&#;", b"&#9a;", b"&#1;x", "&#é;".encode()])
def test_deserialize_malformed_entity(bad):
    with pytest.raises(MalformedEntity):
        cipher.deserialize(bad, Format.ENTITY)


def test_deserialize_odd_raw16():
    with pytest.raises(OddLength):
        cipher.deserialize(b"\x00\x01\x02", Format.RAW16)


@pytest.mark.parametrize("fmt", list(Format))
@given(ws=words16)
def test_serialization_round_trip(fmt, ws):
    assert cipher.deserialize(cipher.serialize(ws, fmt), fmt).words == tuple(ws)


def test_cipher_words_range_checked():
    with pytest.raises(Overflow16):
        CipherWords((0x10000,))
