"""Password-keyed cipher with QR Code carriage, from key derivation down to module matrices."""
from .cipher import CipherWords, Format, SecretCode, Stage, decrypt, derive_code, deserialize, encrypt, serialize
from .errors import SdeqrError
from .pipeline import Manifest, SymbolSet, decrypt_from_symbols, encrypt_to_symbols, split_payload
from .qrdecode import DecodedSymbol, decode_symbol
from .qrencode import EcLevel, ModuleMatrix, Mode, encode_symbol
from .render import RenderFormat, parse_matrix, render

__version__ = "0.1.0"
