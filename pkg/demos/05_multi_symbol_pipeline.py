# coding: utf-8

# # Long messages across several symbols

# In[1]:

import tempfile
from pathlib import Path

from sdeqr.pipeline import Manifest, decrypt_from_symbols, encrypt_to_symbols
from sdeqr.render import parse_matrix, render


# Ciphertext over 1264 bytes is cut into chunks, one symbol each.

# In[2]:

message = "I love you ýþý. " * 40
result = encrypt_to_symbols(message, "Hello World")
print(result.manifest.to_json())
print(result.versions, result.masks)


# Write the symbols as PBM files, then read them back.

# In[3]:

out = Path(tempfile.mkdtemp())
for i, m in enumerate(result.symbols, 1):
    (out / f"symbol-{i:03d}.pbm").write_bytes(render(m, "pbm"))
(out / "manifest.json").write_text(result.manifest.to_json())

symbols = [parse_matrix(p.read_bytes(), "pbm") for p in sorted(out.glob("symbol-*.pbm"))]
manifest = Manifest.from_json((out / "manifest.json").read_text())
print(decrypt_from_symbols(symbols, "Hello World", manifest) == message)


# Swapped symbols are caught by the manifest.

# In[4]:

try:
    decrypt_from_symbols(symbols[::-1], "Hello World", manifest)
except Exception as exc:
    print(type(exc).__name__, exc)
