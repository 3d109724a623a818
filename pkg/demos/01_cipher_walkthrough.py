# coding: utf-8

# # The word cipher, step by step
#
# A password becomes a small integer code. The code is added to every
# character, the word list is reversed, then every word is complemented.

# In[1]:

from sdeqr import cipher
from sdeqr.cipher import Format


# The key: n is the squared password length times the byte sum, code is its digit sum.

# In[2]:

key = cipher.derive_code("Hello World")
print(key.plen, sum(key.password), key.n, key.code)   # 11 1052 127292 23


# Message characters here are U+00FF, U+00FE and U+00FD at the end.

# In[3]:

message = "I love you ÿþý"
added = cipher.add_code(message, key)
print(added.stage, list(added))


# In[4]:

rev = cipher.reverse_words(added)
final = cipher.complement16(rev)
print(rev.stage, [hex(w) for w in rev][:3])
print(final.stage, [hex(w) for w in final][:3])   # 0x114 -> 0xfeeb


# Two serializations of the same words.

# In[5]:

print(cipher.serialize(final, Format.ENTITY)[:40])
print(cipher.serialize(final, Format.RAW16)[:8].hex())


# Lenient parsing accepts a missing final ';'.

# In[6]:

text = cipher.serialize(final).rstrip(b";")
print(cipher.decrypt(cipher.deserialize(text), "Hello World"))
