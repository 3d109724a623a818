# coding: utf-8

# # Reed-Solomon over GF(256)

# In[1]:

import random

import numpy as np

from sdeqr import gf256
from sdeqr.errors import DecodeFailure


# The field is built from x^8 + x^4 + x^3 + x^2 + 1 with generator 2.

# In[2]:

print(gf256.EXP[:10])
print(gf256.gf_mul(0x53, 0xCA), gf256.gf_inv(0x53))


# Multiplication table as an image-like array; row 1 is the identity.

# In[3]:

mul = np.array([[gf256.gf_mul(a, b) for b in range(256)] for a in range(256)], dtype=np.uint8)
print(mul.shape, (mul[1] == np.arange(256)).all())


# A 1-M block: 16 data codewords, 10 EC codewords.

# In[4]:

data = [32, 91, 11, 120, 209, 114, 220, 77, 67, 64, 236, 17, 236, 17, 236, 17]
ec = gf256.rs_encode(data, 10)
block = data + ec
print(ec)


# Five errors are within capacity, six usually are not.

# In[5]:

rng = random.Random(1)
for k in (5, 6):
    bad = list(block)
    for p in rng.sample(range(len(bad)), k):
        bad[p] ^= rng.randrange(1, 256)
    try:
        fixed, n = gf256.rs_decode(bad, 10)
        print(k, "errors ->", "recovered" if fixed == block else "other codeword", n)
    except DecodeFailure as exc:
        print(k, "errors ->", exc)
