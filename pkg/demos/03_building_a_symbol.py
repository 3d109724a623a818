# coding: utf-8

# # Building a QR symbol by hand

# In[1]:

import numpy as np

from sdeqr import qrencode as qe
from sdeqr.render import render


# Segment and version choice for the classic example.

# In[2]:

seg = qe.Segment.auto(b"HELLO WORLD")
print(seg.mode, qe.choose_version([seg], "M"))


# Data codewords, then blocks with EC appended and interleaved.

# In[3]:

data = qe.assemble_codewords([seg], 1, "M")
codewords = qe.interleave_blocks(data, 1, "M")
print(data)
print(len(codewords))


# Function patterns only. True is dark.

# In[4]:

template = qe.build_function_patterns(1)
print(template.function_mask.sum(), "function modules of", template.size ** 2)


# Data placed, masked, format drawn.

# In[5]:

symbol = qe.render_candidate(codewords, 1, "M", 0)
print(render(symbol, "txt", quiet_zone=1).decode())


# A larger version carries version information blocks.

# In[6]:

big = qe.encode_symbol(b"x" * 200, "L")
print(big.version, big.matrix.size, qe.version_bits(7))
