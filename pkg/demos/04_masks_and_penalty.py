# coding: utf-8

# # Masks and the penalty score

# In[1]:

import numpy as np

from sdeqr import qrencode as qe


# The eight mask patterns on a 21x21 grid.

# In[2]:

for k in range(8):
    grid = qe.mask_grid(k, 21)
    print(k, grid.mean().round(3))


# An all-light symbol-sized grid, rule by rule.

# In[3]:

blank = qe.ModuleMatrix(np.zeros((21, 21), dtype=bool))
print(qe.penalty_breakdown(blank), qe.penalty_score(blank))


# Scores for every mask of one payload. AUTO picks the lowest, ties to the lowest index.

# In[4]:

payload = b"mask selection demo"
scores = [qe.penalty_score(qe.encode_symbol(payload, "Q", mask=k).matrix) for k in range(8)]
print(scores)
print(qe.encode_symbol(payload, "Q").mask, int(np.argmin(scores)))
