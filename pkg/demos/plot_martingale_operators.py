"""
Martingale differences and the maximal operator S
=================================================

"""

import numpy as np

from dyadic_lorentz import CoeffMatrix, DyadicInterval, haar, martingale_diff, maximal_s, zero_locality_check
from dyadic_lorentz.corpus import random_s0

f = random_s0(7, 0, 5)

# the differences D_k f plus the mean rebuild f exactly
total = np.full(f.ncells, f.integral())
for k in range(f.level):
    total += martingale_diff(f, k).values
print("exact reconstruction:", np.array_equal(total, f.values))

# D_k keeps only the Haar components at scale 2**-k
h = haar(DyadicInterval(2, 1), 0, 5)
print([bool(np.any(martingale_diff(h, k).values)) for k in range(5)])

# S f = max over rows j of |sum_k a_kj D_k f|
a = CoeffMatrix({(0, 0): 1, (1, 0): -1, (2, 0): 0.5, (1, 1): 2, (3, 1): 1})
print("S f at the first cells:", maximal_s(f, a).values[:8])

# a mean-zero function in a dyadic interval stays there under S
rep = zero_locality_check(h, a, DyadicInterval(2, 1))
print(rep.observed, rep.passed)
