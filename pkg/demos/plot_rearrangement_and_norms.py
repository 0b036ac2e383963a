"""
Rearrangement and Lorentz norms of a step function
==================================================

"""

import math

import numpy as np

from dyadic_lorentz import StepFunction, lorentz_norm, rearrange

# a step function on [0, 1) with eight cells
f = StepFunction(0, 3, [1, -4, 0, 2, 2, 0.5, 0, -1])

# the decreasing rearrangement merges equal magnitudes into one step
prof = rearrange(f)
print("breakpoints", prof.breakpoints)
print("values     ", prof.values)

# L^{p,q} for a few indices; L^{p,p} is the usual L^p norm
for p, q in [(1, 1), (2, 1), (2, 2), (2, math.inf), (0.5, 1)]:
    print(f"||f||_({p}, {q}) = {lorentz_norm(f, p, q):.6f}")

# the second index orders the spaces: ||f||_{p,r} <= C ||f||_{p,q} for q < r
for q, r in [(1, 2), (2, math.inf)]:
    print(q, r, lorentz_norm(f, 2, r) / lorentz_norm(f, 2, q))

# evaluating f* is right-continuous at the breakpoints
print(prof(np.array([0.0, 0.125, 0.124])))
