"""
Calderon-Zygmund decomposition at several heights
=================================================

"""

import numpy as np

from dyadic_lorentz import cz_decompose, verify_cz
from dyadic_lorentz.corpus import random_s0

# a seeded function on [0, 4) at resolution 2**-6
f = random_s0(2024, 2, 6)
avg = np.abs(f.values).mean()

# heights from the average of |f| upward; fewer cubes as the height grows
for octave in range(4):
    h = avg * 2 ** octave
    dec = cz_decompose(f, h)
    rep = verify_cz(f, dec)
    print(f"height {h:8.4f}: {len(dec.cubes):3d} cubes, "
          f"measure {rep.observed['cubes_measure']:.4f} <= {rep.bound['cubes_measure']:.4f}, "
          f"|g| <= {rep.observed['g_sup']:.3f}, pass={rep.passed}")

# below the average the root interval itself would stop; a larger domain fixes it
try:
    cz_decompose(f, avg / 2)
except ValueError as exc:
    print(exc)
print(verify_cz(f.refine(m=4), cz_decompose(f.refine(m=4), avg / 2)).passed)
