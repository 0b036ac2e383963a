"""
Pairwise but not countable subadditivity
========================================

"""

from dyadic_lorentz import counterexample_demo, weak11_demo, CoeffMatrix, indicator

# the functional min(1, |f| near 0) is subadditive on pairs, yet a series of
# annuli shrinking to 0 has functional 0 termwise and 1 on its sum
for N in (1, 3, 6):
    rep = counterexample_demo(N, 10)
    print(N, rep.observed["tail_l1"], rep.observed["T_limit"], rep.observed["sum_T_terms"], rep.passed)

# S is genuinely countably subadditive, so the weak (1,1) argument goes through
a = CoeffMatrix({(-3, 0): 1, (0, 0): 1, (1, 0): 1, (1, 1): -1})
f = (4 * indicator(0, 0.25, 0, 6)).refine(m=3)
rep = weak11_demo(a, f, 0.5)
print(rep.observed["checks"], rep.observed["certificate_constant"])
