"""Union-bound calculator: when is the optimum provably not tiny?

For families whose size-m member counts grow like c^m * m^(beta*m), the
expected number of members cheaper than L is summable, and a geometric
series argument yields a floor l_lower that the optimum clears with
probability 1 - exp(-ell0 * t).
"""

import numpy as np

from minweight.bounds import first_moment_lower_bound

res = first_moment_lower_bound(q=1.0, ell0=16, ell1=64, beta=0.5, c=1.0, t=1.0)

print(f"l_lower      = {res.l_lower:.6f}")
print(f"failure prob <= {res.failure_prob_bound:.3e}")
print(f"c0={res.c0:.4f}  c1={res.c1:.4f}  small sets dominate: {res.small_sets_dominate}")
print()
print("per-size expected counts below l_lower (log scale):")
for m, coarse, refined in list(zip(res.sizes, res.log_size_bounds,
                                   res.log_size_bounds_refined))[::8]:
    print(f"  m={m:>3}  coarse={coarse:>9.2f}  refined={refined:>9.2f}")
print(f"log total (refined): {res.log_markov_sum:.2f}"
      f"  vs required {-16.0:.2f}")
print()

# the floor strengthens with ell0 (smaller sets excluded) and weakens as
# the count growth rate beta approaches q
print("floor as beta -> q:")
for beta in (0.25, 0.5, 0.75, 1.0):
    r = first_moment_lower_bound(q=1.0, ell0=16, ell1=64, beta=beta, c=1.0, t=1.0)
    print(f"  beta={beta:.2f}  l_lower={r.l_lower:.6f}")
