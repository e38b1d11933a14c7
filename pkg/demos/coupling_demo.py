"""The red-green weight coupling, inspected by hand.

Each weight X is coupled to two independent copies (Y, Y') of itself so
that X <= min(Y/(1-s)^(1/q), Y'/s^(1/q)) holds surely, not just on
average.  A cheap structure found with the green copies can then be
patched with the red copies, and the final cost still bounds X's optimum.
"""

import numpy as np
from scipy import stats

from minweight.rngs import stream
from minweight.weights import (
    BaseLaw,
    WeightSpec,
    coupling_violations,
    split_coupling_batch,
)

q = 2.0
s = 0.3
spec = WeightSpec(q=q, base=BaseLaw.UNIFORM_POWER)
rng = stream(2024)

x, y, yp = split_coupling_batch(spec, s, rng, 50_000)

c_green = (1.0 - s) ** (-1.0 / q)
c_red = s ** (-1.0 / q)
print(f"q={q}, s={s}: green factor {c_green:.4f}, red factor {c_red:.4f}")
print()
print("first draws (x vs its two ceilings):")
for i in range(6):
    print(f"  x={x[i]:.4f}   y*cg={y[i] * c_green:.4f}   y'*cr={yp[i] * c_red:.4f}")

print()
print(f"violations of the sure bound: {coupling_violations(x, y, yp, s, q)} / {x.size}")

# the three marginals are the same law...
ks_pair = stats.ks_2samp(y, yp).pvalue
print(f"KS green vs red: p={ks_pair:.3f}")
# ...and green/red are independent of each other
r, p = stats.pearsonr(y, yp)
print(f"green-red correlation: {r:+.4f} (p={p:.3f})")

# how tight is the coupling?  the uniform base keeps x strictly inside
# its ceiling (a quadratic correction), while the exponential base makes
# x the ceiling itself
ceiling = np.minimum(y * c_green, yp * c_red)
print(f"uniform base:     x == ceiling in {100 * np.mean(x == ceiling):.1f}% "
      f"of draws, mean slack {np.mean(ceiling - x):.4f}")

spec_exp = WeightSpec(q=q, base=BaseLaw.EXPONENTIAL_POWER)
xe, ye, ype = split_coupling_batch(spec_exp, s, stream(2024, 1), 50_000)
ceiling_e = np.minimum(ye * c_green, ype * c_red)
print(f"exponential base: x == ceiling in {100 * np.mean(xe == ceiling_e):.1f}% "
      f"of draws, mean slack {np.mean(ceiling_e - xe):.4f}")
