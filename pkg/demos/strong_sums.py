"""Strong averaged sums of partial-sum and block-mean errors.

Three experiments on the dyadic group:

1. A function with finite spectrum: the power-weighted sum of partial-sum
   sizes converges (its increments die off like k^{-3/2}) and the averaged
   partial-sum error decays like 1 / log n.
2. Random functions: the log-weighted sum of martingale-Hardy block-mean
   sizes stays flat - the bounded regime.
3. The block-atom construction from the divergence experiment: the same
   weighted sum is flat at the block ends, while the unweighted version
   grows - the two regimes side by side.
"""

import numpy as np

from vilenkin import GeneratorSequence, GridFunction, synthesize
from vilenkin.hardy import (
    counterexample_martingale,
    sigma_norm_profile,
    strong_sums,
)

gen = GeneratorSequence.walsh(11)
rng = np.random.default_rng(0)

coeffs = np.zeros(gen.size, dtype=np.complex128)
coeffs[:8] = 0.1 * (rng.normal(size=8) + 1j * rng.normal(size=8))
smooth = synthesize(gen, coeffs)

print("1. finite-spectrum function (coefficients below 8):")
for n in (16, 64, 256, 1024, gen.size):
    simon = strong_sums(smooth, n, mode="simon")
    gat = strong_sums(smooth, n, mode="gat")
    print(f"   n = {n:5d}: power-weighted sum {simon:.6f}, "
          f"averaged error {gat:.6f}")
print("   the first column converges; the second decays like 1/log n\n")

print("2. random function, log-weighted block-mean sum:")
f = GridFunction(gen, rng.normal(size=gen.size) + 1j * rng.normal(size=gen.size))
cumulative = np.cumsum(sigma_norm_profile(f, gen.size, hardy=True))
for n in (16, 64, 256, 1024, gen.size):
    print(f"   n = {n:5d}: {cumulative[n - 1] / (n * np.log(n)):.4f}")
print("   flat - the bounded regime\n")

print("3. block-atom function, weighted vs unweighted:")
ce = counterexample_martingale(lambda n: 1.0, range(4, 11), gen)
plain = np.cumsum(sigma_norm_profile(ce.function, gen.size))
weighted = np.cumsum(sigma_norm_profile(ce.function, gen.size, hardy=True))
for a in ce.alphas:
    n = 2 * gen.scale[a]
    print(f"   n = {n:5d}: unweighted {plain[n - 1] / n:.4f}, "
          f"log-weighted {weighted[n - 1] / (n * np.log(n)):.4f}")
print("   the unweighted column grows; the weighted one levels off")
