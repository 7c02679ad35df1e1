"""The block-atom function whose averaged block means grow without bound.

Stacks modulated Dirichlet-kernel atoms at geometrically spaced scales with
weights 1 / log M_alpha, then tracks T(n) = (1/n) * sum_{k<=n} of the
L_{1/2}^{1/2} size of the k-th block mean.  T grows like sqrt(alpha) at the
block ends even though the function itself has the smallest possible
martingale Hardy norm its coefficients allow.
"""

import numpy as np

from vilenkin import GeneratorSequence
from vilenkin.hardy import counterexample_martingale, sigma_norm_profile

gen = GeneratorSequence.walsh(11)
alphas = list(range(4, 11))
ce = counterexample_martingale(lambda n: 1.0, alphas, gen)

print(f"group: 2^{gen.depth} = {gen.size} cells; blocks at ranks {alphas}")
print("block weights:", ", ".join(f"{lam:.4f}" for lam in ce.lambdas))

profile = sigma_norm_profile(ce.function, gen.size)
cumulative = np.cumsum(profile)

print("\n  k   alpha    n=2*M_a      T(n)   T(n)/sqrt(alpha)")
for k, a in enumerate(alphas, start=1):
    n = 2 * gen.scale[a]
    t = cumulative[n - 1] / n
    print(f"  {k:2d}   {a:4d}   {n:8d}   {t:7.4f}   {t / np.sqrt(a):10.4f}")

roots = np.sqrt(np.asarray(alphas, dtype=float))
ts = [cumulative[2 * gen.scale[a] - 1] / (2 * gen.scale[a]) for a in alphas]
slope = np.polyfit(roots, ts, 1)[0]
corr = np.corrcoef(roots, ts)[0, 1]
print(f"\nleast-squares fit of T against sqrt(alpha): "
      f"slope {slope:.3f}, correlation {corr:.4f}")
print("the ratio column settling to a constant is the divergence signature")
