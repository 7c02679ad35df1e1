"""Tour of the kernel identities on a mixed-radix group.

Builds the depth-6 group with cell counts cycling through 2, 3, 4, shows the
localization of the Dirichlet kernel at the natural scales, and then runs the
full identity-verification sweep, printing one line per check.
"""

import numpy as np

from vilenkin import GeneratorSequence, dirichlet, fejer_kernel
from vilenkin.identities import run_suite

gen = GeneratorSequence.cycle([2, 3, 4], 6)
print(f"group: m = {gen.m}, M_N = {gen.size} cells\n")

print("Dirichlet kernels at the natural scales are scaled indicators:")
for n in range(gen.depth + 1):
    Mn = gen.scale[n]
    vals = dirichlet(Mn, gen).values
    inside = vals[::Mn]           # the cylinder where the first n digits vanish
    outside = np.delete(vals, np.arange(0, gen.size, Mn))
    spill = float(np.max(np.abs(outside))) if outside.size else 0.0
    print(f"  D_{{{Mn}}} = {inside[0].real:g} on {inside.size} cells, "
          f"max |value| elsewhere = {spill:.2g}")

print("\nThe Fejer kernel at small orders (cell 0 column):")
for n in (1, 2, 3, 6, 12):
    print(f"  K_{n}(0) = {fejer_kernel(n, gen).values[0].real:.6f}")

print("\nFull verification sweep:")
reports = run_suite(gen, np.random.default_rng(0))
for r in reports:
    params = ";".join(f"{k}={v}" for k, v in r.params.items())
    print(f"  [{'ok' if r.passed else 'FAIL'}] {r.name}({params}) "
          f"{r.kind}={r.value:.3g}")
passed = sum(r.passed for r in reports)
print(f"\n{passed}/{len(reports)} checks passed")
