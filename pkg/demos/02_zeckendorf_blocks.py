#!/usr/bin/env python3
"""Zeckendorf representations and blockwise product evaluation.

Every N splits uniquely into non-consecutive Fibonacci numbers, and the
product P_N(phi) splits along those blocks into shifted block products
P_{F_{n_j}}(phi, eps_j), where each eps_j is a tail sum of (-phi)-powers.
"""

from sudler import (PrecisionConfig, blockwise_eval, const_phi, eval_direct, fib,
                    shift_coefficients, zeckendorf)

cfg = PrecisionConfig(bits=128)
phi = const_phi(cfg)

print("Zeckendorf representations:")
for N in (4, 13, 100, 2024):
    z = zeckendorf(N)
    terms = " + ".join(f"F_{k}" for k in z.indices)
    values = " + ".join(str(fib(k)) for k in z.indices)
    print(f"  {N:>5} = {terms} = {values}")

print("\nBlock shifts for N = 100 = F_4 + F_6 + F_11:")
z = zeckendorf(100)
sc = shift_coefficients(z, cfg)
for nj, e, p in zip(z.indices, sc.eps, sc.p):
    print(f"  block n={nj:<2} (F_n = {fib(nj):>2}): eps = {float(e):+.12f}   p = {float(p):+.12f}")
print("  (p always lies in [-phi^2, phi] =",
      f"[{-float(phi)**2:.6f}, {float(phi):.6f}]; the last block is unshifted)")

print("\nBlockwise evaluation multiplies the shifted block products:")
for N in (4, 100, 1000, 46368):
    bw = blockwise_eval(N, cfg)
    direct = eval_direct(phi, N, cfg)
    rel = abs(float(bw.value / direct.value) - 1)
    print(f"  N = {N:>6}: blockwise = {float(bw.value):.15f}   "
          f"direct = {float(direct.value):.15f}   rel diff = {rel:.2e}")

print("\nWhy it works: k_j*phi differs from eps_j by an exact integer, so each")
print("|2 sin(pi(r phi + k_j phi))| factor equals |2 sin(pi(r phi + eps_j))|.")
