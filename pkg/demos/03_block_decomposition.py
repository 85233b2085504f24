#!/usr/bin/env python3
"""The exact three-factor split of a block product.

P_{F_n}(phi) = A_n * B_n * C_n, where A_n is a scale factor, B_n compares
the block's sine pattern to roots of unity, and C_n is a correction
product over the squared pattern.  The same split holds for shifted blocks
with A and C replaced by their perturbed versions.
"""

from sudler import (A_n, B_n, C_n, PrecisionConfig, fib, phi_pow,
                    sine_product_rational, verify_identity)

cfg = PrecisionConfig(bits=128)

print("The three factors and the recombination residual |ABC/P - 1|:")
print(f"  {'n':>3} {'F_n':>7} {'A_n':>10} {'B_n':>10} {'C_n':>10} {'A*B*C':>14} {'residual':>10}")
for n in (3, 5, 8, 12, 16, 20):
    r = verify_identity(n, 0, cfg)
    print(f"  {n:>3} {fib(n):>7} {float(r.A):>10.6f} {float(r.B):>10.6f} "
          f"{float(r.C):>10.6f} {float(r.recombined):>14.10f} {float(r.residual):>10.2e}")

print("\nA perturbed block keeps B_n and swaps in Abar(eps), Cbar(eps):")
for n in (8, 12, 16):
    eps = phi_pow(n + 2, cfg)
    r = verify_identity(n, eps, cfg)
    print(f"  n = {n:>2}, eps = phi^{n + 2}: P_F{n}(phi, eps) = "
          f"{float(r.direct):.12f}, residual = {float(r.residual):.2e}")

print("\nThe proof leans on the classical rational product formula")
print("prod_{r<q} 2 sin(pi r p / q) = q for coprime p, q:")
for p, q in ((1, 2), (2, 5), (3, 7), (10, 21)):
    v = sine_product_rational(p, q, cfg)
    print(f"  (p, q) = ({p:>2}, {q:>2}): product = {float(v):.15f}")

print("\nThe separate factors converge as n grows (A to 2 pi/sqrt(5) * ")
print("F_n phi^n-ish scale, B and C to constants):")
for n in (10, 20, 28):
    print(f"  n = {n:>2}: A = {float(A_n(n, cfg)):.9f}  B = {float(B_n(n, cfg)):.9f}"
          f"  C = {float(C_n(n, cfg)):.9f}")
