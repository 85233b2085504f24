#!/usr/bin/env python3
"""Evaluating the sine product P_N(alpha) = prod_{r<=N} |2 sin(pi r alpha)|.

Shows direct evaluation at configurable precision, the shifted variant,
and the O(1)-per-step streaming evaluator.
"""

from sudler import (PrecisionConfig, SudlerStream, const_phi, eval_direct,
                    eval_shifted, value_from_cf)

cfg = PrecisionConfig(bits=128)
phi = const_phi(cfg)

print("The golden ratio's fractional part, at 128 bits:")
print(f"  phi = {phi:.36g}\n")

print("P_N(phi) for small N (P_1 = 2 sin(pi phi) is the conjectured global minimum):")
for N in (1, 2, 3, 4, 5, 8, 13):
    v = eval_direct(phi, N, cfg)
    print(f"  P_{N:<2} = {v.value:<42.36g} (err bound on log: {v.err_bound:.2g})")

print("\nThe shifted product P_N(phi, eps) multiplies each phase by r*phi + eps:")
for eps in ("0", "0.25", "-0.1"):
    v = eval_shifted(phi, 5, cfg.real(eps), cfg)
    print(f"  eps = {eps:>5}: P_5(phi, eps) = {v.value:.30g}")

print("\nStreaming: each advance() adds one factor in O(1) work.")
stream = SudlerStream(phi, cfg)
for _ in range(5):
    v = stream.advance()
    print(f"  N = {v.n_terms}: logP = {float(v.log_value):+.12f}  P = {float(v.value):.12f}")

print("\nOther irrationals work too; alpha from a continued-fraction prefix")
print("(completed with the all-ones tail, so it stays quadratic irrational):")
alpha = value_from_cf([2, 2, 2, 2], cfg)
print(f"  alpha = [0;2,2,2,2,1,1,...] = {float(alpha):.15f}")
print(f"  P_100(alpha) = {float(eval_direct(alpha, 100, cfg).value):.12f}")

print("\nPrecision is explicit; doubling it changes values only at the old tail:")
for bits in (64, 128, 256):
    c = PrecisionConfig(bits)
    v = eval_direct(const_phi(c), 100, c)
    print(f"  {bits:>3} bits: P_100 = {v.value:.{min(36, bits // 4)}g}")
