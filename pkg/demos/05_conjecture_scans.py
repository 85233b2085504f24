#!/usr/bin/env python3
"""Desk-scale conjecture experiments.

Reruns the numerical experiments at a size that finishes in seconds: the
block values P_{F_n}(phi) approaching 2.407..., the envelope of local
minima/maxima between consecutive Fibonacci indices, the global-minimum
scan (min is P_1), the threshold behaviour of shifted blocks, and the
contrast case of an alpha with one huge partial quotient, where the
product really does dip toward zero."""

from sudler import (PrecisionConfig, conjecture_envelope, const_phi,
                    limit_estimate, lubinsky_contrast, scan_report, threshold_scan)

cfg = PrecisionConfig(bits=128)
phi = const_phi(cfg)

print("Block values P_{F_n}(phi) converge fast (to 2.407...):")
rows = limit_estimate(22, cfg)
for r in rows[-6:]:
    print(f"  n = {r.n:>2}, F_n = {r.F_n:>6}: P = {float(r.value):.12f}  |diff| = {float(r.diff):.2e}")

print("\nEnvelope: on [F_(n-1), F_n - 1] the min sits at the left end and the max")
print("at the right end (re-run exhaustively):")
for r in conjecture_envelope(18, cfg):
    if r.n >= 13:
        print(f"  n = {r.n:>2}: N in [{r.lo:>4}, {r.hi:>4}]  argmin = {r.argmin:>4}  "
              f"argmax = {r.argmax:>4}  holds = {r.holds}")

print("\nMinimum scan to 10^5 (double-precision path, extrema re-checked at 128 bits):")
rep = scan_report(phi, 1, 100_000, cfg, fast=True, window=(10_000, 100_000))
print(f"  min at N = {rep.min_N}: P = {float(rep.min_value.value):.15f}")
print(f"  min over [1e4, 1e5] at N = {rep.window_min_N}: "
      f"P = {float(rep.window_min_value.value):.12f}")
print(f"  growth exponents: C1_hat = {rep.growth.C1_hat:.4f}, C2_hat = {rep.growth.C2_hat:.4f}")

print("\nShifted blocks never dip below 1 in these samples (threshold report):")
tr = threshold_scan(16, 200, cfg, seed=1)
print(f"  n_star = {tr.n_star}, J_hat = {tr.J_hat}")
print(f"  K1_hat = {tr.K1_hat:.4f}, K2_hat = {tr.K2_hat:.4f} "
      f"(raw sampled block range [{tr.block_min.block:.4f}, {tr.block_max.block:.4f}])")
print(f"  min Abar*Cbar/(A*C) over n >= 10: {tr.min_ratio_ge10.ratio:.4f} (>= 5/12 = {5 / 12:.4f})")

print("\nContrast: one huge partial quotient sends the product toward zero")
print("(the regime where the liminf really vanishes):")
for prefix in ([1, 1, 1, 1, 1, 1], [1, 500, 1], [2, 2, 2, 2, 2, 2, 2, 2]):
    rep = lubinsky_contrast(prefix, cfg, limit=600)
    tag = str(prefix if len(prefix) < 8 else prefix[:3] + ["..."])
    print(f"  cf prefix {tag:>22}: min P = {float(rep.min_record.P):.3e} "
          f"at N = {rep.min_record.N}")
