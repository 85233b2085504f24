#!/usr/bin/env python3
"""Certified series and product bounds.

The correction products are controlled by the series sum 1/u_t^2 with
u_t = 2(sqrt(5) t - {t phi} + 1/2).  A partial sum plus an integral-
comparison tail gives a self-contained certificate that the total stays
below 1/7, which feeds the closed-form lower bound for the C-factor ratio
and the margin function g."""

from sudler import (PrecisionConfig, const_phi, g, g_min_on_range,
                    perturbed_c_infinity, prod_bound_check, ratio_A, ratio_A_model,
                    ratio_C_lower, sum_inv_u_sq, u_t, neg_phi_pow)

cfg = PrecisionConfig(bits=128)
phi = const_phi(cfg)

print("The series terms grow linearly: u_t ~ 2 sqrt(5) t:")
for t in (1, 2, 3, 10, 100):
    print(f"  u_{t:<3} = {float(u_t(t, cfg)):.12f}")

print("\nCertified enclosure of sum 1/u_t^2 (tail from u_t > 2 sqrt(5) t - 1):")
for T in (10, 1000, 100000):
    sb = sum_inv_u_sq(T, cfg)
    print(f"  T = {T:>6}: partial = {float(sb.partial):.12f}, "
          f"tail <= {float(sb.tail):.3e}, total <= {float(sb.total_upper):.12f}")
print(f"  (1/7 = {1 / 7:.12f}; the certificate clears it with a wide margin)")

print("\nElementary product bracket 1 - A < prod(1 - |a_t|) < 1/(1 - A):")
lo, hi = prod_bound_check([0.1, 0.1], cfg)
print(f"  a = (0.1, 0.1): bracket ({float(lo)}, {float(hi)}), product 0.81 inside")

print("\nCertified lower bounds for the perturbed infinite product at scale w:")
for w in ("0", "1", "2.2360679"):
    pb = perturbed_c_infinity(cfg.real(w), 10_000, cfg)
    print(f"  w = {w:>9}: prod(1 - w^2/u_t^2) >= {float(pb.lower):.9f}")

print("\nThe A-factor ratio follows 1 + p to order phi^(2n):")
for n in (8, 16, 24):
    eps = -neg_phi_pow(n + 2, cfg)
    r = ratio_A(n, eps, cfg)
    with cfg.context():
        p = -eps / neg_phi_pow(n, cfg)
    print(f"  n = {n:>2}: ratio = {float(r):.15f}, model 1+p = {float(ratio_A_model(p, cfg)):.15f}")

print("\nThe C-factor ratio obeys the closed-form floor 1 - (1+2p)^2/7:")
for p in ("0", "0.3", "-0.38"):
    print(f"  p = {p:>5}: floor = {float(ratio_C_lower(cfg.real(p), cfg)):.9f}")

print("\ng(x) = (1+x)(1 - (1+2x)^2/7) stays above 5/11 on [-phi^2, phi]:")
print(f"  g(0)    = {float(g(0, cfg)):.9f}")
print(f"  g(phi)  = {float(g(phi, cfg)):.9f}   <- the minimum, at the right endpoint")
print(f"  certified min over the interval (grid + slab) = {float(g_min_on_range(10000, cfg)):.9f}")
print(f"  5/11 = {5 / 11:.9f}")
