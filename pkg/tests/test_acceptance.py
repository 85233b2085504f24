"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
(run with `pytest -s` to see them live).  Tolerances are pinned here and
match the package's guarantees; budgets are comfortable on a 2-core box."""

import math
import multiprocessing
import random

import gmpy2
import pytest
from gmpy2 import mpfr

import oracle
from sudler import (PrecisionConfig, blockwise_eval, conjecture_envelope, const_phi,
                    eval_direct, g_min_on_range, limit_estimate, neg_phi_pow,
                    phi_pow, ratio_A, ratio_C_lower, scan, sine_product_rational,
                    sum_inv_u_sq, threshold_scan, verify_identity, zeckendorf)
from sudler import decomposition

CFG = PrecisionConfig(128)


def report(cid, ok, detail):
    print(f"\nACCEPTANCE {cid}: {'PASS' if ok else 'FAIL'} -- {detail}")
    assert ok, f"{cid}: {detail}"


@pytest.fixture(scope="module")
def phi():
    return const_phi(CFG)


@pytest.fixture(scope="module")
def block_table():
    """P_{F_n}(phi) for n = 2..26 from one streaming pass."""
    return {r.n: r.value for r in limit_estimate(26, CFG)}


@pytest.fixture(scope="module")
def million_scan(phi):
    """One fast-path pass over N = 1..10^6 tracking the global minimum (with
    every running-min candidate re-checked at 128 bits), the [1e5, 1e6]
    window minimum, and the argmax."""
    candidates = []
    wmin_N, wmin_log = None, math.inf
    max_N, max_log = None, -math.inf
    for rec in scan(phi, 1, 10**6, CFG, fast=True):
        if rec.is_running_min:
            candidates.append(rec.N)
        if 10**5 <= rec.N <= 10**6 and rec.logP < wmin_log:
            wmin_N, wmin_log = rec.N, rec.logP
        if rec.logP > max_log:
            max_N, max_log = rec.N, rec.logP
    rechecked = {N: eval_direct(phi, N, CFG) for N in candidates}
    window_min = eval_direct(phi, wmin_N, CFG)
    return {
        "candidates": candidates,
        "rechecked": rechecked,
        "window_min_N": wmin_N,
        "window_min": window_min,
        "max_N": max_N,
    }


def test_c01_decomposition_identity():
    worst_n, worst = None, mpfr(0)
    for n in range(3, 29):
        res = verify_identity(n, 0, CFG)
        if res.residual > worst:
            worst_n, worst = n, res.residual
    report("C1 decomposition identity (n in [3,28], tol 1e-20)",
           worst <= 1e-20, f"max residual {float(worst):.3e} at n={worst_n}")


def test_c02_perturbed_identity():
    rng = random.Random(4001)
    worst_key, worst = None, mpfr(0)
    for n in range(4, 21):
        scale = phi_pow(n + 1, CFG)
        for k in range(50):
            with CFG.context():
                eps = mpfr(rng.uniform(-1, 1)) * scale
            res = verify_identity(n, eps, CFG)
            if res.residual > worst:
                worst_key, worst = (n, k), res.residual
    report("C2 perturbed identity (n in [4,20], 50 eps/n, tol 1e-18)",
           worst <= 1e-18, f"max residual {float(worst):.3e} at (n,k)={worst_key}")


def _c3_worker(arg):
    N, direct_log = arg
    bw = blockwise_eval(N, CFG)
    with gmpy2.context(precision=CFG.bits + 32):
        diff = gmpy2.exp(bw.log_value - mpfr(direct_log))
        return N, abs(float(diff - 1))


def test_c03_blockwise_equals_direct(phi):
    rng = random.Random(4003)
    samples = sorted({rng.randint(1, 10**5) for _ in range(1000)})
    from sudler.product import SudlerStream
    stream = SudlerStream(phi, CFG)
    direct = {N: f"{stream.advance_to(N).log_value:.45g}" for N in samples}
    work = [(N, direct[N]) for N in samples]
    rng.shuffle(work)
    with multiprocessing.Pool(2) as pool:
        results = pool.map(_c3_worker, work, chunksize=16)
    worst_N, worst = None, 0.0
    for N, d in results:
        if d > worst:
            worst_N, worst = N, d
    report(f"C3 blockwise == direct ({len(samples)} random N <= 1e5, tol 1e-15)",
           worst <= 1e-15, f"max relative difference {worst:.3e} at N={worst_N}")


def test_c04_limit_reproduction(block_table):
    v22, v24, v26 = (float(block_table[n]) for n in (22, 24, 26))
    in_band = all(2.40 <= v <= 2.41 for v in (v22, v24, v26))
    contracting = abs(v26 - v24) < abs(v24 - v22)
    report("C4 limit reproduction (P_{F_n} in [2.40, 2.41], contracting)",
           in_band and contracting,
           f"P_F22={v22:.9f} P_F24={v24:.9f} P_F26={v26:.9f}, "
           f"|d26-24|={abs(v26 - v24):.3e} < |d24-22|={abs(v24 - v22):.3e}")


def test_c05_minimum_at_one(million_scan):
    cands = million_scan["candidates"]
    ok = cands == [1]
    value = float(million_scan["rechecked"][1].value)
    ok = ok and 1.86 <= value < 1.87
    report("C5 minimum over N <= 1e6 at N=1 (value in [1.86, 1.87])",
           ok, f"candidates={cands}, re-checked P_1={value:.12f}")


def test_c06_liminf_floor(million_scan):
    v = float(million_scan["window_min"].value)
    report("C6 liminf floor (min over [1e5, 1e6] >= 1.8)",
           v >= 1.8, f"window min {v:.9f} at N={million_scan['window_min_N']}")


def test_c07_series_certificate():
    sb = sum_inv_u_sq(10**6, CFG)
    u = float(sb.total_upper)
    report("C7 series certificate (T=1e6: total_upper < 0.138 and < 1/7)",
           u < 0.138 and u < 1 / 7,
           f"partial={float(sb.partial):.9f}, certified upper={u:.9f}")


def test_c08_g_margin():
    v = float(g_min_on_range(10_000, CFG))
    report("C8 g margin (certified min >= 0.46 > 5/11)",
           v >= 0.46 > 5 / 11, f"certified min {v:.6f}")


def test_c09_ratio_A_error_term(phi):
    rng = random.Random(4009)
    worst_key, worst = None, 0.0
    for n in range(8, 31):
        ps = [float(phi), -float(phi) ** 2] + [rng.uniform(-float(phi) ** 2, float(phi))
                                               for _ in range(30)]
        for p in ps:
            with CFG.context(16):
                eps = -mpfr(p) * neg_phi_pow(n, CFG)
                p_exact = -eps / neg_phi_pow(n, CFG)
            r = ratio_A(n, eps, CFG)
            with CFG.context(16):
                c = float(abs(r - (1 + p_exact)) / phi_pow(2 * n, CFG))
            if c > worst:
                worst_key, worst = (n, p), c
    report("C9 A-ratio error term (n in [8,30]: |ratio-(1+p)|/phi^(2n) <= 10)",
           worst <= 10, f"max constant {worst:.4f} at (n,p)={worst_key}")


def test_c10_ratio_C_bound(phi):
    rng = random.Random(4010)
    # interior random p plus the exact interval endpoints (as mpfr; the
    # nearest double to phi lies just above it)
    lo_f, hi_f = -float(phi) ** 2 * (1 - 1e-12), float(phi) * (1 - 1e-12)
    worst_key, worst_margin = None, math.inf
    for n in range(8, 25):
        c_n = decomposition.C_n(n, CFG)
        with CFG.context():
            endpoints = [phi, -phi * phi, mpfr(0)]
        ps = endpoints + [mpfr(rng.uniform(lo_f, hi_f)) for _ in range(47)]
        for p in ps:
            with CFG.context(16):
                eps = -p * neg_phi_pow(n, CFG)
                p_exact = -eps / neg_phi_pow(n, CFG)
            ratio = float(decomposition.C_bar(n, eps, CFG) / c_n)
            bound = float(ratio_C_lower(p_exact, CFG)) - 10 * float(phi) ** (n / 5)
            margin = ratio - bound
            if margin < worst_margin:
                worst_key, worst_margin = (n, float(p)), margin
    report("C10 C-ratio lower bound (n in [8,24], 50 eps/n, slack 10 phi^(n/5))",
           worst_margin >= 0, f"min margin {worst_margin:.6f} at (n,p)={worst_key}")


def test_c11_threshold_scan():
    reports = {s: threshold_scan(24, 1000, CFG, seed=s) for s in (101, 202, 303)}
    ok = True
    details = []
    n_stars = {rep.n_star for rep in reports.values()}
    ok &= len(n_stars) == 1
    for s, rep in reports.items():
        ok &= 0 < rep.K1_hat <= 1 <= rep.K2_hat
        ok &= rep.min_ratio_ge10 is not None and rep.min_ratio_ge10.ratio >= 5 / 12
        details.append(f"seed {s}: n_star={rep.n_star} K1={rep.K1_hat:.4f} "
                       f"K2={rep.K2_hat:.4f} raw_min={rep.block_min.block:.4f} "
                       f"min_ratio={rep.min_ratio_ge10.ratio:.4f}")
    report("C11 block bounds (K1<=1<=K2, stable n_star over 3 seeds, ratio >= 5/12)",
           ok, "; ".join(details))


def test_c12_envelope_conjecture():
    rows = conjecture_envelope(24, CFG)
    bad = [r.n for r in rows if not r.holds]
    report("C12 envelope conjecture (exhaustive N <= F_24, n in [3,24])",
           not bad, "holds everywhere" if not bad else f"fails at n={bad}")


def test_c13_zeckendorf_oracle():
    table = oracle.zeckendorf_by_enumeration(10**4)
    bad = [N for N in range(1, 10**4 + 1) if zeckendorf(N).indices != table[N]]
    report("C13 Zeckendorf greedy == exhaustive search (N <= 1e4)",
           not bad, f"all {10**4} representations match" if not bad
           else f"{len(bad)} mismatches, first at {bad[0]}")


def test_c14_rational_product_formula():
    worst_pq, worst = None, 0.0
    for q in range(1, 51):
        for p in range(1, q + 1):
            if math.gcd(p, q) != 1 or (q > 1 and p >= q):
                continue
            v = sine_product_rational(p, q, CFG)
            with CFG.context():
                rel = abs(float((v - q) / q))
            if rel > worst:
                worst_pq, worst = (p, q), rel
    report("C14 rational product formula (all coprime p < q <= 50, tol 1e-25)",
           worst <= 1e-25, f"max relative error {worst:.3e} at (p,q)={worst_pq}")
