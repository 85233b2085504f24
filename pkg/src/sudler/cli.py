"""Command-line surface: evaluation, decomposition checks, scans, and the
verification suites.

Exit codes: 0 success, 1 a verification failed (or a degenerate input such
as a rational alpha), 2 usage error.  Identical command line + seed gives
byte-identical output.
"""

from __future__ import annotations

import argparse
import math
import random
import sys

import gmpy2

from . import asymptotics, decomposition, harness
from .errors import SudlerError, ZeroFactor
from .numtheory import phi_pow, value_from_cf, zeckendorf
from .product import eval_direct, eval_shifted
from .scalar import PrecisionConfig, const_phi

DEFAULT_SEED = 1729


def _digits(cfg: PrecisionConfig) -> int:
    if cfg.bits <= 53:
        return 17
    if cfg.bits >= 128:
        return 36
    return max(17, int(cfg.bits * 0.30103))


def _fmt(x, cfg: PrecisionConfig) -> str:
    return f"{x:.{_digits(cfg)}g}"


def parse_alpha(spec: str, cfg: PrecisionConfig):
    """`golden`, `dec:<decimal>`, or `cf:<comma list>` -> value in (0,1)."""
    if spec == "golden":
        return const_phi(cfg)
    if spec.startswith("dec:"):
        v = cfg.real(spec[4:])
        if not 0 < v < 1:
            raise ValueError("alpha must be in (0, 1)")
        return v
    if spec.startswith("cf:"):
        prefix = [int(a) for a in spec[3:].split(",") if a.strip()]
        if not prefix:
            raise ValueError("empty cf prefix")
        return value_from_cf(prefix, cfg)
    raise ValueError(
        f"alpha spec {spec!r} not understood (golden | dec:<decimal> | cf:<list>)")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prec", type=int, default=128, metavar="BITS",
                   help="significand precision in bits (default 128)")
    p.add_argument("--alpha", default="golden", metavar="SPEC",
                   help="golden | dec:<decimal> | cf:<comma list> (default golden)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"seed for sampled suites (default {DEFAULT_SEED})")
    p.add_argument("--out", default=None, metavar="PATH",
                   help="write machine-readable CSV here")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sudler",
                                 description="Sine products along irrational rotations: "
                                             "evaluation, decompositions, scans, verification")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate P_N(alpha) or the shifted P_N(alpha, eps)")
    p.add_argument("--n", type=int, required=True, metavar="N")
    p.add_argument("--eps", default=None, metavar="E", help="shift (decimal)")
    _add_common(p)

    p = sub.add_parser("zeckendorf", help="Zeckendorf representation of N")
    p.add_argument("N", type=int)
    _add_common(p)

    p = sub.add_parser("decompose", help="three-factor split of a block product")
    p.add_argument("--index", type=int, required=True, metavar="n")
    p.add_argument("--eps", default=None, metavar="E")
    _add_common(p)

    p = sub.add_parser("limit", help="table of block values P_{F_n}(phi)")
    p.add_argument("--max-index", type=int, default=24, metavar="n")
    _add_common(p)

    p = sub.add_parser("scan", help="scan P_N over a range of N")
    p.add_argument("--from", dest="start", type=int, default=1, metavar="A")
    p.add_argument("--to", dest="stop", type=int, required=True, metavar="B")
    p.add_argument("--track-min", action="store_true",
                   help="report the minimum with a full-precision re-check")
    p.add_argument("--fast", action="store_true",
                   help="force the 53-bit vectorized path")
    _add_common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True,
                   choices=["decomposition", "asymptotics", "conjectures", "thresholds", "all"])
    p.add_argument("--max-index", type=int, default=None, metavar="n")
    p.add_argument("--samples", type=int, default=100)
    _add_common(p)
    return ap


def cmd_eval(args, cfg: PrecisionConfig) -> int:
    alpha = parse_alpha(args.alpha, cfg)
    if args.eps is None:
        v = eval_direct(alpha, args.n, cfg)
    else:
        v = eval_shifted(alpha, args.n, cfg.real(args.eps), cfg)
    print(f"N={v.n_terms} P={_fmt(v.value, cfg)} logP={_fmt(v.log_value, cfg)} "
          f"err_bound={v.err_bound:.3g}")
    return 0


def cmd_zeckendorf(args, cfg: PrecisionConfig) -> int:
    z = zeckendorf(args.N)
    terms = " + ".join(f"F_{n}" for n in z.indices)
    print(f"{args.N} = {terms}")
    return 0


def cmd_decompose(args, cfg: PrecisionConfig) -> int:
    eps = cfg.real(args.eps) if args.eps is not None else 0
    res = decomposition.verify_identity(args.index, eps, cfg)
    print(f"n={res.n} eps={_fmt(res.eps, cfg)}")
    print(f"A={_fmt(res.A, cfg)}")
    print(f"B={_fmt(res.B, cfg)}")
    print(f"C={_fmt(res.C, cfg)}")
    print(f"A*B*C={_fmt(res.recombined, cfg)}")
    print(f"direct={_fmt(res.direct, cfg)}")
    print(f"residual={res.residual:.3g}")
    return 0


def cmd_limit(args, cfg: PrecisionConfig) -> int:
    rows = asymptotics.limit_estimate(args.max_index, cfg)
    out = None
    if args.out:
        out = open(args.out, "w")
        out.write("n,F_n,P,diff\n")
    for row in rows:
        print(f"n={row.n:3d} F_n={row.F_n:9d} P={_fmt(row.value, cfg)} "
              f"diff={row.diff:.3g}")
        if out:
            out.write(f"{row.n},{row.F_n},{_fmt(row.value, cfg)},{row.diff:.6g}\n")
    if out:
        out.close()
    last = rows[-1]
    print(f"last value {_fmt(last.value, cfg)} at n={last.n}")
    return 0


def cmd_scan(args, cfg: PrecisionConfig) -> int:
    alpha = parse_alpha(args.alpha, cfg)
    fast = True if args.fast else None
    if args.out:
        with open(args.out, "w") as fh:
            n = harness.write_csv(harness.scan(alpha, args.start, args.stop, cfg, fast=fast), fh)
        print(f"wrote {n} records to {args.out}")
    if args.track_min or not args.out:
        rep = harness.scan_report(alpha, args.start, args.stop, cfg, fast=fast)
        print(f"scanned N={rep.start}..{rep.stop} ({'fast' if rep.fast else f'{cfg.bits}-bit'} path)")
        print(f"min at N={rep.min_N}: P={_fmt(rep.min_value.value, cfg)} "
              f"(re-checked at {cfg.bits} bits)")
        print(f"max at N={rep.max_N}: logP={rep.max_logP:.12g}")
        if rep.growth:
            print(f"growth exponents: C1_hat={rep.growth.C1_hat:.6f} "
                  f"C2_hat={rep.growth.C2_hat:.6f}")
    return 0


def _check(name: str, ok: bool, detail: str, failures: list) -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    if not ok:
        failures.append(name)


def _suite_decomposition(args, cfg, failures):
    n_max = args.max_index or 20
    worst = None
    for n in range(3, n_max + 1):
        res = decomposition.verify_identity(n, 0, cfg)
        if worst is None or res.residual > worst:
            worst = res.residual
    _check("identity residual", worst <= 1e-20,
           f"max over n in [3,{n_max}] is {worst:.3g} (<= 1e-20)", failures)
    rng = random.Random(args.seed)
    worst = None
    for n in range(4, min(n_max, 16) + 1):
        scale = phi_pow(n + 1, cfg)
        for _ in range(5):
            eps = cfg.real(2 * rng.random() - 1) * scale
            res = decomposition.verify_identity(n, eps, cfg)
            if worst is None or res.residual > worst:
                worst = res.residual
    _check("perturbed identity residual", worst <= 1e-18,
           f"max is {worst:.3g} (<= 1e-18)", failures)
    bad = 0
    for q in range(1, 31):
        for p in range(1, q + 1):
            if math.gcd(p, q) != 1:
                continue
            v = decomposition.sine_product_rational(p, q, cfg)
            if abs(v - q) / q > 1e-25:
                bad += 1
    _check("rational product formula", bad == 0,
           f"{bad} failures over q <= 30 (tolerance 1e-25)", failures)


def _suite_asymptotics(args, cfg, failures):
    sb = asymptotics.sum_inv_u_sq(100_000, cfg)
    _check("series certificate", sb.total_upper < 0.138 and sb.total_upper < gmpy2.mpfr(1) / 7,
           f"total_upper={float(sb.total_upper):.6f} (< 0.138 and < 1/7)", failures)
    gm = asymptotics.g_min_on_range(4096, cfg)
    _check("g margin", gm > gmpy2.mpfr(5) / 11,
           f"certified min {float(gm):.6f} > 5/11 = {5 / 11:.6f}", failures)
    phi = const_phi(cfg)
    worst = 0.0
    for n in range(8, 25):
        for p_target in (phi, -phi * phi, phi**3, -phi**3):
            eps = -p_target * (-phi) ** n
            r = asymptotics.ratio_A(n, eps, cfg)
            c = abs(r - (1 + p_target)) / phi ** (2 * n)
            worst = max(worst, float(c))
    _check("A-ratio error constant", worst <= 10,
           f"max |ratio - (1+p)|/phi^(2n) = {worst:.3f} (<= 10)", failures)


def _suite_conjectures(args, cfg, failures):
    n_max = args.max_index or 18
    rows = harness.conjecture_envelope(n_max, cfg)
    bad = [r.n for r in rows if not r.holds]
    _check("envelope conjecture", not bad,
           f"holds for all n in [3,{n_max}]" if not bad else f"fails at n={bad}", failures)
    rep = harness.scan_report(const_phi(cfg), 1, 100_000, cfg)
    v = float(rep.min_value.value)
    _check("minimum at N=1", rep.min_N == 1 and 1.86 <= v < 1.87,
           f"min at N={rep.min_N}, P={v:.6f} (expect N=1, in [1.86, 1.87))", failures)


def _suite_thresholds(args, cfg, failures):
    n_max = min(args.max_index or 20, 26)
    rep = harness.threshold_scan(n_max, args.samples, cfg, seed=args.seed)
    _check("block bounds normalized", 0 < rep.K1_hat <= 1 <= rep.K2_hat,
           f"K1_hat={rep.K1_hat:.6f}, K2_hat={rep.K2_hat:.6f} "
           f"(raw block range [{rep.block_min.block:.6f}, {rep.block_max.block:.6f}])",
           failures)
    _check("threshold index", rep.n_star <= 12,
           f"n_star={rep.n_star}, J_hat={rep.J_hat}", failures)
    if rep.min_ratio_ge10 is not None:
        ok = rep.min_ratio_ge10.ratio >= 5 / 12
        _check("ratio bound (n >= 10)", ok,
               f"min Abar*Cbar/(A*C) = {rep.min_ratio_ge10.ratio:.6f} (>= 5/12 = {5 / 12:.6f})",
               failures)
    rows = asymptotics.limit_estimate(min(n_max, 24), cfg)
    stable_from = None
    vals = {r.n: float(r.value) for r in rows}
    for n in sorted(vals):
        if all(vals[k] >= 2.4 for k in vals if k >= n):
            stable_from = n
            break
    _check("block values settle above 12/5", stable_from is not None,
           f"P_{{F_n}} >= 12/5 for all n >= {stable_from}", failures)


def cmd_verify(args, cfg: PrecisionConfig) -> int:
    failures: list[str] = []
    suites = {
        "decomposition": _suite_decomposition,
        "asymptotics": _suite_asymptotics,
        "conjectures": _suite_conjectures,
        "thresholds": _suite_thresholds,
    }
    names = list(suites) if args.suite == "all" else [args.suite]
    for name in names:
        print(f"-- suite: {name}")
        suites[name](args, cfg, failures)
    if failures:
        print(f"{len(failures)} check(s) failed: {', '.join(failures)}")
        return 1
    print("all checks passed")
    return 0


_COMMANDS = {
    "eval": cmd_eval,
    "zeckendorf": cmd_zeckendorf,
    "decompose": cmd_decompose,
    "limit": cmd_limit,
    "scan": cmd_scan,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except argparse.ArgumentTypeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = PrecisionConfig(bits=args.prec)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, cfg)
    except ZeroFactor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SudlerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
