import random

import gmpy2
import pytest
from gmpy2 import mpfr

import oracle
from sudler import (SudlerStream, ZeroFactor, eval_direct, eval_shifted, fib,
                    neg_phi_pow, two_sin_pi)

# P_N(phi) for N = 1..5, frozen from the mpmath oracle at 60 digits
P_SMALL = {
    1: "1.864064847626455243068063337382209382772",
    2: "2.518315424891512965670582804837206445223",
    3: "2.228562995790001604610148259798464118314",
    4: "4.440059838297929149620376190449152757022",
    5: "2.482026850608459302114554527489020982533",
}
# prod_{r<=3} |2 sin(pi(r phi + 1/4))|, same oracle
P3_SHIFT_QUARTER = "1.034217233501092846088169263065367397068"


def assert_close(value, decimal_string, cfg, rel=None):
    rel = rel if rel is not None else mpfr(2) ** (8 - cfg.bits)
    with cfg.context(16):
        want = mpfr(decimal_string)
        assert abs(value - want) <= abs(want) * rel


class TestEvalDirect:
    def test_small_values(self, cfg, phi):
        for N, want in P_SMALL.items():
            got = eval_direct(phi, N, cfg)
            assert_close(got.value, want, cfg)
            assert got.n_terms == N

    def test_factors_multiply(self, cfg, phi):
        # P_5 equals the product of the five individual factors
        with cfg.context(16):
            prod = mpfr(1)
            for r in range(1, 6):
                prod *= abs(two_sin_pi(r * phi, cfg))
        assert_close(prod, P_SMALL[5], cfg)

    def test_rational_alpha_rejected(self, cfg):
        with pytest.raises(ZeroFactor):
            eval_direct(cfg.real("0.5"), 2, cfg)

    def test_multiplicativity(self, cfg, phi):
        for N in (1, 7, 50, 333):
            a = eval_direct(phi, N, cfg)
            b = eval_direct(phi, N + 1, cfg)
            with cfg.context(16):
                factor = abs(two_sin_pi((N + 1) * phi, cfg))
                lhs = a.log_value + gmpy2.log(factor)
                assert abs(lhs - b.log_value) <= a.err_bound + b.err_bound + mpfr(2) ** -100

    def test_alpha_symmetry(self, cfg, phi):
        with cfg.context():
            mirror = 1 - phi
        for N in (3, 10, 97):
            a = eval_direct(phi, N, cfg)
            b = eval_direct(mirror, N, cfg)
            with cfg.context():
                assert abs(a.log_value - b.log_value) <= a.err_bound + b.err_bound

    def test_against_independent_oracle(self, cfg, phi):
        rng = random.Random(11)
        for _ in range(8):
            N = rng.randint(1, 400)
            got = eval_direct(phi, N, cfg)
            want = oracle.P(N)
            assert abs(float(got.value) / float(want) - 1) < 1e-14


class TestEvalShifted:
    def test_zero_shift_identical_path(self, cfg, phi):
        a = eval_direct(phi, 137, cfg)
        b = eval_shifted(phi, 137, 0, cfg)
        assert a.log_value == b.log_value and a.value == b.value

    def test_quarter_shift_three_factors(self, cfg, phi):
        got = eval_shifted(phi, 3, cfg.real("0.25"), cfg)
        assert_close(got.value, P3_SHIFT_QUARTER, cfg)

    def test_block_factor_of_sum(self, cfg, phi):
        # N = F_6 + F_9: the top slice of the product is the shifted block
        # P_{F_6}(phi, eps) with eps = -(-phi)^9
        with cfg.context():
            eps = -neg_phi_pow(9, cfg)
        block = eval_shifted(phi, fib(6), eps, cfg)
        whole = eval_direct(phi, fib(6) + fib(9), cfg)
        tail = eval_direct(phi, fib(9), cfg)
        with cfg.context(16):
            assert abs(block.log_value + tail.log_value - whole.log_value) \
                <= 2 * (whole.err_bound + block.err_bound + tail.err_bound)
        assert block.value > 0

    def test_shift_periodicity(self, cfg, phi):
        with cfg.context():
            eps = mpfr(3) / 32
        a = eval_shifted(phi, 41, eps, cfg)
        b = eval_shifted(phi, 41, eps + 1, cfg)
        assert a.log_value == b.log_value

    def test_err_bound_linear(self, cfg, phi):
        v = eval_direct(phi, 1000, cfg)
        with cfg.context():
            assert v.err_bound == 1000 * mpfr(2) ** (6 - cfg.bits)
            assert v.err_bound >= 0


class TestStream:
    def test_first_three_yields(self, cfg, phi):
        s = SudlerStream(phi, cfg)
        for N in (1, 2, 3):
            v = s.advance()
            assert_close(v.value, P_SMALL[N], cfg)

    def test_restart_bit_identical(self, cfg, phi):
        a = SudlerStream(phi, cfg).advance_to(500)
        b = SudlerStream(phi, cfg).advance_to(500)
        assert a.log_value == b.log_value and a.value == b.value

    def test_block_value_near_limit(self, cfg, phi):
        v = SudlerStream(phi, cfg).advance_to(fib(24))
        assert 2.40 <= float(v.value) <= 2.41

    def test_matches_eval_direct_bulk(self, cfg, phi):
        # one streaming pass capturing 10^3 random N <= 10^4, then fresh
        # eval_direct at each; identical accumulation => <= 10 ulp apart
        rng = random.Random(99)
        targets = sorted({rng.randint(1, 10_000) for _ in range(1000)})
        s = SudlerStream(phi, cfg)
        captured = {}
        for N in targets:
            captured[N] = s.advance_to(N).log_value
        worst = 0.0
        for N in targets:
            d = eval_direct(phi, N, cfg).log_value
            with cfg.context(16):
                if captured[N] != d:
                    rel = abs(float((captured[N] - d) / d)) * 2**cfg.bits
                    worst = max(worst, rel)
        assert worst <= 10

    def test_value_exp_of_log(self, cfg, phi):
        v = SudlerStream(phi, cfg).advance_to(777)
        with cfg.context():
            assert abs(v.value - gmpy2.exp(v.log_value)) <= 4 * abs(v.value) * mpfr(2) ** -cfg.bits

    def test_cannot_go_backwards(self, cfg, phi):
        s = SudlerStream(phi, cfg)
        s.advance_to(10)
        with pytest.raises(ValueError):
            s.advance_to(5)

    def test_combine_blocks(self, cfg, phi):
        a = eval_direct(phi, 10, cfg)
        b = eval_direct(phi, 20, cfg)
        c = a * b
        assert c.n_terms == 30
        with cfg.context():
            assert c.log_value == a.log_value + b.log_value
            assert c.err_bound == a.err_bound + b.err_bound
