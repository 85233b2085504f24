"""Sine products P_N(alpha) = prod_{r<=N} |2 sin(pi r alpha)| along
irrational rotations: configurable-precision evaluation, the golden-ratio
Zeckendorf block machinery, and a desk-scale verification harness."""

from .errors import (IntegerArgument, NonPositiveFactor, NotCoprime, OutOfRange,
                     PrecisionExhausted, SudlerError, SumExceedsOne, TailTooLarge,
                     ZeroFactor)
from .scalar import (DEFAULT_CONFIG, FAST_CONFIG, PrecisionConfig, const_phi,
                     const_sqrt5, log_abs_two_sin_pi, two_sin_pi)
from .numtheory import (CFExpansion, ShiftCoefficients, Zeckendorf, cf_expand,
                        fib, neg_phi_pow, phi_pow, shift_coefficients,
                        value_from_cf, zeckendorf)
from .product import SudlerStream, SudlerValue, eval_direct, eval_shifted
from .decomposition import (A_bar, A_n, B_n, C_bar, C_n, DecompositionResult,
                            s_nt, sine_product_rational, v_n, verify_identity)
from .asymptotics import (BlockLimitRow, PerturbedProductBound, SeriesBound, g,
                          g_min_on_range, limit_estimate, perturbed_c_infinity,
                          prod_bound_check, ratio_A, ratio_A_model, ratio_C_lower,
                          sum_inv_u_sq, u_t)
from .harness import (EnvelopeRow, GrowthFit, LubinskyReport, ScanRecord,
                      ScanReport, ThresholdReport, ThresholdSample, blockwise_eval,
                      conjecture_envelope, growth_fit, lubinsky_contrast, scan,
                      scan_report, threshold_scan, write_csv)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
