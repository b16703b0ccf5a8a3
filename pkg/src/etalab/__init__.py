"""High-precision Dirichlet eta tails, functional-equation factors and limit probes."""

from .errors import (
    BudgetError,
    ConfigError,
    DomainError,
    EtaLabError,
    ExcludedPointError,
    NoZeroFoundError,
    NonFiniteError,
    ParseError,
    PoleError,
    PrecisionError,
    SingularFactorError,
)
from .eta import (
    EMConfig,
    ErrorReport,
    EvalResult,
    TailResult,
    error_term,
    eta_full,
    eta_hurwitz,
    hurwitz_zeta,
    partial_sum,
    partial_sums,
    tail_approx,
    tail_remainder,
    zeta_strip,
)
from .funceq import (
    eta_lambda,
    eta_ratio_direct,
    functional_residual,
    lambda_prefactor,
    zeta_chi,
)
from .gamma import complex_gamma
from .limits import (
    Schedule,
    decay_fit,
    eps_scaled,
    exchange_report,
    f_sequence,
    find_zeros,
    lemma1_ratios,
    locate_zero,
    uniform_bound_scan,
)
from .mpcore import (
    Precision,
    bernoulli,
    bernoulli_numbers,
    complex_power,
    truncate_digits,
    working,
)

__version__ = "0.1.0"
