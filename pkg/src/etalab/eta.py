"""Dirichlet eta series: partial sums, full value, tails and their errors.

The tail R_n(s) = sum_{k>n} (-1)^(k-1) k^-s is computed by default from the
Hurwitz-zeta pair identity

    R_n(s) = (-1)^n 2^-s [zeta(s, (n+1)/2) - zeta(s, (n+2)/2)]

which works for n as large as 10^18 but cancels about log2(n) bits, so it is
evaluated with that many guard bits.  Two independent routes (accelerated
alternating sum, and full value minus partial sum) serve as cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import (
    BudgetError,
    ConfigError,
    DomainError,
    ExcludedPointError,
    PoleError,
    PrecisionError,
)
from .gamma import complex_gamma
from .mpcore import (
    DEFAULT_BITS,
    Precision,
    bernoulli_numbers,
    complex_power,
    constant_ln2,
    constant_pi,
    cplx,
    log2_abs,
    require_finite,
    working,
)

TAIL_OFFSET = Fraction(1, 2)
BRACKET_OFFSETS = (Fraction(0), Fraction(1, 2), Fraction(1))

MAX_TAIL_INDEX = 10**18
DIRECT_SUM_BUDGET = 10**7
BRUTE_TAIL_BUDGET = 10**6
TAIL_METHODS = ("hurwitz-pair", "direct-accel", "brute")

# partial sums keep k^-s for k up to this bound to build composites by one multiply
_POWER_STORE_LIMIT = 2_000_000
_LN_ACCEL = math.log(3 + math.sqrt(8))


@dataclass(frozen=True)
class EvalResult:
    value: mpc
    err_bound: mpfr
    method: str

    def __post_init__(self):
        if self.err_bound < 0:
            raise ValueError("err_bound must be non-negative")


@dataclass(frozen=True)
class TailResult:
    n: int
    value: mpc
    err_bound: mpfr
    method: str

    def __post_init__(self):
        if self.err_bound < 0:
            raise ValueError("err_bound must be non-negative")


@dataclass(frozen=True)
class ErrorReport:
    """Error of the closed-form tail approximation at one (s, n).

    ``eps_r``/``eps_i`` are None when the corresponding component of R_n is
    exactly zero; the field name is then listed in ``undefined``.
    """

    n: int
    eps_n: mpc
    eps_r: mpfr | None
    eps_i: mpfr | None
    eps_rel: mpfr | None
    undefined: frozenset = field(default_factory=frozenset)


@dataclass(frozen=True)
class EMConfig:
    """Euler-Maclaurin settings for :func:`hurwitz_zeta`.

    ``shift_target=None`` picks a shift from the precision and |s|.
    """

    shift_target: int | None = None
    max_correction_terms: int = 64
    guard_bits: int = 0

    def __post_init__(self):
        if self.shift_target is not None and self.shift_target < 1:
            raise ConfigError("shift_target must be positive")
        if not 1 <= self.max_correction_terms <= 4000:
            raise ConfigError("max_correction_terms must be in [1, 4000]")
        if self.guard_bits < 0:
            raise ConfigError("guard_bits must be non-negative")

    def shift_for(self, prec: Precision, s: mpc) -> int:
        floor = 2 * prec.digits
        if self.shift_target is not None:
            if self.shift_target < floor:
                raise ConfigError(
                    f"shift_target {self.shift_target} below 2 x {prec.digits} digits"
                )
            return self.shift_target
        # term ratio ~ (|s| + 2j)^2 / (2 pi N)^2 must shrink 2^-bits within J terms
        j_max = self.max_correction_terms
        need = (float(abs(s)) + 2 * j_max) / (2 * math.pi) * 2 ** (prec.bits / (2 * j_max))
        return max(floor, math.ceil(need))


DEFAULT_EM = EMConfig()


# ------------------------------------------------------------------ helpers

def _tail_index(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise TypeError(f"tail index must be an integer, got {type(n).__name__}")
    n = int(n)
    if not 0 <= n <= MAX_TAIL_INDEX:
        raise DomainError(f"tail index must lie in [0, 10^18], got {n}")
    return n


def _as_s(s, bits: int) -> mpc:
    with working(bits):
        return s if isinstance(s, mpc) else cplx(s)


def _check_right_half(s: mpc, what: str) -> None:
    if not s.real > 0:
        raise DomainError(f"{what} needs Re(s) > 0, got Re(s) = {s.real}")


def _check_strip(s: mpc, what: str) -> None:
    if not 0 < s.real < 1:
        raise DomainError(f"{what} needs 0 < Re(s) < 1, got Re(s) = {s.real}")


def _sign(n: int) -> int:
    return -1 if n & 1 else 1


def _phase_guard(s: mpc, x_max: float) -> int:
    """Bits lost forming exp(-s ln x) for x up to x_max."""
    return max(0, math.ceil(math.log2(1 + float(abs(s)) * max(1.0, math.log(max(x_max, 2.0))))))


# ------------------------------------------------------------- partial sums

def _smallest_prime_factors(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


def partial_sums(s, ns: Iterable[int], prec: Precision | int = DEFAULT_BITS) -> dict[int, EvalResult]:
    """eta_n(s) for several n in a single pass over k = 1..max(ns).

    k^-s is completely multiplicative, so only prime powers need exp/log;
    every composite k reuses (k/p)^-s * p^-s for its smallest prime p.
    """
    prec = Precision.coerce(prec)
    targets = sorted({_tail_index(n) for n in ns})
    if not targets:
        return {}
    n_max = targets[-1]
    if n_max > DIRECT_SUM_BUDGET:
        raise BudgetError(
            f"partial sum up to n = {n_max} exceeds the direct budget {DIRECT_SUM_BUDGET}; "
            "use eta_full(s) - tail_remainder(s, n) instead"
        )
    s = _as_s(s, prec.bits + 32)
    w = prec.bits + 16 + max(n_max.bit_length(), _phase_guard(s, n_max))
    out: dict[int, EvalResult] = {}
    with working(w):
        ms = -s
        store = min(n_max // 2, _POWER_STORE_LIMIT)
        spf = _smallest_prime_factors(n_max).tolist() if n_max >= 4 else list(range(n_max + 1))
        powers = [None] * (store + 1)
        if store >= 1:
            powers[1] = mpc(1)
        acc = mpc(0)
        t_iter = iter(targets)
        nxt = next(t_iter)
        while nxt == 0:
            out[0] = mpc(0)
            nxt = next(t_iter, None)
            if nxt is None:
                break
        for k in range(1, n_max + 1):
            if k == 1:
                v = mpc(1)
            else:
                p = spf[k]
                q = k // p
                if p == k or q > store:
                    v = gmpy2.exp(ms * gmpy2.log(mpfr(k)))
                else:
                    v = powers[q] * powers[p]
                if k <= store:
                    powers[k] = v
            if k & 1:
                acc += v
            else:
                acc -= v
            if k == nxt:
                out[k] = acc
                nxt = next(t_iter, None)
                if nxt is None:
                    break
    results = {}
    for n, v in out.items():
        bound = mpfr(max(n, 1), 64) * mpfr(2, 64) ** (-(prec.bits - 4))
        results[n] = EvalResult(mpc(v, prec.bits), bound, "direct")
    return results


def partial_sum(s, n: int, prec: Precision | int = DEFAULT_BITS) -> EvalResult:
    """eta_n(s) = sum_{k=1}^{n} (-1)^(k-1) k^-s by direct summation (n <= 10^7)."""
    n = _tail_index(n)
    return partial_sums(s, [n], prec)[n]


# ------------------------------------------------------------- Hurwitz zeta

@lru_cache(maxsize=64)
def _em_coefficients(j_max: int, bits: int) -> tuple[mpfr, ...]:
    """B_{2j} / (2j)! for j = 1..j_max."""
    bern = bernoulli_numbers(2 * j_max)
    coeffs = []
    fact = 1
    with working(bits):
        for j in range(1, j_max + 1):
            fact *= (2 * j - 1) * (2 * j)
            b = bern[2 * j]
            coeffs.append(mpfr(gmpy2.mpq(b.numerator, b.denominator * fact)))
    return tuple(coeffs)


def _hurwitz_em(s: mpc, a: mpfr, bits: int, shift: int, j_max: int):
    """One Euler-Maclaurin attempt; returns (value, last_term, converged, diverging)."""
    w = bits + 16 + _phase_guard(s, float(a) + shift)
    with working(w):
        m = max(0, math.ceil(shift - float(a)))
        ms = -s
        acc = mpc(0)
        for k in range(m):
            acc += gmpy2.exp(ms * gmpy2.log(a + k))
        big_n = a + m
        ln_n = gmpy2.log(big_n)
        n_ms = gmpy2.exp(ms * ln_n)
        acc += n_ms * big_n / (s - 1) + n_ms / 2
        coeffs = _em_coefficients(j_max, w)
        inv_n2 = 1 / (big_n * big_n)
        poch = s
        npow = n_ms / big_n
        tol = mpfr(2) ** (-bits)
        prev = None
        term = mpc(0)
        for j in range(1, j_max + 1):
            term = coeffs[j - 1] * poch * npow
            acc += term
            mag = abs(term)
            if mag <= tol * abs(acc):
                return acc, mag, True, False
            if prev is not None and mag > prev and j > 2:
                return acc, mag, False, True
            prev = mag
            poch *= (s + (2 * j - 1)) * (s + 2 * j)
            npow *= inv_n2
        return acc, abs(term), False, False


def hurwitz_zeta(
    s, a, prec: Precision | int = DEFAULT_BITS, cfg: EMConfig | None = None
) -> EvalResult:
    """zeta(s, a) = sum_{k>=0} (k + a)^-s by Euler-Maclaurin summation.

    Sums directly up to the shift point N = a + M, then adds the integral,
    the half term and Bernoulli corrections until they drop below 2^-prec
    relative.  If the correction cap binds, the shift is doubled once.
    """
    prec = Precision.coerce(prec)
    cfg = cfg or DEFAULT_EM
    s = _as_s(s, prec.bits + 32)
    with working(prec.bits + 64):
        a = a if isinstance(a, mpfr) else mpfr(Fraction(a) if isinstance(a, str) else a)
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1", pole=1)
    _check_right_half(s, "hurwitz_zeta")
    if not a > 0:
        raise DomainError(f"hurwitz_zeta needs a > 0, got {a}")
    bits = prec.bits + cfg.guard_bits
    shift = cfg.shift_for(prec, s)
    value, last, ok, diverging = _hurwitz_em(s, a, bits, shift, cfg.max_correction_terms)
    if not ok:
        value, last, ok, diverging = _hurwitz_em(s, a, bits, 2 * shift, cfg.max_correction_terms)
        if diverging:
            raise ConfigError(
                f"Euler-Maclaurin corrections grow at shift {2 * shift}; raise shift_target"
            )
    require_finite(value, "hurwitz zeta")
    with working(64):
        err = (mpfr(0) if ok else last) + abs(value) * mpfr(2) ** (-(prec.bits - 2))
    return EvalResult(mpc(value, prec.bits), err, "euler-maclaurin")


# ----------------------------------------------------- alternating sums, eta

def acceleration_terms(bits: int, t=0) -> int:
    """Term count for the Chebyshev-weighted alternating sum.

    The error decays like (3+sqrt 8)^-m times the total variation of the
    moment measure, which for k^-s carries a factor 1/|Gamma(s)| ~ e^{pi|t|/2}.
    """
    budget = bits * math.log(2) + math.pi * abs(float(t)) / 2
    return math.ceil(budget / _LN_ACCEL) + 8


@lru_cache(maxsize=64)
def _acceleration_weights(m: int, bits: int) -> tuple[mpfr, ...]:
    # Cohen, Rodriguez Villegas & Zagier, algorithm 1, weights pre-divided by d
    with working(bits):
        d = (3 + gmpy2.sqrt(mpfr(8))) ** m
        d = (d + 1 / d) / 2
        b = mpfr(-1)
        c = -d
        weights = []
        half = mpfr(0.5)
        for k in range(m):
            c = b - c
            weights.append(c / d)
            b = (k + m) * (k - m) * b / ((k + half) * (k + 1))
    return tuple(weights)


def alternating_sum(s: mpc, start, m: int, bits: int) -> mpc:
    """sum_{j>=0} (-1)^j (start + j)^-s accelerated with ``m`` weighted terms."""
    w = bits + 16 + max(m.bit_length(), _phase_guard(s, float(start) + m))
    weights = _acceleration_weights(m, w)
    with working(w):
        ms = -s
        x0 = start if isinstance(start, mpfr) else mpfr(start)
        acc = mpc(0)
        for j, wt in enumerate(weights):
            acc += wt * gmpy2.exp(ms * gmpy2.log(x0 + j))
        return acc


def _accel_bound(s: mpc, start: int, m: int) -> mpfr:
    """2 Gamma(sigma) / (|Gamma(s)| start^sigma (3+sqrt 8)^m)."""
    with working(64):
        sigma = s.real
        g_sigma = gmpy2.gamma(sigma)
        g_s = abs(complex_gamma(mpc(s, 64), 64))
        return 2 * g_sigma / (g_s * mpfr(start) ** sigma) * gmpy2.exp(mpfr(-_LN_ACCEL * m))


def eta_full(s, prec: Precision | int = DEFAULT_BITS) -> EvalResult:
    """eta(s) for Re(s) > 0 by the accelerated alternating series."""
    prec = Precision.coerce(prec)
    s = _as_s(s, prec.bits + 32)
    _check_right_half(s, "eta_full")
    m = acceleration_terms(prec.bits, s.imag)
    value = alternating_sum(s, 1, m, prec.bits)
    require_finite(value, "eta")
    with working(64):
        err = _accel_bound(s, 1, m) + abs(value) * mpfr(2) ** (-(prec.bits - 2))
    return EvalResult(mpc(value, prec.bits), err, "accel")


def eta_hurwitz(s, prec: Precision | int = DEFAULT_BITS, cfg: EMConfig | None = None) -> EvalResult:
    """eta(s) = 2^-s [zeta(s, 1/2) - zeta(s, 1)]; independent of the acceleration route."""
    prec = Precision.coerce(prec)
    s = _as_s(s, prec.bits + 32)
    _check_right_half(s, "eta_hurwitz")
    inner = prec + 16
    if s == 1:
        raise PoleError("eta_hurwitz cannot evaluate the s = 1 limit; use eta_full", pole=1)
    z_half = hurwitz_zeta(s, Fraction(1, 2), inner, cfg)
    z_one = hurwitz_zeta(s, 1, inner, cfg)
    with working(inner.bits + 16):
        value = complex_power(2, -s, inner) * (z_half.value - z_one.value)
        err = z_half.err_bound + z_one.err_bound
    return EvalResult(mpc(value, prec.bits), err, "hurwitz-pair")


def zeta_strip(s, prec: Precision | int = DEFAULT_BITS) -> EvalResult:
    """zeta(s) = eta(s) / (1 - 2^(1-s)) for Re(s) > 0."""
    prec = Precision.coerce(prec)
    s = _as_s(s, prec.bits + 32)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1", pole=1)
    _check_right_half(s, "zeta_strip")
    inner = prec + 16
    with working(inner.bits):
        divisor = 1 - complex_power(2, 1 - s, inner)
        if abs(divisor) < mpfr(2) ** (-(prec.bits - 8)):
            k = float(s.imag) * math.log(2) / (2 * math.pi)
            raise ExcludedPointError(
                f"1 - 2^(1-s) vanishes at s = 1 + 2 pi i k / ln 2 (k = {round(k)})"
            )
    eta = eta_full(s, inner)
    with working(inner.bits):
        value = eta.value / divisor
        err = eta.err_bound / abs(divisor) + abs(value) * mpfr(2) ** (-(prec.bits - 2))
    return EvalResult(mpc(value, prec.bits), mpfr(err, 64), "eta-conversion")


# ---------------------------------------------------------------- the tail

def tail_guard_bits(n: int) -> int:
    """Extra bits absorbing the ~log2(n)-bit cancellation of the Hurwitz pair."""
    return max(1, n).bit_length() + 32


def tail_remainder(
    s,
    n: int,
    prec: Precision | int = DEFAULT_BITS,
    method: str = "auto",
    cfg: EMConfig | None = None,
) -> TailResult:
    """R_n(s) = sum_{k=n+1}^inf (-1)^(k-1) k^-s.

    ``method``: ``"hurwitz-pair"`` (needs 0 < Re s < 1), ``"direct-accel"``,
    ``"brute"`` (eta minus partial sum, n <= 10^6) or ``"auto"``, which uses
    the Hurwitz pair inside the strip and direct acceleration elsewhere.
    """
    prec = Precision.coerce(prec)
    n = _tail_index(n)
    s = _as_s(s, prec.bits + 32)
    _check_right_half(s, "tail_remainder")
    if method == "auto":
        method = "hurwitz-pair" if 0 < s.real < 1 else "direct-accel"
    if method == "hurwitz-pair":
        return _tail_hurwitz(s, n, prec, cfg or DEFAULT_EM)
    if method == "direct-accel":
        return _tail_accel(s, n, prec)
    if method == "brute":
        if n > BRUTE_TAIL_BUDGET:
            raise BudgetError(f"brute tail limited to n <= {BRUTE_TAIL_BUDGET}, got {n}")
        return _tail_brute(s, n, prec)
    raise ValueError(f"unknown tail method {method!r}; expected one of {TAIL_METHODS}")


def _tail_hurwitz(s: mpc, n: int, prec: Precision, cfg: EMConfig) -> TailResult:
    _check_strip(s, "hurwitz-pair tail")
    guard = max(cfg.guard_bits, tail_guard_bits(n))
    inner = prec + guard
    inner_cfg = replace(cfg, guard_bits=0)
    with working(inner.bits + 8):
        a1 = mpfr(n + 1) / 2
        a2 = mpfr(n + 2) / 2
    z1 = hurwitz_zeta(s, a1, inner, inner_cfg)
    z2 = hurwitz_zeta(s, a2, inner, inner_cfg)
    with working(inner.bits):
        diff = z1.value - z2.value
        scale = max(abs(z1.value), abs(z2.value))
        lost = log2_abs(scale) - log2_abs(diff)
        if diff == 0 or lost > guard - 8:
            raise PrecisionError(
                f"Hurwitz-pair difference cancelled {lost:.0f} bits with only {guard} guard bits; "
                "raise prec or EMConfig.guard_bits"
            )
        value = _sign(n) * complex_power(2, -s, inner) * diff
        err = (z1.err_bound + z2.err_bound) * gmpy2.exp(-s.real * constant_ln2(inner.bits))
        err += abs(value) * mpfr(2) ** (-(prec.bits - 2))
    return TailResult(n, mpc(value, prec.bits), mpfr(err, 64), "hurwitz-pair")


def _tail_accel(s: mpc, n: int, prec: Precision) -> TailResult:
    m = acceleration_terms(prec.bits, s.imag)
    with working(prec.bits + 16):
        start = mpfr(n + 1)
    value = alternating_sum(s, start, m, prec.bits)
    with working(prec.bits + 16):
        value = _sign(n) * value
        err = _accel_bound(s, n + 1, m) + abs(value) * mpfr(2) ** (-(prec.bits - 2))
    return TailResult(n, mpc(value, prec.bits), mpfr(err, 64), "direct-accel")


def _tail_brute(s: mpc, n: int, prec: Precision) -> TailResult:
    inner = prec + tail_guard_bits(n)
    eta = eta_full(s, inner)
    part = partial_sum(s, n, inner) if n else EvalResult(mpc(0), mpfr(0), "direct")
    with working(inner.bits):
        value = eta.value - part.value
        err = eta.err_bound + part.err_bound + abs(value) * mpfr(2) ** (-(prec.bits - 2))
    return TailResult(n, mpc(value, prec.bits), mpfr(err, 64), "brute")


def tail_approx(s, n: int, prec: Precision | int = DEFAULT_BITS, offset=TAIL_OFFSET) -> mpc:
    """Closed-form tail approximation (-1)^n / (2 (n + 1/2)^s).

    ``offset`` may be 0 or 1 to reproduce the bracketing forms
    (-1)^n / (2 n^s) and (-1)^n / (2 (n+1)^s).
    """
    prec = Precision.coerce(prec)
    n = _tail_index(n)
    offset = Fraction(offset)
    if offset not in BRACKET_OFFSETS:
        raise ValueError(f"offset must be one of 0, 1/2, 1; got {offset}")
    s = _as_s(s, prec.bits + 32)
    with working(prec.bits + 16):
        base = mpfr(gmpy2.mpq(n * offset.denominator + offset.numerator, offset.denominator))
        if base == 0:
            raise DomainError("tail_approx with offset 0 is undefined at n = 0")
        value = _sign(n) * complex_power(base, -s, prec + 16) / 2
    return mpc(value, prec.bits)


def error_term(
    s,
    n: int,
    prec: Precision | int = DEFAULT_BITS,
    tail: TailResult | mpc | None = None,
) -> ErrorReport:
    """eps_n = R_n - T_n with its componentwise and complex relative sizes.

    R_n and T_n agree to about 2 log2(n) bits, so both are formed with that
    many extra bits.  Pass ``tail`` to substitute a precomputed R_n.
    """
    prec = Precision.coerce(prec)
    n = _tail_index(n)
    inner = prec + 2 * max(n, 1).bit_length() + 16
    if tail is None:
        r = tail_remainder(s, n, inner).value
    else:
        r = tail.value if isinstance(tail, TailResult) else tail
    t = tail_approx(s, n, inner)
    undefined = set()
    with working(inner.bits):
        eps = r - t
        eps_r = abs(eps.real / r.real) if r.real != 0 else None
        eps_i = abs(eps.imag / r.imag) if r.imag != 0 else None
        eps_rel = abs(eps) / abs(r) if r != 0 else None
    for name, v in (("eps_r", eps_r), ("eps_i", eps_i), ("eps_rel", eps_rel)):
        if v is None:
            undefined.add(name)
    rnd = lambda v: None if v is None else mpfr(v, prec.bits)  # noqa: E731
    return ErrorReport(n, mpc(eps, prec.bits), rnd(eps_r), rnd(eps_i), rnd(eps_rel), frozenset(undefined))
