"""Functional-equation factors for zeta and eta on the critical strip.

    zeta(s)  = chi(s) zeta(1 - s),     chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)
    eta(1-s) = lam(s) eta(s),          lam(s) = (2 - 2^(s+1)) / (2^s - 2) pi^-s cos(pi s/2) Gamma(s)

The eta prefactor is evaluated in the literal form above; it equals
2^(1-s) (1 - 2^s) / (1 - 2^(1-s)), which is how it arises from chi and the
eta/zeta conversion factors.  :func:`lambda_prefactor` exposes both forms.

MPFR exponents are unbounded, so the e^{pi|t|/2} growth of the trig factor
and the matching decay of Gamma are multiplied directly; no log-space detour.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import DomainError, SingularFactorError
from .eta import eta_full, zeta_strip
from .gamma import complex_gamma
from .mpcore import DEFAULT_BITS, Precision, complex_power, constant_pi, cplx, working


@dataclass(frozen=True)
class FactorValue:
    value: mpc
    kind: str  # "zeta-chi" or "eta-lambda"


@dataclass(frozen=True)
class RatioResult:
    value: mpc
    near_zero_flag: bool


class Residuals(NamedTuple):
    zeta_resid: mpfr
    eta_resid: mpfr


def _strip_point(s, prec: Precision, what: str) -> mpc:
    with working(prec.bits + 32):
        s = s if isinstance(s, mpc) else cplx(s)
    if not 0 < s.real < 1:
        raise DomainError(f"{what} is defined here only for 0 < Re(s) < 1, got {s}")
    return s


def _sin_cos_half_pi(s: mpc, bits: int) -> tuple[mpc, mpc]:
    """sin(pi s/2), cos(pi s/2) from e^{+-i pi s/2}."""
    with working(bits + 16):
        z = constant_pi(bits + 24) * s / 2
        ep = gmpy2.exp(mpc(0, 1) * z)
        em = 1 / ep
        return (ep - em) / mpc(0, 2), (ep + em) / 2


def zeta_chi(s, prec: Precision | int = DEFAULT_BITS) -> FactorValue:
    prec = Precision.coerce(prec)
    s = _strip_point(s, prec, "zeta_chi")
    inner = prec + 16
    sin_h, _ = _sin_cos_half_pi(s, inner.bits)
    g = complex_gamma(_one_minus(s, inner), inner)
    with working(inner.bits):
        pi = constant_pi(inner.bits + 8)
        value = complex_power(2, s, inner) * complex_power(pi, s - 1, inner) * sin_h * g
    return FactorValue(mpc(value, prec.bits), "zeta-chi")


def _one_minus(s: mpc, prec: Precision) -> mpc:
    with working(prec.bits + 32):
        return 1 - s


def lambda_prefactor(s, prec: Precision | int = DEFAULT_BITS, literal: bool = True) -> mpc:
    """(2 - 2^(s+1)) / (2^s - 2), or its equivalent 2^(1-s)(1-2^s)/(1-2^(1-s))."""
    prec = Precision.coerce(prec)
    with working(prec.bits + 32):
        s = s if isinstance(s, mpc) else cplx(s)
    inner = prec + 16
    with working(inner.bits):
        two_s = complex_power(2, s, inner)
        if literal:
            den = two_s - 2
            if abs(den) < mpfr(2) ** (-(prec.bits - 8)):
                raise SingularFactorError(f"2^s - 2 vanishes at s = {s}")
            value = (2 - 2 * two_s) / den
        else:
            two_1ms = 2 / two_s
            den = 1 - two_1ms
            if abs(den) < mpfr(2) ** (-(prec.bits - 8)):
                raise SingularFactorError(f"1 - 2^(1-s) vanishes at s = {s}")
            value = two_1ms * (1 - two_s) / den
    return mpc(value, prec.bits)


def eta_lambda(s, prec: Precision | int = DEFAULT_BITS) -> FactorValue:
    prec = Precision.coerce(prec)
    s = _strip_point(s, prec, "eta_lambda")
    inner = prec + 16
    pre = lambda_prefactor(s, inner)
    _, cos_h = _sin_cos_half_pi(s, inner.bits)
    g = complex_gamma(s, inner)
    with working(inner.bits):
        pi = constant_pi(inner.bits + 8)
        value = pre * complex_power(pi, -s, inner) * cos_h * g
    return FactorValue(mpc(value, prec.bits), "eta-lambda")


def near_zero(eta_s: mpc, eta_1ms: mpc, prec: Precision) -> bool:
    """The removable-discontinuity regime: |eta(s)| < 2^(-prec/2) (1 + |eta(1-s)|)."""
    with working(prec.bits):
        return abs(eta_s) < mpfr(2) ** (-prec.bits / 2) * (1 + abs(eta_1ms))


def eta_ratio_direct(s, prec: Precision | int = DEFAULT_BITS) -> RatioResult:
    """eta(1-s)/eta(s) from two independent eta evaluations.

    Near a zero of eta the flag is raised instead of failing; if eta(s) is
    exactly zero the value falls back to the continuous extension lam(s).
    """
    prec = Precision.coerce(prec)
    s = _strip_point(s, prec, "eta_ratio_direct")
    inner = prec + 16
    num = eta_full(_one_minus(s, inner), inner).value
    den = eta_full(s, inner).value
    flag = near_zero(den, num, prec)
    if den == 0:
        return RatioResult(eta_lambda(s, prec).value, True)
    with working(inner.bits):
        value = num / den
    return RatioResult(mpc(value, prec.bits), flag)


def functional_residual(s, prec: Precision | int = DEFAULT_BITS) -> Residuals:
    """|zeta(s) - chi(s) zeta(1-s)| and |eta(1-s) - lam(s) eta(s)|."""
    prec = Precision.coerce(prec)
    s = _strip_point(s, prec, "functional_residual")
    inner = prec + 16
    one_minus = _one_minus(s, inner)
    z_s = zeta_strip(s, inner).value
    z_1ms = zeta_strip(one_minus, inner).value
    e_s = eta_full(s, inner).value
    e_1ms = eta_full(one_minus, inner).value
    chi = zeta_chi(s, inner).value
    lam = eta_lambda(s, inner).value
    with working(inner.bits):
        zr = abs(z_s - chi * z_1ms)
        er = abs(e_1ms - lam * e_s)
    return Residuals(mpfr(zr, prec.bits), mpfr(er, prec.bits))
