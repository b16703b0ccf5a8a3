"""Complex gamma function.

Two independent routes are provided: Spouge's approximation (the default) and
the Stirling series after shifting the argument upward.  They share only the
reflection formula and the Bernoulli table, so their agreement is a useful
accuracy check.
"""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import PoleError
from .mpcore import (
    DEFAULT_BITS,
    Precision,
    bernoulli_numbers,
    constant_pi,
    cplx,
    log2_abs,
    require_finite,
    working,
)

LN_2PI = math.log(2 * math.pi)


def _pole_check(z: mpc) -> None:
    if z.imag == 0 and z.real <= 0 and gmpy2.is_integer(z.real):
        k = int(z.real)
        raise PoleError(f"gamma has a pole at {k}", pole=k)


def _reflect(z: mpc, bits: int, fn) -> mpc:
    # Gamma(z) = pi / (sin(pi z) Gamma(1 - z)); the argument pi*z carries an
    # absolute error proportional to |z|, hence the log2|z| guard
    extra = 16 + max(0, math.ceil(log2_abs(z)))
    with working(bits + extra):
        pi = constant_pi(bits + extra + 8)
        sin_piz = gmpy2.sin(pi * z)
        g = fn(1 - z, bits + extra)
        return pi / (sin_piz * g)


# ------------------------------------------------------------------- Spouge

def spouge_parameter(bits: int) -> int:
    """Smallest integer a whose Spouge error bound a^-1/2 (2 pi)^-(a+1/2) is below 2^-bits."""
    a = max(3, math.ceil(bits * math.log(2) / LN_2PI))
    while -0.5 * math.log2(a) - (a + 0.5) * LN_2PI / math.log(2) > -bits:
        a += 1
    return a


@lru_cache(maxsize=32)
def _spouge_coefficients(a: int, bits: int) -> tuple[mpfr, ...]:
    # coefficients alternate in sign and reach ~e^a, so they are formed with
    # roughly a*log2(e) extra bits before the cancelling sum uses them
    with working(bits):
        c = [gmpy2.sqrt(2 * constant_pi(bits + 8))]
        fact = mpfr(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            ak = mpfr(a - k)
            term = gmpy2.exp(ak) * ak ** (k - mpfr(0.5)) / fact
            c.append(term if k % 2 else -term)
    return tuple(c)


def _spouge_gamma_plus_one(w: mpc, bits: int) -> mpc:
    """Gamma(w + 1) for Re w >= 0."""
    a = spouge_parameter(bits + 4)
    ext = bits + math.ceil(a * 1.5) + 16
    coeffs = _spouge_coefficients(a, ext)
    with working(ext):
        acc = mpc(coeffs[0])
        for k in range(1, a):
            acc += coeffs[k] / (w + k)
        wa = w + a
        lead = gmpy2.exp((w + mpfr(0.5)) * gmpy2.log(wa) - wa)
        return lead * acc


def _gamma_spouge(z: mpc, bits: int) -> mpc:
    if z.real < 0.5:
        return _reflect(z, bits, _gamma_spouge)
    guard = 16 + max(0, math.ceil(log2_abs(z) + math.log2(1 + max(log2_abs(z), 1.0))))
    with working(bits + guard):
        if z.real < 1:
            # shift up so the Spouge argument w = z has Re w >= 0 with margin
            return _spouge_gamma_plus_one(z, bits + guard) / z
        return _spouge_gamma_plus_one(z - 1, bits + guard)


# ----------------------------------------------------------------- Stirling

def _stirling_radius(bits: int) -> float:
    # the smallest Stirling term is about e^{-2 pi |z|}
    return (bits + 16) * math.log(2) / (2 * math.pi) + 2


def _log_gamma_stirling(z: mpc, bits: int) -> mpc:
    """Stirling series for log Gamma(z); requires |z| large (see _stirling_radius)."""
    tol = mpfr(2) ** (-bits - 4)
    with working(bits):
        pi = constant_pi(bits + 8)
        acc = (z - mpfr(0.5)) * gmpy2.log(z) - z + gmpy2.log(2 * pi) / 2
        inv_z2 = 1 / (z * z)
        zpow = 1 / z
        j = 1
        bern = bernoulli_numbers(2)
        prev = None
        while True:
            if 2 * j >= len(bern):
                bern = bernoulli_numbers(min(4 * j + 8, 10_000))
            b = bern[2 * j]
            term = mpfr(gmpy2.mpq(b.numerator, b.denominator * 2 * j * (2 * j - 1))) * zpow
            acc += term
            mag = abs(term)
            if mag < tol:
                break
            if prev is not None and mag > prev:
                raise ArithmeticError("Stirling series started to diverge; shift radius too small")
            prev = mag
            zpow *= inv_z2
            j += 1
        return acc


def _gamma_stirling(z: mpc, bits: int) -> mpc:
    if z.real < 0.5:
        return _reflect(z, bits, _gamma_stirling)
    radius = _stirling_radius(bits)
    shift = 0
    if float(abs(z)) < radius:
        shift = max(0, math.ceil(radius - float(z.real)))
    zs_mag = max(float(abs(z)), radius) + shift
    guard = 16 + math.ceil(math.log2(1 + zs_mag * math.log(1 + zs_mag))) + shift.bit_length()
    with working(bits + guard):
        zs = z + shift
        log_g = _log_gamma_stirling(zs, bits + guard)
        g = gmpy2.exp(log_g)
        if shift:
            prod = mpc(1)
            for k in range(shift):
                prod *= z + k
            g /= prod
        return g


# ------------------------------------------------------------------- public

def complex_gamma(z, prec: Precision | int = DEFAULT_BITS, method: str = "spouge") -> mpc:
    """Gamma(z) for complex z, correct to about ``prec`` bits relative.

    ``method`` is ``"spouge"`` (default) or ``"stirling"``.  Raises
    :class:`PoleError` at non-positive integers.
    """
    prec = Precision.coerce(prec)
    with working(prec.bits + 16):
        zz = cplx(z) if not isinstance(z, mpc) else z
    _pole_check(zz)
    if method == "spouge":
        g = _gamma_spouge(zz, prec.bits + 8)
    elif method == "stirling":
        g = _gamma_stirling(zz, prec.bits + 8)
    else:
        raise ValueError(f"unknown gamma method {method!r}")
    require_finite(g, "gamma")
    return mpc(g, prec.bits)
