"""Arbitrary-precision kernel on top of MPFR/MPC (via gmpy2).

Real values are ``gmpy2.mpfr`` and complex values ``gmpy2.mpc``; precision is
always explicit.  Every arithmetic operation must run inside :func:`working`,
because gmpy2 rounds results to the *context* precision, not the operands'.
"""

from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import DomainError, NonFiniteError
from .literals import parse_complex

BigReal = mpfr
BigComplex = mpc
Number = Union[int, float, str, Fraction, mpfr, mpc, complex]

DEFAULT_BITS = 192
MIN_BITS = 64
LOG10_2 = math.log10(2)


@dataclass(frozen=True, order=True)
class Precision:
    """Binary significand width used for a computation."""

    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < MIN_BITS:
            raise ValueError(f"precision must be an integer >= {MIN_BITS} bits, got {self.bits!r}")

    @property
    def digits(self) -> int:
        """Decimal digits the significand can hold."""
        return int(self.bits * LOG10_2)

    def __add__(self, extra: int) -> "Precision":
        return Precision(self.bits + int(extra))

    @classmethod
    def coerce(cls, prec: "Precision | int | None") -> "Precision":
        if prec is None:
            return cls()
        if isinstance(prec, Precision):
            return prec
        return cls(int(prec))


_TRAPS = (
    gmpy2.InvalidOperationError,
    gmpy2.OverflowResultError,
    gmpy2.DivisionByZeroError,
)


@contextmanager
def working(prec: Precision | int) -> Iterator[Precision]:
    """Run a block at ``prec`` bits with NaN, overflow and 1/0 trapped.

    gmpy2 trap exceptions are re-raised as :class:`NonFiniteError`.
    """
    prec = Precision.coerce(prec)
    ctx = gmpy2.context(
        gmpy2.get_context(),
        precision=prec.bits,
        real_prec=prec.bits,
        imag_prec=prec.bits,
        trap_invalid=True,
        trap_overflow=True,
        trap_divzero=True,
        trap_underflow=False,
    )
    try:
        with ctx:
            yield prec
    except _TRAPS as exc:
        raise NonFiniteError(f"non-finite intermediate at {prec.bits} bits: {exc}") from exc


def real(x: Number, prec: Precision | int | None = None) -> mpfr:
    """Convert ``x`` to an mpfr rounded to ``prec`` (context precision if None)."""
    bits = 0 if prec is None else Precision.coerce(prec).bits
    if isinstance(x, mpc):
        if x.imag != 0:
            raise DomainError(f"expected a real value, got {x}")
        x = x.real
    if isinstance(x, Fraction):
        x = gmpy2.mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        x = x.strip()
    return mpfr(x, bits) if bits else mpfr(x)


def cplx(x: Number, prec: Precision | int | None = None) -> mpc:
    """Convert ``x`` to an mpc rounded to ``prec`` (context precision if None)."""
    bits = 0 if prec is None else Precision.coerce(prec).bits
    if isinstance(x, mpc):
        return mpc(x, bits) if bits else +x
    if isinstance(x, complex):
        re, im = real(x.real, prec), real(x.imag, prec)
    elif isinstance(x, tuple):
        re, im = real(x[0], prec), real(x[1], prec)
    elif isinstance(x, str):
        a, b = parse_complex(x)
        re, im = real(a, prec), real(b, prec)
    else:
        re, im = real(x, prec), real(0, prec)
    return mpc(re, im, bits) if bits else mpc(re, im)


def rounded(x, prec: Precision | int):
    """Round an mpfr or mpc to ``prec`` bits."""
    bits = Precision.coerce(prec).bits
    return mpc(x, bits) if isinstance(x, mpc) else mpfr(x, bits)


def is_finite(x) -> bool:
    if isinstance(x, mpc):
        return gmpy2.is_finite(x.real) and gmpy2.is_finite(x.imag)
    return gmpy2.is_finite(x)


def require_finite(x, what: str = "value"):
    if not is_finite(x):
        raise NonFiniteError(f"{what} is not finite: {x}")
    return x


def log2_abs(x) -> float:
    """log2|x| as a float (``-inf`` for zero); safe for huge exponents."""
    a = abs(x)
    if a == 0:
        return float("-inf")
    e, m = gmpy2.frexp(mpfr(a, 64))
    return e + math.log2(float(m))


def agreement_bits(a, b) -> float:
    """-log2(|a-b|/|b|), the number of leading bits ``a`` and ``b`` share."""
    with working(max(_bits_of(a), _bits_of(b)) + 16):
        diff = abs(a - b)
        if diff == 0:
            return float("inf")
        return log2_abs(b) - log2_abs(diff)


def _bits_of(x) -> int:
    p = getattr(x, "precision", MIN_BITS)
    if isinstance(p, tuple):
        p = max(p)
    return max(int(p), MIN_BITS)


# ---------------------------------------------------------------- constants

@lru_cache(maxsize=64)
def constant_pi(prec: Precision | int = DEFAULT_BITS) -> mpfr:
    bits = Precision.coerce(prec).bits
    with working(bits + 8):
        return mpfr(gmpy2.const_pi(bits + 8), bits)


@lru_cache(maxsize=64)
def constant_ln2(prec: Precision | int = DEFAULT_BITS) -> mpfr:
    bits = Precision.coerce(prec).bits
    with working(bits + 8):
        return mpfr(gmpy2.const_log2(bits + 8), bits)


# ------------------------------------------------------------ complex power

def complex_power(base: Number, exponent: Number, prec: Precision | int = DEFAULT_BITS) -> mpc:
    """``base ** exponent`` for real ``base > 0`` and complex ``exponent``.

    Evaluated as exp(exponent * ln base); the product is formed with enough
    extra bits that the phase t*ln(base) keeps full relative accuracy.
    """
    prec = Precision.coerce(prec)
    with working(prec.bits + 16):
        x = base if isinstance(base, mpfr) else real(base)
        if not x > 0:
            raise DomainError(f"complex_power needs a positive base, got {base}")
        s = exponent if isinstance(exponent, mpc) else cplx(exponent)
        if s == 0:
            return mpc(1, 0, prec.bits)
        if x == 1:
            return mpc(1, 0, prec.bits)
    # phase magnitude |s|*|ln x| can reach ~2^12 for the tails used here
    lnx_est = abs(log2_abs(x)) * math.log(2)
    mag = (abs(float(s.real)) + abs(float(s.imag))) * max(lnx_est, 1.0)
    guard = 16 + max(0, math.ceil(math.log2(1.0 + mag)))
    with working(prec.bits + guard):
        lnx = gmpy2.log(x)
        w = gmpy2.exp(mpc(s) * lnx)
        require_finite(w, "complex power")
    return mpc(w, prec.bits)


# -------------------------------------------------------- Bernoulli numbers

_bern_lock = threading.Lock()
_bern_cache: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
BERNOULLI_LIMIT = 10_000


def _tangent_numbers(k_max: int) -> list[int]:
    # Brent & Harvey style in-place recurrence; T[k] is the k-th tangent number.
    t = [0] * (k_max + 1)
    if k_max >= 1:
        t[1] = 1
    for k in range(2, k_max + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, k_max + 1):
        for j in range(k, k_max + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def bernoulli_numbers(count: int) -> list[Fraction]:
    """Exact B_0 .. B_count with B_1 = -1/2.

    Odd-index entries beyond B_1 are zero.  The table is cached process-wide;
    concurrent first calls compute the same table and the longest one wins.
    """
    if not isinstance(count, int) or count < 0:
        raise ValueError(f"count must be a non-negative integer, got {count!r}")
    if count > BERNOULLI_LIMIT:
        raise ValueError(f"count must be <= {BERNOULLI_LIMIT}, got {count}")
    global _bern_cache
    cache = _bern_cache
    if len(cache) > count:
        return cache[: count + 1]
    k_max = count // 2
    tan = _tangent_numbers(k_max)
    table = [Fraction(1), Fraction(-1, 2)]
    for m in range(2, count + 1):
        if m % 2:
            table.append(Fraction(0))
            continue
        k = m // 2
        four_k = 4**k
        sign = 1 if k % 2 else -1
        table.append(Fraction(sign * 2 * k * tan[k], four_k * (four_k - 1)))
    with _bern_lock:
        if len(table) > len(_bern_cache):
            _bern_cache = table
        return _bern_cache[: count + 1]


def bernoulli(k: int) -> Fraction:
    return bernoulli_numbers(k)[k]


# ---------------------------------------------------------------- formatting

def truncate_digits(x: Number, digits: int) -> str:
    """Sign-prefixed decimal string with exactly ``digits`` digits after the
    point, truncated toward zero (never rounded).

    >>> truncate_digits(mpfr('-0.12345', 64), 3)
    '-0.123'
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    if isinstance(x, mpc):
        raise TypeError("truncate_digits formats one real component at a time")
    if isinstance(x, (mpfr, float)):
        if not (gmpy2.is_finite(x) if isinstance(x, mpfr) else math.isfinite(x)):
            raise NonFiniteError(f"cannot format {x}")
        num, den = (int(v) for v in x.as_integer_ratio())
    else:
        q = Fraction(x) if not isinstance(x, str) else Fraction(x.strip())
        num, den = q.numerator, q.denominator
    sign = "-" if num < 0 else "+"
    scaled = abs(num) * 10**digits // den
    whole, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def scientific(x: Number, sig: int = 5, nearest: bool = False) -> str:
    """Scientific notation with ``sig`` significant digits, e.g. '4.0362e-14'.

    Truncates by default; ``nearest=True`` rounds half away from zero.
    """
    if isinstance(x, mpfr):
        num, den = (int(v) for v in x.as_integer_ratio())
    else:
        q = Fraction(x)
        num, den = q.numerator, q.denominator
    if num == 0:
        return "0." + "0" * (sig - 1) + "e+00"
    sign = "-" if num < 0 else ""
    num = abs(num)
    # exponent e with 10^e <= num/den < 10^(e+1)
    e = len(str(num)) - len(str(den))
    if num * 10**max(0, -e) < den * 10**max(0, e):
        e -= 1
    shift = sig - 1 - e
    top, bottom = (num * 10**shift, den) if shift >= 0 else (num, den * 10**(-shift))
    mant, rem = divmod(top, bottom)
    if nearest and 2 * rem >= bottom:
        mant += 1
        if mant == 10**sig:
            mant //= 10
            e += 1
    s = str(mant)
    return f"{sign}{s[0]}.{s[1:]}e{e:+03d}"


def parse_decimal(text: str, prec: Precision | int) -> mpfr:
    """Exact decimal literal rounded once to ``prec``."""
    return real(Fraction(text.strip()), prec)
