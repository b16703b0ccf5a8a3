"""Tail digit blocks and relative-error tables at a fixed s.

These are the computations behind the ``digits`` and ``table1`` commands,
kept here so scripts and tests can call them without going through argparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpc, mpfr

from .eta import _tail_index, error_term, tail_approx, tail_remainder
from .limits import DecayFit, decay_fit
from .mpcore import DEFAULT_BITS, Precision, cplx, truncate_digits, working

DEFAULT_S = "0.1234+56.789i"
DEFAULT_POINTS = (10**8, 10**10, 10**12, 10**14)
BLOCK_DIGITS = 28


@dataclass(frozen=True)
class DigitBlock:
    """Truncated components of R_n and T_n and how many leading digits agree."""

    n: int
    r_re: str
    r_im: str
    t_re: str
    t_im: str
    agree_re: int
    agree_im: int


@dataclass(frozen=True)
class ErrorRow:
    n: int
    eps_r: Fraction | mpfr
    eps_i: Fraction | mpfr


def agreement_length(a: str, b: str) -> int:
    """Number of leading digits after the point shared by two sign-prefixed strings."""
    if a[0] != b[0]:
        return 0
    fa, fb = a.split(".", 1)[1], b.split(".", 1)[1]
    if a.split(".", 1)[0] != b.split(".", 1)[0]:
        return 0
    k = 0
    for x, y in zip(fa, fb):
        if x != y:
            break
        k += 1
    return k


def round_digits(x: mpfr, digits: int) -> Fraction:
    """Nearest multiple of 10^-digits (ties away from zero)."""
    num, den = (int(v) for v in x.as_integer_ratio())
    scale = 10**digits
    q, r = divmod(abs(num) * scale, den)
    if 2 * r >= den:
        q += 1
    return Fraction(-q if num < 0 else q, scale)


def _tail_pair(s: mpc, n: int, prec: Precision) -> tuple[mpc, mpc]:
    return tail_remainder(s, n, prec).value, tail_approx(s, n, prec)


def digit_blocks(
    s=DEFAULT_S,
    points: Sequence[int] = DEFAULT_POINTS,
    prec: Precision | int = DEFAULT_BITS,
    digits: int = BLOCK_DIGITS,
) -> list[DigitBlock]:
    prec = Precision.coerce(prec)
    with working(prec.bits + 32):
        s = s if isinstance(s, mpc) else cplx(s)
    blocks = []
    for n in points:
        n = _tail_index(n)
        r, t = _tail_pair(s, n, prec)
        parts = [truncate_digits(v, digits) for v in (r.real, r.imag, t.real, t.imag)]
        blocks.append(
            DigitBlock(n, *parts, agreement_length(parts[0], parts[2]), agreement_length(parts[1], parts[3]))
        )
    return blocks


def relative_errors(
    s=DEFAULT_S,
    points: Sequence[int] = DEFAULT_POINTS,
    prec: Precision | int = DEFAULT_BITS,
    source_digits: int | None = None,
) -> list[ErrorRow]:
    """eps_r = |Re(R-T)/Re R| and eps_i likewise, per n.

    With ``source_digits`` the errors are formed from R_n and T_n first
    rounded to that many decimals, the way a table built from printed values
    would be; otherwise from full-precision values.
    """
    prec = Precision.coerce(prec)
    with working(prec.bits + 32):
        s = s if isinstance(s, mpc) else cplx(s)
    rows = []
    for n in points:
        n = _tail_index(n)
        if source_digits is None:
            rep = error_term(s, n, prec)
            if rep.undefined & {"eps_r", "eps_i"}:
                raise ArithmeticError(f"relative error undefined at n = {n}: {sorted(rep.undefined)}")
            rows.append(ErrorRow(n, rep.eps_r, rep.eps_i))
            continue
        r, t = _tail_pair(s, n, prec)
        rr, ri, tr, ti = (round_digits(v, source_digits) for v in (r.real, r.imag, t.real, t.imag))
        if rr == 0 or ri == 0:
            raise ArithmeticError(f"rounded tail component is zero at n = {n}")
        rows.append(ErrorRow(n, abs((rr - tr) / rr), abs((ri - ti) / ri)))
    return rows


def error_decay(rows: Sequence[ErrorRow]) -> tuple[DecayFit, DecayFit]:
    """Log-log slopes of eps_r and eps_i against n."""
    return decay_fit([(r.n, r.eps_r) for r in rows]), decay_fit([(r.n, r.eps_i) for r in rows])
