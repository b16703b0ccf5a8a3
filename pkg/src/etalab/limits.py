"""Numerical probes for limit statements about the eta tail.

Each "n -> infinity" claim is turned into a deviation sequence along a
schedule of n values; :func:`decay_fit` then measures how fast it shrinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr

from .errors import DomainError, NoZeroFoundError, PrecisionError
from .eta import _tail_index, error_term, eta_full, partial_sums, tail_remainder
from .funceq import eta_lambda
from .mpcore import DEFAULT_BITS, Precision, complex_power, cplx, log2_abs, working

TailFn = Callable[[int], mpc]

ZERO_SCAN_STEP = Fraction(1, 20)
ZERO_ACCEPT = mpfr("1e-20", 128)
ZERO_REJECT = mpfr("1e-6", 128)
MAX_ZERO_BRACKET = 5
MAX_ZERO_RANGE = 100
_SCAN_BITS = 64
_GOLDEN = (math.sqrt(5) - 1) / 2


# ----------------------------------------------------------------- schedule

@dataclass(frozen=True)
class Schedule:
    n_values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(_tail_index(n) for n in self.n_values)
        if len(vals) < 2:
            raise ValueError("a schedule needs at least two n values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError(f"schedule must be strictly increasing: {vals}")
        object.__setattr__(self, "n_values", vals)

    @classmethod
    def geometric(cls, lo: int, hi: int, factor: int = 10) -> "Schedule":
        if factor < 2 or lo < 1 or hi < lo:
            raise ValueError(f"bad geometric schedule {lo}:{hi} x{factor}")
        vals = []
        n = lo
        while n <= hi:
            vals.append(n)
            n *= factor
        return cls(tuple(vals))

    def __iter__(self):
        return iter(self.n_values)

    def __len__(self):
        return len(self.n_values)


DEFAULT_SCHEDULE = Schedule.geometric(10**2, 10**8)
DEFAULT_EXCHANGE_SCHEDULE = Schedule.geometric(10**2, 10**6)
DEFAULT_OFFSETS = (Fraction(0), Fraction(1, 1000), Fraction(1, 100), Fraction(1, 10))


# ------------------------------------------------------------- probe types

@dataclass(frozen=True)
class ProbeRow:
    n: int
    quantity: mpc | None
    deviation: mpfr | None
    flag: str | None = None


@dataclass(frozen=True)
class ProbeSeries:
    name: str
    limit: mpc
    rows: tuple[ProbeRow, ...]
    precision_bits: int = DEFAULT_BITS

    def deviations(self) -> list[mpfr | None]:
        return [r.deviation for r in self.rows]

    def n_values(self) -> list[int]:
        return [r.n for r in self.rows]


class Lemma1Probe(NamedTuple):
    prev: ProbeSeries  # -R_{n-1} / R_n
    next: ProbeSeries  # -R_{n+1} / R_n


def _s(s, prec: Precision) -> mpc:
    with working(prec.bits + 32):
        return s if isinstance(s, mpc) else cplx(s)


def _engine_tail(s: mpc, prec: Precision) -> TailFn:
    cache: dict[int, mpc] = {}

    def tail(n: int) -> mpc:
        if n not in cache:
            cache[n] = tail_remainder(s, n, prec).value
        return cache[n]

    return tail


def _row(n: int, q: mpc, limit, bits: int) -> ProbeRow:
    with working(bits):
        dev = abs(q - limit)
    return ProbeRow(n, q, mpfr(dev, bits))


# ------------------------------------------------------------------ probes

def lemma1_ratios(
    s, sched: Schedule, prec: Precision | int = DEFAULT_BITS, tail: TailFn | None = None
) -> Lemma1Probe:
    """-R_{n-1}/R_n and -R_{n+1}/R_n along ``sched``, with distance from 1."""
    prec = Precision.coerce(prec)
    s = _s(s, prec)
    tail = tail or _engine_tail(s, prec)
    prev_rows, next_rows = [], []
    for n in sched:
        if n < 1:
            raise DomainError("lemma1_ratios needs n >= 1")
        r_prev, r_n, r_next = tail(n - 1), tail(n), tail(n + 1)
        if r_n == 0:
            prev_rows.append(ProbeRow(n, None, None, "tail-vanishes"))
            next_rows.append(ProbeRow(n, None, None, "tail-vanishes"))
            continue
        with working(prec.bits):
            qp = -r_prev / r_n
            qn = -r_next / r_n
        prev_rows.append(_row(n, qp, 1, prec.bits))
        next_rows.append(_row(n, qn, 1, prec.bits))
    one = mpc(1)
    return Lemma1Probe(
        ProbeSeries("-R(n-1)/R(n)", one, tuple(prev_rows), prec.bits),
        ProbeSeries("-R(n+1)/R(n)", one, tuple(next_rows), prec.bits),
    )


def f_sequence(
    s, sched: Schedule, prec: Precision | int = DEFAULT_BITS, tail: TailFn | None = None
) -> ProbeSeries:
    """F_n = (-1)^n (n+1)^-s / R_n, which should approach 2."""
    prec = Precision.coerce(prec)
    s = _s(s, prec)
    tail = tail or _engine_tail(s, prec)
    rows = []
    for n in sched:
        r_n = tail(n)
        if r_n == 0:
            rows.append(ProbeRow(n, None, None, "tail-vanishes"))
            continue
        with working(prec.bits + 16):
            sign = -1 if n & 1 else 1
            f = sign * complex_power(n + 1, -s, prec + 16) / r_n
        rows.append(_row(n, mpc(f, prec.bits), 2, prec.bits))
    return ProbeSeries("F(n)", mpc(2), tuple(rows), prec.bits)


def eps_scaled(
    s, sched: Schedule, prec: Precision | int = DEFAULT_BITS, tail: TailFn | None = None
) -> ProbeSeries:
    """eps_n(s) (n + 1/2)^s, which should approach 0."""
    prec = Precision.coerce(prec)
    s = _s(s, prec)
    rows = []
    for n in sched:
        report = error_term(s, n, prec, tail=tail(n) if tail else None)
        with working(prec.bits + 16):
            base = mpfr(2 * n + 1) / 2
            q = report.eps_n * complex_power(base, s, prec + 16)
        rows.append(_row(n, mpc(q, prec.bits), 0, prec.bits))
    return ProbeSeries("eps(n)*(n+1/2)^s", mpc(0), tuple(rows), prec.bits)


class BoundScan(NamedTuple):
    sup_tail: mpfr
    bound: mpfr
    passed: bool
    t_at_sup: mpfr


def uniform_bound_scan(
    sigma, t_grid: Iterable, n: int, prec: Precision | int = DEFAULT_BITS
) -> BoundScan:
    """sup over the grid of |R_n(sigma + it)| against the bound n^-sigma."""
    prec = Precision.coerce(prec)
    n = _tail_index(n)
    if n < 1:
        raise DomainError("uniform_bound_scan needs n >= 1")
    with working(prec.bits + 32):
        sigma = mpfr(sigma) if not isinstance(sigma, mpfr) else sigma
        grid = [mpfr(t) if not isinstance(t, mpfr) else t for t in t_grid]
    if not 0 < sigma < 1:
        raise DomainError(f"sigma must lie in (0, 1), got {sigma}")
    if not grid:
        raise DomainError("t grid is empty")
    sup, t_sup = mpfr(-1), grid[0]
    for t in grid:
        with working(prec.bits + 32):
            s = mpc(sigma, t)
        r = tail_remainder(s, n, prec).value
        with working(prec.bits):
            mag = abs(r)
        if mag > sup:
            sup, t_sup = mag, t
    with working(prec.bits + 16):
        bound = mpfr(n) ** (-sigma)
    return BoundScan(mpfr(sup, prec.bits), mpfr(bound, prec.bits), bool(sup < bound), t_sup)


# ------------------------------------------------------------ zero locator

@dataclass(frozen=True)
class ZeroResult:
    t0: mpfr
    residual: mpfr
    bracket: tuple[mpfr, mpfr]

    def __post_init__(self):
        lo, hi = self.bracket
        if not lo <= self.t0 <= hi:
            raise ValueError("zero lies outside its bracket")


def _eta_abs_on_line(t: mpfr, prec: Precision) -> mpfr:
    with working(prec.bits + 32):
        s = mpc(mpfr(1) / 2, t)
    v = eta_full(s, prec).value
    with working(prec.bits):
        return abs(v)


def _golden_min(f, lo: mpfr, hi: mpfr, tol: mpfr, bits: int):
    """Golden-section search for the minimum of f on [lo, hi]."""
    with working(bits):
        g = mpfr(_GOLDEN)
        a, b = lo, hi
        c = b - g * (b - a)
        d = a + g * (b - a)
        fc, fd = f(c), f(d)
        while b - a > tol:
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - g * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + g * (b - a)
                fd = f(d)
        return (c, fc) if fc <= fd else (d, fd)


def _scan_grid(lo: mpfr, hi: mpfr, bits: int) -> list[mpfr]:
    with working(bits):
        step = mpfr(gmpy2.mpq(ZERO_SCAN_STEP.numerator, ZERO_SCAN_STEP.denominator))
        steps = int(gmpy2.floor((hi - lo) / step))
        grid = [lo + k * step for k in range(steps + 1)]
        if grid[-1] < hi:
            grid.append(hi)
    return grid


def _refine(lo: mpfr, hi: mpfr, prec: Precision) -> tuple[mpfr, mpfr]:
    # coarse pass at scan precision, then a full-precision pass around it
    scan = Precision(_SCAN_BITS)
    with working(prec.bits + 32):
        coarse_tol = mpfr("1e-9")
    t1, f1 = _golden_min(lambda t: _eta_abs_on_line(t, scan), lo, hi, coarse_tol, prec.bits + 32)
    if f1 >= ZERO_REJECT:
        return t1, _eta_abs_on_line(t1, prec)
    with working(prec.bits + 32):
        width = mpfr("1e-7")
        a, b = max(lo, t1 - width), min(hi, t1 + width)
        fine_tol = mpfr(2) ** (-(prec.bits // 2)) * max(1, abs(t1))
    t2, f2 = _golden_min(lambda t: _eta_abs_on_line(t, prec), a, b, fine_tol, prec.bits + 32)
    return _secant_polish(t2, f2, prec)


def _eta_on_line(t: mpfr, prec: Precision) -> mpc:
    with working(prec.bits + 32):
        s = mpc(mpfr(1) / 2, t)
    return eta_full(s, prec).value


def _secant_polish(t: mpfr, f: mpfr, prec: Precision, steps: int = 6) -> tuple[mpfr, mpfr]:
    # near a simple zero eta(1/2 + it) is linear in t, so a complex secant step
    # (real part kept) converges superlinearly past the golden-section tolerance
    w = prec.bits + 32
    with working(w):
        h = mpfr(2) ** (-(prec.bits // 2)) * max(1, abs(t))
        t_prev, t_cur = t - h, t
    e_prev, e_cur = _eta_on_line(t_prev, prec), _eta_on_line(t_cur, prec)
    best_t, best_f = t, f
    for _ in range(steps):
        with working(w):
            den = e_cur - e_prev
            if den == 0:
                break
            step = (e_cur * (t_cur - t_prev) / den).real
            t_next = t_cur - step
        e_next = _eta_on_line(t_next, prec)
        with working(w):
            f_next = abs(e_next)
            done = abs(step) <= mpfr(2) ** (-(prec.bits - 8)) * abs(t_next)
        if f_next < best_f:
            best_t, best_f = t_next, f_next
        t_prev, e_prev, t_cur, e_cur = t_cur, e_cur, t_next, e_next
        if done:
            break
    return best_t, best_f


def locate_zero(bracket: Sequence, prec: Precision | int = DEFAULT_BITS) -> ZeroResult:
    """Critical-line zero of eta(1/2 + it) with t in ``bracket``.

    Scans |eta| at step 0.05, refines the smallest grid value by golden-section
    search, and accepts when the residual |eta(1/2 + i t0)| is below 1e-20.
    """
    prec = Precision.coerce(prec)
    with working(prec.bits + 32):
        lo, hi = (mpfr(x) if not isinstance(x, mpfr) else x for x in bracket)
    if not hi > lo:
        raise DomainError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
    if hi - lo > MAX_ZERO_BRACKET:
        raise DomainError(f"bracket width must be <= {MAX_ZERO_BRACKET}")
    grid = _scan_grid(lo, hi, prec.bits + 32)
    scan = Precision(_SCAN_BITS)
    values = [_eta_abs_on_line(t, scan) for t in grid]
    k = min(range(len(values)), key=values.__getitem__)
    a, b = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    t0, resid = _refine(a, b, prec)
    return _accept(t0, resid, (lo, hi), prec)


def _accept(t0: mpfr, resid: mpfr, bracket, prec: Precision) -> ZeroResult:
    if resid >= ZERO_REJECT:
        raise NoZeroFoundError(
            f"no critical-line zero in [{float(bracket[0])}, {float(bracket[1])}]: "
            f"smallest |eta| = {float(resid):.3g}"
        )
    if resid >= ZERO_ACCEPT:
        raise PrecisionError(
            f"zero near t = {float(t0)} refined only to |eta| = {float(resid):.3g}; raise precision"
        )
    return ZeroResult(mpfr(t0, prec.bits), mpfr(resid, prec.bits), tuple(mpfr(b, prec.bits) for b in bracket))


def find_zeros(t_lo, t_hi, prec: Precision | int = DEFAULT_BITS) -> list[ZeroResult]:
    """All critical-line zeros with t_lo <= t <= t_hi (range width <= 100)."""
    prec = Precision.coerce(prec)
    with working(prec.bits + 32):
        lo, hi = mpfr(t_lo), mpfr(t_hi)
    if not hi > lo:
        raise DomainError("zero range must satisfy lo < hi")
    if hi - lo > MAX_ZERO_RANGE:
        raise DomainError(f"zero range width must be <= {MAX_ZERO_RANGE}")
    grid = _scan_grid(lo, hi, prec.bits + 32)
    scan = Precision(_SCAN_BITS)
    values = [_eta_abs_on_line(t, scan) for t in grid]
    found: list[ZeroResult] = []
    for k in range(len(grid)):
        left = values[k - 1] if k > 0 else None
        right = values[k + 1] if k + 1 < len(values) else None
        if (left is not None and values[k] > left) or (right is not None and values[k] > right):
            continue
        a, b = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
        t0, resid = _refine(a, b, prec)
        if resid >= ZERO_REJECT:
            continue
        z = _accept(t0, resid, (lo, hi), prec)
        if not any(abs(float(z.t0 - f.t0)) < 1e-6 for f in found):
            found.append(z)
    return sorted(found, key=lambda z: z.t0)


# ---------------------------------------------------------- exchange probe

@dataclass(frozen=True)
class ExchangeRow:
    n: int
    offset: Fraction
    s: mpc
    partial_ratio: mpc | None
    tail_ratio: mpc
    growth: mpc
    lam: mpc
    coincidence: mpfr | None = None  # |partial - tail| / |tail|, only at a zero on the line
    flag: str | None = None


@dataclass(frozen=True)
class ExchangeReport:
    sigma: mpfr
    t0: mpfr
    offsets: tuple[Fraction, ...]
    rows: tuple[ExchangeRow, ...]
    precision_bits: int = DEFAULT_BITS
    notes: tuple[str, ...] = field(default_factory=tuple)


def exchange_report(
    sigma,
    t0,
    sched: Schedule = DEFAULT_EXCHANGE_SCHEDULE,
    offsets: Sequence = DEFAULT_OFFSETS,
    prec: Precision | int = DEFAULT_BITS,
) -> ExchangeReport:
    """Both sides of the iterated-limit comparison at s = sigma + i(t0 + dt).

    For each (n, dt): eta_n(1-s)/eta_n(s), R_n(1-s)/R_n(s), the growth term
    (n + 1/2)^(2s-1) and lam(s).  At sigma = 1/2, dt = 0 the row also records
    how closely the partial and tail ratios coincide.
    """
    prec = Precision.coerce(prec)
    offs = tuple(sorted(Fraction(o) for o in offsets))
    if any(o < 0 for o in offs):
        raise DomainError("offsets must be non-negative")
    with working(prec.bits + 32):
        sigma = mpfr(sigma) if not isinstance(sigma, mpfr) else sigma
        t0 = mpfr(t0) if not isinstance(t0, mpfr) else t0
    if not 0 < sigma < 1:
        raise DomainError(f"sigma must lie in (0, 1), got {sigma}")
    on_line = sigma == mpfr(1) / 2
    w = prec.bits + 16
    rows: list[ExchangeRow] = []
    for dt in offs:
        with working(prec.bits + 32):
            s = mpc(sigma, t0 + mpfr(gmpy2.mpq(dt.numerator, dt.denominator)))
            s1 = 1 - s
        ps = partial_sums(s, sched, prec + 16)
        if on_line:
            # 1 - s is the conjugate of s, and eta_n(conj s) = conj(eta_n(s))
            with working(prec.bits + 16):
                ps1 = {n: r.value.conjugate() for n, r in ps.items()}
        else:
            ps1 = {n: r.value for n, r in partial_sums(s1, sched, prec + 16).items()}
        lam = eta_lambda(s, prec).value
        for n in sched:
            eta_n = ps[n].value
            r_s = tail_remainder(s, n, prec + 16).value
            r_1s = tail_remainder(s1, n, prec + 16).value
            with working(w):
                tail_ratio = r_1s / r_s
                growth = complex_power(mpfr(2 * n + 1) / 2, 2 * s - 1, prec + 16)
                flag = None
                if abs(eta_n) < mpfr(2) ** (-prec.bits / 2):
                    partial_ratio, flag = None, "partial-sum-vanishes"
                else:
                    partial_ratio = ps1[n] / eta_n
                coincidence = None
                if on_line and dt == 0 and partial_ratio is not None:
                    coincidence = abs(partial_ratio - tail_ratio) / abs(tail_ratio)
            rows.append(
                ExchangeRow(
                    n,
                    dt,
                    mpc(s, prec.bits),
                    None if partial_ratio is None else mpc(partial_ratio, prec.bits),
                    mpc(tail_ratio, prec.bits),
                    mpc(growth, prec.bits),
                    mpc(lam, prec.bits),
                    None if coincidence is None else mpfr(coincidence, prec.bits),
                    flag,
                )
            )
    rows.sort(key=lambda r: (r.n, r.offset))
    return ExchangeReport(mpfr(sigma, prec.bits), mpfr(t0, prec.bits), offs, tuple(rows), prec.bits)


# --------------------------------------------------------------- decay fit

class DecayFit(NamedTuple):
    slope: float
    intercept: float


def decay_fit(series) -> DecayFit:
    """Least-squares slope and intercept of log10(q) against log10(n).

    ``series`` is a :class:`ProbeSeries` (its deviations are fitted) or an
    iterable of ``(n, q)`` pairs.
    """
    if isinstance(series, ProbeSeries):
        pairs = [(r.n, r.deviation) for r in series.rows]
    else:
        pairs = list(series)
    if len(pairs) < 3:
        raise DomainError("decay_fit needs at least three rows")
    xs, ys = [], []
    for n, q in pairs:
        if q is None or not q > 0 or not n > 0:
            raise DomainError(f"decay_fit needs positive quantities, got q={q} at n={n}")
        xs.append(math.log10(n))
        ys.append(_log10(q))
    slope, intercept = np.polyfit(np.array(xs), np.array(ys), 1)
    return DecayFit(float(slope), float(intercept))


def _log10(q) -> float:
    if isinstance(q, (int, Fraction)):
        q = Fraction(q)
        return math.log10(q.numerator) - math.log10(q.denominator)
    if isinstance(q, float):
        return math.log10(q)
    return log2_abs(q) * math.log10(2)


__all__ = [
    "BoundScan",
    "DEFAULT_EXCHANGE_SCHEDULE",
    "DEFAULT_OFFSETS",
    "DEFAULT_SCHEDULE",
    "DecayFit",
    "ExchangeReport",
    "ExchangeRow",
    "Lemma1Probe",
    "ProbeRow",
    "ProbeSeries",
    "Schedule",
    "ZeroResult",
    "decay_fit",
    "eps_scaled",
    "exchange_report",
    "f_sequence",
    "find_zeros",
    "lemma1_ratios",
    "locate_zero",
    "uniform_bound_scan",
]
