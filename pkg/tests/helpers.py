"""Shared test helpers: point construction, mpmath conversion, strategies."""

import random
from fractions import Fraction

import gmpy2
import mpmath
from gmpy2 import mpc, mpfr
from hypothesis import strategies as st

from etalab.mpcore import working

REF_S = "0.1234+56.789i"


def make_s(sigma, t, bits=256) -> mpc:
    with working(bits):
        return mpc(mpfr(gmpy2.mpq(Fraction(sigma).numerator, Fraction(sigma).denominator)),
                   mpfr(gmpy2.mpq(Fraction(t).numerator, Fraction(t).denominator)))


def to_mp(x):
    """Exact conversion of an mpfr/mpc to mpmath at the current mpmath precision."""
    if isinstance(x, mpc):
        return mpmath.mpc(to_mp(x.real), to_mp(x.imag))
    num, den = (int(v) for v in x.as_integer_ratio())
    return mpmath.mpf(num) / den


def from_mp(z, bits=256) -> mpc:
    """Exact conversion of an mpmath number (no re-rounding at mpmath's current precision)."""
    if isinstance(z, mpmath.mpc):
        re, im = z.real, z.imag
    else:
        re, im = mpmath.mpf(z) if not isinstance(z, mpmath.mpf) else z, mpmath.mpf(0)
    with working(bits):
        return mpc(_mpf_to_mpfr(re, bits), _mpf_to_mpfr(im, bits))


def _mpf_to_mpfr(x, bits):
    sign, man, exp, _ = x._mpf_
    if not man:
        return mpfr(0, bits)
    v = gmpy2.mul_2exp(mpfr(int(man), bits), int(exp))
    return -v if sign else v


def close_bits(a, b) -> float:
    """-log2 of the relative distance |a - b| / |b| (inf when equal)."""
    with working(512):
        d = abs(a - b)
        if d == 0:
            return float("inf")
        scale = abs(b) if b != 0 else mpfr(1)
        return -float(gmpy2.log2(d / scale))


@st.composite
def strip_points(draw, t_max=100):
    sigma = Fraction(draw(st.integers(1, 999)), 1000)
    t = Fraction(draw(st.integers(-t_max * 1000, t_max * 1000)), 1000)
    return make_s(sigma, t)


def random_strip_points(count, seed, t_max=100):
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        sigma = Fraction(rng.randint(1, 999), 1000)
        t = Fraction(rng.randint(-t_max * 1000, t_max * 1000), 1000)
        pts.append(make_s(sigma, t))
    return pts
