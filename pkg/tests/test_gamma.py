from fractions import Fraction

import gmpy2
import mpmath
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from etalab.errors import PoleError
from etalab.gamma import complex_gamma, spouge_parameter
from etalab.mpcore import constant_pi, working
from helpers import close_bits, from_mp, make_s, to_mp

BITS = 192


def test_gamma_one():
    assert close_bits(complex_gamma(1, BITS), mpc(1)) >= BITS - 2


def test_gamma_half_is_sqrt_pi():
    with working(BITS + 16):
        root_pi = mpc(mpfr(constant_pi(BITS + 16)) ** mpfr(0.5))
    for method in ("spouge", "stirling"):
        g = complex_gamma("0.5", BITS, method=method)
        assert close_bits(g, root_pi) >= BITS - 4


def test_gamma_routes_agree_on_critical_strip_point():
    z = make_s("0.75", "14.1347")
    a = complex_gamma(z, BITS, "spouge")
    b = complex_gamma(z, BITS, "stirling")
    assert close_bits(a, b) >= BITS - 16


@pytest.mark.parametrize("sigma,t", [("0.75", "14.1347"), ("0.1234", "56.789"), ("-3.5", "0.25"), ("12.5", "-80")])
def test_gamma_against_mpmath(sigma, t):
    z = make_s(sigma, t)
    with mpmath.workprec(320):
        ref = from_mp(mpmath.gamma(to_mp(z)), 320)
    for method in ("spouge", "stirling"):
        assert close_bits(complex_gamma(z, BITS, method), ref) >= BITS - 12


@pytest.mark.parametrize("k", [0, -1, -2, -17])
def test_gamma_poles(k):
    with pytest.raises(PoleError) as info:
        complex_gamma(k, BITS)
    assert info.value.pole == k


def test_gamma_near_pole_is_finite():
    z = make_s("-2.000001", "0")
    assert abs(complex_gamma(z, BITS)) > 1e4


def test_spouge_parameter_grows_with_precision():
    assert spouge_parameter(64) < spouge_parameter(192) < spouge_parameter(512)


@settings(max_examples=200)
@given(st.integers(1, 999), st.integers(-50_000, 50_000))
def test_gamma_recurrence(a, b):
    z = make_s(_q(a), _q(b))
    with working(BITS + 32):
        z1 = z + 1
    g = complex_gamma(z, BITS)
    g1 = complex_gamma(z1, BITS)
    with working(BITS + 32):
        assert abs(g1 - z * g) <= mpfr(2) ** (-(BITS - 12)) * abs(g1)


@settings(max_examples=40)
@given(st.integers(1, 999), st.integers(-50_000, 50_000))
def test_gamma_reflection(a, b):
    z = make_s(_q(a), _q(b))
    with working(BITS + 32):
        zc = 1 - z
    g, gc = complex_gamma(z, BITS), complex_gamma(zc, BITS)
    with working(BITS + 64):
        pi = constant_pi(BITS + 64)
        lhs = g * gc * gmpy2.sin(pi * z) / pi
        assert abs(lhs - 1) <= mpfr(2) ** (-(BITS - 12))


def _q(k):
    return Fraction(k, 1000)
