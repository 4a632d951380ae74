"""
Tests for twisted polynomials: ring laws, right division, right gcd and kernels.
"""

import numpy as np
import pytest

from src.drinfeld.errors import BothZero, FieldMismatch, SkewDivisionByZero, ZeroPolynomial
from src.drinfeld.ff import make_field
from src.drinfeld.skew import (
    SkewPoly,
    evaluate,
    kernel_elements,
    right_divmod,
    right_gcd_monic,
    scalar_conjugate,
    split_kernel,
)

Q = 3


@pytest.fixture(scope="module")
def f81():
    return make_field(3, 4)


def random_poly(field, rng, degree):
    coeffs = [field.random(rng, nonzero=False) for _ in range(degree)] + [field.random(rng)]
    return SkewPoly.from_coeffs(field, Q, coeffs)


class TestConstruction:
    def test_trailing_zeros_stripped(self, f81):
        f = SkewPoly.from_coeffs(f81, Q, [1, 2, 0, 0])
        assert f.degree == 1
        assert SkewPoly.zero(f81, Q).degree == -1
        assert SkewPoly.zero(f81, Q).is_zero

    def test_lead_of_zero(self, f81):
        with pytest.raises(ZeroPolynomial):
            SkewPoly.zero(f81, Q).lead

    def test_fq_must_lie_in_field(self):
        with pytest.raises(FieldMismatch):
            SkewPoly.one(make_field(3, 3), 9)

    def test_str(self, f81):
        assert str(SkewPoly.from_coeffs(f81, Q, [2, 0, 1])) == "τ^2 + 2"
        assert str(SkewPoly.zero(f81, Q)) == "0"


class TestRing:
    """tau * a = a^q * tau and the ring axioms."""

    def test_commutation_rule(self, f81):
        a = f81.generator
        tau = SkewPoly.tau(f81, Q)
        const = SkewPoly.from_coeffs(f81, Q, [a])
        assert tau * const == SkewPoly.from_coeffs(f81, Q, [0, a**Q])

    def test_associative(self, f81, rng):
        f, g, h = (random_poly(f81, rng, d) for d in (2, 3, 1))
        assert (f * g) * h == f * (g * h)

    def test_distributive(self, f81, rng):
        f, g, h = (random_poly(f81, rng, d) for d in (2, 2, 3))
        assert f * (g + h) == f * g + f * h
        assert (g + h) * f == g * f + h * f

    def test_degree_adds(self, f81, rng):
        f, g = random_poly(f81, rng, 2), random_poly(f81, rng, 3)
        assert (f * g).degree == 5

    def test_one_is_identity(self, f81, rng):
        f = random_poly(f81, rng, 3)
        assert SkewPoly.one(f81, Q) * f == f
        assert f * SkewPoly.one(f81, Q) == f

    def test_mixing_fields_fails(self, f81):
        with pytest.raises(FieldMismatch):
            SkewPoly.one(f81, Q) + SkewPoly.one(make_field(3, 2), Q)


class TestRightDivision:
    def test_divmod_identity(self, f81, rng):
        for _ in range(5):
            f, g = random_poly(f81, rng, 5), random_poly(f81, rng, 2)
            quotient, remainder = right_divmod(f, g)
            assert quotient * g + remainder == f
            assert remainder.degree < g.degree

    def test_exact_division(self, f81, rng):
        h, g = random_poly(f81, rng, 3), random_poly(f81, rng, 2)
        quotient, remainder = right_divmod(h * g, g)
        assert remainder.is_zero
        assert quotient == h

    def test_divide_by_zero(self, f81):
        with pytest.raises(SkewDivisionByZero):
            right_divmod(SkewPoly.one(f81, Q), SkewPoly.zero(f81, Q))

    def test_gcd_keeps_common_right_factor(self, f81, rng):
        g = random_poly(f81, rng, 2)
        a, b = random_poly(f81, rng, 2), random_poly(f81, rng, 3)
        gcd = right_gcd_monic(a * g, b * g)
        assert int(gcd.lead) == 1
        assert right_divmod(gcd, g)[1].is_zero
        assert right_divmod(a * g, gcd)[1].is_zero

    def test_gcd_of_zeros(self, f81):
        with pytest.raises(BothZero):
            right_gcd_monic(SkewPoly.zero(f81, Q), SkewPoly.zero(f81, Q))


class TestEvaluation:
    def test_fq_linear(self, f81, rng):
        f = random_poly(f81, rng, 3)
        a, b = f81.random(rng), f81.random(rng)
        c = f81.gf(2)
        assert evaluate(f, a + b) == evaluate(f, a) + evaluate(f, b)
        assert evaluate(f, c * a) == c * evaluate(f, a)

    def test_composition_is_product(self, f81, rng):
        f, g = random_poly(f81, rng, 2), random_poly(f81, rng, 1)
        a = f81.random(rng)
        assert (f * g)(a) == f(g(a))

    def test_evaluates_in_extension(self, f81):
        f9 = make_field(3, 2)
        f = SkewPoly.from_coeffs(f9, Q, [-1, 0, 1])
        assert evaluate(f, f81.elements).size == f81.order


class TestKernels:
    def test_tau2_minus_1_kernel_is_f9(self):
        f9 = make_field(3, 2)
        f = SkewPoly.from_coeffs(f9, Q, [-1, 0, 1])
        search = split_kernel(f)
        assert search.split
        assert search.ambient is f9
        assert search.size == 9

    def test_escalates_until_split(self):
        f9 = make_field(3, 2)
        f = SkewPoly.from_coeffs(f9, Q, [-1, 0, 0, 0, 1])
        search = split_kernel(f)
        assert search.split
        assert search.ambient.m == 4
        assert search.size == 81

    def test_parallel_scan_matches_serial(self, f81, rng):
        f = random_poly(f81, rng, 2)
        f6561 = make_field(3, 8)
        serial = kernel_elements(f, f6561, workers=1)
        parallel = kernel_elements(f, f6561, workers=4)
        assert serial.tolist() == parallel.tolist()

    def test_kernel_is_subgroup(self, f81, rng):
        f = random_poly(f81, rng, 2)
        kernel = kernel_elements(f, make_field(3, 8), workers=1)
        assert int(kernel[0]) == 0
        assert kernel.size in (1, Q, Q**2)
        sums = (kernel[:, None] + kernel[None, :]).ravel()
        assert np.isin(sums.view(np.ndarray), kernel.view(np.ndarray)).all()

    def test_kernel_of_zero(self, f81):
        with pytest.raises(ZeroPolynomial):
            kernel_elements(SkewPoly.zero(f81, Q), f81)


class TestScalarConjugate:
    def test_matches_explicit_conjugation(self, f81, rng):
        f = random_poly(f81, rng, 4)
        l = f81.random(rng)
        left = SkewPoly.from_coeffs(f81, Q, [np.reciprocal(l)])
        right = SkewPoly.from_coeffs(f81, Q, [l])
        assert scalar_conjugate(f, l ** (Q - 1)) == left * f * right
