"""
Tests for finite field construction, embeddings and root finding.
"""

import numpy as np
import pytest

from src.drinfeld.errors import BoundExceeded, CompositeModulus, NoEmbedding, ZeroInput, ZeroPolynomial
from src.drinfeld.ff import (
    all_roots,
    embed,
    field_of,
    frobenius_iter,
    make_field,
    nth_roots,
    power,
    to_literal,
)


class TestMakeField:
    """Canonical realizations of F_{p^m}."""

    def test_f9_modulus_is_t2_plus_1(self, f9):
        assert f9.modulus == [1, 0, 1]
        assert f9.generator**2 == f9.gf(2)

    def test_cached_per_degree(self):
        assert make_field(3, 4) is make_field(3, 4)

    def test_field_of_round_trips(self, f9):
        assert field_of(f9.generator) is f9
        assert field_of(f9.elements) is f9

    def test_composite_characteristic(self):
        with pytest.raises(CompositeModulus):
            make_field(4, 2)

    def test_bound_exceeded(self):
        with pytest.raises(BoundExceeded):
            make_field(5, 10)

    def test_coefficients(self, f9):
        a = f9.from_coeffs([2, 1])
        assert int(a) == 5
        assert f9.coeffs(a) == [2, 1]
        assert f9([2, 1]) == a

    def test_from_coeffs_reduces_mod_p(self, f9):
        assert f9.from_coeffs([-1, 4]) == f9.from_coeffs([2, 1])

    def test_rejects_foreign_elements(self, f9):
        with pytest.raises(TypeError):
            f9(make_field(3, 4).one)

    def test_random_is_seeded(self, f9):
        first = [int(f9.random(np.random.default_rng(3))) for _ in range(5)]
        second = [int(f9.random(np.random.default_rng(3))) for _ in range(5)]
        assert first == second
        assert all(v != 0 for v in first)


class TestArithmetic:
    def test_negative_power(self, f9):
        a = f9.from_coeffs([1, 1])
        assert power(a, -1) * a == f9.one
        assert power(a, -3) == power(a**3, -1)

    def test_negative_power_of_zero(self, f9):
        with pytest.raises(ZeroInput):
            power(f9.zero, -1)

    def test_frobenius_iter_matches_plain_power(self):
        f81 = make_field(3, 4)
        for a in f81.elements[::7]:
            assert frobenius_iter(a, 3, 3) == a**27
            assert frobenius_iter(a, 4, 3) == a

    def test_all_roots_of_t2_plus_1(self, f9):
        roots = all_roots([1, 0, 1], f9)
        assert [int(r) for r in roots] == [3, 6]

    def test_all_roots_of_zero(self, f9):
        with pytest.raises(ZeroPolynomial):
            all_roots([0, 0], f9)

    def test_nth_roots(self, f9):
        roots = nth_roots(f9.one, 4)
        assert roots.size == 4
        assert all(r**4 == f9.one for r in roots)

    def test_nth_roots_of_zero(self, f9):
        with pytest.raises(ZeroInput):
            nth_roots(f9.zero, 2)


class TestEmbed:
    """The canonical embedding F_{p^a} -> F_{p^b} is a ring map."""

    def test_ring_homomorphism(self, f9):
        f81 = make_field(3, 4)
        elements = f9.elements
        images = embed(elements, f9, f81)
        for a, ea in zip(elements, images):
            assert embed(a * elements, f9, f81).tolist() == (ea * images).tolist()
            assert embed(a + elements, f9, f81).tolist() == (ea + images).tolist()

    def test_prime_field_embeds_as_constants(self, f9):
        f3 = make_field(3, 1)
        assert int(embed(f3.gf(2), f3, f9)) == 2

    def test_image_is_fixed_by_subfield_frobenius(self, f9):
        f81 = make_field(3, 4)
        images = embed(f9.elements, f9, f81)
        assert (images**9 == images).all()

    def test_incompatible_degrees(self, f9):
        with pytest.raises(NoEmbedding):
            embed(f9.one, f9, make_field(3, 3))


class TestLiteral:
    @pytest.mark.parametrize(
        ("coeffs", "expected"),
        [([0, 0], "0"), ([2, 1], "2+g"), ([0, 2], "2*g"), ([1, 0], "1")],
    )
    def test_to_literal(self, f9, coeffs, expected):
        assert to_literal(f9.from_coeffs(coeffs)) == expected

    def test_higher_degree(self):
        f81 = make_field(3, 4)
        assert to_literal(f81.from_coeffs([1, 0, 1, 2]), symbol="t") == "1+t^2+2*t^3"
