"""
Tests for the level recursion, chains and their isogenies.
"""

import numpy as np
import pytest

from src.drinfeld.errors import InvalidChoice, PoleW, ZeroW
from src.drinfeld.modules import Ideal, Model, annihilator, build_minimal
from src.drinfeld.recursion import (
    Xi_eval,
    Xi_factorization_residual,
    Xi_nabla_eval,
    Xi_roots,
    build_chain,
    chain_modules,
    delta_pow,
    explicit_omega,
    isogeny_square,
    j_from_w,
    kernel_report,
    nabla_product_minimal,
    nabla_product_normalized,
    next_j,
    next_j_from_j,
    next_lambda,
    random_chain,
    u_nabla,
    verify_chain,
    verify_isogeny,
    w_nabla,
    xi_eval,
    xi_factorization_residual,
    xi_roots,
)
from src.drinfeld.skew import SkewPoly, split_kernel
from src.drinfeld.tower import TowerPoint, children, supersingular_j_set


def is_zero_poly(poly) -> bool:
    return bool(np.all(poly.coeffs == 0))


@pytest.fixture(scope="module")
def tower_point(q3):
    """A level-2 point (j0, w1, w2) above the smallest supersingular invariant."""
    j0 = supersingular_j_set(q3)[0]
    level1 = children(q3, TowerPoint(int(j0)))
    level2 = children(q3, level1[0])
    return level2[0]


@pytest.fixture(scope="module")
def normalized_chain(q3):
    chain = random_chain(q3, 2, Model.NORMALIZED, np.random.default_rng(17))
    assert chain is not None
    return chain


class TestNormalizedRecursion:
    def test_chain_choices_are_roots(self, q3, normalized_chain):
        for i in range(1, normalized_chain.k + 1):
            lam_prev, u = normalized_chain.parameter(i - 1), normalized_chain.choice(i)
            assert xi_eval(q3, lam_prev, u, i) == 0
            assert next_lambda(q3, lam_prev, u, i) == normalized_chain.parameter(i)

    def test_nabla_is_a_root_of_the_next_level(self, q3, normalized_chain):
        lam0, u1, lam1 = normalized_chain.parameter(0), normalized_chain.choice(1), normalized_chain.parameter(1)
        assert xi_eval(q3, lam1, u_nabla(q3, lam0, u1, 1), 2) == 0

    def test_factorization(self, q3, normalized_chain):
        lam0, u1, lam1 = normalized_chain.parameter(0), normalized_chain.choice(1), normalized_chain.parameter(1)
        assert is_zero_poly(xi_factorization_residual(q3, lam1, lam0, u1, 1))

    def test_nabla_product_is_annihilator(self, q3, normalized_chain):
        lam0, u1 = normalized_chain.parameter(0), normalized_chain.choice(1)
        closed = annihilator(q3, Model.NORMALIZED, lam0, Ideal.I_INF, 0, normalized_chain.field)
        assert nabla_product_normalized(q3, lam0, u1, 1) == closed

    def test_chain_isogenies(self, q3, normalized_chain):
        report = verify_chain(q3, normalized_chain)
        assert report.passed, report.failures

    def test_isogeny_square(self, q3, normalized_chain):
        report = isogeny_square(q3, normalized_chain.parameter(0), normalized_chain.choice(1))
        assert report.passed, report.failures

    def test_roots_are_sorted(self, q3, normalized_chain):
        roots = xi_roots(q3, normalized_chain.parameter(0), 1)
        values = [int(r) for r in roots]
        assert values == sorted(values)


class TestMinimalRecursion:
    def test_point_satisfies_level_equations(self, q3, tower_point):
        j0, w1, w2 = tower_point.values(q3.fq4)
        assert Xi_eval(q3, j0, w1, 0) == 0
        assert Xi_nabla_eval(q3, w1, w2, 1) == 0
        assert Xi_eval(q3, next_j(q3, w1, 1), w2, 1) == 0

    def test_j_from_w_inverts_the_step(self, q3, tower_point):
        j0, w1, _ = tower_point.values(q3.fq4)
        assert j_from_w(q3, w1, 1) == j0

    def test_two_forms_of_next_j(self, q3, tower_point):
        j0, w1, _ = tower_point.values(q3.fq4)
        assert next_j_from_j(q3, j0, w1, 1) == next_j(q3, w1, 1)

    def test_nabla_is_a_root(self, q3, tower_point):
        _, w1, _ = tower_point.values(q3.fq4)
        j1 = next_j(q3, w1, 1)
        assert Xi_eval(q3, j1, w_nabla(q3, w1, 1), 1) == 0
        assert int(w_nabla(q3, w1, 1)) in [int(r) for r in Xi_roots(q3, j1, 1)]

    def test_factorization(self, q3, tower_point):
        _, w1, w2 = tower_point.values(q3.fq4)
        assert is_zero_poly(Xi_factorization_residual(q3, w1, 1))
        assert is_zero_poly(Xi_factorization_residual(q3, w2, 2))

    def test_nabla_product_is_annihilator(self, q3, tower_point):
        j0, w1, _ = tower_point.values(q3.fq4)
        assert nabla_product_minimal(q3, j0, w1) == annihilator(q3, Model.MINIMAL, j0)

    def test_level_one_isogeny(self, q3, tower_point):
        j0, w1, _ = tower_point.values(q3.fq4)
        field = q3.fq4
        ok = verify_isogeny(
            build_minimal(q3, j0, 0, field),
            build_minimal(q3, next_j(q3, w1, 1), 1, field),
            SkewPoly.linear(field, q3.q, field.one, -w1),
            delta_pow(q3, w1, 1),
        )
        assert ok

    def test_zero_w(self, q3):
        with pytest.raises(ZeroW):
            next_j(q3, q3.fq4.zero, 1)


class TestChains:
    def test_minimal_chain_from_tower_point(self, q3, tower_point):
        j0, *ws = tower_point.values(q3.fq4)
        chain = build_chain(q3, j0, ws, Model.MINIMAL, q3.fq4)
        assert chain.k == 2
        assert chain.parameter(2) == next_j(q3, ws[1], 2)
        report = verify_chain(q3, chain)
        assert report.passed, report.failures

    def test_chain_to_dict(self, q3, tower_point):
        j0, *ws = tower_point.values(q3.fq4)
        payload = build_chain(q3, j0, ws, "minimal", q3.fq4).to_dict()
        assert payload["model"] == "minimal"
        assert [level["k"] for level in payload["levels"]] == [1, 2]

    def test_rejects_non_root(self, q3, tower_point):
        j0 = tower_point.values(q3.fq4)[0]
        roots = {int(r) for r in Xi_roots(q3, j0, 0)}
        bad = next(w for w in q3.fq4.nonzero_elements if int(w) not in roots)
        with pytest.raises(InvalidChoice):
            build_chain(q3, j0, [bad], Model.MINIMAL, q3.fq4)

    def test_rejects_excluded_root(self, q3, tower_point):
        j0, w1, _ = tower_point.values(q3.fq4)
        try:
            nabla = w_nabla(q3, w1, 1)
        except PoleW:
            pytest.skip("w_nabla has a pole at this point")
        with pytest.raises(InvalidChoice):
            build_chain(q3, j0, [w1, nabla], Model.MINIMAL, q3.fq4)

    def test_random_chain_is_seeded(self, q3):
        first = random_chain(q3, 1, Model.NORMALIZED, np.random.default_rng(5))
        second = random_chain(q3, 1, Model.NORMALIZED, np.random.default_rng(5))
        assert first is not None
        assert first.to_dict() == second.to_dict()


def split_minimal_chain(params, k: int, seeds=range(20)):
    """First seeded minimal chain of length k whose isogeny kernel splits within the element bound."""
    for seed in seeds:
        chain = random_chain(params, k, Model.MINIMAL, np.random.default_rng(seed))
        if chain is not None and split_kernel(chain.omega, workers=2).split:
            return chain
    pytest.fail(f"no splitting minimal chain of length {k} among {len(seeds)} seeds")


class TestChainKernels:
    """
    Level-k chain kernels have q^k elements and grow strictly with k.

    At q = 2 every step is a quadratic over F_16, so three steps split within F_{2^16}.
    """

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_kernel_sizes_q2(self, q2_specialized, k):
        chain = random_chain(q2_specialized, k, Model.MINIMAL, np.random.default_rng(3))
        assert chain is not None
        report = kernel_report(chain, workers=2)
        assert report.passed, report.failures
        assert report[f"kernel_size_{k}"].detail == f"{2**k} of {2**k}"

    def test_kernel_size_q3_level_one(self, q3):
        chain = split_minimal_chain(q3, 1)
        report = kernel_report(chain, workers=2)
        assert report.passed, report.failures
        assert report["kernel_size_1"].detail == "3 of 3"

    @pytest.mark.slow
    def test_kernel_size_q3_level_two(self, q3):
        chain = split_minimal_chain(q3, 2)
        report = kernel_report(chain, workers=4)
        assert report.passed, report.failures
        assert report["kernel_size_2"].detail == "9 of 9"
        assert report["primitive_2"].passed

    def test_minimal_chain_isogenies(self, q2_specialized):
        chain = random_chain(q2_specialized, 2, Model.MINIMAL, np.random.default_rng(9))
        assert chain is not None
        report = verify_chain(q2_specialized, chain)
        assert report.passed, report.failures


class TestExplicitIsogeny:
    """delta_k (tau - w_k) ... delta_1 (tau - w_1) is an isogeny without any rescaling."""

    @pytest.mark.parametrize("k", [1, 2])
    def test_explicit_product_is_isogeny(self, q2_specialized, k):
        chain = random_chain(q2_specialized, k, Model.MINIMAL, np.random.default_rng(k + 20))
        assert chain is not None
        omega = explicit_omega(chain)
        assert omega is not None
        assert omega.degree == k
        src, dst = chain_modules(q2_specialized, chain)
        assert verify_isogeny(src, dst, omega)

    @pytest.mark.parametrize("k", [1, 2])
    def test_chain_report_carries_explicit_check(self, q2_specialized, k):
        chain = random_chain(q2_specialized, k, Model.MINIMAL, np.random.default_rng(k + 30))
        assert chain is not None
        check = verify_chain(q2_specialized, chain)["explicit_isogeny"]
        assert check.passed and not check.skipped

    def test_scaled_product_is_isogeny(self, q2_specialized):
        chain = random_chain(q2_specialized, 2, Model.MINIMAL, np.random.default_rng(22))
        assert chain is not None
        src, dst = chain_modules(q2_specialized, chain)
        assert verify_isogeny(src, dst, chain.omega, chain.scale_pow)

    def test_missing_root_is_skipped(self, q2_specialized, monkeypatch):
        chain = random_chain(q2_specialized, 1, Model.MINIMAL, np.random.default_rng(21))
        assert chain is not None
        monkeypatch.setattr("src.drinfeld.recursion.nth_roots", lambda a, n: type(a)([]))
        assert explicit_omega(chain) is None
        report = verify_chain(q2_specialized, chain)
        assert report["explicit_isogeny"].skipped
        assert report.passed

    def test_normalized_chain_has_no_explicit_check(self, normalized_chain, q3):
        with pytest.raises(KeyError):
            verify_chain(q3, normalized_chain)["explicit_isogeny"]
