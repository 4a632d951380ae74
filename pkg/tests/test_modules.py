"""
Tests for the normalized and minimal models and their annihilators.
"""

import pytest

from src.drinfeld.errors import AmbientTooSmall, ZeroJ, ZeroLambda
from src.drinfeld.modules import (
    Ideal,
    Model,
    TypeTag,
    annihilator,
    build_minimal,
    build_normalized,
    gcd_annihilator,
    i_infinity_combination,
    j_invariant,
    normalized_to_minimal,
    verify_module,
)


# Seeded specializations per identity check.
SPECIALIZATIONS = 20


@pytest.fixture(params=["q3", "q2_specialized"])
def params(request):
    return request.getfixturevalue(request.param)


class TestNormalizedModel:
    @pytest.mark.parametrize("twist", [0, 1])
    def test_well_defined(self, params, rng, twist):
        for _ in range(SPECIALIZATIONS):
            module = build_normalized(params, params.ambient.random(rng), twist)
            report = verify_module(module)
            assert report.passed, report.failures

    def test_leading_term_and_type(self, q3, rng):
        module = build_normalized(q3, q3.ambient.random(rng), 1)
        assert int(module.phi_x.lead) == 1
        assert module.type_tag is TypeTag.ZETA
        assert module.phi_y.lead == module.level.zeta_q

    def test_zero_lambda(self, q3):
        with pytest.raises(ZeroLambda):
            build_normalized(q3, q3.ambient.zero)

    def test_needs_nu(self, q3, rng):
        with pytest.raises(AmbientTooSmall):
            build_normalized(q3, q3.fq4.random(rng), 0, q3.fq4)

    def test_parameter_from_subfield_is_lifted(self, q3, f9):
        module = build_normalized(q3, f9.generator)
        assert module.field is q3.ambient
        assert module.parameter == q3.lift(f9.generator, q3.ambient)


class TestMinimalModel:
    @pytest.mark.parametrize("twist", [0, 1])
    def test_well_defined(self, params, rng, twist):
        for _ in range(SPECIALIZATIONS):
            report = verify_module(build_minimal(params, params.fq4.random(rng), twist))
            assert report.passed, report.failures

    def test_lives_over_fq4(self, q3, rng):
        module = build_minimal(q3, q3.fq4.random(rng))
        assert module.field is q3.fq4
        assert module.type_tag is TypeTag.ZETA_Q

    def test_zero_j(self, q3):
        with pytest.raises(ZeroJ):
            build_minimal(q3, q3.fq4.zero)

    def test_to_dict(self, q3, rng):
        payload = build_minimal(q3, q3.fq4.random(rng)).to_dict()
        assert payload["model"] == "minimal"
        assert len(payload["phi_x"]["coeffs"]) == 5


class TestAnnihilators:
    @pytest.mark.parametrize("ideal", [Ideal.I_INF, Ideal.I_0])
    def test_closed_form_matches_gcd(self, params, rng, ideal):
        for _ in range(SPECIALIZATIONS):
            j = params.fq4.random(rng)
            closed = annihilator(params, Model.MINIMAL, j, ideal)
            assert closed.degree == 2
            assert int(closed.lead) == 1
            assert gcd_annihilator(build_minimal(params, j), ideal) == closed

    @pytest.mark.parametrize("twist", [0, 1])
    def test_normalized_closed_form_matches_gcd(self, params, rng, twist):
        for _ in range(SPECIALIZATIONS):
            lam = params.ambient.random(rng)
            closed = annihilator(params, Model.NORMALIZED, lam, Ideal.I_INF, twist)
            assert gcd_annihilator(build_normalized(params, lam, twist)) == closed

    def test_normalized_annihilator_divides(self, q3, rng):
        lam = q3.ambient.random(rng)
        module = build_normalized(q3, lam)
        right = annihilator(q3, "normalized", lam)
        assert module.phi_x == module.factors.left_x * right
        assert module.phi_y == module.factors.left_y * right


class TestModelComparison:
    def test_conjugation_gives_minimal_model(self, params, rng):
        for _ in range(SPECIALIZATIONS):
            lam = params.ambient.random(rng)
            phi_x, phi_y, j = normalized_to_minimal(params, lam)
            minimal = build_minimal(params, j, 0, params.ambient)
            assert phi_x == minimal.phi_x
            assert phi_y == minimal.phi_y

    def test_j_invariant(self, q3, rng):
        lam = q3.ambient.random(rng)
        assert j_invariant(q3, lam) == lam**10 / q3.nu
        assert j_invariant(q3, lam, 1) == lam**10 / q3.nu_sigma()

    def test_combination_reports_multiple(self, q3, rng):
        combination = i_infinity_combination(q3, q3.ambient.random(rng))
        assert combination.annihilator.degree == 2
        if combination.is_multiple:
            assert combination.recovered_c is not None
            assert combination.solved_delta is not None
        else:
            assert combination.solved_delta is None
