"""
Tests for the service layer: profiles, verification suites and tower tables.
"""

import csv
import io
from pathlib import Path

import pytest

from src.drinfeld.checks import Report
from src.drinfeld.schemas import (
    ChainModel,
    GenusArtifact,
    ParamsModel,
    ReportModel,
    TowerArtifact,
    VerificationArtifact,
)
from src.drinfeld.services import (
    ConfigService,
    TowerService,
    VerificationOutcome,
    VerificationService,
    counts_csv,
    genus_csv,
)
from src.drinfeld.tower import genus_table

CONFIGS_DIR = Path(__file__).parent.parent / "configs"


# =============================================================================
# ConfigService
# =============================================================================


class TestConfigService:
    @pytest.fixture
    def service(self) -> ConfigService:
        return ConfigService(CONFIGS_DIR)

    def test_list_profiles(self, service):
        names = [p.name for p in service.list_profiles()]
        assert names == ["base", "q2-specialized", "q3-reduced"]

    def test_summary(self, service):
        summary = next(p for p in service.list_profiles() if p.name == "q3-reduced")
        assert (summary.q, summary.mode, summary.eta, summary.k_max) == (3, "reduced", "1+2i", 5)
        assert summary.to_row()[0] == "q3-reduced"

    def test_load_by_name_and_default(self, service):
        assert service.load_profile("q2-specialized").field.p == 2
        assert service.load_profile(None).profile_name == "Base Template"

    def test_default_without_base(self, tmp_path):
        assert ConfigService(tmp_path).load_profile(None).field.p == 3

    def test_validate_profile(self, service):
        assert service.validate_profile("q3-reduced") == []
        assert service.validate_profile("missing") == ["Profile not found: missing"]

    def test_profile_exists(self, service):
        assert service.profile_exists("base.yaml")
        assert not service.profile_exists("missing")

    def test_broken_profile_is_skipped(self, tmp_path):
        (tmp_path / "good.yaml").write_text("profile_name: Good\n")
        (tmp_path / "bad.yaml").write_text("params:\n  mode: generic\n")
        service = ConfigService(tmp_path)
        assert [p.name for p in service.list_profiles()] == ["good"]
        assert "params.mode" in service.validate_profile("bad")[0]

    def test_missing_directory(self, tmp_path):
        service = ConfigService(tmp_path / "absent")
        assert service.list_profiles() == []
        assert service.get_profile_names() == []


# =============================================================================
# VerificationService
# =============================================================================


class TestVerificationService:
    @pytest.fixture(scope="class")
    def outcome(self, q3):
        service = VerificationService(q3, seed=7, samples=2, max_attempts=100, workers=1)
        return service.run(("modules", "factorizations", "supersingular"), reconcile_displays=False)

    def test_modules_suite_passes(self, outcome):
        assert outcome.suites["modules"]
        assert all(report.passed for report in outcome.suites["modules"])

    def test_factorizations_pass(self, outcome):
        assert all(report.passed for report in outcome.suites["factorizations"])

    def test_supersingular_sizes(self, outcome):
        (report,) = outcome.suites["supersingular"]
        assert report["size"].passed

    def test_combination_row(self, outcome):
        row = outcome.reconciliation[-1]
        assert row.name == "i_infinity_combination"
        assert row.samples == 2

    def test_matrix(self, outcome):
        rows = outcome.matrix_rows()
        assert ["modules", "algebra_relation", 8, 0, "PASS"] in rows
        assert "algebra_relation" in outcome.matrix()

    def test_nu_sigma_row(self, outcome, q3):
        rows = outcome.matrix_rows()
        assert ["modules", "nu_sigma_frobenius_form", q3.q + 1, 0, "PASS"] in rows

    def test_skipped_checks_are_not_counted(self):
        only_skipped, mixed = Report("a"), Report("b")
        only_skipped.skip("kernel_size_3", "does not split")
        mixed.skip("kernel_size_1", "does not split")
        mixed.add("kernel_size_1", True)
        outcome = VerificationOutcome(suites={"kernels": [only_skipped, mixed]})
        assert outcome.passed
        rows = outcome.matrix_rows()
        assert ["kernels", "kernel_size_3", 0, 0, "SKIP"] in rows
        assert ["kernels", "kernel_size_1", 1, 0, "PASS"] in rows
        assert only_skipped.skipped[0].to_dict()["skipped"] is True

    def test_seed_reproducible(self, q3):
        runs = [
            VerificationService(q3, seed=3, samples=1, workers=1).run(("modules",), reconcile_displays=False)
            for _ in range(2)
        ]
        assert runs[0].matrix_rows() == runs[1].matrix_rows()
        assert [r.to_dict() for r in runs[0].reconciliation] == [r.to_dict() for r in runs[1].reconciliation]

    def test_isogenies_in_specialized_mode(self, q2_specialized):
        service = VerificationService(q2_specialized, seed=11, samples=2, workers=1)
        reports = service.isogenies_suite()
        assert reports
        assert all(report.passed for report in reports)

    def test_isogenies_record_chains(self, q2_specialized):
        service = VerificationService(q2_specialized, seed=11, samples=1, workers=1)
        reports = service.isogenies_suite()
        assert service.chains
        assert any(check.name == "explicit_isogeny" and check.passed for r in reports for check in r.checks)
        for chain in service.chains:
            model = ChainModel.from_chain(q2_specialized, chain)
            assert model.model == chain.model.value
            assert (model.source.twist_level, model.target.twist_level) == (0, 2)
            assert model.omega.model_dump() == chain.omega.to_dict()

    def test_kernels_suite_at_q2(self, q2_specialized):
        outcome = VerificationService(q2_specialized, seed=5, samples=1, workers=2).run(("kernels",), reconcile_displays=False)
        assert outcome.passed
        statuses = {row[1]: row[4] for row in outcome.matrix_rows()}
        assert statuses["annihilator_kernel"] == "PASS"
        assert {f"kernel_size_{k}" for k in (1, 2, 3)} <= set(statuses)
        assert set(statuses.values()) <= {"PASS", "SKIP"}

    def test_supersingular_suite_skipped_when_specialized(self, q2_specialized):
        assert VerificationService(q2_specialized, samples=1).supersingular_suite() == []

    def test_artifact(self, q3, outcome):
        artifact = VerificationArtifact(
            seed=7,
            params=ParamsModel.from_params(q3),
            passed=outcome.passed,
            suites={name: [ReportModel.from_report(r) for r in reports] for name, reports in outcome.suites.items()},
            reconciliation=[],
        )
        payload = artifact.model_dump()
        assert payload["params"]["digest"] == q3.digest
        assert payload["command"] == "verify"
        assert payload["chains"] == []

    def test_artifact_records_chain_modules(self, q2_specialized):
        service = VerificationService(q2_specialized, seed=11, samples=1, workers=1)
        outcome = service.run(("isogenies",), reconcile_displays=False)
        assert [id(c) for c in outcome.chains] == [id(c) for c in service.chains]
        artifact = VerificationArtifact(
            seed=11,
            params=ParamsModel.from_params(q2_specialized),
            passed=outcome.passed,
            suites={},
            chains=[ChainModel.from_chain(q2_specialized, chain) for chain in outcome.chains],
        )
        chains = artifact.model_dump()["chains"]
        assert len(chains) == len(outcome.chains) > 0
        assert all((c["source"]["type_tag"], c["target"]["type_tag"]) == ("zeta_q", "zeta_q") for c in chains)
        assert all(len(c["levels"]) == 2 for c in chains)


# =============================================================================
# TowerService
# =============================================================================


class TestTowerService:
    def test_genus_csv(self):
        text = genus_csv(genus_table(3, [1, 2, 6]))
        rows = list(csv.DictReader(io.StringIO(text)))
        assert list(rows[0]) == ["k", "epsilon", "kappa", "genus", "ss_count", "ratio_num", "ratio_den"]
        assert rows[0]["ratio_num"] == ""
        assert (rows[1]["ratio_num"], rows[1]["ratio_den"]) == ("24", "1")
        assert (rows[2]["genus"], rows[2]["ratio_num"], rows[2]["ratio_den"]) == ("450", "216", "25")

    def test_genus_artifact(self):
        service = TowerService(seed=7)
        artifact = service.genus_artifact(3, service.genus(3, [1, 2, 3]))
        assert isinstance(artifact, GenusArtifact)
        assert [row.genus for row in artifact.rows] == [0, 2, 12]

    def test_genus_console(self):
        rows = TowerService().genus(3, [2, 3])
        text = TowerService.genus_console(rows, with_bound=True)
        assert "deviation" in text
        assert "q^2-1" in text

    def test_supersingular_artifact(self, q3):
        artifact = TowerService(seed=7).supersingular(q3)
        assert artifact.params_digest == q3.digest
        assert len(artifact.literals) == 4
        assert all(len(coeffs) == 4 for coeffs in artifact.invariants)

    def test_enumeration_outputs(self, q3):
        service = TowerService(seed=7, workers=1)
        enumeration = service.enumerate(q3, 2)
        assert counts_csv(enumeration) == "k,count,expected\n1,16,16\n2,48,48\n"
        artifact = service.tower_artifact(enumeration)
        assert isinstance(artifact, TowerArtifact)
        assert "points" in service.counts_console(enumeration)

    def test_ihara_artifact(self):
        service = TowerService(seed=1)
        summary = service.ihara(3, 10)
        artifact = service.ihara_artifact(summary).model_dump()
        assert artifact["q"] == 3
        assert len(artifact["rows"]) == 9
