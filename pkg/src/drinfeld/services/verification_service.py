"""
Verification Service.

Runs the identity suites over seeded random specializations and collects
their reports:

    modules        well-definedness and both annihilator oracles, both models and parities
    isogenies      the isogeny square at level one and chains of length two
    factorizations nabla factorizations of the level equations and annihilators
    kernels        annihilator and chain kernel cardinalities
    supersingular  the supersingular set and its cross-checks (reduced mode)

The printed-display reconciliation is carried alongside; its rows are
recorded, not counted as pass/fail.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from tabulate import tabulate

from src.drinfeld.checks import Report
from src.drinfeld.errors import TowerError
from src.drinfeld.ff import FieldElement, to_literal
from src.drinfeld.modules import (
    Ideal,
    Model,
    annihilator,
    build_minimal,
    build_normalized,
    i_infinity_combination,
    j_invariant,
    normalized_to_minimal,
    verify_module,
)
from src.drinfeld.params import TowerParams
from src.drinfeld.printed import ReconciliationRow, reconcile
from src.drinfeld.recursion import (
    Chain,
    Xi_eval,
    Xi_factorization_residual,
    isogeny_square,
    kernel_report,
    nabla_product_minimal,
    nabla_product_normalized,
    next_j,
    random_chain,
    u_nabla,
    verify_chain,
    w_nabla,
    xi_eval,
    xi_factorization_residual,
)
from src.drinfeld.skew import coeff_sigma, split_kernel
from src.drinfeld.tower import supersingular_j_set, supersingular_report

logger = logging.getLogger(__name__)

SUITES = ("modules", "isogenies", "factorizations", "kernels", "supersingular")


def _is_zero_poly(poly) -> bool:
    return bool(np.all(poly.coeffs == 0))


@dataclass
class VerificationOutcome:
    """Reports per suite plus the reconciliation rows."""
    suites: dict[str, list[Report]] = field(default_factory=dict)
    reconciliation: list[ReconciliationRow] = field(default_factory=list)
    chains: list[Chain] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(report.passed for reports in self.suites.values() for report in reports)

    def matrix_rows(self) -> list[list]:
        """
        One row per (suite, check name): passes and failures over all subjects.

        Skipped checks are not counted; a check that was only ever skipped gets status SKIP.
        """
        rows = []
        for suite, reports in self.suites.items():
            tally: dict[str, list[int]] = {}
            for report in reports:
                for check in report.checks:
                    counts = tally.setdefault(check.name, [0, 0, 0])
                    counts[2 if check.skipped else 0 if check.passed else 1] += 1
            for name, (ok, bad, skipped) in tally.items():
                status = "FAIL" if bad else "PASS" if ok else "SKIP"
                rows.append([suite, name, ok, bad, status])
        return rows

    def matrix(self) -> str:
        return tabulate(self.matrix_rows(), headers=["suite", "check", "passed", "failed", "status"])

    def discrepancy_table(self) -> str:
        rows = [[r.name, r.reference, r.samples, r.agreements, r.status, r.witness] for r in self.reconciliation]
        return tabulate(rows, headers=["display", "compared with", "samples", "agree", "status", "witness"])


class VerificationService:
    """
    Seeded verification of one arithmetic context.

    Args:
        params: The context under test
        seed: Seed of every random draw (identical seeds give identical reports)
        samples: Specializations per suite
        max_attempts: Draws allowed when searching for a chain
        workers: Threads for kernel scans
    """

    def __init__(
        self,
        params: TowerParams,
        seed: int = 7,
        samples: int = 20,
        max_attempts: int = 200,
        workers: int | None = None,
    ):
        self.params = params
        self.seed = seed
        self.samples = samples
        self.max_attempts = max_attempts
        self.workers = workers
        self.rng = np.random.default_rng(seed)
        self._combination = ReconciliationRow("i_infinity_combination", "scalar multiple of the I_infinity annihilator")
        self.chains: list[Chain] = []

    # -------------------------------------------------------------------------
    # Sampling
    # -------------------------------------------------------------------------

    def _lambda(self) -> FieldElement:
        return self.params.ambient.random(self.rng)

    def _j(self) -> FieldElement:
        return self.params.fq4.random(self.rng)

    def _chain(self, k: int, model: Model) -> Chain | None:
        field = self.params.ambient
        chain = random_chain(self.params, k, model, self.rng, self.max_attempts, field)
        if chain is None:
            logger.warning(f"No {model.value} chain of length {k} found in {self.max_attempts} attempts")
        return chain

    # -------------------------------------------------------------------------
    # Suites
    # -------------------------------------------------------------------------

    def modules_suite(self) -> list[Report]:
        params = self.params
        reports = []
        for _ in range(self.samples):
            lam, j = self._lambda(), self._j()
            for twist in (0, 1):
                reports.append(verify_module(build_normalized(params, lam, twist)))
                reports.append(verify_module(build_minimal(params, j, twist)))

            conjugation = Report(f"model conjugation lambda={to_literal(lam)}")
            phi_x, phi_y, j_lam = normalized_to_minimal(params, lam)
            minimal = build_minimal(params, j_lam, 0, params.ambient)
            conjugation.add("normalized_to_minimal", phi_x == minimal.phi_x and phi_y == minimal.phi_y)
            reports.append(conjugation)

            combination = i_infinity_combination(params, lam)
            self._combination.record(combination.is_multiple, to_literal(lam))

        reports.append(self._nu_sigma())
        if params.t**params.q == params.t:
            reports.append(self._frobenius_twist())
        return reports

    def _nu_sigma(self) -> Report:
        """nu^sigma = -x/nu agrees with T^(1-q) nu^q for every (q+1)-th root choice of nu."""
        report = Report("nu sigma")
        for index in range(self.params.q + 1):
            params = self.params.with_nu(index)
            report.add("nu_sigma_frobenius_form", params.nu_sigma() == params.nu_sigma_frobenius_form(), f"nu index {index}")
        return report

    def _frobenius_twist(self) -> Report:
        """With t in F_q the sigma-twist is the coefficient Frobenius (minimal model)."""
        params, q = self.params, self.params.q
        report = Report("frobenius twist")
        for _ in range(self.samples):
            j = self._j()
            twisted = build_minimal(params, j**q, 1)
            frobenius = coeff_sigma(build_minimal(params, j, 0).phi_x, lambda a: a**q)
            report.add("sigma_is_frobenius", twisted.phi_x == frobenius, to_literal(j))
        return report

    def isogenies_suite(self) -> list[Report]:
        params = self.params
        reports = []
        for _ in range(self.samples):
            chain = self._chain(1, Model.NORMALIZED)
            if chain is not None:
                reports.append(isogeny_square(params, chain.parameter(0), chain.choice(1)))
        for model in (Model.NORMALIZED, Model.MINIMAL):
            chain = self._chain(2, model)
            if chain is not None:
                self.chains.append(chain)
                reports.append(verify_chain(params, chain))
        return reports

    def factorizations_suite(self) -> list[Report]:
        params = self.params
        reports = []
        for _ in range(self.samples):
            chain = self._chain(1, Model.NORMALIZED)
            if chain is None:
                continue
            lam0, u1 = chain.parameter(0), chain.choice(1)
            lam1 = chain.parameter(1)
            report = Report(f"factorizations lambda_0={to_literal(lam0)}")
            try:
                nabla = u_nabla(params, lam0, u1, 1)
                report.add("xi_factorization", _is_zero_poly(xi_factorization_residual(params, lam1, lam0, u1, 1)))
                report.add("u_nabla_root", xi_eval(params, lam1, nabla, 2) == 0)
                closed = annihilator(params, Model.NORMALIZED, lam0, Ideal.I_INF, 0, chain.field)
                report.add("normalized_annihilator_product", nabla_product_normalized(params, lam0, u1, 1) == closed)

                j0 = j_invariant(params, lam0, 0)
                w1 = u1 / lam0**params.q
                report.add("Xi_factorization", _is_zero_poly(Xi_factorization_residual(params, w1, 1)))
                report.add("w_nabla_root", Xi_eval(params, next_j(params, w1, 1), w_nabla(params, w1, 1), 1) == 0)
                closed = annihilator(params, Model.MINIMAL, j0, Ideal.I_INF, 0, chain.field)
                report.add("minimal_annihilator_product", nabla_product_minimal(params, j0, w1) == closed)
            except TowerError as exc:
                logger.debug(f"Factorization sample skipped: {exc}")
                continue
            reports.append(report)
        return reports

    def kernels_suite(self) -> list[Report]:
        params, q = self.params, self.params.q
        report = Report("annihilator kernels")
        candidates = list(supersingular_j_set(params)) if params.is_reduced else [self._j() for _ in range(3)]
        for j in candidates:
            search = split_kernel(annihilator(params, Model.MINIMAL, j, Ideal.I_INF, 0, params.fq4), workers=self.workers)
            if search.split:
                report.add("annihilator_kernel", search.size == q * q, f"{search.size} elements in {search.ambient}")
        if not report.checks:
            report.add("annihilator_kernel", False, "no annihilator splits within the element bound")
        reports = [report]

        for k in (1, 2, 3):
            chain = random_chain(self.params, k, Model.MINIMAL, self.rng, self.max_attempts)
            if chain is None:
                skipped = Report(f"minimal chain kernels k={k}")
                skipped.skip(f"kernel_size_{k}", f"no chain of length {k} in {self.max_attempts} attempts")
                reports.append(skipped)
                continue
            search = split_kernel(chain.omega, workers=self.workers)
            if not search.split:
                skipped = Report(f"minimal chain kernels k={k}")
                skipped.skip(f"kernel_size_{k}", f"does not split up to {search.ambient}")
                reports.append(skipped)
                continue
            reports.append(kernel_report(chain, search.ambient, self.workers))
        return reports

    def supersingular_suite(self) -> list[Report]:
        if not self.params.is_reduced:
            return []
        return [supersingular_report(self.params)]

    # -------------------------------------------------------------------------
    # Run
    # -------------------------------------------------------------------------

    def run(self, suites: tuple[str, ...] = SUITES, reconcile_displays: bool = True) -> VerificationOutcome:
        outcome = VerificationOutcome()
        for name in suites:
            reports = getattr(self, f"{name}_suite")()
            outcome.suites[name] = reports
            failed = sum(not r.passed for r in reports)
            logger.info(f"Suite {name}: {len(reports)} reports, {failed} with failures")
        if reconcile_displays:
            outcome.reconciliation = reconcile(self.params, self.rng, self.samples, self.max_attempts)
        if self._combination.samples:
            outcome.reconciliation.append(self._combination)
        outcome.chains = list(self.chains)
        return outcome
