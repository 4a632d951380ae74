"""
Tower Service.

Runs the supersingular scan, the point enumeration and the genus/Ihara
tables, and renders them as JSON payloads, CSV text or console tables.
Every number comes from src.drinfeld.tower.
"""

import csv
import io
import logging
from collections.abc import Sequence

from tabulate import tabulate

from src.drinfeld.ff import to_literal
from src.drinfeld.params import TowerParams
from src.drinfeld.schemas import (
    GenusArtifact,
    GenusRowModel,
    IharaArtifact,
    ReportModel,
    SupersingularArtifact,
    TowerArtifact,
)
from src.drinfeld.tower import (
    GenusRow,
    IharaSummary,
    TowerEnumeration,
    enumerate_tower,
    genus_table,
    ihara_table,
    ss_count,
    supersingular_j_set,
    supersingular_report,
)

logger = logging.getLogger(__name__)

GENUS_CSV_COLUMNS = ["k", "epsilon", "kappa", "genus", "ss_count", "ratio_num", "ratio_den"]


def genus_csv(rows: Sequence[GenusRow]) -> str:
    """k,epsilon,kappa,genus,ss_count,ratio_num,ratio_den; empty ratio cells where genus is 0."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=GENUS_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: "" if v is None else v for k, v in row.to_dict().items()})
    return buffer.getvalue()


def counts_csv(enumeration: TowerEnumeration) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["k", "count", "expected"])
    for level in enumeration.levels[1:]:
        writer.writerow([level.k, level.count, ss_count(enumeration.q, level.k)])
    return buffer.getvalue()


class TowerService:
    """Tower computations for one seed (recorded in every artifact)."""

    def __init__(self, seed: int = 7, workers: int | None = None):
        self.seed = seed
        self.workers = workers

    def supersingular(self, params: TowerParams) -> SupersingularArtifact:
        js = supersingular_j_set(params)
        report = supersingular_report(params, js)
        return SupersingularArtifact(
            seed=self.seed,
            params_digest=params.digest,
            invariants=[params.fq4.coeffs(j) for j in js],
            literals=[to_literal(j) for j in js],
            report=ReportModel.from_report(report),
        )

    def enumerate(self, params: TowerParams, k_max: int) -> TowerEnumeration:
        enumeration = enumerate_tower(params, k_max, self.workers)
        for k, found, expected in enumeration.mismatches():
            logger.warning(f"Level {k}: {found} points, expected {expected}")
        return enumeration

    def tower_artifact(self, enumeration: TowerEnumeration) -> TowerArtifact:
        return TowerArtifact.from_enumeration(enumeration, self.seed)

    def genus(self, q: int, ks: Sequence[int]) -> list[GenusRow]:
        return genus_table(q, ks)

    def genus_artifact(self, q: int, rows: Sequence[GenusRow]) -> GenusArtifact:
        return GenusArtifact(seed=self.seed, q=q, rows=[GenusRowModel.from_row(r) for r in rows])

    def ihara(self, q: int, k_max: int) -> IharaSummary:
        return ihara_table(q, k_max)

    def ihara_artifact(self, summary: IharaSummary) -> IharaArtifact:
        return IharaArtifact.from_summary(summary, self.seed)

    @staticmethod
    def genus_console(rows: Sequence[GenusRow], with_bound: bool = False) -> str:
        headers = ["k", "epsilon", "kappa", "genus", "ss_count", "ratio"]
        if with_bound:
            headers += ["q^2-1", "deviation"]
        body = []
        for row in rows:
            ratio = row.ratio
            line = [row.k, row.epsilon, row.kappa, row.genus, row.ss_count, "-" if ratio is None else f"{float(ratio):.6f}"]
            if with_bound:
                line += [row.bound, "-" if ratio is None else f"{float(row.deviation):.6f}"]
            body.append(line)
        return tabulate(body, headers=headers)

    @staticmethod
    def counts_console(enumeration: TowerEnumeration) -> str:
        body = [[lvl.k, lvl.count, dict(sorted(lvl.fibers.items()))] for lvl in enumeration.levels]
        return tabulate(body, headers=["k", "points", "fibers (children: parents)"])
