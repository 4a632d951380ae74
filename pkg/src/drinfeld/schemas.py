"""
Wire models for the JSON artifacts.

Field elements travel as ascending coefficient lists over F_p; tower points
travel as integer representatives (the canonical order).
"""

from pydantic import BaseModel, Field

from src.drinfeld.checks import Report
from src.drinfeld.modules import DrinfeldModule
from src.drinfeld.params import TowerParams
from src.drinfeld.printed import ReconciliationRow
from src.drinfeld.recursion import Chain, chain_modules
from src.drinfeld.skew import SkewPoly
from src.drinfeld.tower import GenusRow, IharaSummary, TowerEnumeration


class FieldModel(BaseModel):
    p: int
    m: int
    modulus: list[int]


class ParamsModel(BaseModel):
    """Resolved arithmetic context."""
    q: int
    mode: str
    zeta: list[int]
    eta: list[int] | None = None
    t: list[int]
    nu: list[int]
    nu_degree: int
    ambient: FieldModel
    digest: str

    @classmethod
    def from_params(cls, params: TowerParams) -> "ParamsModel":
        return cls(**params.to_dict(), digest=params.digest)


class SkewPolyModel(BaseModel):
    twist_q: int
    coeffs: list[list[int]]

    @classmethod
    def from_poly(cls, poly: SkewPoly) -> "SkewPolyModel":
        return cls(**poly.to_dict())


class ModuleModel(BaseModel):
    """{model, type_tag, twist_level, parameter, phi_x, phi_y}."""
    model: str
    type_tag: str
    twist_level: int
    parameter: list[int]
    phi_x: SkewPolyModel
    phi_y: SkewPolyModel

    @classmethod
    def from_module(cls, module: DrinfeldModule) -> "ModuleModel":
        return cls(**module.to_dict())


class ChainLevelModel(BaseModel):
    k: int
    param: list[int]
    torsion_choice: list[int] | None = None


class ChainModel(BaseModel):
    """A chain with its source and target modules: {model, start, levels, omega, source, target}."""
    model: str
    start: list[int]
    levels: list[ChainLevelModel]
    omega: SkewPolyModel
    source: ModuleModel
    target: ModuleModel

    @classmethod
    def from_chain(cls, params: TowerParams, chain: Chain) -> "ChainModel":
        source, target = chain_modules(params, chain)
        return cls(
            **chain.to_dict(),
            source=ModuleModel.from_module(source),
            target=ModuleModel.from_module(target),
        )


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    skipped: bool = False


class ReportModel(BaseModel):
    subject: str
    passed: bool
    checks: list[CheckModel]

    @classmethod
    def from_report(cls, report: Report) -> "ReportModel":
        return cls(**report.to_dict())


class ReconciliationModel(BaseModel):
    """One printed display against its derivation-chain counterpart."""
    name: str
    reference: str
    samples: int
    agreements: int
    status: str
    witness: str = ""
    notes: list[str] = Field(default_factory=list)

    @classmethod
    def from_row(cls, row: ReconciliationRow) -> "ReconciliationModel":
        return cls(**row.to_dict())


class VerificationArtifact(BaseModel):
    command: str = "verify"
    seed: int
    params: ParamsModel
    passed: bool
    suites: dict[str, list[ReportModel]]
    reconciliation: list[ReconciliationModel] = Field(default_factory=list)
    chains: list[ChainModel] = Field(default_factory=list)


class SupersingularArtifact(BaseModel):
    command: str = "supersingular"
    seed: int
    params_digest: str
    invariants: list[list[int]]
    literals: list[str]
    report: ReportModel


class TowerLevelModel(BaseModel):
    k: int
    count: int
    fibers: dict[str, int] = Field(default_factory=dict)
    points: list[list[int]]


class TowerArtifact(BaseModel):
    """Point sets per level: {params_digest, levels: [{k, count, points}]}."""
    command: str = "enumerate"
    seed: int
    params_digest: str
    counts: list[int]
    levels: list[TowerLevelModel]

    @classmethod
    def from_enumeration(cls, enumeration: TowerEnumeration, seed: int) -> "TowerArtifact":
        payload = enumeration.to_dict()
        return cls(seed=seed, counts=enumeration.counts, **payload)


class GenusRowModel(BaseModel):
    k: int
    epsilon: int
    kappa: int
    genus: int
    ss_count: int
    ratio_num: int | None = None
    ratio_den: int | None = None

    @classmethod
    def from_row(cls, row: GenusRow) -> "GenusRowModel":
        return cls(**row.to_dict())


class GenusArtifact(BaseModel):
    command: str = "genus"
    seed: int
    q: int
    rows: list[GenusRowModel]


class IharaArtifact(BaseModel):
    command: str = "ihara"
    seed: int
    q: int
    bound: int
    min_ratio_num: int
    min_ratio_den: int
    decreasing: bool
    rows: list[GenusRowModel]

    @classmethod
    def from_summary(cls, summary: IharaSummary, seed: int) -> "IharaArtifact":
        return cls(
            seed=seed,
            q=summary.q,
            bound=summary.bound,
            min_ratio_num=summary.min_ratio.numerator,
            min_ratio_den=summary.min_ratio.denominator,
            decreasing=summary.decreasing,
            rows=[GenusRowModel.from_row(row) for row in summary.rows],
        )
