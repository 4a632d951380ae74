"""
The reduced tower over F_{q^4}.

A level-k point is (j0, w1, ..., wk): j0 a supersingular j-invariant, w1 a
root of Xi^(j0) and every later w a root of the level equation of the one
before it, with the nabla value removed. Points are stored as integer
tuples so they hash and sort in the canonical element order.

The genus and Ihara analytics are exact (Fraction) and need no field.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from src.drinfeld.checks import Report
from src.drinfeld.errors import ConfigError, DegenerateEta, NonInteger, TowerError
from src.drinfeld.ff import FieldElement, FieldVector, FiniteField, all_roots, to_literal
from src.drinfeld.modules import build_minimal
from src.drinfeld.params import TowerParams
from src.drinfeld.printed import supersingular_proof_display, supersingular_simplified
from src.drinfeld.recursion import Xi_eval, Xi_nabla_eval, Xi_nabla_poly, Xi_roots, w_nabla
from src.drinfeld.skew import default_workers

logger = logging.getLogger(__name__)


def _require_reduced(params: TowerParams) -> None:
    if not params.is_reduced:
        raise ConfigError("the tower is only defined in reduced mode (field: mode)")


# =============================================================================
# Supersingular invariants
# =============================================================================


def _z_eta_tau2(params: TowerParams, j: FieldElement) -> tuple[FieldElement, FieldElement]:
    """tau^2 and tau^3 coefficients of a Phi_x + b Phi_y + 1 for Phi = Phi^j over F_{q^4}."""
    fq4 = params.fq4
    module = build_minimal(params, j, 0, fq4)
    a, b, _ = (params.lift(c, fq4) for c in params.z_eta)
    return tuple(a * module.phi_x.coeff(i) + b * module.phi_y.coeff(i) for i in (2, 3))


def supersingular_j_set(params: TowerParams) -> FieldVector:
    """
    All j in F_{q^4}* whose Phi_{z_eta} has a vanishing tau^2 coefficient, in canonical order.

    Raises:
        ConfigError: params are not in reduced mode
        DegenerateEta: the criterion also vanishes at j = 0
    """
    _require_reduced(params)
    fq4 = params.fq4
    if supersingular_proof_display(params, fq4.zero) == 0:
        raise DegenerateEta(f"j = 0 satisfies the supersingular criterion for eta = {to_literal(params.eta)}; pick another eta")
    found = [int(j) for j in fq4.nonzero_elements if _z_eta_tau2(params, j)[0] == 0]
    logger.info(f"Supersingular scan over {fq4}: {len(found)} invariants")
    return fq4.gf(sorted(found))


def supersingular_report(params: TowerParams, js: FieldVector | None = None) -> Report:
    """Cross-checks of the supersingular set against the proof display, F_{q^2} membership and tau^3."""
    js = supersingular_j_set(params) if js is None else js
    q, fq4 = params.q, params.fq4
    report = Report(f"supersingular q={q} eta={to_literal(params.eta)}")
    report.add("size", js.size == q + 1, f"{js.size} invariants, expected {q + 1}")

    display = supersingular_proof_display(params, fq4.nonzero_elements)
    by_display = sorted(int(j) for j in fq4.nonzero_elements[display == 0])
    report.add("proof_display", by_display == [int(j) for j in js], f"display zero set {by_display}")
    report.add("in_fq2", bool((js**(q * q) == js).all()), "j^(q^2) = j")
    report.add("tau3_vanishes", all(_z_eta_tau2(params, j)[1] == 0 for j in js))

    simplified = supersingular_simplified(params, fq4.elements)
    by_simplified = sorted(int(j) for j in fq4.elements[simplified == 0])
    if by_simplified != [int(j) for j in js]:
        logger.warning(f"Simplified supersingular display gives {by_simplified}, direct expansion gives {[int(j) for j in js]}")
    return report


# =============================================================================
# Points
# =============================================================================


@dataclass(frozen=True, order=True)
class TowerPoint:
    """(j0, w1, ..., wk) as integer representatives in F_{q^4}."""
    j0: int
    ws: tuple[int, ...] = ()

    @property
    def level(self) -> int:
        return len(self.ws)

    def values(self, fq4: FiniteField) -> list[FieldElement]:
        return [fq4(v) for v in (self.j0, *self.ws)]

    def extend(self, w: int) -> "TowerPoint":
        return TowerPoint(self.j0, (*self.ws, w))

    def to_list(self) -> list[int]:
        return [self.j0, *self.ws]


def validate_point(params: TowerParams, point: TowerPoint) -> bool:
    """Re-evaluate every level equation of the point and its nabla exclusions."""
    if point.j0 == 0:
        return False
    j0, *ws = point.values(params.fq4)
    try:
        if ws and Xi_eval(params, j0, ws[0], 0) != 0:
            return False
        for i in range(1, len(ws)):
            if Xi_nabla_eval(params, ws[i - 1], ws[i], i) != 0:
                return False
            if ws[i] == w_nabla(params, ws[i - 1], i):
                return False
    except TowerError:
        return False
    return True


def children(params: TowerParams, point: TowerPoint) -> list[TowerPoint]:
    """Every level-(k+1) point above `point`; an invalid point has none."""
    if not validate_point(params, point):
        logger.warning(f"Tower point {point.to_list()} fails its level equations; dropped")
        return []
    fq4 = params.fq4
    j0, *ws = point.values(fq4)
    try:
        if not ws:
            roots = Xi_roots(params, j0, 0, fq4)
            expected = params.q + 1
        else:
            k = len(ws)
            nabla = w_nabla(params, ws[-1], k)
            roots = all_roots(Xi_nabla_poly(params, ws[-1], k), fq4)
            roots = roots[roots != nabla]
            expected = params.q
    except TowerError as exc:
        logger.warning(f"Tower point {point.to_list()} has no level equation: {exc}")
        return []
    if roots.size != expected:
        logger.warning(f"Point {point.to_list()} has {roots.size} children, expected {expected}")
    return [point.extend(int(w)) for w in roots]


def extend_points(params: TowerParams, points: Iterable[TowerPoint], workers: int | None = None) -> list[TowerPoint]:
    """Level k+1 above the given level-k points; duplicate-free and sorted."""
    _require_reduced(params)
    points = sorted(set(points))
    workers = workers or default_workers()
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(lambda pt: children(params, pt), points))
    else:
        batches = [children(params, pt) for pt in points]
    return sorted({child for batch in batches for child in batch})


# =============================================================================
# Enumeration
# =============================================================================


def ss_count(q: int, k: int) -> int:
    """(q+1)^2 q^(k-1) points at level k >= 1; q+1 supersingular invariants at k = 0."""
    return q + 1 if k == 0 else (q + 1) ** 2 * q ** (k - 1)


def prim_count(q: int, k: int) -> int:
    """Primitive I_infinity^k-torsion choices per module: (q+1) q^(k-1)."""
    return 1 if k == 0 else (q + 1) * q ** (k - 1)


def covering_degree(q: int, k: int) -> int:
    """Fiber size of level k+1 over level k."""
    return q + 1 if k == 0 else q


@dataclass
class TowerLevel:
    k: int
    points: list[TowerPoint]
    fibers: Counter = field(default_factory=Counter)

    @property
    def count(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "count": self.count,
            "fibers": {str(size): n for size, n in sorted(self.fibers.items())},
            "points": [p.to_list() for p in self.points],
        }


@dataclass
class TowerEnumeration:
    """Per-level point sets; level 0 holds the bare supersingular invariants."""
    q: int
    params_digest: str
    levels: list[TowerLevel]

    @property
    def counts(self) -> list[int]:
        return [lvl.count for lvl in self.levels[1:]]

    def mismatches(self) -> list[tuple[int, int, int]]:
        """(k, found, expected) for every level off the cardinality formula."""
        return [
            (lvl.k, lvl.count, ss_count(self.q, lvl.k))
            for lvl in self.levels
            if lvl.count != ss_count(self.q, lvl.k)
        ]

    def report(self) -> Report:
        report = Report(f"tower q={self.q}")
        for lvl in self.levels:
            expected = ss_count(self.q, lvl.k)
            fibers = dict(lvl.fibers)
            detail = f"{lvl.count} points, expected {expected}"
            if lvl.k > 0 and set(fibers) - {covering_degree(self.q, lvl.k - 1)}:
                detail += f", fibers {fibers}"
            report.add(f"level_{lvl.k}", lvl.count == expected, detail)
        return report

    def to_dict(self) -> dict:
        return {"params_digest": self.params_digest, "levels": [lvl.to_dict() for lvl in self.levels[1:]]}


def enumerate_tower(params: TowerParams, k_max: int, workers: int | None = None) -> TowerEnumeration:
    """
    Enumerate levels 0..k_max and re-validate every point.

    Raises:
        ConfigError: k_max < 1 or params not in reduced mode
    """
    _require_reduced(params)
    if k_max < 1:
        raise ConfigError(f"k_max must be >= 1, got {k_max} (field: k_max)")
    current = [TowerPoint(int(j)) for j in supersingular_j_set(params)]
    levels = [TowerLevel(0, current)]
    for k in range(1, k_max + 1):
        nxt = extend_points(params, current, workers)
        parents = Counter(TowerPoint(p.j0, p.ws[:-1]) for p in nxt)
        fibers = Counter(parents.get(pt, 0) for pt in current)
        invalid = [p for p in nxt if not validate_point(params, p)]
        for p in invalid:
            logger.warning(f"Enumerated point {p.to_list()} failed re-validation")
        levels.append(TowerLevel(k, nxt, fibers))
        logger.info(f"Level {k}: {len(nxt)} points (expected {ss_count(params.q, k)})")
        current = nxt
    return TowerEnumeration(params.q, params.digest, levels)


# =============================================================================
# Genus and Ihara analytics
# =============================================================================


@dataclass(frozen=True)
class IdealFactorization:
    """Prime degrees and multiplicities (d_i, r_i) of an ideal."""
    primes: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.primes:
            raise ConfigError("a factorization needs at least one prime (field: primes)")
        for d, r in self.primes:
            if d < 1 or r < 1:
                raise ConfigError(f"prime degree and multiplicity must be >= 1, got ({d}, {r})")

    @classmethod
    def power_of_degree_one(cls, k: int) -> "IdealFactorization":
        return cls(((1, k),))

    @property
    def s(self) -> int:
        return len(self.primes)


def epsilon_kappa(fact: IdealFactorization, q: int) -> tuple[int, int]:
    """epsilon = prod q_i^(r_i-1)(q_i+1), kappa = prod (q_i^floor(r_i/2) + q_i^(r_i-floor(r_i/2)-1))."""
    epsilon, kappa = 1, 1
    for d, r in fact.primes:
        qi = q**d
        epsilon *= qi ** (r - 1) * (qi + 1)
        kappa *= qi ** (r // 2) + qi ** (r - r // 2 - 1)
    return epsilon, kappa


def _as_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonInteger(f"{what} evaluates to {value}, not an integer")
    return value.numerator


def genus(q: int, k: int) -> int:
    """Genus of the level-k curve: -1 + q^(k-1)(q+1)/(q-1) - 2/(q-1) (q^floor(k/2) + q^(k-floor(k/2)-1) - 1)."""
    if k < 1:
        raise ConfigError(f"genus needs k >= 1, got {k} (field: k)")
    half = k // 2
    value = (
        -1
        + Fraction(q ** (k - 1) * (q + 1), q - 1)
        - Fraction(2, q - 1) * (q**half + q ** (k - half - 1) - 1)
    )
    return _as_int(value, f"genus({q}, {k})")


def genus_general(q: int, delta: int, pk: tuple[int, int, int], fact: IdealFactorization) -> int:
    """
    Genus of x_0(n) for a ring with infinity of degree delta.

    Args:
        q: Order of the constant field
        delta: Degree of the place at infinity
        pk: The L-polynomial of the function field evaluated at (q, 1, -1)
        fact: Factorization of n
    """
    if delta < 1:
        raise ConfigError(f"delta must be >= 1, got {delta} (field: delta)")
    p_q, p_1, p_minus = pk
    epsilon, kappa = epsilon_kappa(fact, q)
    correction = Fraction(0)
    if delta % 2 and all(d % 2 == 0 for d, _ in fact.primes):
        correction = -Fraction(p_minus * 2 ** (fact.s - 1) * q, q + 1)
    value = (
        1
        + Fraction((q**delta - 1) * epsilon * p_q, (q * q - 1) * (q - 1))
        - Fraction(p_1 * delta, q - 1) * (kappa + 2 ** (fact.s - 1) * (q - 2))
        + correction
    )
    return _as_int(value, f"genus_general(q={q}, delta={delta})")


@dataclass(frozen=True)
class GenusRow:
    k: int
    epsilon: int
    kappa: int
    genus: int
    ss_count: int
    bound: int

    @property
    def ratio(self) -> Fraction | None:
        return Fraction(self.ss_count, self.genus) if self.genus else None

    @property
    def deviation(self) -> Fraction | None:
        """ratio - (q^2 - 1)."""
        ratio = self.ratio
        return None if ratio is None else ratio - self.bound

    def to_dict(self) -> dict:
        ratio = self.ratio
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "kappa": self.kappa,
            "genus": self.genus,
            "ss_count": self.ss_count,
            "ratio_num": None if ratio is None else ratio.numerator,
            "ratio_den": None if ratio is None else ratio.denominator,
        }


def genus_row(q: int, k: int) -> GenusRow:
    epsilon, kappa = epsilon_kappa(IdealFactorization.power_of_degree_one(k), q)
    return GenusRow(k, epsilon, kappa, genus(q, k), ss_count(q, k), q * q - 1)


def genus_table(q: int, ks: Sequence[int]) -> list[GenusRow]:
    return [genus_row(q, k) for k in ks]


@dataclass
class IharaSummary:
    q: int
    rows: list[GenusRow]

    @property
    def bound(self) -> int:
        return self.q * self.q - 1

    @property
    def min_ratio(self) -> Fraction:
        return min(row.ratio for row in self.rows)

    @property
    def decreasing(self) -> bool:
        deviations = [row.deviation for row in self.rows]
        return all(a > b for a, b in zip(deviations, deviations[1:]))

    def report(self) -> Report:
        report = Report(f"ihara q={self.q}")
        report.add("above_bound", all(row.ratio > self.bound for row in self.rows), f"min ratio {float(self.min_ratio):.6f}")
        report.add("decreasing", self.decreasing, f"last deviation {float(self.rows[-1].deviation):.6f}")
        return report


def ihara_table(q: int, k_max: int) -> IharaSummary:
    """Rows k = 2..k_max (genus 0 at k = 1 has no ratio)."""
    if k_max < 2:
        raise ConfigError(f"ihara_table needs k_max >= 2, got {k_max} (field: k_max)")
    return IharaSummary(q, genus_table(q, range(2, k_max + 1)))
