"""
Rank-two Drinfeld modules on the degree-two-infinity line.

Two parametrizations are built: the normalized model phi^lambda (LT(phi_x) = 1,
needs nu) and the minimal model Phi^j (nu-free). Both are products
(left factor) * R where R is the I_infinity annihilator. A twist level k uses
the sigma^k data of params.level(k).
"""

import dataclasses
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.drinfeld.checks import Report
from src.drinfeld.errors import ZeroJ, ZeroLambda
from src.drinfeld.ff import FieldElement, FiniteField, field_of, to_literal
from src.drinfeld.params import LevelData, TowerParams
from src.drinfeld.skew import SkewPoly, right_gcd_monic, scalar_conjugate

logger = logging.getLogger(__name__)


class Model(str, Enum):
    NORMALIZED = "normalized"
    MINIMAL = "minimal"


class Ideal(str, Enum):
    I_INF = "Iinf"
    I_0 = "I0"


class TypeTag(str, Enum):
    """LT(phi_y)/LT(phi_x): zeta^q for even twist levels, zeta for odd ones."""
    ZETA_Q = "zeta_q"
    ZETA = "zeta"

    @classmethod
    def for_level(cls, k: int) -> "TypeTag":
        return cls.ZETA if k % 2 else cls.ZETA_Q


@dataclass(frozen=True)
class ModelFactors:
    """phi_x = left_x * right, phi_y = left_y * right; i0 is the I_0 annihilator."""
    left_x: SkewPoly
    left_y: SkewPoly
    right: SkewPoly
    i0: SkewPoly


@dataclass(frozen=True)
class DrinfeldModule:
    """The pair (phi_x, phi_y) with its model, type and parameter."""
    phi_x: SkewPoly
    phi_y: SkewPoly
    model: Model
    type_tag: TypeTag
    parameter: FieldElement
    twist_level: int
    level: LevelData
    factors: ModelFactors | None = None

    @property
    def field(self) -> FiniteField:
        return self.phi_x.field

    @property
    def q(self) -> int:
        return self.phi_x.twist_q

    def replace(self, **changes) -> "DrinfeldModule":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "type_tag": self.type_tag.value,
            "twist_level": self.twist_level,
            "parameter": self.field.coeffs(self.parameter),
            "phi_x": self.phi_x.to_dict(),
            "phi_y": self.phi_y.to_dict(),
        }

    def __str__(self) -> str:
        return (
            f"{self.model.value} module ({self.type_tag.value}-type, k={self.twist_level}, "
            f"parameter {to_literal(self.parameter)})"
        )


def _poly(L: LevelData, *coeffs: FieldElement) -> SkewPoly:
    return SkewPoly.from_coeffs(L.field, L.q, list(coeffs))


def _work_field(params: TowerParams, value: FieldElement, field: FiniteField | None) -> FiniteField:
    if field is not None:
        return field
    source = field_of(value)
    return source if source.m > params.fq4.m else params.fq4


# =============================================================================
# Normalized model
# =============================================================================


def normalized_factors(L: LevelData, lam: FieldElement) -> ModelFactors:
    """Factors of phi^lambda at the twist described by L."""
    q = L.q
    lam_q2 = lam ** (q * q)
    nu = L.nu
    const = nu * lam ** (q - 1)
    alpha = lam_q2 * L.c1 + nu / (L.zeta * L.T * lam)
    t_factor = L.T_sigma**q / (L.T**q * L.T_sigma)
    shared = -nu * t_factor / (L.zeta * lam_q2)
    gap = L.zeta - L.zeta_q
    alpha_bar = shared + L.zeta_q * lam / gap
    beta_bar = shared + L.zeta * lam / gap
    one = L.field.one

    right = _poly(L, const, alpha, one)
    left_x = _poly(L, L.x / const, alpha_bar, one)
    left_y = _poly(L, L.y / const, L.zeta_q * beta_bar, L.zeta_q)
    i0 = _poly(
        L,
        const + const / (L.zeta_q * L.T),
        alpha + (one - L.zeta_q / L.zeta) * nu / (L.zeta_q * L.T * lam),
        one,
    )
    return ModelFactors(left_x, left_y, right, i0)


def build_normalized(
    params: TowerParams, lam: FieldElement, twist_level: int = 0, field: FiniteField | None = None
) -> DrinfeldModule:
    """
    phi^lambda twisted by sigma^k.

    Defaults to the ambient field, which always holds nu.

    Raises:
        ZeroLambda: if lambda is zero
        AmbientTooSmall: if `field` cannot hold nu
    """
    if int(lam) == 0:
        raise ZeroLambda("lambda must be nonzero")
    field = field or (field_of(lam) if field_of(lam).m > params.ambient.m else params.ambient)
    L = params.level(twist_level, field)
    lam = params.lift(lam, field)
    factors = normalized_factors(L, lam)
    return DrinfeldModule(
        phi_x=factors.left_x * factors.right,
        phi_y=factors.left_y * factors.right,
        model=Model.NORMALIZED,
        type_tag=TypeTag.for_level(twist_level),
        parameter=lam,
        twist_level=twist_level,
        level=L,
        factors=factors,
    )


def j_invariant(params: TowerParams, lam: FieldElement, twist_level: int = 0) -> FieldElement:
    """lambda^(q^2+1) / nu^(sigma^k), in the ambient field (or lambda's, if larger)."""
    if int(lam) == 0:
        raise ZeroLambda("lambda must be nonzero")
    field = field_of(lam) if field_of(lam).m > params.ambient.m else params.ambient
    L = params.level(twist_level, field)
    lam = params.lift(lam, field)
    return lam ** (params.q**2 + 1) / L.nu


# =============================================================================
# Minimal model
# =============================================================================


def minimal_factors(L: LevelData, j: FieldElement) -> ModelFactors:
    """Factors of Phi^j at the twist described by L; nu never enters."""
    q = L.q
    one = L.field.one
    z, zq, T, Ts = L.zeta, L.zeta_q, L.T, L.T_sigma
    zeta_qm1 = zq / z
    both = Ts * T**q
    top = -(j ** (q * (q + 1))) * both**q

    right = _poly(L, one / j, L.c1 + one / (z * T * j), one)
    left_x = _poly(L, L.x * j, Ts**q * j**q / z + j ** (q + 1) * both * L.c1, top)
    left_y = _poly(
        L,
        L.y * j,
        zeta_qm1 * j**q * Ts**q - zq * both * j ** (q + 1) / (one - zeta_qm1),
        top * zq,
    )
    i0 = _poly(L, (one / (zq * T) + one) / j, L.c1 + one / (zq * T * j), one)
    return ModelFactors(left_x, left_y, right, i0)


def build_minimal(
    params: TowerParams, j: FieldElement, twist_level: int = 0, field: FiniteField | None = None
) -> DrinfeldModule:
    """
    Phi^j twisted by sigma^k, over F_{q^4} unless j or `field` says otherwise.

    Raises:
        ZeroJ: if j is zero
    """
    if int(j) == 0:
        raise ZeroJ("j must be nonzero")
    field = _work_field(params, j, field)
    L = params.level(twist_level, field)
    j = params.lift(j, field)
    factors = minimal_factors(L, j)
    return DrinfeldModule(
        phi_x=factors.left_x * factors.right,
        phi_y=factors.left_y * factors.right,
        model=Model.MINIMAL,
        type_tag=TypeTag.for_level(twist_level),
        parameter=j,
        twist_level=twist_level,
        level=L,
        factors=factors,
    )


# =============================================================================
# Annihilators
# =============================================================================


def annihilator(
    params: TowerParams,
    model: Model | str,
    parameter: FieldElement,
    ideal: Ideal | str = Ideal.I_INF,
    twist_level: int = 0,
    field: FiniteField | None = None,
) -> SkewPoly:
    """The closed-form monic degree-2 annihilator of I_infinity or I_0."""
    model, ideal = Model(model), Ideal(ideal)
    if model is Model.NORMALIZED:
        module = build_normalized(params, parameter, twist_level, field)
    else:
        module = build_minimal(params, parameter, twist_level, field)
    return module.factors.right if ideal is Ideal.I_INF else module.factors.i0


def i0_generator_shift(L: LevelData) -> FieldElement:
    """x - zeta^(-q-1) and y generate I_0."""
    return np.reciprocal(L.zeta * L.zeta_q)


def gcd_annihilator(module: DrinfeldModule, ideal: Ideal | str = Ideal.I_INF) -> SkewPoly:
    """Annihilator recomputed as a right gcd of the generator images."""
    if Ideal(ideal) is Ideal.I_INF:
        return right_gcd_monic(module.phi_x, module.phi_y)
    shift = SkewPoly.from_coeffs(module.field, module.q, [i0_generator_shift(module.level)])
    return right_gcd_monic(module.phi_x - shift, module.phi_y)


# =============================================================================
# Model comparison
# =============================================================================


def normalized_to_minimal(params: TowerParams, lam: FieldElement, twist_level: int = 0) -> tuple[SkewPoly, SkewPoly, FieldElement]:
    """
    Conjugate phi^lambda by a constant l with l^(q-1) = lambda^q.

    Returns (conjugated phi_x, conjugated phi_y, j(lambda)); they equal the
    minimal model at j(lambda).
    """
    module = build_normalized(params, lam, twist_level)
    scale_pow = module.parameter**params.q
    return (
        scalar_conjugate(module.phi_x, scale_pow),
        scalar_conjugate(module.phi_y, scale_pow),
        j_invariant(params, lam, twist_level),
    )


@dataclass(frozen=True)
class LinearCombination:
    """P = (tau + A) phi_y - (zeta tau + B) phi_x compared against the annihilator."""
    combination: SkewPoly
    annihilator: SkewPoly
    is_multiple: bool
    recovered_c: FieldElement | None
    solved_delta: FieldElement | None


def i_infinity_combination(params: TowerParams, lam: FieldElement) -> LinearCombination:
    """
    Rebuild the degree-one cofactor combination of phi_x and phi_y.

    A = zeta lambda^q/(zeta - zeta^q), B = zeta^2 lambda^q/(zeta - zeta^q). If P
    is a scalar multiple C * R of the annihilator R, C is recovered and the
    delta in C = T lambda^q / ((1 - zeta^(q-1)) delta) is solved for.
    """
    module = build_normalized(params, lam)
    L, lam = module.level, module.parameter
    q = params.q
    gap = L.zeta - L.zeta_q
    a = L.zeta * lam**q / gap
    b = L.zeta**2 * lam**q / gap
    left = SkewPoly.linear(L.field, q, L.field.one, a) * module.phi_y
    right = SkewPoly.linear(L.field, q, L.zeta, b) * module.phi_x
    combination = left - right
    annihilator_poly = module.factors.right

    c = None
    is_multiple = False
    delta = None
    if not combination.is_zero and combination.degree == annihilator_poly.degree:
        c = combination.lead
        is_multiple = combination == annihilator_poly.scale(c)
        if is_multiple:
            delta = L.T * lam**q / ((L.field.one - L.zeta_q / L.zeta) * c)
    logger.debug(f"I_infinity combination: degree {combination.degree}, multiple={is_multiple}")
    return LinearCombination(combination, annihilator_poly, is_multiple, c, delta)


# =============================================================================
# Verification
# =============================================================================


def verify_module(module: DrinfeldModule) -> Report:
    """
    Check the defining properties of a module; failures become report rows.

    Covers degrees, leading terms, the algebra relation
    y^2 - (zeta+zeta^q) x y + zeta^(q+1) x^2 - x = 0, commutation, constant
    terms and both annihilators against right gcds.
    """
    L = module.level
    field, q = module.field, module.q
    phi_x, phi_y = module.phi_x, module.phi_y
    report = Report(str(module))

    report.add("degree", phi_x.degree == 4 and phi_y.degree == 4, f"deg {phi_x.degree}, {phi_y.degree}")

    if module.model is Model.NORMALIZED:
        report.add("leading_x", int(phi_x.lead) == 1, to_literal(phi_x.lead))
    expected_ratio = L.zeta_q
    ratio = phi_y.lead / phi_x.lead if not (phi_x.is_zero or phi_y.is_zero) else field.zero
    report.add("type", ratio == expected_ratio, f"{to_literal(ratio)} for {module.type_tag.value}-type")

    zeta_sum = SkewPoly.from_coeffs(field, q, [L.zeta + L.zeta_q])
    zeta_norm = SkewPoly.from_coeffs(field, q, [L.zeta * L.zeta_q])
    relation = phi_y * phi_y - zeta_sum * phi_x * phi_y + zeta_norm * phi_x * phi_x - phi_x
    report.add("algebra_relation", relation.is_zero, f"residual degree {relation.degree}")

    commutator = phi_x * phi_y - phi_y * phi_x
    report.add("commutation", commutator.is_zero, f"residual degree {commutator.degree}")

    report.add(
        "constant_terms",
        phi_x.coeff(0) == L.x and phi_y.coeff(0) == L.y,
        f"{to_literal(phi_x.coeff(0))}, {to_literal(phi_y.coeff(0))}",
    )

    if module.factors is not None:
        for ideal, closed in ((Ideal.I_INF, module.factors.right), (Ideal.I_0, module.factors.i0)):
            found = gcd_annihilator(module, ideal) if not (phi_x.is_zero and phi_y.is_zero) else None
            report.add(f"gcd_{ideal.value}", found is not None and found == closed, str(found))

    if not report.passed:
        logger.warning(f"{module}: {[c.name for c in report.failures]} failed")
    return report
