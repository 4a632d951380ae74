"""
Level-by-level isogeny recursion.

Normalized coordinates: lambda_k and u_k with
    xi(u) = u^(q+1) + alpha u + nu lambda^(q-1)          (twist k-1)
    lambda_k = lambda_(k-1)^q - (zeta_m^(q-1) - 1) u_k
Minimal coordinates: j_k and w_k with
    Xi(w) = w^(q+1) + (c1 + 1/(zeta T j)) w + 1/j         (twist of j)
    j_k = next_j(w_k, k)
Every level-k formula reads its zeta, T, T^sigma and nu from params.level(k - 1).
Polynomials in u or w are ascending coefficient FieldArrays.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import galois
import numpy as np

from src.drinfeld.checks import Report
from src.drinfeld.errors import (
    AmbiguousRoot,
    FieldMismatch,
    InvalidChoice,
    PoleJZero,
    PoleW,
    ZeroJ,
    ZeroLambda,
    ZeroU,
    ZeroW,
)
from src.drinfeld.ff import FieldElement, FieldVector, FiniteField, all_roots, field_of, nth_roots
from src.drinfeld.modules import (
    DrinfeldModule,
    Model,
    build_minimal,
    build_normalized,
    j_invariant,
    minimal_factors,
    normalized_factors,
)
from src.drinfeld.params import LevelData, TowerParams
from src.drinfeld.skew import SkewPoly, kernel_elements, scalar_conjugate, split_kernel

logger = logging.getLogger(__name__)


# =============================================================================
# Helpers
# =============================================================================


def working_field(params: TowerParams, values: Sequence[FieldElement], need_nu: bool) -> FiniteField:
    """Smallest working field holding every value (and nu when needed)."""
    base = params.ambient if need_nu else params.fq4
    for value in values:
        source = field_of(value)
        if source.m > base.m:
            base = source
    return base


def _prepare(params: TowerParams, values: Sequence[FieldElement], k: int, need_nu: bool):
    field = working_field(params, values, need_nu)
    lifted = [params.lift(v, field) for v in values]
    return params.level(k, field), lifted


def _poly_eval(coeffs: FieldElement, value: FieldElement) -> FieldElement:
    return galois.Poly(coeffs[::-1])(value)


def _descending_powers(v: FieldElement, q: int, field: FiniteField) -> FieldElement:
    """[0, v^(q-1), v^(q-2), ..., 1]: coefficient of w^e is v^(q-e) for e >= 1."""
    coeffs = field.gf(np.zeros(q + 1, dtype=np.int64))
    for e in range(1, q + 1):
        coeffs[e] = v ** (q - e)
    return coeffs


def factor_residual(full: FieldElement, cofactor: FieldElement, root: FieldElement) -> galois.Poly:
    """full - cofactor * (w - root), as a galois polynomial (zero iff the factorization holds)."""
    linear = galois.Poly([1, 0], field=type(root)) - galois.Poly(root.reshape(1))
    return galois.Poly(full[::-1]) - galois.Poly(cofactor[::-1]) * linear


# =============================================================================
# Normalized recursion
# =============================================================================


@dataclass(frozen=True)
class NormalizedLevel:
    """lambda_k and the torsion coordinate u_k that produced it (None at k = 0)."""
    k: int
    lam: FieldElement
    u: FieldElement | None = None


def xi_poly(params: TowerParams, lam_prev: FieldElement, k: int, field: FiniteField | None = None) -> FieldElement:
    """Coefficients of xi^(sigma^(k-1); lambda_(k-1)) in u."""
    if int(lam_prev) == 0:
        raise ZeroLambda("lambda must be nonzero")
    field = field or working_field(params, [lam_prev], need_nu=True)
    L = params.level(k - 1, field)
    right = normalized_factors(L, params.lift(lam_prev, field)).right
    coeffs = L.field.gf(np.zeros(params.q + 2, dtype=np.int64))
    coeffs[0] = right.coeff(0)
    coeffs[1] = right.coeff(1)
    coeffs[-1] = 1
    return coeffs


def xi_eval(params: TowerParams, lam_prev: FieldElement, u: FieldElement, k: int) -> FieldElement:
    """xi at level k (twist k-1) evaluated at u."""
    field = working_field(params, [lam_prev, u], need_nu=True)
    return _poly_eval(xi_poly(params, lam_prev, k, field), params.lift(u, field))


def xi_roots(params: TowerParams, lam_prev: FieldElement, k: int, field: FiniteField | None = None) -> FieldVector:
    field = field or working_field(params, [lam_prev], need_nu=True)
    return all_roots(xi_poly(params, lam_prev, k, field), field)


def next_lambda(params: TowerParams, lam_prev: FieldElement, u: FieldElement, k: int) -> FieldElement:
    """lambda_k = lambda_(k-1)^q - (zeta^(q^k - q^(k-1)) - 1) u."""
    L, (lam, u) = _prepare(params, [lam_prev, u], k - 1, need_nu=False)
    return lam**params.q - (L.zeta_q / L.zeta - L.field.one) * u


def u_nabla(params: TowerParams, lam_prev: FieldElement, u: FieldElement, k: int) -> FieldElement:
    """The companion root nu lambda^(q-1)/u of the annihilator at twist k-1."""
    if int(u) == 0:
        raise ZeroU("u must be nonzero")
    L, (lam, u) = _prepare(params, [lam_prev, u], k - 1, need_nu=True)
    return L.nu * lam ** (params.q - 1) / u


def xi_nabla_poly(
    params: TowerParams, lam_i: FieldElement, lam_prev: FieldElement, u_i: FieldElement, i: int
) -> FieldElement:
    """
    Coefficients in u_(i+1) of the cofactor of (u - u_i^nabla) in xi^(sigma^i; lambda_i).

    Constant term -lambda_i^(q-1) nu^(sigma^i) u_i / (nu^(sigma^(i-1)) lambda_(i-1)^(q-1)).
    """
    if int(lam_i) == 0 or int(lam_prev) == 0:
        raise ZeroLambda("lambda must be nonzero")
    q = params.q
    nabla = u_nabla(params, lam_prev, u_i, i)
    field = working_field(params, [lam_i, lam_prev, u_i, nabla], need_nu=True)
    here, before = params.level(i, field), params.level(i - 1, field)
    lam_i, lam_prev, u_i = (params.lift(v, field) for v in (lam_i, lam_prev, u_i))
    coeffs = _descending_powers(params.lift(nabla, field), q, field)
    coeffs[0] = -(lam_i ** (q - 1)) * here.nu * u_i / (before.nu * lam_prev ** (q - 1))
    return coeffs


def xi_nabla_eval(
    params: TowerParams, lam_i: FieldElement, lam_prev: FieldElement, u_i: FieldElement, u_next: FieldElement, i: int
) -> FieldElement:
    coeffs = xi_nabla_poly(params, lam_i, lam_prev, u_i, i)
    return _poly_eval(coeffs, params.lift(u_next, field_of(coeffs)))


def xi_factorization_residual(
    params: TowerParams, lam_i: FieldElement, lam_prev: FieldElement, u_i: FieldElement, i: int
) -> galois.Poly:
    """xi^(sigma^i; lambda_i) - xi_nabla * (u - u_i^nabla); zero on valid chains."""
    cofactor = xi_nabla_poly(params, lam_i, lam_prev, u_i, i)
    field = field_of(cofactor)
    full = xi_poly(params, params.lift(lam_i, field), i + 1, field)
    nabla = params.lift(u_nabla(params, lam_prev, u_i, i), field)
    return factor_residual(full, cofactor, nabla)


def nabla_product_normalized(params: TowerParams, lam_prev: FieldElement, u: FieldElement, k: int) -> SkewPoly:
    """(tau - u^nabla)(tau - u); equals the I_infinity annihilator when xi(u) = 0."""
    nabla = u_nabla(params, lam_prev, u, k)
    field = field_of(nabla)
    one = field.one
    u = params.lift(u, field)
    return SkewPoly.linear(field, params.q, one, -nabla) * SkewPoly.linear(field, params.q, one, -u)


# =============================================================================
# Minimal recursion
# =============================================================================


@dataclass(frozen=True)
class MinimalLevel:
    """j_k, the w_k that produced it and delta_k^(q-1) (None at k = 0)."""
    k: int
    j: FieldElement
    w: FieldElement | None = None
    delta_pow: FieldElement | None = None


def _zeta_ratio(L: LevelData) -> FieldElement:
    """zeta_m^(1-q)."""
    return L.zeta / L.zeta_q


def Xi_poly(params: TowerParams, j: FieldElement, k: int, field: FiniteField | None = None) -> FieldElement:
    """Coefficients of Xi^(sigma^k; j) in w."""
    if int(j) == 0:
        raise ZeroJ("j must be nonzero")
    field = field or working_field(params, [j], need_nu=False)
    L = params.level(k, field)
    right = minimal_factors(L, params.lift(j, field)).right
    coeffs = field.gf(np.zeros(params.q + 2, dtype=np.int64))
    coeffs[0] = right.coeff(0)
    coeffs[1] = right.coeff(1)
    coeffs[-1] = 1
    return coeffs


def Xi_eval(params: TowerParams, j: FieldElement, w: FieldElement, k: int) -> FieldElement:
    field = working_field(params, [j, w], need_nu=False)
    return _poly_eval(Xi_poly(params, j, k, field), params.lift(w, field))


def Xi_roots(params: TowerParams, j: FieldElement, k: int, field: FiniteField | None = None) -> FieldVector:
    field = field or working_field(params, [j], need_nu=False)
    return all_roots(Xi_poly(params, j, k, field), field)


def j_from_w(params: TowerParams, w: FieldElement, k: int = 1) -> FieldElement:
    """
    j_(k-1) generated by a root w_k:
    (zeta^(1-q) - 1)(1 + w/(zeta T)) / (w (1 + (1 - zeta^(1-q)) w^q)) at twist k-1.

    Raises:
        ZeroW: w is zero
        PoleW: the denominator vanishes
        PoleJZero: the numerator vanishes (w maps to j = 0)
    """
    if int(w) == 0:
        raise ZeroW("w must be nonzero")
    L, (w,) = _prepare(params, [w], k - 1, need_nu=False)
    one = L.field.one
    ratio = _zeta_ratio(L)
    denominator = w * (one + (one - ratio) * w**params.q)
    if denominator == 0:
        raise PoleW(f"j-map denominator vanishes at w = {int(w)}")
    numerator = (ratio - one) * (one + w / (L.zeta * L.T))
    if numerator == 0:
        raise PoleJZero(f"w = {int(w)} maps to j = 0")
    return numerator / denominator


def delta_pow(params: TowerParams, w: FieldElement, k: int) -> FieldElement:
    """delta_k^(q-1) = 1/(1 + (1 - zeta^(1-q)) w_k^q) at twist k-1."""
    L, (w,) = _prepare(params, [w], k - 1, need_nu=False)
    one = L.field.one
    denominator = one + (one - _zeta_ratio(L)) * w**params.q
    if denominator == 0:
        raise PoleW(f"delta denominator vanishes at w = {int(w)}")
    return np.reciprocal(denominator)


def next_j(params: TowerParams, w: FieldElement, k: int) -> FieldElement:
    """j_k = T^-1 (zeta^(q-1) - 1)(1 + (1 - zeta^(q-1)) w)(T^q w^-q + zeta^-q) at twist k-1."""
    if int(w) == 0:
        raise ZeroW("w must be nonzero")
    L, (w,) = _prepare(params, [w], k - 1, need_nu=False)
    one = L.field.one
    b = L.zeta_q / L.zeta
    q = params.q
    return (b - one) * (one + (one - b) * w) * (L.T**q / w**q + one / L.zeta_q) / L.T


def next_j_from_j(params: TowerParams, j_prev: FieldElement, w: FieldElement, k: int) -> FieldElement:
    """j_k = T^(q-1) j_(k-1)^q (1 + (1 - zeta^(q-1)) w)^(q^2+1) at twist k-1."""
    L, (j_prev, w) = _prepare(params, [j_prev, w], k - 1, need_nu=False)
    one = L.field.one
    q = params.q
    b = L.zeta_q / L.zeta
    return L.T ** (q - 1) * j_prev**q * (one + (one - b) * w) ** (q * q + 1)


def w_nabla(params: TowerParams, w: FieldElement, k: int) -> FieldElement:
    """w_k^nabla = 1/((zeta^(1-q) - 1)(1 + w/(zeta T))) at twist k-1; always a root of the next Xi."""
    L, (w,) = _prepare(params, [w], k - 1, need_nu=False)
    one = L.field.one
    denominator = (_zeta_ratio(L) - one) * (one + w / (L.zeta * L.T))
    if denominator == 0:
        raise PoleW(f"w_nabla has a pole at w = {int(w)}")
    return np.reciprocal(denominator)


def Xi_nabla_poly(params: TowerParams, w: FieldElement, k: int) -> FieldElement:
    """
    Coefficients in w_(k+1) of the level equation left after removing w_k^nabla.

    Constant term -w_k^q/(1 - (zeta^(q-1) - 1) w_k) (w_k^nabla/T)^(q-1); the
    coefficient of w^e is (w_k^nabla)^(q-e).
    """
    if int(w) == 0:
        raise ZeroW("w must be nonzero")
    nabla = w_nabla(params, w, k)
    L, (w,) = _prepare(params, [w], k - 1, need_nu=False)
    one = L.field.one
    q = params.q
    b = L.zeta_q / L.zeta
    denominator = one - (b - one) * w
    if denominator == 0:
        raise PoleW(f"level equation has a pole at w = {int(w)}")
    coeffs = _descending_powers(nabla, q, L.field)
    coeffs[0] = -(w**q) / denominator * (nabla / L.T) ** (q - 1)
    return coeffs


def Xi_nabla_eval(params: TowerParams, w: FieldElement, w_next: FieldElement, k: int) -> FieldElement:
    coeffs = Xi_nabla_poly(params, w, k)
    return _poly_eval(coeffs, params.lift(w_next, field_of(coeffs)))


def Xi_factorization_residual(params: TowerParams, w: FieldElement, k: int) -> galois.Poly:
    """Xi^(sigma^k; j_k) - Xi_nabla * (w - w_k^nabla) with j_k = next_j(w, k)."""
    cofactor = Xi_nabla_poly(params, w, k)
    field = field_of(cofactor)
    full = Xi_poly(params, next_j(params, w, k), k, field)
    return factor_residual(full, cofactor, w_nabla(params, w, k))


def nabla_product_minimal(params: TowerParams, j_prev: FieldElement, w: FieldElement) -> SkewPoly:
    """(tau - 1/(w j))(tau - w); equals the minimal I_infinity annihilator when Xi(w) = 0."""
    field = working_field(params, [j_prev, w], need_nu=False)
    j_prev, w = params.lift(j_prev, field), params.lift(w, field)
    one = field.one
    companion = np.reciprocal(w * j_prev)
    return SkewPoly.linear(field, params.q, one, -companion) * SkewPoly.linear(field, params.q, one, -w)


# =============================================================================
# Chains and isogenies
# =============================================================================


@dataclass(frozen=True)
class Chain:
    """
    A chain of torsion choices with its isogenies.

    omegas[i] is the isogeny to level i (omegas[0] = 1). For the minimal
    model omegas[i] is the delta-free product (D_(i-1) tau - w_i)...(tau - w_1)
    and scale_pows[i] = D_i = prod delta_s^(q-1); the true isogeny is a constant
    multiple of it.
    """
    model: Model
    field: FiniteField
    levels: tuple[NormalizedLevel, ...] | tuple[MinimalLevel, ...]
    omegas: tuple[SkewPoly, ...]
    scale_pows: tuple[FieldElement, ...]

    @property
    def k(self) -> int:
        return len(self.levels) - 1

    @property
    def omega(self) -> SkewPoly:
        return self.omegas[-1]

    @property
    def scale_pow(self) -> FieldElement:
        return self.scale_pows[-1]

    def parameter(self, i: int) -> FieldElement:
        level = self.levels[i]
        return level.lam if self.model is Model.NORMALIZED else level.j

    def choice(self, i: int) -> FieldElement | None:
        level = self.levels[i]
        return level.u if self.model is Model.NORMALIZED else level.w

    def to_dict(self) -> dict:
        def coeffs(a):
            return None if a is None else self.field.coeffs(a)

        return {
            "model": self.model.value,
            "start": coeffs(self.parameter(0)),
            "levels": [
                {"k": i, "param": coeffs(self.parameter(i)), "torsion_choice": coeffs(self.choice(i))}
                for i in range(1, len(self.levels))
            ],
            "omega": self.omega.to_dict(),
        }


def _reject_excluded(choice, excluded, ambiguous: bool, level: int) -> None:
    if excluded is not None and choice == excluded:
        if ambiguous:
            raise AmbiguousRoot(f"excluded root at level {level} is a multiple root")
        raise InvalidChoice(f"choice at level {level} is the excluded root")


def build_chain(
    params: TowerParams,
    start: FieldElement,
    choices: Sequence[FieldElement],
    model: Model | str = Model.MINIMAL,
    field: FiniteField | None = None,
) -> Chain:
    """
    Follow torsion choices u_1..u_k (normalized) or w_1..w_k (minimal) from lambda_0 or j_0.

    Raises:
        InvalidChoice: a choice is not a root at its level, or is the excluded root
        AmbiguousRoot: the excluded root is a multiple root and was chosen
    """
    model = Model(model)
    normalized = model is Model.NORMALIZED
    field = field or working_field(params, [start, *choices], need_nu=normalized)
    start = params.lift(start, field)
    choices = [params.lift(c, field) for c in choices]
    q, one = params.q, field.one
    tau = SkewPoly.tau(field, q)

    if int(start) == 0:
        raise ZeroLambda("lambda_0 must be nonzero") if normalized else ZeroJ("j_0 must be nonzero")

    levels: list = [NormalizedLevel(0, start) if normalized else MinimalLevel(0, start)]
    omegas = [SkewPoly.one(field, q)]
    scale_pows = [one]
    excluded = None
    ambiguous = False

    for i, choice in enumerate(choices, start=1):
        prev = levels[-1]
        if normalized:
            if xi_eval(params, prev.lam, choice, i) != 0:
                raise InvalidChoice(f"u_{i} is not a root of xi at level {i}")
            _reject_excluded(choice, excluded, ambiguous, i)
            lam = next_lambda(params, prev.lam, choice, i)
            levels.append(NormalizedLevel(i, lam, choice))
            factor = tau - SkewPoly.from_coeffs(field, q, [choice])
            omegas.append(factor * omegas[-1])
            scale_pows.append(one)
            excluded = u_nabla(params, prev.lam, choice, i)
            ambiguous = int(lam) != 0 and xi_nabla_eval(params, lam, prev.lam, choice, excluded, i) == 0
        else:
            if Xi_eval(params, prev.j, choice, i - 1) != 0:
                raise InvalidChoice(f"w_{i} is not a root of Xi at level {i}")
            _reject_excluded(choice, excluded, ambiguous, i)
            d_prev = scale_pows[-1]
            factor = SkewPoly.linear(field, q, d_prev, -choice)
            omegas.append(factor * omegas[-1])
            step = delta_pow(params, choice, i)
            scale_pows.append(d_prev * step)
            levels.append(MinimalLevel(i, next_j(params, choice, i), choice, step))
            excluded = w_nabla(params, choice, i)
            ambiguous = Xi_nabla_eval(params, choice, excluded, i) == 0

    logger.debug(f"Built {model.value} chain of length {len(choices)} over {field}")
    return Chain(model, field, tuple(levels), tuple(omegas), tuple(scale_pows))


def verify_isogeny(
    src: DrinfeldModule, dst: DrinfeldModule, omega: SkewPoly, scale_pow: FieldElement | None = None
) -> bool:
    """
    omega * src_a == dst_a * omega for a in {x, y}.

    With scale_pow = c^(q-1), dst is first conjugated by the constant c, which
    checks the isogeny c * omega.
    """
    if src.field is not dst.field or omega.field is not src.field:
        raise FieldMismatch("isogeny check needs the modules and omega over one field")
    for a_src, a_dst in ((src.phi_x, dst.phi_x), (src.phi_y, dst.phi_y)):
        target = a_dst if scale_pow is None else scalar_conjugate(a_dst, scale_pow)
        if omega * a_src != target * omega:
            return False
    return True


def chain_modules(params: TowerParams, chain: Chain, i: int | None = None) -> tuple[DrinfeldModule, DrinfeldModule]:
    """Source module and the level-i target (default: last level)."""
    i = chain.k if i is None else i
    build = build_normalized if chain.model is Model.NORMALIZED else build_minimal
    return (
        build(params, chain.parameter(0), 0, chain.field),
        build(params, chain.parameter(i), i, chain.field),
    )


def verify_chain(params: TowerParams, chain: Chain) -> Report:
    """
    Isogeny check at every level of the chain.

    A minimal chain is also checked through its explicit isogeny
    delta_k (tau - w_k) ... delta_1 (tau - w_1), with no scale applied; the
    check is skipped when some delta_i has no root in the chain's field.
    """
    report = Report(f"{chain.model.value} chain k={chain.k}")
    for i in range(chain.k + 1):
        src, dst = chain_modules(params, chain, i)
        scale = None if chain.model is Model.NORMALIZED else chain.scale_pows[i]
        report.add(f"isogeny_level_{i}", verify_isogeny(src, dst, chain.omegas[i], scale))
    if chain.model is Model.MINIMAL and chain.k > 0:
        omega = explicit_omega(chain)
        if omega is None:
            report.skip("explicit_isogeny", f"some delta^(q-1) has no (q-1)-th root in {chain.field}")
        else:
            src, dst = chain_modules(params, chain)
            report.add("explicit_isogeny", verify_isogeny(src, dst, omega))
    return report


def explicit_omega(chain: Chain) -> SkewPoly | None:
    """
    delta_k (tau - w_k) ... delta_1 (tau - w_1) with canonical-smallest (q-1)-th roots.

    None when some delta_i^(q-1) has no (q-1)-th root in the chain's field.
    """
    if chain.model is not Model.MINIMAL:
        return chain.omega
    field, q = chain.field, chain.omega.twist_q
    product = SkewPoly.one(field, q)
    for level in chain.levels[1:]:
        roots = nth_roots(level.delta_pow, q - 1)
        if roots.size == 0:
            return None
        factor = SkewPoly.linear(field, q, roots[0], -roots[0] * level.w)
        product = factor * product
    return product


def chain_kernels(chain: Chain, ambient: FiniteField | None = None, workers: int | None = None) -> list[FieldElement]:
    """Kernels of omegas[1..k] over ambient (default: where the full chain splits)."""
    if ambient is None:
        ambient = split_kernel(chain.omega, workers=workers).ambient
    return [kernel_elements(omega, ambient, workers) for omega in chain.omegas[1:]]


def kernel_report(chain: Chain, ambient: FiniteField | None = None, workers: int | None = None) -> Report:
    """Level i kernel has q^i elements and strictly contains level i-1."""
    q = chain.omega.twist_q
    report = Report(f"{chain.model.value} chain kernels")
    previous = None
    for i, kernel in enumerate(chain_kernels(chain, ambient, workers), start=1):
        report.add(f"kernel_size_{i}", kernel.size == q**i, f"{kernel.size} of {q**i}")
        if previous is not None:
            inner = previous.view(np.ndarray)
            outer = kernel.view(np.ndarray)
            contains = bool(np.all(np.isin(inner, outer))) and outer.size > inner.size
            report.add(f"primitive_{i}", contains)
        previous = kernel
    return report


def isogeny_square(params: TowerParams, lam0: FieldElement, u1: FieldElement) -> Report:
    """
    Compare the normalized step (tau - u_1) with the minimal step delta_1 (tau - w_1).

    w_1 = u_1 / lambda_0^q, j_0 = j(lambda_0) and j(lambda_1) at twist 1 must equal next_j(w_1, 1).
    """
    field = working_field(params, [lam0, u1], need_nu=True)
    lam0, u1 = params.lift(lam0, field), params.lift(u1, field)
    q = params.q
    report = Report("isogeny square")

    j0 = j_invariant(params, lam0, 0)
    w1 = u1 / lam0**q
    lam1 = next_lambda(params, lam0, u1, 1)
    report.add("xi_root", xi_eval(params, lam0, u1, 1) == 0)
    report.add("Xi_root", Xi_eval(params, j0, w1, 0) == 0)

    j1 = next_j(params, w1, 1)
    report.add("j_link", j_invariant(params, lam1, 1) == j1)
    report.add("j0j1_form", next_j_from_j(params, j0, w1, 1) == j1)
    report.add("j_from_w", j_from_w(params, w1, 1) == j0)

    one = field.one
    normalized_ok = verify_isogeny(
        build_normalized(params, lam0, 0, field),
        build_normalized(params, lam1, 1, field),
        SkewPoly.linear(field, q, one, -u1),
    )
    report.add("normalized_isogeny", normalized_ok)
    minimal_ok = verify_isogeny(
        build_minimal(params, j0, 0, field),
        build_minimal(params, j1, 1, field),
        SkewPoly.linear(field, q, one, -w1),
        delta_pow(params, w1, 1),
    )
    report.add("minimal_isogeny", minimal_ok)
    return report


def random_chain(
    params: TowerParams,
    k: int,
    model: Model | str,
    rng: np.random.Generator,
    max_attempts: int = 200,
    field: FiniteField | None = None,
) -> Chain | None:
    """
    Draw a start value and torsion choices level by level until a length-k chain exists in `field`.

    Returns None when no attempt succeeds.
    """
    model = Model(model)
    normalized = model is Model.NORMALIZED
    field = field or (params.ambient if normalized else params.fq4)
    for attempt in range(max_attempts):
        start = field.random(rng)
        current, excluded, choices = start, None, []
        try:
            for i in range(1, k + 1):
                if normalized:
                    roots = xi_roots(params, current, i, field)
                else:
                    roots = Xi_roots(params, current, i - 1, field)
                if excluded is not None:
                    roots = roots[roots != excluded]
                if roots.size == 0:
                    break
                choice = roots[int(rng.integers(roots.size))]
                choices.append(choice)
                if normalized:
                    excluded = u_nabla(params, current, choice, i)
                    current = next_lambda(params, current, choice, i)
                else:
                    excluded = w_nabla(params, choice, i)
                    current = next_j(params, choice, i)
            if len(choices) == k:
                logger.debug(f"Found {model.value} chain of length {k} after {attempt + 1} attempts")
                return build_chain(params, start, choices, model, field)
        except (ZeroLambda, ZeroJ, PoleW, PoleJZero, InvalidChoice):
            continue
    return None
