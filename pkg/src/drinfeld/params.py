"""
Fixed arithmetic context of the tower: zeta, eta, t, T, T^sigma, nu, x, y.

Fields are realized as the chain F_q < F_{q^2} < F_{q^4} < ambient and every
value is lifted along that chain, so all embeddings compose consistently.
The sigma-action is carried out by substitution: a parity-1 LevelData holds
zeta^q, T^sigma, T and nu^sigma in the slots of zeta, T, T^sigma and nu.
"""

import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum

import galois
import numpy as np

from src.drinfeld.errors import (
    AmbientTooSmall,
    BoundExceeded,
    ConfigError,
    FieldMismatch,
    NoValidEta,
    NuNotFound,
)
from src.drinfeld.ff import (
    FieldElement,
    FiniteField,
    all_roots,
    element_bound,
    embed,
    field_of,
    frobenius_iter,
    make_field,
    nth_roots,
)

logger = logging.getLogger(__name__)


def lift_along(a: FieldElement, chain: list[FiniteField], target: FiniteField) -> FieldElement:
    """
    Embed a into target one step of `chain` at a time.

    Prime-field elements embed directly. Targets above the top of the chain
    are reached by one final embedding from the top.
    """
    source = field_of(a)
    if source is target:
        return a
    if source.m == 1 and source is not chain[0]:
        return embed(a, source, target)
    try:
        start = next(i for i, f in enumerate(chain) if f is source)
    except StopIteration:
        raise FieldMismatch(f"{source} is not part of the field chain") from None
    current = a
    for field in chain[start + 1 :]:
        if field.m > target.m:
            break
        current = embed(current, field_of(current), field)
        if field is target:
            return current
    return embed(current, field_of(current), target)


class Mode(str, Enum):
    """reduced: t = eta in F_{q^2}; specialized: t is a free point of F_{q^4}."""
    REDUCED = "reduced"
    SPECIALIZED = "specialized"


@dataclass(frozen=True)
class LevelData:
    """
    The sigma^parity image of the base data, lifted into `field`.

    x and y are sigma-invariant. nu is None when `field` cannot hold it.
    """
    parity: int
    field: FiniteField
    q: int
    zeta: FieldElement
    T: FieldElement
    T_sigma: FieldElement
    x: FieldElement
    y: FieldElement
    nu_value: FieldElement | None

    @property
    def nu(self) -> FieldElement:
        if self.nu_value is None:
            raise AmbientTooSmall(f"nu does not live in {self.field}")
        return self.nu_value

    @property
    def zeta_q(self) -> FieldElement:
        return self.zeta**self.q

    @property
    def c1(self) -> FieldElement:
        """1/(1 - zeta^(1-q))."""
        return np.reciprocal(self.field.one - self.zeta / self.zeta_q)


@dataclass(frozen=True)
class TowerParams:
    """
    Immutable arithmetic context shared by every module and recursion routine.

    Attributes:
        q: Order of the constant field
        fq, fq2, fq4: Canonical realizations of F_q, F_{q^2}, F_{q^4}
        ambient: F_{q^{4m}}, the smallest extension holding nu
        nu_degree: The m of the ambient field
        mode: REDUCED (t = eta) or SPECIALIZED (t = t_point)
        zeta: Element of F_{q^2} outside F_q
        eta: Reduction point (reduced mode only)
        t: Value of t, in F_{q^2} (reduced) or F_{q^4} (specialized)
        T, T_sigma, x, y: Derived values in the field of t
        nu: Element of the ambient field with nu^(q+1) = -1/((t-zeta)(t^q-zeta))
        nu_index: Which (q+1)-th root was taken, in canonical order
    """
    q: int
    fq: FiniteField
    fq2: FiniteField
    fq4: FiniteField
    ambient: FiniteField
    nu_degree: int
    mode: Mode
    zeta: FieldElement
    eta: FieldElement | None
    t: FieldElement
    T: FieldElement
    T_sigma: FieldElement
    x: FieldElement
    y: FieldElement
    nu: FieldElement
    nu_index: int = 0

    @property
    def p(self) -> int:
        return self.fq.p

    @property
    def zeta_q(self) -> FieldElement:
        return self.zeta**self.q

    @property
    def is_reduced(self) -> bool:
        return self.mode is Mode.REDUCED

    @property
    def z_eta(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        """Coefficients (a, b, c) of z_eta = a*x + b*y + c."""
        if self.eta is None:
            raise ConfigError("z_eta is only defined in reduced mode (field: mode)")
        eta_q = self.eta**self.q
        a = self.eta * eta_q - self.zeta * self.zeta_q
        b = -(self.eta + eta_q - self.zeta - self.zeta_q)
        return a, b, self.fq2.one

    # -------------------------------------------------------------------------
    # Field chain
    # -------------------------------------------------------------------------

    @property
    def chain(self) -> list[FiniteField]:
        fields: list[FiniteField] = []
        for field in (self.fq, self.fq2, self.fq4, self.ambient):
            if not fields or fields[-1] is not field:
                fields.append(field)
        return fields

    def lift(self, a: FieldElement, target: FiniteField) -> FieldElement:
        """
        Lift a into target along F_q < F_{q^2} < F_{q^4} < ambient.

        Targets above the ambient field are reached by one final embedding.
        """
        return lift_along(a, self.chain, target)

    # -------------------------------------------------------------------------
    # sigma
    # -------------------------------------------------------------------------

    def sigma(self, a: FieldElement) -> FieldElement:
        """The q-Frobenius on F_{q^2} data; sigma o sigma = id."""
        if field_of(a).m > self.fq2.m:
            raise FieldMismatch("sigma is only the Frobenius on F_{q^2} data")
        return frobenius_iter(a, 1, self.q)

    def nu_sigma(self, nu: FieldElement | None = None) -> FieldElement:
        """nu^sigma = -x/nu; applying it to nu^sigma gives nu back."""
        nu = self.nu if nu is None else nu
        return -self.lift(self.x, field_of(nu)) / nu

    def nu_sigma_frobenius_form(self) -> FieldElement:
        """nu^sigma computed as T^(1-q) * nu^q."""
        T = self.lift(self.T, self.ambient)
        return T / T**self.q * self.nu**self.q

    def level(self, k: int, field: FiniteField | None = None) -> LevelData:
        """Data of the sigma^k twist (only k mod 2 matters) lifted into `field`."""
        field = field or self.ambient
        holds_nu = field.m % self.ambient.m == 0
        nu = self.lift(self.nu, field) if holds_nu else None
        zeta = self.lift(self.zeta, field)
        T = self.lift(self.T, field)
        T_sigma = self.lift(self.T_sigma, field)
        x = self.lift(self.x, field)
        y = self.lift(self.y, field)
        if k % 2:
            zeta, T, T_sigma = zeta**self.q, T_sigma, T
            nu = -x / nu if nu is not None else None
        return LevelData(k % 2, field, self.q, zeta, T, T_sigma, x, y, nu)

    # -------------------------------------------------------------------------
    # Variants and identity
    # -------------------------------------------------------------------------

    def with_nu(self, index: int) -> "TowerParams":
        """Same context with another (q+1)-th root chosen for nu."""
        roots = nth_roots(self.nu ** (self.q + 1), self.q + 1)
        if not 0 <= index < roots.size:
            raise ConfigError(f"nu_index {index} out of range 0..{roots.size - 1}")
        return dataclasses.replace(self, nu=roots[index], nu_index=index)

    def to_dict(self) -> dict:
        def coeffs(a):
            return None if a is None else field_of(a).coeffs(a)

        return {
            "q": self.q,
            "mode": self.mode.value,
            "zeta": coeffs(self.zeta),
            "eta": coeffs(self.eta),
            "t": coeffs(self.t),
            "nu": coeffs(self.nu),
            "nu_degree": self.nu_degree,
            "ambient": self.ambient.to_dict(),
        }

    @property
    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()[:16]


# =============================================================================
# Construction
# =============================================================================


def split_prime_power(q: int) -> tuple[int, int]:
    if q < 2 or not galois.is_prime_power(q):
        raise ConfigError(f"q must be a prime power, got {q} (field: q)")
    primes, exponents = galois.factors(q)
    return int(primes[0]), int(exponents[0])


def zeta_from_modulus(fq2: FiniteField, modulus: list[int]) -> FieldElement:
    """Smallest root in F_{q^2} of a polynomial with ascending F_p coefficients."""
    roots = all_roots(modulus, fq2)
    if roots.size == 0:
        raise ConfigError(f"zeta_modulus {modulus} has no root in {fq2} (field: zeta_modulus)")
    return roots[0]


def _default_eta(fq2: FiniteField, q: int, excluded: list[FieldElement]) -> FieldElement:
    candidates = fq2.elements[fq2.elements**q != fq2.elements]
    for eta in candidates:
        if all(eta != e for e in excluded):
            return eta
    raise NoValidEta(f"F_{q}^2 minus F_{q} has no element outside {{zeta, zeta^q}}")


def _find_nu(target: FieldElement, fq4: FiniteField, q: int, index: int) -> tuple[FieldElement, FiniteField, int]:
    """Smallest ambient F_{q^{4m}}, m <= q+1, holding a (q+1)-th root of target."""
    for m in range(1, q + 2):
        if fq4.p ** (fq4.m * m) > element_bound():
            break
        ambient = make_field(fq4.p, fq4.m * m)
        roots = nth_roots(embed(target, fq4, ambient), q + 1)
        if roots.size:
            if index >= roots.size:
                raise ConfigError(f"nu_index {index} out of range 0..{roots.size - 1} (field: nu_index)")
            logger.debug(f"nu found in {ambient} ({roots.size} roots)")
            return roots[index], ambient, m
    raise NuNotFound(f"no ({q}+1)-th root of {int(target)} in F_{{q^4m}} within the element bound")


def build_params(
    q: int,
    zeta: FieldElement | None = None,
    eta: FieldElement | None = None,
    mode: Mode | str = Mode.REDUCED,
    t_point: FieldElement | None = None,
    zeta_modulus: list[int] | None = None,
    nu_index: int = 0,
) -> TowerParams:
    """
    Build the arithmetic context.

    Args:
        q: Prime power
        zeta: Element of F_{q^2} outside F_q; defaults to the generator g
        eta: Reduction point in F_{q^2} (reduced mode); defaults to the smallest valid one
        mode: REDUCED or SPECIALIZED
        t_point: Value of t in F_{q^4} (specialized mode)
        zeta_modulus: Alternative to zeta: take the smallest root of this polynomial
        nu_index: Which root to use for nu, in canonical order

    Raises:
        NoValidEta: reduced mode with q = 2
        NuNotFound: no nu inside the element bound
        ConfigError: any input outside its domain (message names the field)
    """
    mode = Mode(mode)
    p, e = split_prime_power(q)
    try:
        fq, fq2, fq4 = make_field(p, e), make_field(p, 2 * e), make_field(p, 4 * e)
    except BoundExceeded as exc:
        raise ConfigError(f"{exc} (field: q)") from exc

    if zeta is None:
        zeta = zeta_from_modulus(fq2, zeta_modulus) if zeta_modulus else fq2.generator
    if not fq2.contains(zeta):
        raise ConfigError("zeta must be an element of F_{q^2} (field: zeta)")
    zeta_q = zeta**q
    if zeta_q == zeta:
        raise ConfigError(f"zeta = {int(zeta)} lies in F_{q} (field: zeta)")

    if mode is Mode.REDUCED:
        if q == 2:
            raise NoValidEta("F_4 minus F_2 is exactly {zeta, zeta^q}; reduced mode needs q >= 3")
        if eta is None:
            eta = _default_eta(fq2, q, [zeta, zeta_q])
        if not fq2.contains(eta) or eta**q == eta or eta == zeta or eta == zeta_q:
            raise ConfigError("eta must lie in F_{q^2} outside F_q and {zeta, zeta^q} (field: eta)")
        t = eta
    else:
        if t_point is None:
            raise ConfigError("specialized mode needs a t_point (field: t_point)")
        t = lift_along(t_point, [fq, fq2, fq4], fq4)
        eta = None

    t_field = field_of(t)
    z, z_q = embed(zeta, fq2, t_field), embed(zeta_q, fq2, t_field)
    if t == z or t == z_q:
        raise ConfigError("t must avoid zeta and zeta^q (field: t_point)")
    T = np.reciprocal(t - z_q)
    T_sigma = np.reciprocal(t - z)
    x = T * T_sigma
    y = t * x

    target = -T_sigma * T**q
    nu, ambient, m = _find_nu(embed(target, t_field, fq4), fq4, q, nu_index)

    params = TowerParams(
        q=q, fq=fq, fq2=fq2, fq4=fq4, ambient=ambient, nu_degree=m, mode=mode,
        zeta=zeta, eta=eta, t=t, T=T, T_sigma=T_sigma, x=x, y=y, nu=nu, nu_index=nu_index,
    )
    logger.debug(f"Built params q={q} mode={mode.value} ambient={ambient} digest={params.digest}")
    return params
