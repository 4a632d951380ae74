"""
Finite fields F_{p^m} for the tower computations.

Fields are galois FieldArray classes built on the lexicographically smallest
monic irreducible modulus, so every run realizes F_q, F_{q^2}, F_{q^4} and the
ambient F_{q^{4m}} identically. Elements are 0-d FieldArrays; vectors of
elements are 1-D FieldArrays. Canonical element order is the integer
representation sum(c_i * p**i), i.e. coefficient sequences compared from the
top coefficient down.
"""

import functools
import logging
import os
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import galois
import numpy as np

from src.drinfeld.errors import (
    BoundExceeded,
    CompositeModulus,
    NoEmbedding,
    ZeroInput,
    ZeroPolynomial,
)

logger = logging.getLogger(__name__)

DEFAULT_ELEMENT_BOUND = 2**20

# A single field element (0-d) and a 1-D vector of elements in canonical order.
FieldElement = galois.FieldArray
FieldVector = galois.FieldArray


def element_bound() -> int:
    """Largest field cardinality we are willing to enumerate."""
    return int(os.getenv("TOWER_ELEMENT_BOUND", DEFAULT_ELEMENT_BOUND))


@dataclass(frozen=True)
class PrimePower:
    """A prime power p**m."""
    p: int
    m: int

    @property
    def order(self) -> int:
        return self.p**self.m


class FiniteField:
    """
    Handle on one realization of F_{p^m}.

    Wraps the galois class together with its modulus. Instances are unique per
    (p, m) because make_field caches them, so identity comparison is enough.
    """

    def __init__(self, prime_power: PrimePower, modulus: galois.Poly):
        self.prime_power = prime_power
        self.modulus_poly = modulus
        if prime_power.m == 1:
            self.gf = galois.GF(prime_power.p)
        else:
            self.gf = galois.GF(prime_power.order, irreducible_poly=modulus)

    @property
    def p(self) -> int:
        return self.prime_power.p

    @property
    def m(self) -> int:
        return self.prime_power.m

    @property
    def order(self) -> int:
        return self.prime_power.order

    @property
    def modulus(self) -> list[int]:
        """Modulus coefficients in ascending order."""
        return [int(c) for c in self.modulus_poly.coeffs[::-1]]

    @property
    def elements(self) -> FieldVector:
        return self.gf.elements

    @property
    def nonzero_elements(self) -> FieldVector:
        return self.gf.elements[1:]

    @property
    def zero(self) -> FieldElement:
        return self.gf(0)

    @property
    def one(self) -> FieldElement:
        return self.gf(1)

    @property
    def generator(self) -> FieldElement:
        """The canonical generator g (class of t modulo the modulus)."""
        return self.gf(self.p) if self.m > 1 else self.gf(1)

    def __call__(self, value: int | Sequence[int] | FieldElement) -> FieldElement:
        if isinstance(value, galois.FieldArray):
            if type(value) is not self.gf:
                raise TypeError(f"element belongs to {type(value).name}, not {self}")
            return value
        if isinstance(value, (int, np.integer)):
            return self.gf(int(value))
        return self.from_coeffs(value)

    def from_coeffs(self, coeffs: Iterable[int]) -> FieldElement:
        """Build an element from ascending coefficients over F_p."""
        digits = [int(c) % self.p for c in coeffs]
        if len(digits) > self.m:
            raise ValueError(f"{len(digits)} coefficients given for a degree-{self.m} field")
        return self.gf(sum(c * self.p**i for i, c in enumerate(digits)))

    def coeffs(self, a: FieldElement) -> list[int]:
        """Ascending coefficient sequence of length m."""
        value = int(a)
        digits = []
        for _ in range(self.m):
            value, c = divmod(value, self.p)
            digits.append(c)
        return digits

    def contains(self, a: FieldElement) -> bool:
        return type(a) is self.gf

    def random(self, rng: np.random.Generator, nonzero: bool = True) -> FieldElement:
        low = 1 if nonzero else 0
        return self.gf(int(rng.integers(low, self.order)))

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": self.modulus}

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, m={self.m})"


# =============================================================================
# Construction
# =============================================================================

_FIELDS_BY_CLASS: dict[type, FiniteField] = {}


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int) -> FiniteField:
    """
    Build F_{p^m} on the smallest monic irreducible modulus of degree m.

    Raises:
        CompositeModulus: if p is not prime
        BoundExceeded: if p**m exceeds the enumeration bound
    """
    if m < 1:
        raise ValueError(f"field degree must be positive, got {m}")
    if not galois.is_prime(p):
        raise CompositeModulus(f"characteristic {p} is not prime")
    order = p**m
    if order > element_bound():
        raise BoundExceeded(f"F_{p}^{m} has {order} elements, bound is {element_bound()}")

    modulus = galois.irreducible_poly(p, m, method="min")
    if not modulus.is_irreducible():
        raise CompositeModulus(f"modulus {modulus} failed the irreducibility check")

    field = FiniteField(PrimePower(p, m), modulus)
    _FIELDS_BY_CLASS[field.gf] = field
    logger.debug(f"Built F_{p}^{m} with modulus {modulus}")
    return field


def field_of(a: FieldElement) -> FiniteField:
    """The FiniteField handle an element (or vector) belongs to."""
    try:
        return _FIELDS_BY_CLASS[type(a)]
    except KeyError:
        raise TypeError(f"{type(a).__name__} was not built by make_field") from None


# =============================================================================
# Element arithmetic helpers
# =============================================================================


def power(a: FieldElement, e: int) -> FieldElement:
    """a**e for any integer e; negative exponents need nonzero a."""
    if e >= 0:
        return a**e
    if np.any(a == 0):
        raise ZeroInput("negative power of zero")
    return np.reciprocal(a) ** (-e)


def frobenius_iter(a: FieldElement, i: int, q: int) -> FieldElement:
    """a**(q**i), computed with the exponent reduced modulo |F*|."""
    if i == 0:
        return a
    group_order = field_of(a).order - 1
    e = pow(q, i, group_order) if group_order > 1 else 1
    if e == 0:
        e = group_order
    return a**e


def all_roots(poly: Sequence[FieldElement] | FieldElement, field: FiniteField) -> FieldVector:
    """
    Every root in `field` of a polynomial given by ascending coefficients.

    Exhaustive scan; the result is sorted in canonical order.
    """
    coeffs = field.gf(np.asarray([int(c) for c in poly], dtype=np.int64)) if not isinstance(
        poly, galois.FieldArray
    ) else poly
    if coeffs.size == 0 or np.all(coeffs == 0):
        raise ZeroPolynomial("all_roots of the zero polynomial")
    values = galois.Poly(coeffs[::-1])(field.elements)
    return field.elements[values == 0]


def nth_roots(a: FieldElement, n: int) -> FieldVector:
    """All x in a's field with x**n == a."""
    if int(a) == 0:
        raise ZeroInput("nth_roots of zero")
    if n < 1:
        raise ValueError(f"root index must be positive, got {n}")
    field = field_of(a)
    candidates = field.nonzero_elements
    return candidates[candidates**n == a]


# =============================================================================
# Embeddings
# =============================================================================

_EMBED_LOCK = threading.Lock()
_EMBED_ROOTS: dict[tuple[int, int, int], FieldElement] = {}


def _embedding_root(sub: FiniteField, sup: FiniteField) -> FieldElement:
    """Smallest root of sub's modulus in sup; fixed once per (sub, sup)."""
    key = (sub.p, sub.m, sup.m)
    root = _EMBED_ROOTS.get(key)
    if root is not None:
        return root
    with _EMBED_LOCK:
        root = _EMBED_ROOTS.get(key)
        if root is None:
            lifted = galois.Poly([int(c) for c in sub.modulus_poly.coeffs], field=sup.gf)
            roots = sup.elements[lifted(sup.elements) == 0]
            if roots.size == 0:
                raise NoEmbedding(f"modulus of {sub} has no root in {sup}")
            root = roots[0]
            _EMBED_ROOTS[key] = root
            logger.debug(f"Embedding {sub} -> {sup}: generator -> {int(root)}")
    return root


def embed(a: FieldElement, sub: FiniteField, sup: FiniteField) -> FieldElement:
    """
    Ring embedding sub -> sup, applied elementwise.

    The sub generator goes to the smallest root of sub's modulus in sup.

    Raises:
        NoEmbedding: if the characteristics differ or deg(sub) does not divide deg(sup)
    """
    if sub is sup:
        return a
    if sub.p != sup.p or sup.m % sub.m:
        raise NoEmbedding(f"{sub} does not embed in {sup}")
    digits = a.vector().view(np.ndarray).astype(np.int64)
    if sub.m == 1:
        return sup.gf(digits[..., 0])

    root = _embedding_root(sub, sup)
    image = sup.gf(np.zeros(a.shape, dtype=np.int64))
    root_power = sup.one
    # vector() lists coefficients from the top degree down
    for i in range(sub.m):
        image = image + sup.gf(digits[..., sub.m - 1 - i]) * root_power
        root_power = root_power * root
    return image


def lift(a: FieldElement, sup: FiniteField) -> FieldElement:
    """Embed a into sup from whatever field it currently lives in."""
    return embed(a, field_of(a), sup)


# =============================================================================
# Literals
# =============================================================================


def to_literal(a: FieldElement, symbol: str = "g") -> str:
    """Render an element as 'c0+c1*g+c2*g^2' (zero terms omitted)."""
    field = field_of(a)
    terms = []
    for i, c in enumerate(field.coeffs(a)):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append(symbol if c == 1 else f"{c}*{symbol}")
        else:
            terms.append(f"{symbol}^{i}" if c == 1 else f"{c}*{symbol}^{i}")
    return "+".join(terms) if terms else "0"
