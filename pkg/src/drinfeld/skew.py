"""
Twisted polynomials L{tau} with tau * a = a**q * tau.

SkewPoly is an immutable value: coefficients are an ascending 1-D FieldArray
with trailing zeros stripped, so the zero polynomial has no coefficients.
Only right division and right gcd are provided.
"""

import logging
import math
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import galois
import numpy as np

from src.drinfeld.errors import (
    BothZero,
    FieldMismatch,
    SkewDivisionByZero,
    ZeroPolynomial,
)
from src.drinfeld.ff import (
    FieldElement,
    FieldVector,
    FiniteField,
    element_bound,
    field_of,
    frobenius_iter,
    lift,
    make_field,
    to_literal,
)

logger = logging.getLogger(__name__)

# Largest escalation factor tried by split_kernel.
MAX_ESCALATION = 8

# Below this many elements a kernel scan is not worth splitting across threads.
_PARALLEL_THRESHOLD = 4096


def default_workers() -> int:
    return int(os.getenv("TOWER_WORKERS", min(8, os.cpu_count() or 1)))


def _twist_degree(field: FiniteField, q: int) -> int:
    """e with q = p**e; the field must contain F_q."""
    e = round(math.log(q, field.p))
    if field.p**e != q:
        raise FieldMismatch(f"twist {q} is not a power of the characteristic {field.p}")
    if field.m % e:
        raise FieldMismatch(f"{field} does not contain F_{q}")
    return e


@dataclass(frozen=True, eq=False)
class SkewPoly:
    """Sum of coeffs[i] * tau**i over `field`, twisted by the q-power map."""

    field: FiniteField
    twist_q: int
    coeffs: FieldElement

    def __post_init__(self):
        _twist_degree(self.field, self.twist_q)
        if isinstance(self.coeffs, galois.FieldArray) and not self.field.contains(self.coeffs):
            raise FieldMismatch(f"coefficients do not live in {self.field}")
        coeffs = self.field.gf(np.atleast_1d(self.coeffs))
        nonzero = np.flatnonzero(coeffs != 0)
        length = int(nonzero[-1]) + 1 if nonzero.size else 0
        object.__setattr__(self, "coeffs", coeffs[:length])

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_coeffs(
        cls, field: FiniteField, q: int, coeffs: Sequence[int | FieldElement]
    ) -> "SkewPoly":
        """
        Build from ascending coefficients.

        Plain ints are read as residues of the prime field (so -1 works);
        FieldArray entries are lifted into `field` along the canonical embeddings.
        """
        values = [
            int(c) % field.p if isinstance(c, (int, np.integer)) else int(lift(c, field))
            for c in coeffs
        ]
        return cls(field, q, field.gf(np.asarray(values, dtype=np.int64)))

    @classmethod
    def zero(cls, field: FiniteField, q: int) -> "SkewPoly":
        return cls(field, q, field.gf(np.zeros(0, dtype=np.int64)))

    @classmethod
    def one(cls, field: FiniteField, q: int) -> "SkewPoly":
        return cls(field, q, field.gf([1]))

    @classmethod
    def tau(cls, field: FiniteField, q: int) -> "SkewPoly":
        return cls(field, q, field.gf([0, 1]))

    @classmethod
    def linear(cls, field: FiniteField, q: int, lead: FieldElement, const: FieldElement) -> "SkewPoly":
        """lead * tau + const."""
        return cls.from_coeffs(field, q, [const, lead])

    # -------------------------------------------------------------------------
    # Basic properties
    # -------------------------------------------------------------------------

    @property
    def degree(self) -> int:
        """tau-degree; -1 for the zero polynomial."""
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def lead(self) -> FieldElement:
        if self.is_zero:
            raise ZeroPolynomial("leading coefficient of the zero polynomial")
        return self.coeffs[-1]

    def coeff(self, i: int) -> FieldElement:
        """Coefficient of tau**i (zero beyond the degree)."""
        return self.coeffs[i] if 0 <= i < self.coeffs.size else self.field.zero

    def monic(self) -> "SkewPoly":
        """Left-scale so the leading coefficient is 1."""
        return self.scale(np.reciprocal(self.lead))

    def scale(self, c: FieldElement) -> "SkewPoly":
        """Left multiplication by a constant."""
        return SkewPoly(self.field, self.twist_q, c * self.coeffs)

    def frob(self, values: FieldElement, i: int) -> FieldElement:
        return frobenius_iter(values, i, self.twist_q)

    # -------------------------------------------------------------------------
    # Ring operations
    # -------------------------------------------------------------------------

    def _check(self, other: "SkewPoly") -> None:
        if self.field is not other.field or self.twist_q != other.twist_q:
            raise FieldMismatch(
                f"cannot combine {self.field}/q={self.twist_q} with {other.field}/q={other.twist_q}"
            )

    def _padded(self, size: int) -> FieldElement:
        out = self.field.gf(np.zeros(size, dtype=np.int64))
        out[: self.coeffs.size] = self.coeffs
        return out

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        size = max(self.coeffs.size, other.coeffs.size)
        return SkewPoly(self.field, self.twist_q, self._padded(size) + other._padded(size))

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.field, self.twist_q, -self.coeffs)

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        return skew_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return (
            self.field is other.field
            and self.twist_q == other.twist_q
            and self.coeffs.size == other.coeffs.size
            and bool(np.all(self.coeffs == other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((self.field.order, self.twist_q, tuple(int(c) for c in self.coeffs)))

    def __call__(self, c: FieldElement) -> FieldElement:
        return evaluate(self, c)

    # -------------------------------------------------------------------------
    # Presentation
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "twist_q": self.twist_q,
            "coeffs": [self.field.coeffs(c) for c in self.coeffs],
        }

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if int(c) == 0:
                continue
            literal = to_literal(c)
            power = "" if i == 0 else "τ" if i == 1 else f"τ^{i}"
            if not power:
                terms.append(literal)
            elif int(c) == 1:
                terms.append(power)
            else:
                terms.append(f"({literal}){power}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"SkewPoly({self}, q={self.twist_q})"


# =============================================================================
# Operations
# =============================================================================


def skew_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """f * g under tau * a = a**q * tau."""
    f._check(g)
    if f.is_zero or g.is_zero:
        return SkewPoly.zero(f.field, f.twist_q)
    out = f.field.gf(np.zeros(f.coeffs.size + g.coeffs.size - 1, dtype=np.int64))
    width = g.coeffs.size
    for i, a in enumerate(f.coeffs):
        if int(a) == 0:
            continue
        out[i : i + width] = out[i : i + width] + a * f.frob(g.coeffs, i)
    return SkewPoly(f.field, f.twist_q, out)


def right_divmod(f: SkewPoly, g: SkewPoly) -> tuple[SkewPoly, SkewPoly]:
    """
    Quotient and remainder with f = quotient * g + remainder, deg remainder < deg g.

    Raises:
        SkewDivisionByZero: if g is zero
    """
    f._check(g)
    if g.is_zero:
        raise SkewDivisionByZero("right division by the zero skew polynomial")
    field, q = f.field, f.twist_q
    if f.degree < g.degree:
        return SkewPoly.zero(field, q), f

    quotient = field.gf(np.zeros(f.degree - g.degree + 1, dtype=np.int64))
    remainder = f
    while not remainder.is_zero and remainder.degree >= g.degree:
        shift = remainder.degree - g.degree
        c = remainder.lead / f.frob(g.lead, shift)
        quotient[shift] = quotient[shift] + c
        # (c tau^shift) * g
        term = field.gf(np.zeros(remainder.degree + 1, dtype=np.int64))
        term[shift:] = c * f.frob(g.coeffs, shift)
        remainder = remainder - SkewPoly(field, q, term)
    return SkewPoly(field, q, quotient), remainder


def right_gcd_monic(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    """
    Monic generator of the left ideal spanned by f and g (largest common right divisor).

    Raises:
        BothZero: if f and g are both zero
    """
    f._check(g)
    if f.is_zero and g.is_zero:
        raise BothZero("right gcd of two zero polynomials")
    a, b = f, g
    while not b.is_zero:
        a, b = b, right_divmod(a, b)[1]
    return a.monic()


def evaluate(f: SkewPoly, c: FieldElement) -> FieldElement:
    """
    sum(a_i * c**(q**i)), elementwise for vectors.

    c may live in an extension of f's field; coefficients are lifted into it.
    """
    target = field_of(c)
    if target is not f.field:
        if target.p != f.field.p or target.m % f.field.m:
            raise FieldMismatch(f"{f.field} does not embed in {target}")
        coeffs = lift(f.coeffs, target)
    else:
        coeffs = f.coeffs
    acc = target.gf(np.zeros(np.shape(c), dtype=np.int64))
    for i, a in enumerate(coeffs):
        if int(a) == 0:
            continue
        acc = acc + a * frobenius_iter(c, i, f.twist_q)
    return acc


def kernel_elements(f: SkewPoly, ambient: FiniteField, workers: int | None = None) -> FieldVector:
    """
    All c in ambient with f(c) == 0, in canonical order.

    The scan is split into contiguous chunks evaluated on a thread pool;
    concatenating the chunks in order keeps the result canonical.

    Raises:
        ZeroPolynomial: if f is zero
    """
    if f.is_zero:
        raise ZeroPolynomial("kernel of the zero polynomial")
    if ambient.p != f.field.p or ambient.m % f.field.m:
        raise FieldMismatch(f"{f.field} does not embed in {ambient}")
    lifted = SkewPoly(ambient, f.twist_q, lift(f.coeffs, ambient))
    elements = ambient.elements
    workers = workers or default_workers()

    if workers <= 1 or elements.size < _PARALLEL_THRESHOLD:
        return elements[evaluate(lifted, elements) == 0]

    chunks = np.array_split(np.arange(elements.size), workers)

    def scan(index: np.ndarray) -> FieldElement:
        part = elements[index]
        return part[evaluate(lifted, part) == 0]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(scan, chunks))
    return ambient.gf(np.concatenate([part.view(np.ndarray) for part in parts]))


@dataclass(frozen=True)
class KernelSearch:
    """Outcome of split_kernel."""
    split: bool
    ambient: FiniteField
    elements: FieldElement

    @property
    def size(self) -> int:
        return int(self.elements.size)


def split_kernel(f: SkewPoly, max_factor: int = MAX_ESCALATION, workers: int | None = None) -> KernelSearch:
    """
    Enlarge the ambient field F_{p^(d*s)}, s = 1..max_factor, until f splits.

    f splits when its kernel has q**deg(f) elements. Escalation stops early at
    the enumeration bound; the last scanned field is reported as non-split.
    """
    if f.is_zero:
        raise ZeroPolynomial("kernel of the zero polynomial")
    target = f.twist_q**f.degree
    base = f.field
    result = None
    for s in range(1, max_factor + 1):
        if base.p ** (base.m * s) > element_bound():
            break
        ambient = make_field(base.p, base.m * s)
        kernel = kernel_elements(f, ambient, workers)
        result = KernelSearch(kernel.size == target, ambient, kernel)
        if result.split:
            logger.debug(f"Kernel of degree-{f.degree} polynomial splits in {ambient}")
            return result
    if result is None:
        kernel = kernel_elements(f, base, workers)
        result = KernelSearch(kernel.size == target, base, kernel)
    logger.warning(
        f"Kernel of degree-{f.degree} polynomial does not split up to {result.ambient} "
        f"({result.size} of {target} elements)"
    )
    return result


def coeff_sigma(f: SkewPoly, automorphism: Callable[[FieldElement], FieldElement]) -> SkewPoly:
    """Apply a field automorphism to every coefficient."""
    return SkewPoly(f.field, f.twist_q, automorphism(f.coeffs))


def scalar_conjugate(f: SkewPoly, scale_pow: FieldElement) -> SkewPoly:
    """
    l**-1 * f * l for a constant l, given only scale_pow = l**(q-1).

    tau**i * l = l**(q**i) * tau**i, so coefficient i picks up
    (l**(q-1))**((q**i - 1)/(q - 1)).
    """
    q = f.twist_q
    group_order = f.field.order - 1
    out = f.coeffs.copy()
    for i in range(1, out.size):
        e = ((q**i - 1) // (q - 1)) % group_order
        out[i] = out[i] * scale_pow**e
    return SkewPoly(f.field, q, out)
