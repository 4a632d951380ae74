"""
Exception hierarchy for the tower library.

Every failure raised by the arithmetic layers derives from TowerError so the
CLI can catch one type. Verification problems are never raised; they are
reported as rows by the verification service.
"""


class TowerError(Exception):
    """Base class for all library errors."""


# =============================================================================
# Finite fields
# =============================================================================


class CompositeModulus(TowerError):
    """The requested characteristic is not prime."""


class BoundExceeded(TowerError):
    """The requested field has more elements than the enumeration bound."""


class ZeroPolynomial(TowerError):
    """A root or kernel search was asked for the zero polynomial."""


class ZeroInput(TowerError):
    """An operation that needs a nonzero element received zero."""


class NoEmbedding(TowerError):
    """The degree of the subfield does not divide the degree of the target."""


class FieldMismatch(TowerError):
    """Operands live in different fields or use different twists."""


# =============================================================================
# Skew polynomials
# =============================================================================


class SkewDivisionByZero(TowerError, ZeroDivisionError):
    """Right division by the zero skew polynomial."""


class BothZero(TowerError):
    """Right gcd of two zero polynomials."""


# =============================================================================
# Parameters and modules
# =============================================================================


class NoValidEta(TowerError):
    """No admissible eta exists (q = 2 in reduced mode)."""


class NuNotFound(TowerError):
    """No (q+1)-th root for nu exists in the allowed ambient fields."""


class AmbientTooSmall(TowerError):
    """The computation needs nu but the parameters were built without one."""


class ZeroParameter(TowerError):
    """A module or recursion parameter is zero."""


class ZeroLambda(ZeroParameter):
    pass


class ZeroJ(ZeroParameter):
    pass


class ZeroW(ZeroParameter):
    pass


class ZeroU(ZeroParameter):
    pass


class PoleError(TowerError):
    """A displayed rational expression has a vanishing denominator."""


class PoleW(PoleError):
    pass


class PoleJZero(PoleError):
    """w sits where the j-map numerator vanishes, i.e. it maps to j = 0."""


class InvalidChoice(TowerError):
    """A torsion choice is not a root at its level or is the excluded root."""


class AmbiguousRoot(InvalidChoice):
    """The excluded root is a multiple root, so exclusion is ill-defined."""


# =============================================================================
# Tower analytics and configuration
# =============================================================================


class DegenerateEta(TowerError):
    """j = 0 satisfies the supersingular criterion for this eta."""


class NonInteger(TowerError):
    """A genus formula evaluated to a non-integer."""


class ConfigError(TowerError):
    """Invalid configuration value; the message names the field."""
