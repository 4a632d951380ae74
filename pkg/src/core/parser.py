"""Parse element literals and level ranges from the command line and profiles.

Element literals are polynomials in the canonical generator g of the field
they are read into: "2+g", "1+2*g^2", "-g". The letter i is accepted as an
alias of g ("1+2i", "1-i"), matching the usual notation for F_9 = F_3(i).
"""

import re
from typing import Any

from src.drinfeld.errors import ConfigError
from src.drinfeld.ff import FieldElement, FiniteField

_TERM = re.compile(r"""
    (?P<sign>[+-]?)\s*
    (?:
        (?P<coef>\d+)?\s*\*?\s*(?P<var>[gi])(?:\s*\^\s*(?P<exp>\d+))?
      | (?P<const>\d+)
    )
""", re.VERBOSE)

_RANGE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


def parse_coeffs(literal: str, p: int, name: str = "element") -> list[int]:
    """Ascending coefficients mod p of a literal such as "1+2*g^2".

    Args:
        literal: The text to parse
        p: Characteristic used to reduce coefficients
        name: Field name reported in errors

    Raises:
        ConfigError: If the literal is not a polynomial in g
    """
    text = literal.replace(" ", "")
    if not text:
        raise ConfigError(f"empty element literal (field: {name})")
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(text):
        match = _TERM.match(text, pos)
        if not match or match.end() == pos or (pos > 0 and not match.group("sign")):
            raise ConfigError(f"cannot parse {literal!r} as a polynomial in g (field: {name})")
        sign = -1 if match.group("sign") == "-" else 1
        if match.group("const") is not None:
            degree, value = 0, int(match.group("const"))
        else:
            degree = int(match.group("exp") or 1)
            value = int(match.group("coef") or 1)
        coeffs[degree] = coeffs.get(degree, 0) + sign * value
        pos = match.end()
    top = max(coeffs)
    return [coeffs.get(d, 0) % p for d in range(top + 1)]


def parse_element(value: Any, field: FiniteField, name: str = "element") -> FieldElement:
    """Read a literal, an integer residue or an ascending coefficient list into `field`.

    Raises:
        ConfigError: If the value does not denote an element of `field`
    """
    if isinstance(value, bool):
        raise ConfigError(f"expected an element, got {value!r} (field: {name})")
    if isinstance(value, int):
        coeffs = [value % field.p]
    elif isinstance(value, str):
        coeffs = parse_coeffs(value, field.p, name)
    elif isinstance(value, (list, tuple)):
        coeffs = [int(c) % field.p for c in value]
    else:
        raise ConfigError(f"expected an element, got {value!r} (field: {name})")
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) > field.m:
        raise ConfigError(f"{value!r} has degree {len(coeffs) - 1} in g, too large for {field} (field: {name})")
    return field.from_coeffs(coeffs)


def parse_k_range(text: str | int) -> list[int]:
    """Levels from "3", "1..3" or "1,2,5"; sorted and duplicate-free.

    Raises:
        ConfigError: On malformed input or a level below 1
    """
    if isinstance(text, int):
        levels = [text]
    elif match := _RANGE.match(text):
        low, high = int(match.group(1)), int(match.group(2))
        if low > high:
            raise ConfigError(f"empty range {text!r} (field: k)")
        levels = list(range(low, high + 1))
    else:
        try:
            levels = [int(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise ConfigError(f"cannot parse {text!r} as levels (field: k)") from None
    if not levels or min(levels) < 1:
        raise ConfigError(f"levels must be >= 1, got {text!r} (field: k)")
    return sorted(set(levels))
