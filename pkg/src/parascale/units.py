"""Unit-prefix handling for flop/s values at the I/O boundary."""

from __future__ import annotations

from decimal import Decimal, InvalidOperation

#: Multipliers for the prefixes accepted on the command line and in headers.
PREFIX_SCALE = {
    "": 1.0,
    "K": 1e3,
    "M": 1e6,
    "G": 1e9,
    "T": 1e12,
    "P": 1e15,
    "E": 1e18,
}

_PREFIX_EXP = {"": 0, "K": 3, "M": 6, "G": 9, "T": 12, "P": 15, "E": 18}

#: Prefixes offered for display, largest first.
_DISPLAY_ORDER = ("E", "P", "T", "G", "M", "K", "")


def parse_flops(text: str) -> float:
    """Parse a flop/s value with an optional prefix suffix, e.g. '0.1254E'.

    A bare number is taken as flop/s.  The prefix letter is case-sensitive
    except that lowercase 'k' is accepted.  Scaling happens in decimal so
    '0.1254E' parses to exactly the float the literal 0.1254e18 denotes.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty flop/s value")
    suffix = s[-1].upper() if s[-1] in ("k",) else s[-1]
    if suffix in _PREFIX_EXP and suffix != "":
        exp, body = _PREFIX_EXP[suffix], s[:-1]
    else:
        exp, body = 0, s
    try:
        value = float(Decimal(body) * Decimal(10) ** exp)
    except InvalidOperation:
        raise ValueError(f"cannot parse flop/s value {text!r}") from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"flop/s value must be finite, got {text!r}")
    return value


def format_flops(value: float, prefix: str | None = None) -> str:
    """Render a flop/s value as e.g. '0.00586 Eflop/s'.

    With ``prefix=None`` the largest prefix keeping the mantissa >= 1 is
    chosen; pass 'G', 'P' or 'E' to force one.
    """
    if prefix is None:
        for p in _DISPLAY_ORDER:
            if abs(value) >= PREFIX_SCALE[p] or p == "":
                prefix = p
                break
    if prefix not in PREFIX_SCALE:
        raise ValueError(f"unknown unit prefix {prefix!r}")
    scaled = value / PREFIX_SCALE[prefix]
    return f"{scaled:.6g} {prefix}flop/s"
