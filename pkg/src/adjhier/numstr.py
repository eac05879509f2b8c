"""Decimal-string conversion for counts of any size.

CPython guards int<->str conversions beyond a few thousand digits; deep
tables exceed that (the level-16 size alone has ~8300 digits), so every
serialization path converts through these chunked helpers instead of
relying on the built-ins.
"""

_CHUNK = 2000  # digits per block, safely under the interpreter guard
_BASE = 10 ** _CHUNK


def decimal_str(n: int) -> str:
    """str(n) for a nonnegative int, immune to the conversion guard."""
    if n < 0:
        raise ValueError("counts are nonnegative")
    try:
        return str(n)
    except ValueError:
        pass
    parts = []
    while n:
        n, rem = divmod(n, _BASE)
        parts.append(rem)
    head, tail = parts[-1], parts[-2::-1]
    return str(head) + "".join(str(p).zfill(_CHUNK) for p in tail)


def parse_decimal(s: str) -> int:
    """int(s) for a nonnegative decimal string of any length."""
    s = s.strip()
    if not s.isdigit():
        raise ValueError(f"not a nonnegative decimal string: {s[:40]!r}")
    try:
        return int(s)
    except ValueError:
        pass
    value = 0
    for i in range(0, len(s), _CHUNK):
        block = s[i:i + _CHUNK]
        value = value * (10 ** len(block)) + int(block)
    return value
