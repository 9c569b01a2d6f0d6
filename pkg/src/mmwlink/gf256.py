"""Arithmetic over GF(2^8).

Field polynomial is x^8 + x^4 + x^3 + x^2 + 1 (0x11D) and the group
generator is alpha = 2.  Exp/log tables are built once at import; the exp
table is doubled so sums of two log values index it without a mod 255.
"""

import numpy as np

FIELD_POLY = 0x11D
ALPHA = 2
ORDER = 255  # size of the multiplicative group

EXP = [0] * 512
LOG = [0] * 256


def _build_tables() -> None:
    x = 1
    for i in range(ORDER):
        EXP[i] = x
        LOG[x] = i
        x <<= 1
        if x & 0x100:
            x ^= FIELD_POLY
    for i in range(ORDER, 512):
        EXP[i] = EXP[i - ORDER]


_build_tables()

# Vector views of the same tables plus a full 256x256 product table for the
# batched codec paths.  MUL_TABLE[a, b] == gf_mul(a, b).
EXP_NP = np.array(EXP, dtype=np.uint8)
LOG_NP = np.array(LOG, dtype=np.int32)

_logs = LOG_NP[np.arange(256)]
MUL_TABLE = EXP_NP[(_logs[:, None] + _logs[None, :]) % ORDER].copy()
MUL_TABLE[0, :] = 0
MUL_TABLE[:, 0] = 0
del _logs


def _check_byte(value: int) -> None:
    if not 0 <= value <= 255:
        raise ValueError(f"GF(256) element out of range: {value}")


def gf_mul(a: int, b: int) -> int:
    """Product of two field elements."""
    _check_byte(a)
    _check_byte(b)
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def gf_div(a: int, b: int) -> int:
    """Quotient a / b; b must be nonzero."""
    _check_byte(a)
    _check_byte(b)
    if b == 0:
        raise ZeroDivisionError("division by zero in GF(256)")
    if a == 0:
        return 0
    return EXP[(LOG[a] - LOG[b]) % ORDER]


def gf_inv(a: int) -> int:
    """Multiplicative inverse of a nonzero element."""
    _check_byte(a)
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(256)")
    return EXP[ORDER - LOG[a]]


def gf_pow(a: int, n: int) -> int:
    """a raised to an integer power (n may be negative for nonzero a)."""
    _check_byte(a)
    if a == 0:
        if n < 0:
            raise ZeroDivisionError("negative power of zero in GF(256)")
        return 1 if n == 0 else 0
    return EXP[(LOG[a] * n) % ORDER]
