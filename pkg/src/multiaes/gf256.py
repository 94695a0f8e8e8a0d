"""Arithmetic in GF(2**8) with the Rijndael reduction polynomial.

Elements are plain ints in ``0..255``; bit ``i`` is the coefficient of
``x**i``.  The S-box, its inverse and the MixColumns multiply-by-constant
tables are generated here at import time rather than pasted in as literals.
"""

from __future__ import annotations

from dataclasses import dataclass

#: x^8 + x^4 + x^3 + x + 1
MODULUS = 0x11B
REDUCTION = 0x1B
AFFINE_CONSTANT = 0x63

#: Constants appearing in the forward and inverse MixColumns matrices.
MIX_CONSTANTS = (0x02, 0x03, 0x09, 0x0B, 0x0D, 0x0E)


def xtime(b: int) -> int:
    """Multiply ``b`` by {02}."""
    b <<= 1
    if b & 0x100:
        b ^= MODULUS
    return b


def gf_mul(a: int, b: int) -> int:
    """Field product by shift-and-add.

    The loop runs over the set bits of ``b``, so pass the small constant as
    ``b`` when one operand is fixed.
    """
    p = 0
    while b:
        if b & 1:
            p ^= a
        b >>= 1
        if not b:
            break
        a = (a << 1) ^ MODULUS if a & 0x80 else a << 1
    return p


def gf_inverse(b: int) -> int:
    """Multiplicative inverse, with 0 mapped to itself.

    Exhaustive search; only used while the tables are built.
    """
    if b == 0:
        return 0
    for v in range(1, 256):
        if gf_mul(b, v) == 1:
            return v
    raise ArithmeticError(f"no inverse for {b:#04x}")  # unreachable for a field


def affine_transform(b: int) -> int:
    """Bitwise affine map over GF(2) used by SubBytes.

    out_i = b_i ^ b_(i+4) ^ b_(i+5) ^ b_(i+6) ^ b_(i+7) ^ c_i, indices mod 8.
    """
    out = 0
    for i in range(8):
        bit = (
            (b >> i)
            ^ (b >> ((i + 4) % 8))
            ^ (b >> ((i + 5) % 8))
            ^ (b >> ((i + 6) % 8))
            ^ (b >> ((i + 7) % 8))
            ^ (AFFINE_CONSTANT >> i)
        ) & 1
        out |= bit << i
    return out


@dataclass(frozen=True)
class MulTable:
    constant: int
    entries: tuple[int, ...]

    def __getitem__(self, x: int) -> int:
        return self.entries[x]


@dataclass(frozen=True)
class SBoxPair:
    sbox: tuple[int, ...]
    inv_sbox: tuple[int, ...]


def build_mul_table(c: int) -> MulTable:
    return MulTable(c, tuple(gf_mul(x, c) for x in range(256)))


def build_sbox() -> SBoxPair:
    sbox = [affine_transform(gf_inverse(x)) for x in range(256)]
    inv = [0] * 256
    for x, y in enumerate(sbox):
        inv[y] = x
    return SBoxPair(tuple(sbox), tuple(inv))


def format_sbox(table: tuple[int, ...] | list[int]) -> str:
    """16x16 uppercase hex grid, row index = high nibble."""
    header = "    " + " ".join(f"{c:2X}" for c in range(16))
    rows = [header]
    for hi in range(16):
        cells = " ".join(f"{table[hi * 16 + lo]:02X}" for lo in range(16))
        rows.append(f"{hi:X}0  {cells}")
    return "\n".join(rows)


SBOXES = build_sbox()
SBOX = SBOXES.sbox
INV_SBOX = SBOXES.inv_sbox

if SBOX[0x00] != 0x63 or len(set(SBOX)) != 256:
    raise RuntimeError("generated S-box failed its self-check")

MUL_TABLES: dict[int, MulTable] = {c: build_mul_table(c) for c in MIX_CONSTANTS}
