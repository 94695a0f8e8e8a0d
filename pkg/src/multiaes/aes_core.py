"""AES-128 block primitive with pluggable MixColumns strategies.

A 16-byte block maps onto the 4x4 state column-major: ``s[r][c] = block[4*c + r]``.
States are lists of four row lists and every transformation returns a new
state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .gf256 import INV_SBOX, MUL_TABLES, SBOX, gf_mul, xtime

BLOCK_SIZE = 16
KEY_SIZE = 16
ROUNDS = 10

State = list[list[int]]
Column = tuple[int, int, int, int]

FORWARD_MATRIX = (
    (0x02, 0x03, 0x01, 0x01),
    (0x01, 0x02, 0x03, 0x01),
    (0x01, 0x01, 0x02, 0x03),
    (0x03, 0x01, 0x01, 0x02),
)
INVERSE_MATRIX = (
    (0x0E, 0x0B, 0x0D, 0x09),
    (0x09, 0x0E, 0x0B, 0x0D),
    (0x0D, 0x09, 0x0E, 0x0B),
    (0x0B, 0x0D, 0x09, 0x0E),
)

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)


class MixStrategy(str, enum.Enum):
    """How the constant multiplications inside MixColumns are carried out.

    MATH
        direct matrix-vector product with the general ``gf_mul``
    TABLE
        lookups into precomputed 256-entry multiply-by-constant tables
    XTIME
        decomposition of every constant into sums of repeated ``xtime``
    """

    MATH = "math"
    TABLE = "table"
    XTIME = "xtime"


@dataclass
class OpCounts:
    """Field-operation tally collected by the instrumented path."""

    gf_mul: int = 0
    xtime: int = 0
    table_lookups: int = 0

    def __iadd__(self, other: "OpCounts") -> "OpCounts":
        self.gf_mul += other.gf_mul
        self.xtime += other.xtime
        self.table_lookups += other.table_lookups
        return self


def check_key(key: bytes) -> bytes:
    key = bytes(key)
    if len(key) != KEY_SIZE:
        raise ValueError(f"AES-128 key must be {KEY_SIZE} bytes, got {len(key)}")
    return key


def check_block(block: bytes) -> bytes:
    block = bytes(block)
    if len(block) != BLOCK_SIZE:
        raise ValueError(f"block must be {BLOCK_SIZE} bytes, got {len(block)}")
    return block


def to_state(block: bytes) -> State:
    return [[block[4 * c + r] for c in range(4)] for r in range(4)]


def from_state(state: State) -> bytes:
    return bytes(state[r][c] for c in range(4) for r in range(4))


# --- round transformations -------------------------------------------------


def sub_bytes(state: State) -> State:
    return [[SBOX[b] for b in row] for row in state]


def inv_sub_bytes(state: State) -> State:
    return [[INV_SBOX[b] for b in row] for row in state]


def shift_rows(state: State) -> State:
    return [row[r:] + row[:r] for r, row in enumerate(state)]


def inv_shift_rows(state: State) -> State:
    return [row[4 - r:] + row[:4 - r] if r else row[:] for r, row in enumerate(state)]


def add_round_key(state: State, round_key: bytes) -> State:
    return [[state[r][c] ^ round_key[4 * c + r] for c in range(4)] for r in range(4)]


# --- MixColumns, one column at a time --------------------------------------


def _matrix_column(matrix, col: Column, counter: Optional[OpCounts]) -> Column:
    if counter is not None:
        counter.gf_mul += 16
    a0, a1, a2, a3 = col
    return tuple(  # type: ignore[return-value]
        gf_mul(a0, m0) ^ gf_mul(a1, m1) ^ gf_mul(a2, m2) ^ gf_mul(a3, m3)
        for m0, m1, m2, m3 in matrix
    )


def _mix_math(col: Column, counter: Optional[OpCounts] = None) -> Column:
    return _matrix_column(FORWARD_MATRIX, col, counter)


def _inv_mix_math(col: Column, counter: Optional[OpCounts] = None) -> Column:
    return _matrix_column(INVERSE_MATRIX, col, counter)


_T2 = MUL_TABLES[0x02].entries
_T3 = MUL_TABLES[0x03].entries
_T9 = MUL_TABLES[0x09].entries
_TB = MUL_TABLES[0x0B].entries
_TD = MUL_TABLES[0x0D].entries
_TE = MUL_TABLES[0x0E].entries


def _mix_table(col: Column, counter: Optional[OpCounts] = None) -> Column:
    # multiplications by 01 need no lookup
    if counter is not None:
        counter.table_lookups += 8
    a0, a1, a2, a3 = col
    return (
        _T2[a0] ^ _T3[a1] ^ a2 ^ a3,
        a0 ^ _T2[a1] ^ _T3[a2] ^ a3,
        a0 ^ a1 ^ _T2[a2] ^ _T3[a3],
        _T3[a0] ^ a1 ^ a2 ^ _T2[a3],
    )


def _inv_mix_table(col: Column, counter: Optional[OpCounts] = None) -> Column:
    if counter is not None:
        counter.table_lookups += 16
    a0, a1, a2, a3 = col
    return (
        _TE[a0] ^ _TB[a1] ^ _TD[a2] ^ _T9[a3],
        _T9[a0] ^ _TE[a1] ^ _TB[a2] ^ _TD[a3],
        _TD[a0] ^ _T9[a1] ^ _TE[a2] ^ _TB[a3],
        _TB[a0] ^ _TD[a1] ^ _T9[a2] ^ _TE[a3],
    )


def _mix_xtime(col: Column, counter: Optional[OpCounts] = None) -> Column:
    # 02.x = xtime(x), 03.x = xtime(x) ^ x; one xtime per byte is shared
    if counter is not None:
        counter.xtime += 4
    a0, a1, a2, a3 = col
    d0, d1, d2, d3 = xtime(a0), xtime(a1), xtime(a2), xtime(a3)
    return (
        d0 ^ d1 ^ a1 ^ a2 ^ a3,
        a0 ^ d1 ^ d2 ^ a2 ^ a3,
        a0 ^ a1 ^ d2 ^ d3 ^ a3,
        d0 ^ a0 ^ a1 ^ a2 ^ d3,
    )


def _inv_mix_xtime(col: Column, counter: Optional[OpCounts] = None) -> Column:
    # 09 = x3^x, 0B = x3^x1^x, 0D = x3^x2^x, 0E = x3^x2^x1
    if counter is not None:
        counter.xtime += 12
    m9, mb, md, me = [], [], [], []
    for a in col:
        x1 = xtime(a)
        x2 = xtime(x1)
        x3 = xtime(x2)
        m9.append(x3 ^ a)
        mb.append(x3 ^ x1 ^ a)
        md.append(x3 ^ x2 ^ a)
        me.append(x3 ^ x2 ^ x1)
    return (
        me[0] ^ mb[1] ^ md[2] ^ m9[3],
        m9[0] ^ me[1] ^ mb[2] ^ md[3],
        md[0] ^ m9[1] ^ me[2] ^ mb[3],
        mb[0] ^ md[1] ^ m9[2] ^ me[3],
    )


ColumnFn = Callable[[Column, Optional[OpCounts]], Column]

FORWARD_COLUMN: dict[MixStrategy, ColumnFn] = {
    MixStrategy.MATH: _mix_math,
    MixStrategy.TABLE: _mix_table,
    MixStrategy.XTIME: _mix_xtime,
}
INVERSE_COLUMN: dict[MixStrategy, ColumnFn] = {
    MixStrategy.MATH: _inv_mix_math,
    MixStrategy.TABLE: _inv_mix_table,
    MixStrategy.XTIME: _inv_mix_xtime,
}


def mix_column(col: Sequence[int], strategy: MixStrategy = MixStrategy.XTIME) -> Column:
    return FORWARD_COLUMN[MixStrategy(strategy)](tuple(col), None)  # type: ignore[arg-type]


def inv_mix_column(col: Sequence[int], strategy: MixStrategy = MixStrategy.XTIME) -> Column:
    return INVERSE_COLUMN[MixStrategy(strategy)](tuple(col), None)  # type: ignore[arg-type]


def _apply_columns(state: State, fn: ColumnFn, counter: Optional[OpCounts]) -> State:
    cols = [fn((state[0][c], state[1][c], state[2][c], state[3][c]), counter) for c in range(4)]
    return [[cols[c][r] for c in range(4)] for r in range(4)]


def mix_columns(
    state: State,
    strategy: MixStrategy = MixStrategy.XTIME,
    counter: Optional[OpCounts] = None,
) -> State:
    return _apply_columns(state, FORWARD_COLUMN[MixStrategy(strategy)], counter)


def inv_mix_columns(
    state: State,
    strategy: MixStrategy = MixStrategy.XTIME,
    counter: Optional[OpCounts] = None,
) -> State:
    return _apply_columns(state, INVERSE_COLUMN[MixStrategy(strategy)], counter)


# --- key schedule ----------------------------------------------------------


@dataclass(frozen=True)
class RoundKeySchedule:
    round_keys: tuple[bytes, ...]

    def __post_init__(self):
        if len(self.round_keys) != ROUNDS + 1 or any(len(k) != 16 for k in self.round_keys):
            raise ValueError("schedule must hold 11 round keys of 16 bytes")

    @property
    def key(self) -> bytes:
        return self.round_keys[0]


def expand_key(key: bytes) -> RoundKeySchedule:
    """Standard AES-128 key expansion (RotWord, SubWord, Rcon)."""
    key = check_key(key)
    words = [list(key[i:i + 4]) for i in range(0, 16, 4)]
    for i in range(4, 4 * (ROUNDS + 1)):
        t = words[i - 1]
        if i % 4 == 0:
            t = [SBOX[b] for b in t[1:] + t[:1]]
            t[0] ^= RCON[i // 4 - 1]
        words.append([a ^ b for a, b in zip(words[i - 4], t)])
    flat = bytes(b for w in words for b in w)
    return RoundKeySchedule(tuple(flat[16 * r:16 * r + 16] for r in range(ROUNDS + 1)))


def _as_schedule(key_or_schedule) -> RoundKeySchedule:
    if isinstance(key_or_schedule, RoundKeySchedule):
        return key_or_schedule
    return expand_key(key_or_schedule)


# --- full cipher -----------------------------------------------------------
#
# The block loops below run on a flat column-major list so that every state
# column is a contiguous slice; results match the State-level functions above.

_SHIFT = [4 * ((i // 4 + i % 4) % 4) + i % 4 for i in range(16)]
_INV_SHIFT = [_SHIFT.index(i) for i in range(16)]


def _flat_mix(x: list[int], fn: ColumnFn, counter: Optional[OpCounts]) -> list[int]:
    out: list[int] = []
    for c in range(0, 16, 4):
        out.extend(fn((x[c], x[c + 1], x[c + 2], x[c + 3]), counter))
    return out


def encrypt_block(
    schedule: RoundKeySchedule | bytes,
    block: bytes,
    strategy: MixStrategy = MixStrategy.XTIME,
    counter: Optional[OpCounts] = None,
) -> bytes:
    """Encrypt one block.  ``schedule`` may also be a raw 16-byte key.

    Passing ``counter`` tallies the MixColumns field operations; the output
    is the same either way.
    """
    rk = _as_schedule(schedule).round_keys
    fn = FORWARD_COLUMN[MixStrategy(strategy)]
    x = [a ^ k for a, k in zip(check_block(block), rk[0])]
    for rnd in range(1, ROUNDS):
        x = _flat_mix([SBOX[x[j]] for j in _SHIFT], fn, counter)
        x = [a ^ k for a, k in zip(x, rk[rnd])]
    return bytes(SBOX[x[j]] ^ k for j, k in zip(_SHIFT, rk[ROUNDS]))


def decrypt_block(
    schedule: RoundKeySchedule | bytes,
    block: bytes,
    strategy: MixStrategy = MixStrategy.XTIME,
    counter: Optional[OpCounts] = None,
) -> bytes:
    rk = _as_schedule(schedule).round_keys
    fn = INVERSE_COLUMN[MixStrategy(strategy)]
    x = [a ^ k for a, k in zip(check_block(block), rk[ROUNDS])]
    for rnd in range(ROUNDS - 1, 0, -1):
        x = [INV_SBOX[x[j]] ^ k for j, k in zip(_INV_SHIFT, rk[rnd])]
        x = _flat_mix(x, fn, counter)
    return bytes(INV_SBOX[x[j]] ^ k for j, k in zip(_INV_SHIFT, rk[0]))
