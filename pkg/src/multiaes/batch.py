"""Vectorised AES-128 over many blocks at once.

Same transformations and strategy split as :mod:`multiaes.aes_core`, applied
to ``(n, 16)`` uint8 arrays.  This is what the file commands and the
benchmark drive; pure-Python per-block loops are too slow for megabyte
inputs.

MixColumns works on packed columns: each column is one little-endian uint32
with row ``r`` in bits ``8r..8r+7``, so rotating a column's rows is a 32-bit
rotate and both MixColumns matrices, being circulant, reduce to

    out = sum_k rot_k(m_k * col)

over the first matrix row ``m``.
"""

from __future__ import annotations

import numpy as np

from .aes_core import (
    FORWARD_MATRIX,
    INVERSE_MATRIX,
    RCON,
    ROUNDS,
    MixStrategy,
    RoundKeySchedule,
    expand_key,
)
from .gf256 import INV_SBOX, MUL_TABLES, SBOX

_SBOX = np.array(SBOX, dtype=np.uint8)
_INV_SBOX = np.array(INV_SBOX, dtype=np.uint8)
_TABLES = {c: np.array(t.entries, dtype=np.uint8) for c, t in MUL_TABLES.items()}

# flat index 4*c + r; row r rotates left by r
_SHIFT = np.array([4 * ((i // 4 + i % 4) % 4) + i % 4 for i in range(16)])
_INV_SHIFT = np.argsort(_SHIFT)

_WORD = np.dtype("<u4")
_LOW7 = np.uint32(0x7F7F7F7F)
_LSB = np.uint32(0x01010101)
_RED = np.uint32(0x1B)


def as_blocks(data) -> np.ndarray:
    if isinstance(data, np.ndarray):
        arr = data
    else:
        arr = np.frombuffer(bytes(data), dtype=np.uint8)
    if arr.size % 16:
        raise ValueError(f"input length {arr.size} is not a multiple of 16")
    return np.ascontiguousarray(arr.reshape(-1, 16), dtype=np.uint8)


def round_key_array(schedule: RoundKeySchedule | bytes) -> np.ndarray:
    if not isinstance(schedule, RoundKeySchedule):
        schedule = expand_key(schedule)
    return np.frombuffer(b"".join(schedule.round_keys), dtype=np.uint8).reshape(ROUNDS + 1, 16)


# --- packed-column helpers -------------------------------------------------


def _words(x: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(x).view(_WORD)


def _bytes(w: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(w).view(np.uint8)


def xtime(w: np.ndarray) -> np.ndarray:
    """{02} times every byte lane of a packed array."""
    return ((w & _LOW7) << 1) ^ (((w >> 7) & _LSB) * _RED)


def _rot(w: np.ndarray, k: int) -> np.ndarray:
    # row r of the result is row r+k of the input
    return (w >> np.uint32(8 * k)) | (w << np.uint32(32 - 8 * k))


def gf_mul(w: np.ndarray, b: int) -> np.ndarray:
    """General multiplier: 8 shift-and-add steps whatever the value of ``b``."""
    p = np.zeros_like(w)
    for i in range(8):
        if (b >> i) & 1:
            p ^= w
        if i < 7:
            w = xtime(w)
    return p


def _mix_math(w: np.ndarray, matrix) -> np.ndarray:
    m = matrix[0]
    return gf_mul(w, m[0]) ^ _rot(gf_mul(w, m[1]), 1) ^ _rot(gf_mul(w, m[2]), 2) ^ _rot(gf_mul(w, m[3]), 3)


def _interleave(matrix) -> np.ndarray:
    """MulTable entries for one input byte, packed one per output row.

    Lane ``r`` of entry ``a`` holds ``matrix[r][0] * a`` read from the
    matching multiply table (01 is the byte itself), so the contribution of
    row ``j`` of a column is this word rotated by ``j`` lanes.
    """
    lanes = []
    for r in range(4):
        c = matrix[r][0]
        lanes.append(np.arange(256, dtype=np.uint32) if c == 1 else _TABLES[c].astype(np.uint32))
    return (lanes[0] | (lanes[1] << 8) | (lanes[2] << 16) | (lanes[3] << 24)).astype(_WORD)


_FWD_LANES = _interleave(FORWARD_MATRIX)
_INV_LANES = _interleave(INVERSE_MATRIX)


def _mix_table(x: np.ndarray, lanes: np.ndarray) -> np.ndarray:
    g = lanes[x.astype(np.intp)].reshape(-1, 4, 4)
    # row j's contribution moves up j lanes: rot by (4 - j) % 4
    return g[:, :, 0] ^ _rot(g[:, :, 1], 3) ^ _rot(g[:, :, 2], 2) ^ _rot(g[:, :, 3], 1)


def mix_columns(x: np.ndarray, strategy: MixStrategy) -> np.ndarray:
    strategy = MixStrategy(strategy)
    w = _words(x)
    if strategy is MixStrategy.MATH:
        out = _mix_math(w, FORWARD_MATRIX)
    elif strategy is MixStrategy.TABLE:
        out = _mix_table(x, _FWD_LANES)
    else:
        d = xtime(w)
        out = d ^ _rot(d ^ w, 1) ^ _rot(w, 2) ^ _rot(w, 3)
    return _bytes(out)


def inv_mix_columns(x: np.ndarray, strategy: MixStrategy) -> np.ndarray:
    strategy = MixStrategy(strategy)
    w = _words(x)
    if strategy is MixStrategy.MATH:
        out = _mix_math(w, INVERSE_MATRIX)
    elif strategy is MixStrategy.TABLE:
        out = _mix_table(x, _INV_LANES)
    else:
        # 09 = x3^x, 0B = x3^x1^x, 0D = x3^x2^x, 0E = x3^x2^x1
        x1 = xtime(w)
        x2 = xtime(x1)
        x3 = xtime(x2)
        m9 = x3 ^ w
        out = (x3 ^ x2 ^ x1) ^ _rot(m9 ^ x1, 1) ^ _rot(m9 ^ x2, 2) ^ _rot(m9, 3)
    return _bytes(out)


# --- cipher ----------------------------------------------------------------


def _keys(schedule) -> np.ndarray:
    """Round keys as (11, 16), or (n, 11, 16) when each block has its own key."""
    if isinstance(schedule, np.ndarray):
        return schedule
    return round_key_array(schedule)


def _rk(keys: np.ndarray, rnd: int) -> np.ndarray:
    return keys[rnd] if keys.ndim == 2 else keys[:, rnd]


def _lookup(table: np.ndarray, x: np.ndarray) -> np.ndarray:
    return table[x.astype(np.intp)]


#: blocks per slice; keeps temporaries cache-sized
CHUNK = 4096


def _encrypt(keys: np.ndarray, x: np.ndarray, strategy: MixStrategy) -> np.ndarray:
    x = x ^ _rk(keys, 0)
    for rnd in range(1, ROUNDS):
        x = _lookup(_SBOX, x[:, _SHIFT])
        x = mix_columns(x, strategy) ^ _rk(keys, rnd)
    return _lookup(_SBOX, x[:, _SHIFT]) ^ _rk(keys, ROUNDS)


def _decrypt(keys: np.ndarray, x: np.ndarray, strategy: MixStrategy) -> np.ndarray:
    x = x ^ _rk(keys, ROUNDS)
    for rnd in range(ROUNDS - 1, 0, -1):
        x = _lookup(_INV_SBOX, x[:, _INV_SHIFT]) ^ _rk(keys, rnd)
        x = inv_mix_columns(x, strategy)
    return _lookup(_INV_SBOX, x[:, _INV_SHIFT]) ^ _rk(keys, 0)


def _chunked(fn, schedule, blocks, strategy) -> np.ndarray:
    keys = _keys(schedule)
    x = as_blocks(blocks)
    strategy = MixStrategy(strategy)
    out = np.empty_like(x)
    for i in range(0, len(x), CHUNK):
        k = keys if keys.ndim == 2 else keys[i:i + CHUNK]
        out[i:i + CHUNK] = fn(k, x[i:i + CHUNK], strategy)
    return out


def encrypt_blocks(schedule, blocks, strategy: MixStrategy = MixStrategy.XTIME) -> np.ndarray:
    return _chunked(_encrypt, schedule, blocks, strategy)


def decrypt_blocks(schedule, blocks, strategy: MixStrategy = MixStrategy.XTIME) -> np.ndarray:
    return _chunked(_decrypt, schedule, blocks, strategy)


def expand_keys(keys) -> np.ndarray:
    """Vectorised key expansion: (n, 16) keys -> (n, 11, 16) round keys."""
    keys = as_blocks(keys)
    words = [keys[:, 4 * i:4 * i + 4] for i in range(4)]
    for i in range(4, 4 * (ROUNDS + 1)):
        t = words[i - 1]
        if i % 4 == 0:
            t = _SBOX[np.roll(t, -1, axis=1)]
            t[:, 0] ^= RCON[i // 4 - 1]
        words.append(words[i - 4] ^ t)
    return np.concatenate(words, axis=1).reshape(-1, ROUNDS + 1, 16)
