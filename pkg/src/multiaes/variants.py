"""Multiple-encryption compositions built on the AES-128 block primitive.

==========  =====  =====================================  =====================================
variant     keys   encrypt                                decrypt
==========  =====  =====================================  =====================================
SINGLE      1      E_k1(P)                                D_k1(C)
DOUBLE      2      E_k2(E_k1(P))                          D_k1(D_k2(C))
TRIPLE2     2      E_k1(D_k2(E_k1(P)))                    D_k1(E_k2(D_k1(C)))
AESX        3      k3 ^ E_k2(P ^ k1)                      k1 ^ D_k2(C ^ k3)
AES_EXE     3      E_k3(k2 ^ E_k1(P))                     D_k1(k2 ^ D_k3(C))
==========  =====  =====================================  =====================================

Whitening keys (k1/k3 of AESX, k2 of AES_EXE) are XORed over the full block
and never expanded into a schedule.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import batch
from .aes_core import (
    MixStrategy,
    OpCounts,
    RoundKeySchedule,
    check_block,
    check_key,
    decrypt_block,
    encrypt_block,
    expand_key,
)


class ArityError(ValueError):
    """The number of keys supplied does not match the variant."""


class Variant(str, enum.Enum):
    SINGLE = "single"
    DOUBLE = "double"
    TRIPLE2 = "triple2"
    AESX = "aesx"
    AES_EXE = "aes-exe"

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {
    Variant.SINGLE: 1,
    Variant.DOUBLE: 2,
    Variant.TRIPLE2: 2,
    Variant.AESX: 3,
    Variant.AES_EXE: 3,
}

# which key slots are used as cipher keys (the rest are whitening masks)
_SCHEDULED = {
    Variant.SINGLE: (0,),
    Variant.DOUBLE: (0, 1),
    Variant.TRIPLE2: (0, 1),
    Variant.AESX: (1,),
    Variant.AES_EXE: (0, 2),
}


@dataclass(frozen=True)
class VariantKeySet:
    k1: bytes
    k2: Optional[bytes] = None
    k3: Optional[bytes] = None

    @classmethod
    def of(cls, *keys: bytes) -> "VariantKeySet":
        if not 1 <= len(keys) <= 3:
            raise ArityError(f"expected 1 to 3 keys, got {len(keys)}")
        return cls(*keys)

    @property
    def keys(self) -> tuple[bytes, ...]:
        return tuple(k for k in (self.k1, self.k2, self.k3) if k is not None)

    def check(self, variant: Variant) -> tuple[bytes, ...]:
        variant = Variant(variant)
        if self.k2 is None and self.k3 is not None:
            raise ArityError("key3 given without key2")
        keys = self.keys
        if len(keys) != variant.arity:
            raise ArityError(
                f"{variant.value} takes {variant.arity} key(s), got {len(keys)}"
            )
        return tuple(check_key(k) for k in keys)


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


class VariantContext:
    """A variant bound to its keys, with schedules expanded once.

    Immutable after construction; share freely between threads.
    """

    def __init__(self, variant: Variant | str, keys: VariantKeySet | tuple[bytes, ...] | list[bytes]):
        self.variant = Variant(variant)
        if not isinstance(keys, VariantKeySet):
            keys = VariantKeySet.of(*keys)
        self.keys = keys.check(self.variant)
        scheduled: dict[int, RoundKeySchedule] = {}
        for slot in _SCHEDULED[self.variant]:
            # equal keys share one schedule
            same = [s for s in scheduled if self.keys[s] == self.keys[slot]]
            scheduled[slot] = scheduled[same[0]] if same else expand_key(self.keys[slot])
        self._schedules = scheduled
        self._round_keys = {slot: batch.round_key_array(s) for slot, s in scheduled.items()}

    def __repr__(self) -> str:
        return f"VariantContext({self.variant.value!r})"

    # --- single block ------------------------------------------------------

    def encrypt(
        self,
        block: bytes,
        strategy: MixStrategy = MixStrategy.XTIME,
        counter: Optional[OpCounts] = None,
    ) -> bytes:
        p = check_block(block)
        s, k, v = self._schedules, self.keys, self.variant

        def e(slot, x):
            return encrypt_block(s[slot], x, strategy, counter)

        def d(slot, x):
            return decrypt_block(s[slot], x, strategy, counter)

        if v is Variant.SINGLE:
            return e(0, p)
        if v is Variant.DOUBLE:
            return e(1, e(0, p))
        if v is Variant.TRIPLE2:
            return e(0, d(1, e(0, p)))
        if v is Variant.AESX:
            return _xor(k[2], e(1, _xor(p, k[0])))
        return e(2, _xor(k[1], e(0, p)))

    def decrypt(
        self,
        block: bytes,
        strategy: MixStrategy = MixStrategy.XTIME,
        counter: Optional[OpCounts] = None,
    ) -> bytes:
        c = check_block(block)
        s, k, v = self._schedules, self.keys, self.variant

        def e(slot, x):
            return encrypt_block(s[slot], x, strategy, counter)

        def d(slot, x):
            return decrypt_block(s[slot], x, strategy, counter)

        if v is Variant.SINGLE:
            return d(0, c)
        if v is Variant.DOUBLE:
            return d(0, d(1, c))
        if v is Variant.TRIPLE2:
            return d(0, e(1, d(0, c)))
        if v is Variant.AESX:
            return _xor(k[0], d(1, _xor(c, k[2])))
        return d(0, _xor(k[1], d(2, c)))

    # --- many blocks (numpy) -----------------------------------------------

    def encrypt_blocks(self, blocks: np.ndarray, strategy: MixStrategy = MixStrategy.XTIME) -> np.ndarray:
        x = batch.as_blocks(blocks)
        rk, v = self._round_keys, self.variant

        def e(slot, y):
            return batch.encrypt_blocks(rk[slot], y, strategy)

        def d(slot, y):
            return batch.decrypt_blocks(rk[slot], y, strategy)

        if v is Variant.SINGLE:
            return e(0, x)
        if v is Variant.DOUBLE:
            return e(1, e(0, x))
        if v is Variant.TRIPLE2:
            return e(0, d(1, e(0, x)))
        if v is Variant.AESX:
            return e(1, x ^ self._mask(0)) ^ self._mask(2)
        return e(2, e(0, x) ^ self._mask(1))

    def decrypt_blocks(self, blocks: np.ndarray, strategy: MixStrategy = MixStrategy.XTIME) -> np.ndarray:
        x = batch.as_blocks(blocks)
        rk, v = self._round_keys, self.variant

        def e(slot, y):
            return batch.encrypt_blocks(rk[slot], y, strategy)

        def d(slot, y):
            return batch.decrypt_blocks(rk[slot], y, strategy)

        if v is Variant.SINGLE:
            return d(0, x)
        if v is Variant.DOUBLE:
            return d(0, d(1, x))
        if v is Variant.TRIPLE2:
            return d(0, e(1, d(0, x)))
        if v is Variant.AESX:
            return d(1, x ^ self._mask(2)) ^ self._mask(0)
        return d(0, d(2, x) ^ self._mask(1))

    def _mask(self, slot: int) -> np.ndarray:
        return np.frombuffer(self.keys[slot], dtype=np.uint8)


def variant_context(variant: Variant | str, keys) -> VariantContext:
    return VariantContext(variant, keys)


def variant_encrypt(
    variant: Variant | str,
    keys: VariantKeySet | tuple[bytes, ...] | list[bytes],
    plaintext: bytes,
    strategy: MixStrategy = MixStrategy.XTIME,
) -> bytes:
    return VariantContext(variant, keys).encrypt(plaintext, strategy)


def variant_decrypt(
    variant: Variant | str,
    keys: VariantKeySet | tuple[bytes, ...] | list[bytes],
    ciphertext: bytes,
    strategy: MixStrategy = MixStrategy.XTIME,
) -> bytes:
    return VariantContext(variant, keys).decrypt(ciphertext, strategy)
