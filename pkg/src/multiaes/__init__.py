"""AES-128 from first principles, with interchangeable MixColumns strategies
and the DOUBLE, TRIPLE2, AESX and AES-EXE multiple-encryption variants."""

from .aes_core import (
    MixStrategy,
    OpCounts,
    RoundKeySchedule,
    decrypt_block,
    encrypt_block,
    expand_key,
)
from .gf256 import INV_SBOX, SBOX, gf_mul, xtime
from .variants import (
    ArityError,
    Variant,
    VariantContext,
    VariantKeySet,
    variant_decrypt,
    variant_encrypt,
)

__all__ = [
    "ArityError",
    "INV_SBOX",
    "MixStrategy",
    "OpCounts",
    "RoundKeySchedule",
    "SBOX",
    "Variant",
    "VariantContext",
    "VariantKeySet",
    "decrypt_block",
    "encrypt_block",
    "expand_key",
    "gf_mul",
    "variant_decrypt",
    "variant_encrypt",
    "xtime",
]
