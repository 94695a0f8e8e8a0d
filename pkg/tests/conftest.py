"""Independent oracles shared by the tests.

AES itself comes from the ``cryptography`` package; the field oracle is
plain polynomial long division, written separately from the library code.
"""

import pytest
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes


def ref_encrypt(key: bytes, block: bytes) -> bytes:
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    return enc.update(block) + enc.finalize()


def ref_decrypt(key: bytes, block: bytes) -> bytes:
    dec = Cipher(algorithms.AES(key), modes.ECB()).decryptor()
    return dec.update(block) + dec.finalize()


def xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


def ref_variant_encrypt(variant: str, keys, p: bytes) -> bytes:
    if variant == "single":
        return ref_encrypt(keys[0], p)
    if variant == "double":
        return ref_encrypt(keys[1], ref_encrypt(keys[0], p))
    if variant == "triple2":
        return ref_encrypt(keys[0], ref_decrypt(keys[1], ref_encrypt(keys[0], p)))
    if variant == "aesx":
        return xor(keys[2], ref_encrypt(keys[1], xor(p, keys[0])))
    if variant == "aes-exe":
        return ref_encrypt(keys[2], xor(keys[1], ref_encrypt(keys[0], p)))
    raise ValueError(variant)


def poly_mul_mod(a: int, b: int) -> int:
    """Carry-less product, then long division by x^8+x^4+x^3+x+1."""
    prod = 0
    for i in range(8):
        if b >> i & 1:
            prod ^= a << i
    for deg in range(14, 7, -1):
        if prod >> deg & 1:
            prod ^= 0x11B << (deg - 8)
    return prod


@pytest.fixture(scope="session")
def field_oracle():
    return [[poly_mul_mod(a, b) for b in range(256)] for a in range(256)]
