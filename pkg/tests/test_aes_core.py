import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multiaes import aes_core, batch
from multiaes.aes_core import (
    MixStrategy,
    OpCounts,
    RoundKeySchedule,
    add_round_key,
    decrypt_block,
    encrypt_block,
    expand_key,
    from_state,
    inv_mix_column,
    inv_mix_columns,
    inv_shift_rows,
    inv_sub_bytes,
    mix_column,
    mix_columns,
    shift_rows,
    sub_bytes,
    to_state,
)
from multiaes.gf256 import gf_mul

from conftest import ref_decrypt, ref_encrypt

STRATEGIES = list(MixStrategy)
block = st.binary(min_size=16, max_size=16)

C1_KEY = bytes.fromhex("000102030405060708090a0b0c0d0e0f")
C1_PT = bytes.fromhex("00112233445566778899aabbccddeeff")
C1_CT = bytes.fromhex("69c4e0d86a7b0430d8cdb78070b4c55a")


def test_state_is_column_major():
    b = bytes(range(16))
    s = to_state(b)
    assert s[1][0] == 1 and s[0][1] == 4 and s[3][3] == 15
    assert from_state(s) == b


def test_shift_rows():
    s = shift_rows(to_state(bytes(range(16))))
    assert s[0] == [0, 4, 8, 12]
    assert s[1] == [5, 9, 13, 1]
    assert s[2] == [10, 14, 2, 6]
    assert s[3] == [15, 3, 7, 11]


@given(block)
def test_state_transforms_invert(b):
    s = to_state(b)
    assert from_state(inv_shift_rows(shift_rows(s))) == b
    assert from_state(inv_sub_bytes(sub_bytes(s))) == b
    assert from_state(add_round_key(add_round_key(s, C1_KEY), C1_KEY)) == b
    for strategy in STRATEGIES:
        assert from_state(inv_mix_columns(mix_columns(s, strategy), strategy)) == b


@pytest.mark.parametrize("strategy", STRATEGIES)
@pytest.mark.parametrize(
    "col, want",
    [
        ([0xD4, 0xBF, 0x5D, 0x30], [0x04, 0x66, 0x81, 0xE5]),
        ([0xDB, 0x13, 0x53, 0x45], [0x8E, 0x4D, 0xA1, 0xBC]),
        ([0x01, 0x01, 0x01, 0x01], [0x01, 0x01, 0x01, 0x01]),
        ([0xC6, 0xC6, 0xC6, 0xC6], [0xC6, 0xC6, 0xC6, 0xC6]),
        ([0x2D, 0x26, 0x31, 0x4C], [0x4D, 0x7E, 0xBD, 0xF8]),
    ],
)
def test_mix_column_vectors(strategy, col, want):
    assert list(mix_column(col, strategy)) == want
    assert list(inv_mix_column(want, strategy)) == col


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_op_counts_per_column(strategy):
    fwd, inv = OpCounts(), OpCounts()
    aes_core.FORWARD_COLUMN[strategy]((1, 2, 3, 4), fwd)
    aes_core.INVERSE_COLUMN[strategy]((1, 2, 3, 4), inv)
    want = {
        MixStrategy.MATH: ((16, 0, 0), (16, 0, 0)),
        MixStrategy.TABLE: ((0, 0, 8), (0, 0, 16)),
        MixStrategy.XTIME: ((0, 4, 0), (0, 12, 0)),
    }[strategy]
    assert (fwd.gf_mul, fwd.xtime, fwd.table_lookups) == want[0]
    assert (inv.gf_mul, inv.xtime, inv.table_lookups) == want[1]


def test_key_expansion_reference():
    rk = expand_key(bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c")).round_keys
    assert rk[1].hex() == "a0fafe1788542cb123a339392a6c7605"
    assert rk[10].hex() == "d014f9a8c9ee2589e13f0cc8b6630ca6"


def test_schedule_validation():
    with pytest.raises(ValueError):
        RoundKeySchedule((bytes(16),) * 10)
    assert expand_key(C1_KEY).key == C1_KEY


@pytest.mark.parametrize("bad", [b"", bytes(15), bytes(17)])
def test_length_checks(bad):
    with pytest.raises(ValueError):
        encrypt_block(C1_KEY, bad)
    with pytest.raises(ValueError):
        encrypt_block(bad, C1_PT)
    with pytest.raises(ValueError):
        decrypt_block(C1_KEY, bad)


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_appendix_vector(strategy):
    assert encrypt_block(C1_KEY, C1_PT, strategy) == C1_CT
    assert decrypt_block(C1_KEY, C1_CT, strategy) == C1_PT


@settings(max_examples=60)
@given(block, block)
def test_matches_reference_oracle(key, pt):
    ct = ref_encrypt(key, pt)
    schedule = expand_key(key)
    for strategy in STRATEGIES:
        assert encrypt_block(schedule, pt, strategy) == ct
        assert decrypt_block(schedule, ct, strategy) == pt
    assert decrypt_block(key, pt) == ref_decrypt(key, pt)


def test_counter_does_not_change_output():
    for strategy in STRATEGIES:
        c = OpCounts()
        assert encrypt_block(C1_KEY, C1_PT, strategy, c) == C1_CT
        assert decrypt_block(C1_KEY, C1_CT, strategy, c) == C1_PT


# --- batch engine ------------------------------------------------------------


def test_batch_gf_mul_matches_scalar():
    words = np.arange(256, dtype=np.uint32) * np.uint32(0x01010101)
    for c in (2, 3, 9, 0x0B, 0x0D, 0x0E, 0x57):
        got = batch._bytes(batch.gf_mul(words, c)).reshape(256, 4)
        assert got[:, 0].tolist() == [gf_mul(a, c) for a in range(256)]
        assert (got == got[:, :1]).all()


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_batch_matches_scalar(strategy):
    rng = random.Random(7)
    key = rng.randbytes(16)
    pts = [rng.randbytes(16) for _ in range(50)]
    ct = batch.encrypt_blocks(key, b"".join(pts), strategy)
    assert [bytes(r) for r in ct] == [encrypt_block(key, p, strategy) for p in pts]
    assert batch.decrypt_blocks(expand_key(key), ct, strategy).tobytes() == b"".join(pts)


def test_batch_spans_chunks(monkeypatch):
    monkeypatch.setattr(batch, "CHUNK", 7)
    rng = np.random.default_rng(1)
    x = rng.integers(0, 256, (30, 16), dtype=np.uint8)
    ct = batch.encrypt_blocks(C1_KEY, x)
    assert ct.tobytes() == b"".join(ref_encrypt(C1_KEY, r.tobytes()) for r in x)
    assert (batch.decrypt_blocks(C1_KEY, ct) == x).all()


def test_batch_per_block_keys():
    rng = np.random.default_rng(2)
    keys = rng.integers(0, 256, (20, 16), dtype=np.uint8)
    x = rng.integers(0, 256, (20, 16), dtype=np.uint8)
    rk = batch.expand_keys(keys)
    for k, r in zip(keys, rk):
        assert r.tobytes() == b"".join(expand_key(k.tobytes()).round_keys)
    ct = batch.encrypt_blocks(rk, x, MixStrategy.TABLE)
    for k, p, c in zip(keys, x, ct):
        assert c.tobytes() == ref_encrypt(k.tobytes(), p.tobytes())


def test_batch_rejects_partial_block():
    with pytest.raises(ValueError, match="multiple of 16"):
        batch.as_blocks(bytes(17))
