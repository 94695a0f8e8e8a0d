import io

import pytest

from multiaes.aes_core import MixStrategy
from multiaes.variants import Variant
from multiaes.vectors import (
    KatRecord,
    ParseError,
    Provenance,
    ascii_block,
    decode_listing,
    default_corpus,
    load_kat,
    loads_kat,
    run_kat,
    serialize_kat,
)

from conftest import ref_variant_encrypt

GOOD = """\
# sample
id = a
variant = single
strategy = all
key1 = 000102030405060708090A0B0C0D0E0F
pt = 00112233445566778899aabbccddeeff
ct = 69c4e0d86a7b0430d8cdb78070b4c55a
provenance = external-standard

id = b
variant = double
strategy = table
key1 = 00000000000000000000000000000000
key2 = 00000000000000000000000000000000
pt = 00000000000000000000000000000000
ct = f795bd4a52e29ed713d313fa20e98dbc
provenance = derived-oracle
"""


def test_parse():
    recs = loads_kat(GOOD)
    assert [r.id for r in recs] == ["a", "b"]
    assert recs[0].strategy is None and recs[0].strategies == tuple(MixStrategy)
    assert recs[1].strategy is MixStrategy.TABLE
    assert recs[1].variant is Variant.DOUBLE
    assert recs[0].keys[0] == bytes(range(16))
    assert load_kat(io.StringIO(GOOD)) == recs
    assert run_kat(recs).passed == 2


def test_round_trip_serialization():
    recs = loads_kat(GOOD)
    text = serialize_kat(recs)
    assert loads_kat(text) == recs
    assert "0a0b0c" in text
    corpus = default_corpus()
    assert loads_kat(serialize_kat(corpus)) == corpus


@pytest.mark.parametrize(
    "edit, line, msg",
    [
        (lambda t: t.replace("pt = 0011", "pt = 00", 1), 6, "32 hex"),
        (lambda t: t.replace("variant = single", "variant = quad"), 3, "unknown variant"),
        (lambda t: t.replace("strategy = all", "strategy = fast"), 4, "unknown strategy"),
        (lambda t: t.replace("provenance = external-standard", "provenance = me"), 8, "unknown provenance"),
        (lambda t: t.replace("# sample", "colour = red"), 1, "unknown field"),
        (lambda t: t.replace("id = b", "id = a"), 10, "duplicate"),
        (lambda t: t.replace("key2 = ", "key3 = "), 14, "without the keys"),
        (lambda t: t.replace("variant = double", "variant = aesx"), 11, "takes 3"),
        (lambda t: t.replace("strategy = all\n", "strategy = all\nstrategy = all\n"), 5, "repeated"),
        (lambda t: t.replace("ct = 69c4", "ct 69c4"), 7, "field = value"),
    ],
)
def test_parse_errors(edit, line, msg):
    with pytest.raises(ParseError, match=msg) as exc:
        loads_kat(edit(GOOD))
    assert exc.value.line == line


def test_missing_field():
    with pytest.raises(ParseError, match="missing field 'ct'"):
        loads_kat("\n".join(ln for ln in GOOD.splitlines() if not ln.startswith("ct")))


def test_default_corpus_passes():
    report = run_kat(default_corpus())
    assert report.ok
    assert report.total == report.passed + len(report.failed) + report.skipped_informational
    assert report.skipped_informational == 3
    assert {rid for rid, _ in report.informational} == {"listing-aes128", "listing-aesx128", "listing-double128"}


def test_derived_records_agree_with_oracle():
    for r in default_corpus():
        if r.provenance is not Provenance.PAPER_INFORMATIONAL:
            assert ref_variant_encrypt(r.variant.value, r.keys, r.plaintext) == r.ciphertext, r.id


def test_corrupted_record_fails():
    recs = loads_kat(GOOD)
    bad = KatRecord(**{**recs[0].__dict__, "ciphertext": bytes(16)})
    report = run_kat([recs[1], bad])
    assert not report.ok and report.passed == 1
    (fail,) = report.failed
    assert fail.id == "a" and fail.expected == "0" * 32
    # both directions, every strategy
    assert len(fail.mismatches) == 6
    assert {m.direction for m in fail.mismatches} == {"encrypt", "decrypt"}
    assert "FAIL a encrypt [math]" in report.summary()


def test_informational_never_fails():
    rec = KatRecord("x", Variant.SINGLE, None, (bytes(16),), bytes(16), bytes(16), Provenance.PAPER_INFORMATIONAL)
    report = run_kat([rec])
    assert report.ok and report.skipped_informational == 1 and report.informational == [("x", False)]


def test_failed_sorted_by_id():
    base = loads_kat(GOOD)[0]
    recs = [KatRecord(**{**base.__dict__, "id": i, "ciphertext": bytes(16)}) for i in "zya"]
    assert [f.id for f in run_kat(recs).failed] == ["a", "y", "z"]


def test_ascii_block():
    assert ascii_block("arragsliman_miti") == b"arragsliman_miti"
    assert ascii_block("Dr_ARRAG_SLIMAN") == b"Dr_ARRAG_SLIMAN\x00"
    with pytest.raises(ValueError):
        ascii_block("x" * 17)


def test_decode_listing():
    assert decode_listing("8[139][195]S") == bytes([0x38, 139, 195, 0x53])
    assert decode_listing("a b\n[0]") == b"ab\x00"
    with pytest.raises(ValueError):
        decode_listing("[300]")


def test_informational_inputs_follow_ascii_policy():
    by_id = {r.id: r for r in default_corpus()}
    rec = by_id["listing-aesx128"]
    assert rec.plaintext == ascii_block("hamdoun_&_tragha")
    assert rec.keys == tuple(ascii_block(k) for k in ("arragsliman_miti", "Dr_ARRAG_SLIMAN", "DR_khamlichsalah"))
