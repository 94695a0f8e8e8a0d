"""Known-answer test corpus: file format, loader and runner.

A KAT file is UTF-8 text made of paragraphs of ``field = value`` lines::

    # comment
    id = std-appendix-c1
    variant = single
    strategy = all
    key1 = 000102030405060708090a0b0c0d0e0f
    pt = 00112233445566778899aabbccddeeff
    ct = 69c4e0d86a7b0430d8cdb78070b4c55a
    provenance = external-standard

Records are separated by blank lines.  Hex is read case-insensitively and
written lowercase.  Unknown fields are an error.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, TextIO

from .aes_core import MixStrategy
from .variants import Variant, VariantContext

FIELDS = ("id", "variant", "strategy", "key1", "key2", "key3", "pt", "ct", "provenance")
REQUIRED = ("id", "variant", "strategy", "key1", "pt", "ct", "provenance")
ALL = "all"

_HEX32 = re.compile(r"[0-9a-fA-F]{32}")


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Provenance(str, enum.Enum):
    EXTERNAL_STANDARD = "external-standard"
    DERIVED_ORACLE = "derived-oracle"
    PAPER_INFORMATIONAL = "paper-informational"


@dataclass(frozen=True)
class KatRecord:
    id: str
    variant: Variant
    strategy: Optional[MixStrategy]  # None means every strategy
    keys: tuple[bytes, ...]
    plaintext: bytes
    ciphertext: bytes
    provenance: Provenance

    @property
    def informational(self) -> bool:
        return self.provenance is Provenance.PAPER_INFORMATIONAL

    @property
    def strategies(self) -> tuple[MixStrategy, ...]:
        return tuple(MixStrategy) if self.strategy is None else (self.strategy,)


@dataclass(frozen=True)
class Mismatch:
    direction: str
    strategy: MixStrategy
    expected: str
    actual: str


@dataclass(frozen=True)
class KatFailure:
    """One failing record; ``expected``/``actual`` come from its first mismatch."""

    id: str
    expected: str
    actual: str
    mismatches: tuple[Mismatch, ...] = ()


@dataclass
class KatReport:
    total: int = 0
    passed: int = 0
    failed: list[KatFailure] = field(default_factory=list)
    skipped_informational: int = 0
    #: (id, matched) for every informational record that was executed
    informational: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed

    def summary(self) -> str:
        lines = [
            f"total={self.total} passed={self.passed} failed={len(self.failed)} "
            f"skipped_informational={self.skipped_informational}"
        ]
        for f in self.failed:
            for m in f.mismatches:
                lines.append(
                    f"FAIL {f.id} {m.direction} [{m.strategy.value}] "
                    f"expected {m.expected} got {m.actual}"
                )
        for rid, matched in self.informational:
            lines.append(f"INFO {rid} {'matches' if matched else 'does not match'} stored listing")
        return "\n".join(lines)


# --- parsing ---------------------------------------------------------------


def _hex16(value: str, name: str, line: int) -> bytes:
    if not _HEX32.fullmatch(value):
        raise ParseError(f"{name} must be 32 hex characters, got {len(value)} ({value!r})", line)
    return bytes.fromhex(value)


def _build(fields: dict[str, tuple[str, int]], start: int) -> KatRecord:
    for name in REQUIRED:
        if name not in fields:
            raise ParseError(f"record is missing field {name!r}", start)

    def val(name):
        return fields[name]

    v, ln = val("variant")
    try:
        variant = Variant(v.lower())
    except ValueError:
        raise ParseError(f"unknown variant {v!r}", ln) from None
    s, ln = val("strategy")
    if s.lower() == ALL:
        strategy = None
    else:
        try:
            strategy = MixStrategy(s.lower())
        except ValueError:
            raise ParseError(f"unknown strategy {s!r}", ln) from None
    p, ln = val("provenance")
    try:
        provenance = Provenance(p.lower())
    except ValueError:
        raise ParseError(f"unknown provenance {p!r}", ln) from None

    keys = []
    for name in ("key1", "key2", "key3"):
        if name in fields:
            if len(keys) != int(name[-1]) - 1:
                raise ParseError(f"{name} given without the keys before it", fields[name][1])
            keys.append(_hex16(fields[name][0], name, fields[name][1]))
    if len(keys) != variant.arity:
        raise ParseError(
            f"variant {variant.value} takes {variant.arity} key(s), record has {len(keys)}",
            val("variant")[1],
        )
    return KatRecord(
        id=val("id")[0],
        variant=variant,
        strategy=strategy,
        keys=tuple(keys),
        plaintext=_hex16(val("pt")[0], "pt", val("pt")[1]),
        ciphertext=_hex16(val("ct")[0], "ct", val("ct")[1]),
        provenance=provenance,
    )


def load_kat(source: TextIO | Iterable[str]) -> list[KatRecord]:
    records: list[KatRecord] = []
    seen: set[str] = set()
    fields: dict[str, tuple[str, int]] = {}
    start = 0

    def flush():
        if fields:
            rec = _build(fields, start)
            if rec.id in seen:
                raise ParseError(f"duplicate record id {rec.id!r}", fields["id"][1])
            seen.add(rec.id)
            records.append(rec)
            fields.clear()

    lineno = 0
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if line.startswith("#"):
            continue
        if not line:
            flush()
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip().lower(), value.strip()
        if not sep or not name:
            raise ParseError(f"expected 'field = value', got {line!r}", lineno)
        if name not in FIELDS:
            raise ParseError(f"unknown field {name!r}", lineno)
        if name in fields:
            raise ParseError(f"field {name!r} repeated in one record", lineno)
        if not fields:
            start = lineno
        fields[name] = (value, lineno)
    flush()
    return records


def loads_kat(text: str) -> list[KatRecord]:
    return load_kat(text.splitlines())


def serialize_kat(records: Iterable[KatRecord]) -> str:
    chunks = []
    for r in records:
        lines = [
            f"id = {r.id}",
            f"variant = {r.variant.value}",
            f"strategy = {ALL if r.strategy is None else r.strategy.value}",
        ]
        lines += [f"key{i} = {k.hex()}" for i, k in enumerate(r.keys, 1)]
        lines += [
            f"pt = {r.plaintext.hex()}",
            f"ct = {r.ciphertext.hex()}",
            f"provenance = {r.provenance.value}",
        ]
        chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


def default_corpus() -> list[KatRecord]:
    """The KAT file shipped with the package."""
    text = resources.files("multiaes").joinpath("data/kat_default.txt").read_text("utf-8")
    return loads_kat(text)


# --- running ---------------------------------------------------------------


def _check(record: KatRecord) -> list[Mismatch]:
    ctx = VariantContext(record.variant, record.keys)
    out = []
    for strategy in record.strategies:
        ct = ctx.encrypt(record.plaintext, strategy)
        if ct != record.ciphertext:
            out.append(Mismatch("encrypt", strategy, record.ciphertext.hex(), ct.hex()))
        pt = ctx.decrypt(record.ciphertext, strategy)
        if pt != record.plaintext:
            out.append(Mismatch("decrypt", strategy, record.plaintext.hex(), pt.hex()))
    return out


def run_kat(records: Iterable[KatRecord]) -> KatReport:
    """Run every record in both directions under each of its strategies.

    Informational records are executed and their outcome noted, but they
    are counted apart and never fail the run.
    """
    report = KatReport()
    for record in records:
        report.total += 1
        mismatches = _check(record)
        if record.informational:
            report.skipped_informational += 1
            report.informational.append((record.id, not mismatches))
        elif mismatches:
            first = mismatches[0]
            report.failed.append(KatFailure(record.id, first.expected, first.actual, tuple(mismatches)))
        else:
            report.passed += 1
    report.failed.sort(key=lambda f: f.id)
    return report


# --- ASCII material from simulation listings --------------------------------


def ascii_block(text: str) -> bytes:
    """Raw bytes of ``text`` right-padded with 0x00 to 16; longer is rejected."""
    raw = text.encode("latin-1")
    if len(raw) > 16:
        raise ValueError(f"ASCII material is {len(raw)} bytes, at most 16 allowed")
    return raw.ljust(16, b"\x00")


_LISTING_TOKEN = re.compile(r"\[(\d{1,3})\]|(.)", re.S)


def decode_listing(text: str) -> bytes:
    """Decode a printed listing: bracketed decimals are raw bytes, anything
    else is its own code point; whitespace is dropped."""
    out = bytearray()
    for m in _LISTING_TOKEN.finditer(re.sub(r"\s+", "", text)):
        if m.group(1) is not None:
            value = int(m.group(1))
            if value > 255:
                raise ValueError(f"byte value {value} out of range")
            out.append(value)
        else:
            out.append(ord(m.group(2)))
    return bytes(out)
