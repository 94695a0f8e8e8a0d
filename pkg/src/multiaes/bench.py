"""Throughput and operation-count comparison across variants and strategies.

Timing drives the vectorised engine over ``n_blocks`` random blocks and
keeps the median of several repetitions.  Field-operation counts come from
the instrumented single-block path on a small sample; AES is data-oblivious
so the per-block count does not depend on which blocks are sampled.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

from .aes_core import MixStrategy, OpCounts
from .variants import Variant, VariantContext

FOOTER = (
    "note: FPGA area figures (slices, pins, memory bits) have no software "
    "equivalent; ns/block and MixColumns op counts per block stand in for them"
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BenchConfig:
    n_blocks: int = 100_000
    seed: int = 0
    variants: tuple[Variant, ...] = tuple(Variant)
    strategies: tuple[MixStrategy, ...] = tuple(MixStrategy)
    warmup_blocks: int = 1_000
    repeats: int = 5
    count_blocks: int = 4
    slice_blocks: int = 4096

    def validate(self) -> None:
        if self.n_blocks < 1:
            raise ConfigError(f"n_blocks must be at least 1, got {self.n_blocks}")
        if not self.variants:
            raise ConfigError("no variants selected")
        if not self.strategies:
            raise ConfigError("no strategies selected")
        if self.repeats < 1:
            raise ConfigError(f"repeats must be at least 1, got {self.repeats}")
        if self.warmup_blocks < 0 or self.count_blocks < 1 or self.slice_blocks < 1:
            raise ConfigError("warmup_blocks must be >= 0, count_blocks and slice_blocks >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")


@dataclass(frozen=True)
class BenchRow:
    variant: Variant
    strategy: MixStrategy
    blocks_per_second: float
    ns_per_block: float
    gf_mul_calls_per_block: int
    xtime_calls_per_block: int
    table_lookups_per_block: int
    latency_ratio_vs_single: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def row(self, variant: Variant | str, strategy: MixStrategy | str) -> BenchRow:
        variant, strategy = Variant(variant), MixStrategy(strategy)
        for r in self.rows:
            if r.variant is variant and r.strategy is strategy:
                return r
        raise KeyError((variant, strategy))


def _order(variants: Sequence[Variant], strategies: Sequence[MixStrategy]):
    vs = sorted({Variant(v) for v in variants}, key=list(Variant).index)
    ss = sorted({MixStrategy(s) for s in strategies}, key=list(MixStrategy).index)
    return [(v, s) for v in vs for s in ss]


def _keys(rng: np.random.Generator) -> tuple[bytes, bytes, bytes]:
    return tuple(rng.integers(0, 256, 16, dtype=np.uint8).tobytes() for _ in range(3))  # type: ignore[return-value]


def count_ops(ctx: VariantContext, blocks: np.ndarray, strategy: MixStrategy) -> OpCounts:
    """Per-block MixColumns op counts from the instrumented path.

    Also checks the instrumented output against the vectorised engine.
    """
    expected = ctx.encrypt_blocks(blocks, strategy)
    counts = []
    for i, block in enumerate(blocks):
        counter = OpCounts()
        if ctx.encrypt(block.tobytes(), strategy, counter) != expected[i].tobytes():
            raise AssertionError("instrumented path disagrees with the batch engine")
        counts.append(counter)
    if any(c != counts[0] for c in counts):
        raise AssertionError("op count varies between blocks")
    return counts[0]


def run_bench(cfg: BenchConfig) -> BenchReport:
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    keys = _keys(rng)
    data = rng.integers(0, 256, (cfg.n_blocks, 16), dtype=np.uint8)

    pairs = _order(cfg.variants, cfg.strategies)
    # SINGLE is always timed; it is the denominator of the latency ratio
    timed = _order(list(cfg.variants) + [Variant.SINGLE], cfg.strategies)
    contexts = {v: VariantContext(v, keys[: v.arity]) for v in {v for v, _ in timed}}

    if cfg.warmup_blocks:
        warm = data[: cfg.warmup_blocks]
        for v, s in timed:
            contexts[v].encrypt_blocks(warm, s)

    # One run = every timed pair over all n_blocks.  Pairs take turns slice
    # by slice, and a run's ratio is the median of the per-slice ratios, so a
    # burst of outside load on one slice drops out instead of skewing a total.
    totals: list[dict[tuple[Variant, MixStrategy], int]] = []
    ratios: list[dict[tuple[Variant, MixStrategy], float]] = []
    for _ in range(cfg.repeats):
        slices: dict[tuple[Variant, MixStrategy], list[int]] = {p: [] for p in timed}
        for n, i in enumerate(range(0, cfg.n_blocks, cfg.slice_blocks)):
            # the copy pulls the slice into cache before anyone is timed
            part = data[i:i + cfg.slice_blocks].copy()
            # rotate who goes first so cache and ordering effects spread evenly
            k = n % len(timed)
            for v, s in timed[k:] + timed[:k]:
                ctx = contexts[v]
                t0 = time.perf_counter_ns()
                ctx.encrypt_blocks(part, s)
                slices[(v, s)].append(time.perf_counter_ns() - t0)
        totals.append({p: sum(t) for p, t in slices.items()})
        ratios.append({
            (v, s): statistics.median(
                a / b for a, b in zip(slices[(v, s)], slices[(Variant.SINGLE, s)])
            )
            for v, s in timed
        })

    ns = {p: statistics.median(r[p] for r in totals) / cfg.n_blocks for p in timed}
    ratio = {p: statistics.median(r[p] for r in ratios) for p in timed}
    sample = data[: cfg.count_blocks]
    report = BenchReport()
    for v, s in pairs:
        counts = count_ops(contexts[v], sample, s)
        per_block = ns[(v, s)]
        report.rows.append(
            BenchRow(
                variant=v,
                strategy=s,
                blocks_per_second=1e9 / per_block,
                ns_per_block=per_block,
                gf_mul_calls_per_block=counts.gf_mul,
                xtime_calls_per_block=counts.xtime,
                table_lookups_per_block=counts.table_lookups,
                latency_ratio_vs_single=ratio[(v, s)],
            )
        )
    return report


# --- output ----------------------------------------------------------------

# (header, width, format) per BenchRow field
_COLUMNS = (
    ("variant", 8, "{}"),
    ("strategy", 8, "{}"),
    ("blocks/s", 14, "{:.1f}"),
    ("ns/block", 12, "{:.1f}"),
    ("gf_mul/blk", 10, "{:d}"),
    ("xtime/blk", 10, "{:d}"),
    ("lookups/blk", 11, "{:d}"),
    ("ratio", 7, "{:.3f}"),
)


def _cells(row: BenchRow) -> list[str]:
    out = []
    for (_, _, fmt), f in zip(_COLUMNS, fields(BenchRow)):
        value = getattr(row, f.name)
        out.append(fmt.format(value.value if hasattr(value, "value") else value))
    return out


def format_report(report: BenchReport) -> str:
    """Fixed-width table: one header line plus one line per row."""
    rows = sorted(
        report.rows,
        key=lambda r: (list(Variant).index(r.variant), list(MixStrategy).index(r.strategy)),
    )
    lines = ["  ".join(h.rjust(w) if i > 1 else h.ljust(w) for i, (h, w, _) in enumerate(_COLUMNS))]
    for r in rows:
        cells = _cells(r)
        lines.append(
            "  ".join(c.rjust(w) if i > 1 else c.ljust(w) for i, (c, (_, w, _)) in enumerate(zip(cells, _COLUMNS)))
        )
    return "\n".join(lines)


def parse_report(text: str) -> BenchReport:
    """Read back a table written by :func:`format_report`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split()[0] != "variant":
        raise ValueError("not a bench report table")
    report = BenchReport()
    for ln in lines[1:]:
        if ln.startswith("note:"):
            continue
        parts = ln.split()
        report.rows.append(
            BenchRow(
                Variant(parts[0]),
                MixStrategy(parts[1]),
                float(parts[2]),
                float(parts[3]),
                int(parts[4]),
                int(parts[5]),
                int(parts[6]),
                float(parts[7]),
            )
        )
    return report


def format_machine(report: BenchReport) -> str:
    """One ``key=value`` record per line, same fields as the table."""
    lines = []
    for r in report.rows:
        items = []
        for f in fields(BenchRow):
            value = getattr(r, f.name)
            if hasattr(value, "value"):
                value = value.value
            items.append(f"{f.name}={value!r}" if isinstance(value, float) else f"{f.name}={value}")
        lines.append(" ".join(items))
    return "\n".join(lines)
