"""Command-line front end.

Exit status: 0 ok, 1 KAT failure, 2 usage or validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from typing import BinaryIO, Iterator, Optional, Sequence

import numpy as np

from . import bench, gf256, vectors
from .aes_core import MixStrategy
from .variants import ArityError, Variant, VariantContext

EXIT_OK = 0
EXIT_KAT = 1
EXIT_USAGE = 2
EXIT_IO = 3

#: bytes read per step when streaming files
READ_SIZE = 1 << 16

ECB_WARNING = (
    "warning: ECB framing, every 16-byte block is enciphered independently; "
    "equal plaintext blocks give equal ciphertext blocks"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --- key and block material -------------------------------------------------


def parse_key(text: str, ascii_key: bool) -> bytes:
    if ascii_key:
        try:
            return vectors.ascii_block(text)
        except (ValueError, UnicodeEncodeError) as exc:
            raise UsageError(f"key {text!r}: {exc}") from None
    try:
        key = bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"key {text!r} is not hex") from None
    if len(key) != 16:
        raise UsageError(f"key must be 32 hex characters, got {len(text)}")
    return key


def pkcs7_pad(data: bytes) -> bytes:
    n = 16 - len(data) % 16
    return data + bytes([n]) * n


def pkcs7_unpad(data: bytes) -> bytes:
    if not data or len(data) % 16:
        raise UsageError("pkcs7: ciphertext does not end on a block boundary")
    n = data[-1]
    if not 1 <= n <= 16 or data[-n:] != bytes([n]) * n:
        raise UsageError("pkcs7: invalid padding after decryption")
    return data[:-n]


def _chunks(stream: BinaryIO) -> Iterator[bytes]:
    while True:
        buf = stream.read(READ_SIZE)
        if not buf:
            return
        yield buf


def transform(
    ctx: VariantContext,
    chunks: Iterator[bytes],
    *,
    decrypt: bool,
    strategy: MixStrategy,
    padding: str,
) -> Iterator[bytes]:
    """Stream whole blocks through ``ctx``, applying or stripping padding.

    On decryption with pkcs7 the last block is held back until the input is
    exhausted so the padding can be checked and removed.
    """
    run = ctx.decrypt_blocks if decrypt else ctx.encrypt_blocks
    pending = b""
    held = b""
    for chunk in chunks:
        pending += chunk
        cut = len(pending) - len(pending) % 16
        if decrypt and padding == "pkcs7" and cut == len(pending):
            # keep one block in reserve; it may be the last
            cut -= 16
        if cut > 0:
            out = run(np.frombuffer(pending[:cut], dtype=np.uint8), strategy).tobytes()
            pending = pending[cut:]
            if held:
                yield held
                held = b""
            if decrypt and padding == "pkcs7":
                held, out = out[-16:], out[:-16]
            if out:
                yield out

    if not decrypt and padding == "pkcs7":
        yield run(np.frombuffer(pkcs7_pad(pending), dtype=np.uint8), strategy).tobytes()
        return
    if decrypt and padding == "pkcs7":
        if len(pending) % 16:
            raise UsageError(f"ciphertext length is not a multiple of 16 ({len(pending)} bytes left over)")
        if pending:
            held += run(np.frombuffer(pending, dtype=np.uint8), strategy).tobytes()
        yield pkcs7_unpad(held)
        return
    if pending:
        raise UsageError(
            f"input length is not a multiple of 16 ({len(pending)} trailing bytes); "
            "use --padding pkcs7"
        )


def _write_atomic(path: str, parts: Iterator[bytes]) -> None:
    """Write to a temporary file next to ``path``, then rename over it."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".multiaes-")
    try:
        with os.fdopen(fd, "wb") as fh:
            for part in parts:
                fh.write(part)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


# --- subcommands -----------------------------------------------------------


def _cipher(args, decrypt: bool) -> int:
    keys = [parse_key(k, args.ascii_keys) for k in args.key or []]
    try:
        ctx = VariantContext(args.variant, keys)
    except ArityError as exc:
        raise UsageError(str(exc)) from None
    strategy = MixStrategy(args.strategy)

    if args.hex is not None:
        if args.input is not None:
            raise UsageError("give either an input file or --hex, not both")
        try:
            data = bytes.fromhex(args.hex)
        except ValueError:
            raise UsageError("--hex value is not valid hex") from None
        if not decrypt and len(data) > 16:
            print(ECB_WARNING, file=sys.stderr)
        out = b"".join(transform(ctx, iter([data]), decrypt=decrypt, strategy=strategy, padding=args.padding))
        if args.output:
            _write_atomic(args.output, iter([out]))
        else:
            print(out.hex())
        return EXIT_OK

    if args.input is None:
        raise UsageError("no input: give a file path or --hex")
    with open(args.input, "rb") as fh:
        if not decrypt and os.fstat(fh.fileno()).st_size > 16:
            print(ECB_WARNING, file=sys.stderr)
        parts = transform(ctx, _chunks(fh), decrypt=decrypt, strategy=strategy, padding=args.padding)
        if args.output:
            _write_atomic(args.output, parts)
        else:
            # hold everything so a validation error leaves stdout untouched
            sys.stdout.buffer.write(b"".join(parts))
            sys.stdout.buffer.flush()
    return EXIT_OK


def cmd_encrypt(args) -> int:
    return _cipher(args, decrypt=False)


def cmd_decrypt(args) -> int:
    return _cipher(args, decrypt=True)


def cmd_kat(args) -> int:
    try:
        if args.file is None:
            records = vectors.default_corpus()
        else:
            with open(args.file, encoding="utf-8") as fh:
                records = vectors.load_kat(fh)
    except vectors.ParseError as exc:
        raise UsageError(f"{args.file or 'default corpus'}: {exc}") from None
    report = vectors.run_kat(records)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_KAT


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(
        n_blocks=args.blocks,
        seed=args.seed,
        variants=tuple(Variant(v) for v in args.variants),
        strategies=tuple(MixStrategy(s) for s in args.strategies),
        warmup_blocks=args.warmup,
        repeats=args.repeats,
    )
    try:
        report = bench.run_bench(cfg)
    except bench.ConfigError as exc:
        raise UsageError(str(exc)) from None
    if args.machine:
        print(bench.format_machine(report))
    else:
        print(bench.format_report(report))
        print(bench.FOOTER)
    return EXIT_OK


def cmd_sbox_dump(args) -> int:
    print(gf256.format_sbox(gf256.INV_SBOX if args.inverse else gf256.SBOX))
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def _csv(choices):
    def parse(text):
        items = [t.strip().lower() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if bad:
            raise argparse.ArgumentTypeError(f"unknown value(s) {', '.join(bad)}; choose from {', '.join(choices)}")
        return items

    return parse


def build_parser() -> argparse.ArgumentParser:
    variants = [v.value for v in Variant]
    strategies = [s.value for s in MixStrategy]

    p = _Parser(prog="multiaes", description="AES-128 and its multiple-encryption variants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn, verb in (("encrypt", cmd_encrypt, "Encrypt"), ("decrypt", cmd_decrypt, "Decrypt")):
        c = sub.add_parser(name, help=f"{verb} a file or a hex string (ECB framing)")
        c.add_argument("input", nargs="?", help="input file (raw bytes)")
        c.add_argument("--hex", help="hex input instead of a file; hex output on stdout")
        c.add_argument("-o", "--output", help="output file (written atomically); default stdout")
        c.add_argument("-k", "--key", action="append", help="key as 32 hex chars; repeat for key2, key3")
        c.add_argument("--ascii-keys", action="store_true", help="read keys as ASCII, zero-padded to 16 bytes")
        c.add_argument("--variant", choices=variants, default=Variant.SINGLE.value)
        c.add_argument("--strategy", choices=strategies, default=MixStrategy.XTIME.value)
        c.add_argument("--padding", choices=("none", "pkcs7"), default="none")
        c.set_defaults(func=fn)

    c = sub.add_parser("kat", help="run a known-answer test file")
    c.add_argument("file", nargs="?", help="KAT file; default is the shipped corpus")
    c.set_defaults(func=cmd_kat)

    c = sub.add_parser("bench", help="time and count operations per variant and strategy")
    c.add_argument("--blocks", type=int, default=bench.BenchConfig.n_blocks)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--repeats", type=int, default=bench.BenchConfig.repeats)
    c.add_argument("--warmup", type=int, default=bench.BenchConfig.warmup_blocks)
    c.add_argument("--variants", type=_csv(variants), default=variants, help="comma-separated")
    c.add_argument("--strategies", type=_csv(strategies), default=strategies, help="comma-separated")
    c.add_argument("--machine", action="store_true", help="key=value lines instead of a table")
    c.set_defaults(func=cmd_bench)

    c = sub.add_parser("sbox-dump", help="print the S-box as a 16x16 hex grid")
    c.add_argument("--inverse", action="store_true")
    c.set_defaults(func=cmd_sbox_dump)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"multiaes: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"multiaes: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
