"""Command-line front end.

    sdeqr encrypt   --password-env VAR --in msg.txt --out-dir qrs/ [--format pbm]
    sdeqr decrypt   --password-env VAR --in qrs/ --out msg.txt
    sdeqr encode    --in payload.bin --out symbol.pbm
    sdeqr decode    --in symbol.pbm --out payload.bin
    sdeqr inspect   symbol.pbm [...]
    sdeqr roundtrip [--in msg.txt] [--password-env VAR]

Plaintext and passwords are never printed unless --stdout is given.
Exit status: 0 success, 1 data error, 2 usage error.
"""
import argparse
import getpass
import os
import sys
from pathlib import Path

from . import pipeline
from .cipher import Format
from .errors import SdeqrError
from .qrdecode import decode_symbol
from .qrencode import EcLevel, encode_symbol
from .render import DEFAULT_QUIET_ZONE, RenderFormat, parse_matrix, render

MANIFEST_NAME = "manifest.json"
SYMBOL_PATTERN = "symbol-%03d.%s"
SAMPLE_MESSAGE = "I love you ýþý"
SAMPLE_PASSWORD = "Hello World"


class UsageError(Exception):
    pass


def _mask_arg(value):
    if value == "auto":
        return None
    m = int(value)
    if not 0 <= m <= 7:
        raise argparse.ArgumentTypeError("mask must be auto or 0..7")
    return m


def _version_arg(value):
    if value == "auto":
        return None
    v = int(value)
    if not 1 <= v <= 40:
        raise argparse.ArgumentTypeError("version must be auto or 1..40")
    return v


def _add_qr_options(p):
    p.add_argument("--ec", choices="LMQH", default="H", type=str.upper)
    p.add_argument("--mask", type=_mask_arg, default=None, metavar="{auto,0..7}")
    p.add_argument("--version", type=_version_arg, default=None, metavar="{auto,1..40}")


def _add_format_options(p, default=None):
    p.add_argument("--format", choices=[f.value for f in RenderFormat], default=default, type=str.lower)
    p.add_argument("--quiet-zone", type=int, default=DEFAULT_QUIET_ZONE)


def build_parser():
    parser = argparse.ArgumentParser(prog="sdeqr", description="Password-keyed cipher carried in QR symbols.",
                                     allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encrypt", allow_abbrev=False, help="encrypt a text file into QR symbols plus manifest")
    p.add_argument("--password-env", metavar="VAR")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--serialization", choices=["entity", "raw16"], default="entity")
    p.add_argument("--limit", type=int, default=pipeline.DEFAULT_LIMIT)
    _add_qr_options(p)
    _add_format_options(p, default="pbm")

    p = sub.add_parser("decrypt", allow_abbrev=False, help="decode QR symbols and decrypt to text")
    p.add_argument("--password-env", metavar="VAR")
    p.add_argument("--in", dest="input", required=True, nargs="+",
                   help="directory with manifest.json, a manifest file, or symbol files in order")
    p.add_argument("--out")
    p.add_argument("--stdout", action="store_true")
    p.add_argument("--serialization", choices=["entity", "raw16"], default="entity",
                   help="used only when no manifest is available")
    _add_format_options(p)

    p = sub.add_parser("encode", allow_abbrev=False, help="encode a raw payload file as one QR symbol (no cipher)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    _add_qr_options(p)
    _add_format_options(p)

    p = sub.add_parser("decode", allow_abbrev=False, help="decode one QR symbol to its raw payload (no cipher)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--stdout", action="store_true")
    _add_format_options(p)

    p = sub.add_parser("inspect", allow_abbrev=False, help="report symbol metadata")
    p.add_argument("paths", nargs="+")
    _add_format_options(p)

    p = sub.add_parser("roundtrip", allow_abbrev=False, help="self-test: encrypt, render, parse, decrypt in memory")
    p.add_argument("--password-env", metavar="VAR")
    p.add_argument("--in", dest="input")
    p.add_argument("--serialization", choices=["entity", "raw16"], default="entity")
    p.add_argument("--limit", type=int, default=pipeline.DEFAULT_LIMIT)
    _add_qr_options(p)
    _add_format_options(p, default="pbm")
    return parser


def _password(args):
    if args.password_env:
        value = os.environ.get(args.password_env)
        if value is None:
            raise UsageError(f"environment variable {args.password_env} is not set")
        return value
    if not sys.stdin.isatty():
        raise UsageError("no --password-env given and no terminal to prompt on")
    return getpass.getpass("Password: ")


def _format_for(path, fmt):
    if fmt:
        return RenderFormat.coerce(fmt)
    try:
        return RenderFormat.coerce(Path(path).suffix)
    except ValueError:
        raise UsageError(f"cannot infer matrix format from {path!r}; pass --format") from None


def _load_matrix(path, args):
    fmt = _format_for(path, args.format)
    return parse_matrix(Path(path).read_bytes(), fmt, args.quiet_zone)


def _read_text(path):
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return data.decode("utf-8")


def _write_output(args, data):
    if args.stdout:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(args.out).write_bytes(data)


def _require_sink(args):
    if not args.out and not args.stdout:
        raise UsageError("pass --out FILE or --stdout")


def cmd_encrypt(args):
    message = _read_text(args.input)
    password = _password(args)
    fmt = RenderFormat.coerce(args.format)
    symbols = pipeline.encrypt_to_symbols(message, password, ec=args.ec, serialization=args.serialization,
                                          mask=args.mask, version=args.version, limit=args.limit)
    rendered = [render(m, fmt, args.quiet_zone) for m in symbols.symbols]
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, data in enumerate(rendered, 1):
        (out / (SYMBOL_PATTERN % (i, fmt.value))).write_bytes(data)
    (out / MANIFEST_NAME).write_text(symbols.manifest.to_json())
    print(f"wrote {len(rendered)} symbol(s) and {MANIFEST_NAME} to {out}")
    return 0


def _collect_symbols(inputs):
    """(symbol paths, manifest or None) from --in arguments."""
    if len(inputs) == 1:
        p = Path(inputs[0])
        manifest_path = None
        if p.is_dir():
            manifest_path = p / MANIFEST_NAME
            folder = p
        elif p.name == MANIFEST_NAME or p.suffix == ".json" and _looks_like_manifest(p):
            manifest_path = p
            folder = p.parent
        if manifest_path is not None:
            manifest = None
            if manifest_path.exists():
                manifest = pipeline.Manifest.from_json(manifest_path.read_text())
            paths = sorted(q for q in folder.glob("symbol-*.*") if q.suffix.lstrip(".") in {"pbm", "txt", "json"})
            if not paths:
                raise UsageError(f"no symbol-*.pbm/txt/json files in {folder}")
            return paths, manifest
    return [Path(x) for x in inputs], None


def _looks_like_manifest(path):
    try:
        pipeline.Manifest.from_json(path.read_text())
    except (ValueError, KeyError, TypeError):
        return False
    return True


def cmd_decrypt(args):
    _require_sink(args)
    paths, manifest = _collect_symbols(args.input)
    matrices = [_load_matrix(p, args) for p in paths]
    password = _password(args)
    plaintext = pipeline.decrypt_from_symbols(matrices, password, manifest=manifest,
                                              serialization=args.serialization)
    _write_output(args, plaintext.encode("utf-8"))
    return 0


def cmd_encode(args):
    payload = sys.stdin.buffer.read() if args.input == "-" else Path(args.input).read_bytes()
    fmt = _format_for(args.out, args.format)
    sym = encode_symbol(payload, args.ec, mask=args.mask, version=args.version)
    Path(args.out).write_bytes(render(sym.matrix, fmt, args.quiet_zone))
    print(f"version {sym.version}, ec {args.ec}, mask {sym.mask}")
    return 0


def cmd_decode(args):
    _require_sink(args)
    decoded = decode_symbol(_load_matrix(args.input, args))
    _write_output(args, decoded.payload)
    return 0


def cmd_inspect(args):
    for path in args.paths:
        d = decode_symbol(_load_matrix(path, args))
        print(f"{path}: version={d.version} ec={d.ec.name} mask={d.mask} "
              f"errors_corrected={d.errors_corrected} payload_length={len(d.payload)}")
    return 0


def cmd_roundtrip(args):
    if args.input:
        message = _read_text(args.input)
        password = _password(args)
    else:
        message = SAMPLE_MESSAGE
        password = _password(args) if args.password_env else SAMPLE_PASSWORD
    fmt = RenderFormat.coerce(args.format)
    symbols = pipeline.encrypt_to_symbols(message, password, ec=args.ec, serialization=args.serialization,
                                          mask=args.mask, version=args.version, limit=args.limit)
    if fmt is RenderFormat.SVG:
        matrices = symbols.symbols
    else:
        matrices = [parse_matrix(render(m, fmt, args.quiet_zone), fmt, args.quiet_zone) for m in symbols.symbols]
    manifest = pipeline.Manifest.from_json(symbols.manifest.to_json())
    recovered = pipeline.decrypt_from_symbols(matrices, password, manifest=manifest)
    if recovered != message:
        print("roundtrip FAILED: recovered text differs", file=sys.stderr)
        return 1
    print(f"roundtrip ok: {manifest.total} symbol(s), {len(message)} characters")
    return 0


COMMANDS = {
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "inspect": cmd_inspect,
    "roundtrip": cmd_roundtrip,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except (SdeqrError, ValueError, OSError) as exc:
        print(f"sdeqr: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
