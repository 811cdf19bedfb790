"""Command-line interface.

Exit codes: 0 success, 1 a check or derivation failed, 2 usage or data error
(unknown equation, unreadable or malformed file).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from . import certificate as certfile
from . import piengine
from .derive import CLASSES, derive, iter_derivations, verify_certificate
from .errors import MalformedCertificate, NoMatch, RampiError
from .identify import identify
from .modeq import REGISTRY_ENV, find_equation, registry_load, registry_scan

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_VERIFY_DIGITS = 1000
PRE_PI_DIGITS = 100


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _load(path) -> tuple:
    return certfile.load(path)


def cmd_derive(args) -> int:
    try:
        eq = find_equation(args.equation, args.registry)
    except KeyError:
        _err(f"equation not found: {args.equation}")
        return EXIT_USAGE
    except RampiError as exc:
        _err(f"{exc.name}: {exc}")
        return EXIT_USAGE
    try:
        cert = derive(eq, args.cls)
    except RampiError as exc:
        _err(f"{exc.name}: {exc}")
        return EXIT_FAIL
    out = Path(args.out or f"{eq.name}-{args.cls}.json")
    certfile.save(cert, out, eq.source_hash())
    print(f"{cert.label}: {cert.identity_text()}")
    print(f"certificate written to {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        cert, _ = _load(args.certificate)
    except MalformedCertificate as exc:
        _err(f"{exc.name}: {exc}")
        return EXIT_USAGE
    report = verify_certificate(cert, args.digits)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_pi(args) -> int:
    try:
        cert, _ = _load(args.certificate)
    except MalformedCertificate as exc:
        _err(f"{exc.name}: {exc}")
        return EXIT_USAGE
    if cert.rational_form is None:
        _err(f"{cert.label} has no rational form; pi cannot be extracted")
        return EXIT_USAGE
    if not args.force:
        report = verify_certificate(cert, min(args.digits, PRE_PI_DIGITS))
        if not report.passed:
            print(report.render(), file=sys.stderr)
            _err("certificate failed verification (use --force to skip)")
            return EXIT_FAIL
    try:
        res = piengine.compute_pi(cert, args.digits)
    except RampiError as exc:
        _err(f"{exc.name}: {exc}")
        return EXIT_FAIL
    text = piengine.format_digits(int(res.text.replace(".", "")), args.digits)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"{args.digits} digits ({res.terms} terms, {res.seconds:.3f} s) written to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_identify(args) -> int:
    radicands = [int(r) for r in args.radicands.split(",") if r.strip()] if args.radicands else []
    try:
        x = identify(args.re, args.im, radicands, args.height)
    except NoMatch as exc:
        print(f"no match ({exc})")
        return EXIT_FAIL
    except (ValueError, RampiError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    print(x.to_text())
    return EXIT_OK


def _table(head, rows) -> str:
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    return "\n".join("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in [head, *rows])


def cmd_list(args) -> int:
    eqs, errors = registry_scan(args.registry)
    rows = [(e.name, e.level, e.s, e.degree, e.k, len(e.P.terms)) for e in eqs]
    print(_table(("name", "level", "s", "degree", "k", "terms"), rows))
    if errors:
        print("\nerrors:")
        for err in errors:
            print(f"  {err.describe()}")
    return EXIT_OK


def cmd_report(args) -> int:
    certs = []
    if args.certificates:
        for p in args.certificates:
            try:
                certs.append(_load(p)[0])
            except MalformedCertificate as exc:
                _err(f"{p}: {exc.name}: {exc}")
                return EXIT_USAGE
    else:
        try:
            certs = list(iter_derivations(registry_load(args.registry)))
        except RampiError as exc:
            _err(f"{exc.name}: {exc}")
            return EXIT_USAGE
    rep = piengine.convergence_report(certs)
    if args.format == "json":
        sys.stdout.write(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n")
    elif args.format == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        sys.stdout.write(rep.render())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rampi", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--registry", default=None,
                   help=f"directory of equation files (default: ${REGISTRY_ENV} or the bundled registry)")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("derive", help="derive a series certificate from a registry equation")
    d.add_argument("equation")
    d.add_argument("--class", dest="cls", choices=CLASSES, default="alternating")
    d.add_argument("--out", help="certificate path (default: <name>-<class>.json)")
    d.set_defaults(func=cmd_derive)

    v = sub.add_parser("verify", help="check a certificate exactly and numerically")
    v.add_argument("certificate")
    v.add_argument("--digits", type=int, default=DEFAULT_VERIFY_DIGITS)
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("pi", help="compute digits of pi from a certificate")
    q.add_argument("certificate")
    q.add_argument("--digits", type=int, default=1000)
    q.add_argument("--out")
    q.add_argument("--force", action="store_true", help="skip the verification pass")
    q.set_defaults(func=cmd_pi)

    i = sub.add_parser("identify", help="recognize a decimal as a radical expression")
    i.add_argument("--re", required=True)
    i.add_argument("--im", default="0")
    i.add_argument("--radicands", default="", help='comma-separated, e.g. "3,89"')
    i.add_argument("--height", type=int, default=10**6)
    i.set_defaults(func=cmd_identify)

    ls = sub.add_parser("list", help="list registry equations")
    ls.set_defaults(func=cmd_list)

    r = sub.add_parser("report", help="convergence table for certificates")
    r.add_argument("certificates", nargs="*", help="certificate files (default: derive the whole registry)")
    r.add_argument("--format", choices=("table", "json", "csv"), default="table")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "digits", 1) < 1:
        _err("--digits must be positive")
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
