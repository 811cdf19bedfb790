"""Certificate files: a JSON tree of exact values in normalized text form.

Integers are stored as decimal strings and every algebraic number in the
canonical ``to_text`` form, so a load/save cycle is byte-identical.  When the
singular point needs a simple radical ``t^e = w`` beyond the tower, the
extension is recorded once and the affected values are polynomials in ``t``.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
from fractions import Fraction
from pathlib import Path

from .derive import DerivationTrace, RationalForm, SeriesCertificate, SingularPoint
from .errors import DSLSyntaxError, MalformedCertificate
from .exactnum import TowerElement
from .exprparse import parse_rational
from .radext import ExtElement, RadicalExtension, parse_ext

SCHEMA_VERSION = "1"

_POINT = ("zeta", "u0", "v0", "alpha0", "beta0")
_TRACE = ("v1", "v2", "alpha1", "beta1", "alpha2", "beta2", "m0", "m_ratio")


def _extension_of(cert: SeriesCertificate) -> RadicalExtension | None:
    values = [getattr(cert.point, f) for f in _POINT] + [getattr(cert.trace, f) for f in _TRACE]
    for v in values:
        if isinstance(v, ExtElement):
            return v.field
    return None


def certificate_to_dict(cert: SeriesCertificate) -> dict:
    ext = _extension_of(cert)
    rf = cert.rational_form
    return {
        "equation": {
            "name": cert.equation_name,
            "level": str(cert.level),
            "s": str(cert.s),
            "degree": str(cert.d),
            "k": str(cert.k),
            "poly": cert.poly,
        },
        "class": cert.cls,
        "label": cert.label,
        "extension": None if ext is None else {
            "w": ext.w.to_text(), "e": str(ext.e), "branch": str(ext.branch),
        },
        "point": {f: getattr(cert.point, f).to_text() for f in _POINT},
        "trace": {
            **{f: getattr(cert.trace, f).to_text() for f in _TRACE},
            "conjugated": cert.trace.conjugated,
        },
        "series": {
            "z": cert.z.to_text(),
            "a": cert.a.to_text(),
            "b": cert.b.to_text(),
            "irrational": cert.irrational,
        },
        "rational_form": None if rf is None else {
            "A": str(rf.A), "B": str(rf.B), "sign": str(rf.sign), "num": str(rf.num),
            "M": str(rf.M), "C": str(rf.C), "radicand": str(rf.radicand),
        },
        "identity": cert.identity_text(),
    }


def _int(d: dict, key: str) -> int:
    v = d[key]
    if not isinstance(v, str) or not v.lstrip("-").isdigit():
        raise MalformedCertificate(f"{key!r} must be an integer string, got {v!r}")
    return int(v)


def certificate_from_dict(d: dict) -> SeriesCertificate:
    try:
        eq = d["equation"]
        ext = None
        if d.get("extension") is not None:
            e = d["extension"]
            ext = RadicalExtension(TowerElement.parse(e["w"]), _int(e, "e"), _int(e, "branch"))

        def num(text):
            if not isinstance(text, str):
                raise MalformedCertificate(f"expected a value string, got {text!r}")
            return parse_ext(text, ext) if ext is not None else TowerElement.parse(text)

        pt = SingularPoint(**{f: num(d["point"][f]) for f in _POINT})
        tr_d = d["trace"]
        if not isinstance(tr_d.get("conjugated"), bool):
            raise MalformedCertificate("trace.conjugated must be a boolean")
        level, s, degree = _int(eq, "level"), _int(eq, "s"), _int(eq, "degree")
        trace = DerivationTrace(
            **{f: num(tr_d[f]) for f in _TRACE}, d=degree, level=level, s=s, conjugated=tr_d["conjugated"]
        )
        rf_d = d["rational_form"]
        rf = None
        if rf_d is not None:
            rf = RationalForm(
                A=_int(rf_d, "A"), B=_int(rf_d, "B"), sign=_int(rf_d, "sign"), num=_int(rf_d, "num"),
                M=_int(rf_d, "M"), C=Fraction(parse_rational(rf_d["C"])), radicand=_int(rf_d, "radicand"),
            )
        ser = d["series"]
        cls = d["class"]
        if cls not in ("positive", "alternating"):
            raise MalformedCertificate(f"unknown class {cls!r}")
        return SeriesCertificate(
            equation_name=eq["name"], s=s, level=level, d=degree, k=_int(eq, "k"), poly=eq["poly"],
            cls=cls, z=num(ser["z"]), a=num(ser["a"]), b=num(ser["b"]), rational_form=rf,
            trace=trace, point=pt, irrational=bool(ser["irrational"]),
        )
    except MalformedCertificate:
        raise
    except (KeyError, TypeError, ValueError, DSLSyntaxError) as exc:
        raise MalformedCertificate(f"{type(exc).__name__}: {exc}") from None


def timestamp() -> str:
    """UTC creation time; SOURCE_DATE_EPOCH pins it for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        when = _dt.datetime.fromtimestamp(int(epoch), tz=_dt.timezone.utc)
    else:
        when = _dt.datetime.now(tz=_dt.timezone.utc).replace(microsecond=0)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def dumps(cert: SeriesCertificate, equation_hash: str, provenance: dict | None = None) -> str:
    from . import __version__

    prov = provenance or {
        "equation_sha256": equation_hash,
        "tool_version": __version__,
        "created": timestamp(),
    }
    doc = {"schema_version": SCHEMA_VERSION, "certificate": certificate_to_dict(cert), "provenance": prov}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> tuple[SeriesCertificate, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedCertificate(f"not JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise MalformedCertificate(f"unsupported schema_version {doc.get('schema_version') if isinstance(doc, dict) else None!r}")
    if not isinstance(doc.get("certificate"), dict):
        raise MalformedCertificate("missing certificate")
    return certificate_from_dict(doc["certificate"]), doc.get("provenance", {})


def save(cert: SeriesCertificate, path, equation_hash: str) -> None:
    Path(path).write_text(dumps(cert, equation_hash), encoding="utf-8")


def load(path) -> tuple[SeriesCertificate, dict]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise MalformedCertificate(f"cannot read {path}: {exc}") from None
    return loads(text)
