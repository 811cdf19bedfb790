import json
import subprocess
import sys

import pytest

from oracles import pi_gauss
from rampi import certificate as certfile
from rampi.cli import main
from rampi.derive import verify_certificate
from rampi.errors import MalformedCertificate
from rampi.modeq import find_equation

EPOCH = "1700000000"


@pytest.fixture
def pinned(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", EPOCH)


@pytest.fixture
def cert_file(tmp_path, pinned, capsys):
    out = tmp_path / "3a23.json"
    assert main(["derive", "chan-liaw-3-23", "--class", "alternating", "--out", str(out)]) == 0
    capsys.readouterr()
    return out


def test_derive_prints_identity(tmp_path, pinned, capsys):
    out = tmp_path / "c.json"
    assert main(["derive", "chan-liaw-3-23", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "(14151 n + 827)(−1)^n/500^{2n} = 1500√3/π" in text
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["certificate"]["series"]["z"] == "-1/250000"
    assert doc["provenance"]["created"] == "2023-11-14T22:13:20Z"


def test_derive_positive_degree_five(tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["derive", "berndt-3-5", "--class", "positive", "--out", str(out)]) == 0
    cert, _ = certfile.load(out)
    assert str(cert.z) == "4/125"


def test_derive_default_path(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["derive", "berndt-3-5", "--class", "alternating"]) == 0
    assert (tmp_path / "berndt-3-5-alternating.json").exists()


def test_derive_unknown(capsys):
    assert main(["derive", "no-such-equation"]) == 2
    assert "equation not found" in capsys.readouterr().err


def test_derive_failure_exit_1(capsys):
    assert main(["derive", "chan-liaw-3-23", "--class", "positive", "--out", "unused.json"]) == 1
    assert "NoSingularPoint" in capsys.readouterr().err


def test_round_trip_byte_identical(cert_file, certs):
    text = cert_file.read_text(encoding="utf-8")
    cert, prov = certfile.loads(text)
    assert certfile.dumps(cert, prov["equation_sha256"], prov) == text
    assert prov["equation_sha256"] == find_equation("chan-liaw-3-23").source_hash()
    for c in certs.values():
        again, _ = certfile.loads(certfile.dumps(c, "x"))
        assert again == c


def test_extension_certificate_round_trip(certs):
    c = certs["2A7"]
    text = certfile.dumps(c, "h", {"created": "fixed"})
    doc = json.loads(text)
    assert doc["certificate"]["extension"] is not None
    again, _ = certfile.loads(text)
    assert certfile.dumps(again, "h", {"created": "fixed"}) == text
    assert verify_certificate(again, 100).passed


def test_determinism(tmp_path, pinned, capsys):
    outs = []
    for i in range(2):
        p = tmp_path / f"run{i}.json"
        assert main(["derive", "berndt-3-11", "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
    capsys.readouterr()
    reports = []
    for i in range(2):
        assert main(["verify", str(tmp_path / f"run{i}.json"), "--digits", "200"]) == 0
        reports.append(capsys.readouterr().out)
    assert reports[0] == reports[1]


def test_verify_ok(cert_file, capsys):
    assert main(["verify", str(cert_file), "--digits", "300"]) == 0
    out = capsys.readouterr().out
    assert "numeric_series" in out and "FAIL" not in out


def _tamper(path, section, field, value):
    doc = json.loads(path.read_text(encoding="utf-8"))
    doc["certificate"][section][field] = value
    path.write_text(json.dumps(doc), encoding="utf-8")


@pytest.mark.parametrize(
    "section, field, value, check",
    [
        ("series", "a", "827/4500*sqrt(3) + 1", "series_ab"),
        ("series", "b", "4717/1500*sqrt(3) + 1/1000", "series_ab"),
        ("series", "z", "-1/250001", "series_z"),
        ("trace", "m0", "1/46*sqrt(89) - 1/46*sqrt(3)*i", "multiplier_class"),
        ("point", "u0", "1/20*sqrt(15) + 1/20*sqrt(5)", "point_on_curve"),
    ],
)
def test_tampered_certificate(cert_file, capsys, section, field, value, check):
    _tamper(cert_file, section, field, value)
    assert main(["verify", str(cert_file), "--digits", "100"]) == 1
    out = capsys.readouterr().out
    line = next(x for x in out.splitlines() if check in x)
    assert "FAIL" in line


def test_malformed_certificate(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["verify", str(bad)]) == 2
    bad.write_text(json.dumps({"schema_version": "1", "certificate": {"equation": {}}}), encoding="utf-8")
    assert main(["verify", str(bad)]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(MalformedCertificate):
        certfile.loads(json.dumps({"schema_version": "99"}))


def test_pi_command(cert_file, tmp_path, capsys):
    out = tmp_path / "pi.txt"
    assert main(["pi", str(cert_file), "--digits", "500", "--out", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert "".join(text.split()) == pi_gauss(500)
    assert max(len(x) for x in text.splitlines()) == 80 and text.endswith("\n")
    capsys.readouterr()
    assert main(["pi", str(cert_file), "--digits", "1"]) == 0
    assert capsys.readouterr().out == "3.1\n"


def test_pi_refuses_tampered(cert_file, capsys):
    _tamper(cert_file, "series", "a", "1")
    assert main(["pi", str(cert_file), "--digits", "50"]) == 1
    assert main(["pi", str(cert_file), "--digits", "50", "--force"]) == 0


def test_identify_command(capsys):
    assert main(["identify", "--re", "0.20508654634905660459", "--im", "0.037653278425410375946",
                 "--radicands", "3,89"]) == 0
    assert capsys.readouterr().out.strip() == "1/46*sqrt(89) + 1/46*sqrt(3)*i"
    assert main(["identify", "--re", "0.5"]) == 0
    assert capsys.readouterr().out.strip() == "1/2"
    assert main(["identify", "--re", "0.4714045207910317", "--radicands", "2"]) == 0
    assert capsys.readouterr().out.strip() == "1/3*sqrt(2)"
    assert main(["identify", "--re", "3.14159265358979323846", "--radicands", "2", "--height", "100"]) == 1
    assert "no match" in capsys.readouterr().out


def test_list(capsys, tmp_path):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "chan-liaw-3-23" in out and "23" in out and len(out.strip().splitlines()) == 5
    assert main(["--registry", str(tmp_path), "list"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 1
    (tmp_path / "broken.meq").write_text('name = "x"\nlevel = 3\ndegree = 5\nk = 6\npoly = "u +"\n')
    assert main(["--registry", str(tmp_path), "list"]) == 0
    out = capsys.readouterr().out
    assert "errors:" in out and "broken.meq" in out and "position" in out


def test_report(cert_file, tmp_path, capsys, certs):
    paths = []
    for label, c in certs.items():
        p = tmp_path / f"{label}.json"
        certfile.save(c, p, "h")
        paths.append(str(p))
    assert main(["report", *paths, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["fastest_level3"] == "3A23"
    assert main(["report", *paths, "--format", "csv"]) == 0
    assert capsys.readouterr().out.count("\n") == 6
    assert main(["report", *paths]) == 0
    assert "fastest level-3 series: 3A23" in capsys.readouterr().out


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["pi", "x.json", "--digits", "0"]) == 2
    assert main(["derive"]) == 2


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "rampi", "list"], capture_output=True, text=True, timeout=120)
    assert r.returncode == 0 and "berndt-2-7" in r.stdout
    r = subprocess.run([sys.executable, "-m", "rampi", "derive", "nope"], capture_output=True, text=True,
                       timeout=120)
    assert r.returncode == 2
