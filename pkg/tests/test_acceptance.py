"""Acceptance criteria, one test each, each printing a PASS/FAIL line."""

import contextlib
import json
import time
from dataclasses import replace
from fractions import Fraction

import pytest

import properties
from oracles import pi_gauss
from rampi import certificate as certfile
from rampi import piengine
from rampi.ball import ComplexBall
from rampi.cli import main
from rampi.derive import derive, verify_certificate
from rampi.exactnum import I, TowerElement
from rampi.hyper import multiplier_numeric
from rampi.modeq import find_equation

T = TowerElement.parse


@pytest.fixture
def report(capsys):
    """Yield a recorder; the summary line is printed even when the body fails."""

    @contextlib.contextmanager
    def run(number, title):
        t0 = time.perf_counter()
        notes = []
        try:
            yield notes
        except BaseException as exc:
            with capsys.disabled():
                print(f"\n[acceptance {number}] FAIL  {title}: {type(exc).__name__}: {exc}")
            raise
        dt = time.perf_counter() - t0
        with capsys.disabled():
            extra = f" ({'; '.join(notes)})" if notes else ""
            print(f"\n[acceptance {number}] PASS  {title} in {dt:.2f} s{extra}")

    return run


def test_criterion_1_exact_reproduction(report):
    with report(1, "exact reproduction of the degree-23 derivation"):
        t0 = time.perf_counter()
        c = derive(find_equation("chan-liaw-3-23"), "alternating")
        pt, tr = c.point, c.trace
        assert pt.alpha0 == T("1/2 - 53/1000*sqrt(89)")
        assert tr.v1 == T("-294573*sqrt(3) + 82573*i") / 516854
        assert tr.v2 == (
            T("8674041040500000*sqrt(5)") * (1 - I) + T("3034180783431000*sqrt(15)") * (1 + I)
        ) / 17258921684500483
        assert tr.m0 == T("1/46*sqrt(89) + 1/46*sqrt(3)*i")
        assert tr.m_ratio == Fraction(827000, 69)
        assert c.z == Fraction(-1, 500**2)
        assert c.b == T("4717/1500*sqrt(3)")
        assert c.a == T("827/4500*sqrt(3)")
        rf = c.rational_form
        assert (rf.A, rf.B, rf.sign, rf.num, rf.M, rf.C, rf.radicand) == (14151, 827, -1, 1, 500**2, 1500, 3)
        assert c.identity_text() == "(14151 n + 827)(−1)^n/500^{2n} = 1500√3/π"
        assert time.perf_counter() - t0 < 30


def test_criterion_2_numeric_identification(report, capsys):
    with report(2, "80-bit multiplier ball and identification of m0"):
        alpha0 = T("1/2 - 53/1000*sqrt(89)")
        ball = multiplier_numeric(3, alpha0, 1 - alpha0, 80)
        re, im = "0.20508654634905660459", "0.037653278425410375946"
        # the printed decimals carry half a unit in their last place
        printed = ComplexBall.from_decimal(re, im)
        assert ball.overlaps(printed)
        assert ball.rad < Fraction(1, 10**20)
        assert main(["identify", "--re", re, "--im", im, "--radicands", "3,89"]) == 0
        out = capsys.readouterr().out.strip()
        assert T(out) == T("1/46*sqrt(89) + 1/46*sqrt(3)*i")


def test_criterion_3_series_to_pi(report, cert_3a23):
    with report(3, "verify 3A23 at 1000 digits") as notes:
        t0 = time.perf_counter()
        rep = verify_certificate(cert_3a23, 1000)
        dt = time.perf_counter() - t0
        assert rep.passed, rep.render()
        res = piengine.compute_pi(cert_3a23, 1000)
        assert res.terms <= 200
        assert res.text == pi_gauss(1000)
        assert dt < 10
        notes.append(f"{res.terms} terms, verify {dt:.2f} s")


def test_criterion_4_other_equations(report, certs):
    with report(4, "2A7, 3A11, 3A5, 3P5 derive and verify at 500 digits") as notes:
        for label in ("2A7", "3A11", "3A5", "3P5"):
            c = certs[label]
            rep = verify_certificate(c, 500)
            assert rep.passed, rep.render()
            m0 = c.trace.m0
            if c.cls == "alternating":
                assert m0 * m0.conjugate() == Fraction(1, c.d)
            else:
                assert m0 == TowerElement.sqrt_rational(Fraction(1, c.d))
            notes.append(f"{label}: {c.identity_text()}")
        assert (certs["2A7"].s, certs["2A7"].level, certs["2A7"].d) == (4, 2, 7)


def test_criterion_5_fastest_in_level_3(report, certs):
    with report(5, "3A23 is the fastest level-3 series") as notes:
        rep = piengine.convergence_report(certs.values())
        ranked = rep.level_ranking(3)
        assert {r.label for r in ranked} == {"3A23", "3A11", "3A5", "3P5"}
        assert ranked[0].label == "3A23"
        assert abs(ranked[0].digits_per_term - 5.3979) < 1e-4
        assert all(r.digits_per_term < ranked[0].digits_per_term for r in ranked[1:])
        notes.append(", ".join(f"{r.label} {r.digits_per_term:.5f}" for r in ranked))


def test_criterion_6_ten_thousand_digits(report, cert_3a23):
    with report(6, "10^4 digits of pi from 3A23") as notes:
        t0 = time.perf_counter()
        got = piengine.pi_digits(cert_3a23, 10**4)
        dt = time.perf_counter() - t0
        assert got == pi_gauss(10**4)
        assert dt < 60
        notes.append(f"{dt:.2f} s")


def test_criterion_7_property_suites(report, certs):
    with report(7, "property suites") as notes:
        properties.run_field_axioms(10**4)
        hits = properties.run_sqrt_roundtrip(10**4)
        properties.run_to_ball_soundness(10**4)
        properties.run_ball_monotonicity(10**4)
        properties.run_regime_agreement(50)
        properties.run_agm_oracle(100)
        properties.run_binsplit_naive(list(certs.values()), 50)
        everything = list(certs.values()) + [derive(find_equation("berndt-3-11"), "positive")]
        properties.run_finite_differences(everything, 25)
        worst = min(min(properties.finite_difference_bits(c).values()) for c in everything)
        notes.append(f"{hits} sqrt round trips; worst finite-difference agreement {worst:.1f} bits")


@pytest.mark.parametrize(
    "field, check",
    [("a", "series_ab"), ("b", "series_ab"), ("z", "series_z"), ("m0", "multiplier_identity"),
     ("u0", "point_on_curve")],
)
def test_criterion_8_tampering(report, cert_3a23, tmp_path, capsys, field, check):
    with report(8, f"tampered {field} is rejected by {check}"):
        c = cert_3a23
        if field in ("a", "b", "z"):
            bad = c.replace(**{field: getattr(c, field) + Fraction(1, 7)})
        elif field == "m0":
            bad = c.replace(trace=replace(c.trace, m0=c.trace.m0 + Fraction(1, 7)))
        else:
            bad = c.replace(point=replace(c.point, u0=c.point.u0 + Fraction(1, 7)))
        rep = verify_certificate(bad, 100)
        assert not rep[check].passed
        path = tmp_path / "bad.json"
        path.write_text(certfile.dumps(bad, "h", {"created": "fixed"}), encoding="utf-8")
        assert json.loads(path.read_text(encoding="utf-8"))["schema_version"] == "1"
        assert main(["verify", str(path), "--digits", "100"]) == 1
        capsys.readouterr()
