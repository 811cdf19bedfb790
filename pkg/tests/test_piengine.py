import json
import math
import time
import warnings
from fractions import Fraction

import mpmath
import pytest

import properties
from oracles import pi_gauss
from rampi import piengine
from rampi.errors import NonConvergence


def test_term_ratio(cert_3a23):
    assert piengine.term_ratio(cert_3a23, 0) == Fraction(-1, 2250000)
    r = piengine.term_ratio(cert_3a23, 10**6)
    assert abs(r / Fraction(-1, 250000) - 1) < Fraction(1, 10**5)
    # every ratio stays below |z| in modulus, so the tail is geometric
    assert all(abs(piengine.term_ratio(cert_3a23, n)) < Fraction(1, 250000) for n in range(101))


def test_first_term(cert_3a23):
    st = piengine.binsplit(cert_3a23, 0, 1)
    assert Fraction(st.T, st.Q) == 827


def test_binsplit_matches_fold(certs):
    for c in certs.values():
        assert piengine.partial_sum(c, 20) == piengine.naive_sum(c, 20)
    properties.run_binsplit_naive(list(certs.values()), 50)


def test_combine_is_associative(cert_3a23):
    sp = piengine.spec_of(cert_3a23)
    a, b, c = (piengine.binsplit(sp, i, i + 3) for i in (0, 3, 6))
    assert a.combine(b).combine(c) == a.combine(b.combine(c)) == piengine.binsplit(sp, 0, 9)


def test_partial_sum_187(cert_3a23):
    mpmath.mp.dps = 1100
    s = piengine.partial_sum(cert_3a23, 187)
    target = 1500 * mpmath.sqrt(3) / mpmath.pi
    diff = abs(mpmath.mpf(s.numerator) / s.denominator - target)
    assert diff < mpmath.mpf(10) ** -1000


def test_tail_bound_sound(certs):
    mpmath.mp.dps = 2000
    for c in certs.values():
        sp = piengine.spec_of(c)
        rf = c.rational_form
        exact = mpmath.mpf(rf.C.numerator) / rf.C.denominator * mpmath.sqrt(rf.radicand) / mpmath.pi
        for N in (5, 40, 120):
            enc = piengine.enclose_sum(sp, N)
            err = abs(mpmath.mpf(enc.value.numerator) / enc.value.denominator - exact)
            assert err <= mpmath.mpf(enc.error.numerator) / enc.error.denominator, (c.label, N)


def test_pi_digits_small(cert_3a23):
    assert piengine.pi_digits(cert_3a23, 50) == "3.14159265358979323846264338327950288419716939937510"
    assert piengine.pi_digits(cert_3a23, 1) == "3.1"


@pytest.mark.parametrize("D", [50, 500, 5000])
def test_pi_digits_oracle(certs, D):
    for label in ("3A23", "2A7"):
        assert piengine.pi_digits(certs[label], D) == pi_gauss(D)


def test_cross_certificate_agreement(certs):
    assert piengine.pi_digits(certs["3A23"], 10000) == piengine.pi_digits(certs["3P5"], 10000)


def test_reference_pi_against_oracle():
    assert piengine.reference_pi(3000) == pi_gauss(3000)


def test_digits_per_term(cert_3a23):
    assert math.isclose(piengine.digits_per_term(cert_3a23), math.log10(250000))
    assert piengine.terms_for(cert_3a23, 1000) <= 196
    assert piengine.compute_pi(cert_3a23, 1000).terms <= 196


def test_slow_series_refused(cert_3a23):
    slow = cert_3a23.replace(z=cert_3a23.z + Fraction(999, 1000))
    with pytest.raises(NonConvergence):
        piengine.weight_sums(slow, 1000)


def test_format_digits():
    text = piengine.format_digits(314159, 5)
    assert text == "3.14159\n"
    long = piengine.format_digits(int(pi_gauss(200).replace(".", "")), 200)
    lines = long.splitlines()
    assert all(len(x) == 80 for x in lines[:-1]) and long.endswith("\n")
    assert "".join(lines) == pi_gauss(200)


def test_int_digits_beyond_str_limit():
    n = 7 * 10**6000 + 12345
    s = piengine.int_digits(n)
    assert len(s) == 6001 and s.startswith("7") and s.endswith("12345")
    assert piengine.int_digits(5, 4) == "0005"


def test_convergence_report(certs):
    rep = piengine.convergence_report(certs.values())
    ranked = rep.level_ranking(3)
    assert [r.label for r in ranked][0] == "3A23"
    assert all(r.level == 3 for r in ranked) and len(ranked) == 4
    best = rep.fastest(3)
    assert math.isclose(best.digits_per_term, 5.39794, abs_tol=1e-5)
    assert all(r.digits_per_term < best.digits_per_term for r in ranked[1:])
    doc = json.loads(json.dumps(rep.to_json()))
    assert doc["fastest_level3"] == "3A23"
    assert rep.to_csv().splitlines()[0].startswith("label,level")
    assert "fastest level-3 series: 3A23" in rep.render()


def test_convergence_report_singleton(cert_3a23):
    rep = piengine.convergence_report([cert_3a23])
    assert len(rep.rows) == 1
    assert "fastest" not in rep.render()
    assert rep.to_json()["fastest_level3"] is None


def test_scaling_soft(cert_3a23):
    t0 = time.perf_counter()
    piengine.compute_pi(cert_3a23, 10000)
    t1 = time.perf_counter()
    piengine.compute_pi(cert_3a23, 20000)
    t2 = time.perf_counter()
    if (t2 - t1) > 4 * (t1 - t0):
        warnings.warn(f"doubling D took {(t2 - t1) / (t1 - t0):.1f}x longer", stacklevel=1)
