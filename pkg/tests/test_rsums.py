"""Window sums, the sign census, and the averaged-modulus probe."""

import math

import pytest

from klsign.arith import enumerate_targets, factorize, squarefree_window
from klsign.kloosterman import s_direct
from klsign.rsums import (
    SmoothWeight,
    bv_probe,
    census,
    compute_rsums,
    g_eval,
    gtilde1,
    h_sum,
)
from klsign.sieve import SieveConfig, weight_W, weight_restricted


def _squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _kl(q: int) -> float:
    return s_direct(1, 1, q) / math.sqrt(q)


def test_g_eval_vanishes_outside_open_interval():
    for x in [0.0, 0.5, 1.0, 2.0, 2.5, 100.0, -3.0]:
        assert g_eval(x) == 0.0


def test_g_eval_positive_inside_and_symmetric():
    for x in [1.01, 1.25, 1.5, 1.75, 1.99]:
        assert g_eval(x) > 0.0
    # deep in the tails the double underflows to an exact zero
    assert g_eval(1.0001) == 0.0
    for x in [1.1, 1.3, 1.45]:
        assert g_eval(x) == pytest.approx(g_eval(3.0 - x), rel=1e-14)
    # peak at the midpoint: exp(-1/(0.5*0.5))
    assert g_eval(1.5) == pytest.approx(math.exp(-4.0), rel=1e-14)


def test_gtilde1_value():
    # mass of the bump; also bounded by peak * width
    assert gtilde1() == pytest.approx(0.007029858406609657, abs=1e-12)
    assert 0.0 < gtilde1() < math.exp(-4.0)


def test_smooth_weight_defaults():
    w = SmoothWeight()
    assert w.support == (1.0, 2.0)
    assert w.gtilde1 == gtilde1()


def test_compute_rsums_frozen_at_100():
    r = compute_rsums(100, 5.0)
    assert r.X == 100.0
    assert r.rho == 5.0
    assert r.n_terms == 61
    assert r.R1 == pytest.approx(0.2659997534330746, rel=1e-12)
    assert r.R2 == pytest.approx(-0.0920094925707272, rel=1e-12)
    assert r.R3 == pytest.approx(0.7982178118118889, rel=1e-12)
    assert r.Rplus == pytest.approx(0.367184684129336, rel=1e-12)
    assert r.Rminus == pytest.approx(0.6963772265776319, rel=1e-12)


def test_compute_rsums_against_direct_loop():
    # Rebuild all five sums from scratch: brute-force squarefree test,
    # direct Kloosterman evaluation, no shared window helper.
    X, rho = 100, 5.0
    cfg = SieveConfig(X=float(X))
    s1 = s2 = s3 = sp = sm = 0.0
    terms = 0
    for n in range(X + 1, 2 * X + 1):
        if not _squarefree(n):
            continue
        gx = g_eval(n / X)
        if gx == 0.0:
            continue
        kl = _kl(n)
        fi = factorize(n)
        w = weight_W(fi, cfg)
        two_om = 2.0**fi.omega
        s1 += gx * w * abs(kl)
        s2 += gx * w * kl
        s3 += gx * w * abs(kl) * two_om
        sp += gx * w * (abs(kl) + kl) * (rho - two_om)
        sm += gx * w * (abs(kl) - kl) * (rho - two_om)
        terms += 1
    r = compute_rsums(X, rho)
    assert r.n_terms == terms
    assert r.R1 == pytest.approx(s1, rel=1e-9)
    assert r.R2 == pytest.approx(s2, rel=1e-9)
    assert r.R3 == pytest.approx(s3, rel=1e-9)
    assert r.Rplus == pytest.approx(sp, rel=1e-9)
    assert r.Rminus == pytest.approx(sm, rel=1e-9)


def test_rsums_sum_identity():
    # (|t|+t) + (|t|-t) = 2|t| termwise, so R+ + R- = 2(rho R1 - R3)
    for X in [50, 100, 400]:
        r = compute_rsums(X, 5.0)
        assert r.Rplus + r.Rminus == pytest.approx(
            2.0 * (r.rho * r.R1 - r.R3), rel=1e-10
        )


def test_rsums_rho_shift_identity():
    # d/drho of each detector sum is R1 +- R2, rho-independent
    a = compute_rsums(100, 5.0)
    b = compute_rsums(100, 6.0)
    assert b.Rplus - a.Rplus == pytest.approx(a.R1 + a.R2, rel=1e-9)
    assert b.Rminus - a.Rminus == pytest.approx(a.R1 - a.R2, rel=1e-9)


def test_rsums_decomposition_bound():
    # The defining inequality: the direct evaluation dominates the
    # recombination rho(R1 +- R2) - 2 R3 for every rho in range.
    for rho in [4.5, 5.0, 6.0, 8.0]:
        r = compute_rsums(100, rho)
        assert r.Rplus >= rho * (r.R1 + r.R2) - 2.0 * r.R3 - 1e-12
        assert r.Rminus >= rho * (r.R1 - r.R2) - 2.0 * r.R3 - 1e-12


def test_compute_rsums_thread_determinism():
    a = compute_rsums(400, 5.0, threads=1)
    b = compute_rsums(400, 5.0, threads=3)
    assert a == b


def test_compute_rsums_validation():
    with pytest.raises(ValueError):
        compute_rsums(9, 5.0)
    with pytest.raises(ValueError):
        compute_rsums(2e7, 5.0)
    with pytest.raises(ValueError):
        compute_rsums(100, 0.0)
    with pytest.raises(ValueError):
        compute_rsums(100, -1.0)


def test_h_sum_frozen_and_oracle():
    assert h_sum(100) == pytest.approx(0.2660001842135153, rel=1e-12)
    X = 100
    cfg = SieveConfig(X=float(X))
    total = 0.0
    for n in range(X + 1, 2 * X + 1):
        if not _squarefree(n):
            continue
        gx = g_eval(n / X)
        if gx == 0.0:
            continue
        total += gx * abs(_kl(n)) * weight_restricted(factorize(n), cfg)
    assert h_sum(X) == pytest.approx(total, rel=1e-9)


def test_h_sum_close_to_r1():
    # restricted and full weights agree on primes above sqrt(D), which
    # dominate the window; the two sums differ only in composite terms
    r = compute_rsums(100, 5.0)
    assert abs(h_sum(100) - r.R1) < 0.01 * r.R1


def test_h_sum_validation():
    with pytest.raises(ValueError):
        h_sum(9)


def test_census_frozen_at_100():
    pos, neg, records = census(100)
    assert (pos, neg) == (22, 25)
    assert len(records) == pos + neg == 47
    first = records[0]
    assert first.q == 101
    assert first.omega == 1
    assert first.p1 == 101
    assert first.p2 is None
    assert first.kl == pytest.approx(0.1518210009934621, rel=1e-12)
    assert first.sign == "positive"
    assert not first.flagged


def test_census_records_well_formed():
    pos, neg, records = census(100)
    qs = [r.q for r in records]
    assert qs == sorted(qs)
    assert qs == [fi.n for fi in enumerate_targets(100)]
    for r in records:
        assert 100 < r.q <= 200
        assert r.omega in (1, 2)
        assert (r.p2 is None) == (r.omega == 1)
        if r.p2 is None:
            assert r.p1 == r.q
        else:
            assert r.p1 * r.p2 == r.q
            assert r.p1 < r.p2
        assert r.sign in ("positive", "negative")
        assert (r.kl > 0) == (r.sign == "positive")
        assert not r.flagged
    assert pos == sum(1 for r in records if r.sign == "positive")
    assert neg == sum(1 for r in records if r.sign == "negative")


def test_census_signs_against_direct_loop():
    _, _, records = census(60)
    by_q = {r.q: r for r in records}
    expected = {}
    for q in range(61, 121):
        if not _squarefree(q):
            continue
        if factorize(q).omega > 2:
            continue
        expected[q] = _kl(q)
    assert set(by_q) == set(expected)
    for q, kl in expected.items():
        assert by_q[q].kl == pytest.approx(kl, rel=1e-9)
        assert by_q[q].sign == ("positive" if kl > 0 else "negative")


def test_census_thread_determinism():
    assert census(300, threads=1) == census(300, threads=4)


def test_census_validation():
    with pytest.raises(ValueError):
        census(1)
    with pytest.raises(ValueError):
        census(2e7)


def test_bv_probe_frozen():
    assert bv_probe(1000, 10) == pytest.approx(1.102928342558259, rel=1e-12)


def test_bv_probe_single_modulus():
    # Q = 1: one outer term, 3^0 |sum over the whole window|
    X = 100
    inner = math.fsum(
        g_eval(n / X) * _kl(n)
        for n in range(X + 1, 2 * X + 1)
        if _squarefree(n)
    )
    assert bv_probe(X, 1) == pytest.approx(abs(inner), rel=1e-9)


def test_bv_probe_monotone_in_q():
    # extending the modulus range only adds nonnegative contributions
    assert bv_probe(1000, 10) >= bv_probe(1000, 5)
    assert bv_probe(1000, 5) >= bv_probe(1000, 2)


def test_bv_probe_validation():
    with pytest.raises(ValueError):
        bv_probe(1000, 40)  # Q above sqrt(X)
    with pytest.raises(ValueError):
        bv_probe(2e6, 10)
