"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Every tolerance and time budget here is load-bearing; loosening one is
changing what the package promises.  Anything frozen to full precision
(census counts, Monte-Carlo values) is a committed regression from the
first oracle run, reproduced exactly by construction ever since.
"""

import dataclasses
import itertools
import math
import time

import mpmath as mp
import numpy as np

from klsign.arith import factorize, primes_up_to
from klsign.cli import RunConfig, run
from klsign.constants import A_i, C1, C2_final, I_product
from klsign.kloosterman import bound_check, s_direct, s_fast, s_row
from klsign.residues import ResidueProblem, residue_main_term, residue_numeric, scaling_probe
from klsign.rsums import census, compute_rsums
from klsign.satotate import discrepancy, vertical_sample
from klsign.sieve import SieveConfig, divisor_moment, first_primes, lambda_pi_sum


def _check(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num:02d} failed: {detail}"


def _squarefree_upto(limit: int) -> list[int]:
    out = []
    for q in range(2, limit + 1):
        d, sf = 2, True
        while d * d <= q:
            if q % (d * d) == 0:
                sf = False
                break
            d += 1
        if sf:
            out.append(q)
    return out


def test_criterion_01_base_cases():
    cases = {
        (1, 1, 2): 1.0,
        (1, 1, 3): -1.0,
        (1, 1, 5): 2.0 + 2.0 * math.cos(4.0 * math.pi / 5.0),
    }
    worst = max(abs(s_direct(*k) - v) for k, v in cases.items())
    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        for k in cases:
            s_direct(*k)
        best = min(best, time.perf_counter() - t0)
    _check(1, worst < 1e-9 and best < 1e-3, f"max err {worst:.2e}, {best*1e6:.0f} us")


def test_criterion_02_bound_sweep():
    t0 = time.perf_counter()
    prime_ok = all(bound_check(1, 1, p) for p in primes_up_to(10**4))
    squarefree_ok = all(bound_check(1, 1, q) for q in _squarefree_upto(2000))
    elapsed = time.perf_counter() - t0
    _check(2, prime_ok and squarefree_ok and elapsed < 30.0, f"{elapsed:.2f} s")


def test_criterion_03_multiplicativity_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for q in _squarefree_upto(1999):
        direct = s_direct(1, 1, q)
        fast = s_fast(1, 1, q).value
        worst = max(worst, abs(fast - direct) / max(abs(direct), 1e-12))
    elapsed = time.perf_counter() - t0
    _check(3, worst < 1e-6 and elapsed < 60.0, f"worst rel {worst:.2e}, {elapsed:.1f} s")


def test_criterion_04_average_identity():
    worst = max(
        abs(float(np.sum(s_row(p)[1:])) - 1.0) for p in primes_up_to(200)
    )
    _check(4, worst < 1e-6, f"max |sum - 1| = {worst:.2e}")


def test_criterion_05_divisor_moment_cancellation():
    t0 = time.perf_counter()
    logs = [mp.log(p) for p in first_primes(10)]
    worst = 0.0
    with mp.workdps(60):
        for j in range(10):
            mass = mp.fsum(
                mp.fsum(c) ** j
                for r in range(11)
                for c in itertools.combinations(logs, r)
                if r > 0 or j == 0
            )
            worst = max(worst, abs(divisor_moment(j)) / float(mass))
    t10 = divisor_moment(10) / (
        math.factorial(10) * math.prod(math.log(p) for p in first_primes(10))
    )
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and abs(t10 - 1.0) < 1e-9 and elapsed < 1.0
    _check(5, ok, f"residue {worst:.2e}, T10 ratio - 1 = {t10-1:.2e}, {elapsed:.2f} s")


def test_criterion_06_lambda_sum_routes():
    worst = 0.0
    for sqrt_d in (1e3, 1e6):
        cfg = SieveConfig.from_sqrt_d(sqrt_d)
        enum, _ = lambda_pi_sum(cfg, method="enumeration")
        binom, _ = lambda_pi_sum(cfg, method="binomial")
        worst = max(worst, abs(enum - binom) / abs(enum))
    _check(6, worst < 1e-9, f"worst rel gap {worst:.2e}")


def test_criterion_07_region_integrals():
    t0 = time.perf_counter()
    a2 = A_i(2, method="adaptive")
    gap = abs(a2.value - math.log(4.0 / 3.0))
    committed = {
        3: (2.113709832363956, 0.0010678272102010932),
        4: (4.260921571937864, 0.005698717491531214),
        5: (3.9382501012242437, 0.018691483697170583),
    }
    mc_ok = True
    rel_errs = []
    for i, (value, stderr) in committed.items():
        r = A_i(i, samples=10**7, seed=20230, threads=4)
        mc_ok &= abs(r.value - value) < 1e-12 and abs(r.abs_error_estimate - stderr) < 1e-12
        rel_errs.append(r.abs_error_estimate / r.value)
    elapsed = time.perf_counter() - t0
    ok = gap < 1e-6 and mc_ok and max(rel_errs) < 0.01 and elapsed < 300.0
    _check(
        7,
        ok,
        f"A2 gap {gap:.2e}, max MC stderr {max(rel_errs)*100:.2f}%, {elapsed:.1f} s",
    )


def test_criterion_08_constant_product_consistency():
    gap = abs(4.0 * 0.0319586 * 0.11109 - 0.0142)
    _check(8, gap < 5e-5, f"|4 A2 C2 - 0.0142| = {gap:.2e}")


def test_criterion_09_bound_constant_ordering():
    t0 = time.perf_counter()
    _, assembled = C1(SieveConfig(X=10**6))
    c2f = C2_final()
    ratio = assembled / (2.0 * c2f)
    elapsed = time.perf_counter() - t0
    ok = assembled > 2.0 * c2f and 1e8 <= ratio <= 1e11 and elapsed < 1.0
    _check(9, ok, f"ratio {ratio:.3e}, {elapsed:.2f} s")


def test_criterion_10_mellin_identity():
    from klsign.residues import mellin_verify

    rng = np.random.default_rng(123)
    f14 = [0.0] * 14 + [1.0]
    worst = 0.0
    for _ in range(100):
        length = int(rng.integers(1, 300))
        y = rng.uniform(-1.0, 1.0, size=length).tolist()
        worst = max(worst, mellin_verify(y, 100.5, f14))
    _check(10, worst < 1e-9, f"max gap {worst:.2e}")


def test_criterion_11_residue_ratio_bands():
    from fractions import Fraction as F

    prob = ResidueProblem(
        (0, 0, 0, 1), (0, 0, 0, 1), {(1, 1): F(1), (2, 2): F(1)}, log_M=F(20)
    )
    r20 = float(residue_numeric(prob) / residue_main_term(prob))
    p80 = dataclasses.replace(prob, log_M=F(80))
    r80 = float(residue_numeric(p80) / residue_main_term(p80))
    slope = scaling_probe(prob, [20, 40, 80])
    ok = 0.9 <= r20 <= 1.1 and 0.97 <= r80 <= 1.03 and abs(slope - (-3.0)) <= 0.1
    _check(11, ok, f"ratios {r20:.4f}/{r80:.5f}, slope {slope:.3f}")


def test_criterion_12_i_product_diagonal_order():
    ss = np.logspace(-4, -2, 5)
    slope, _ = np.polyfit(np.log(ss), np.log([I_product(s, s) for s in ss]), 1)
    _check(12, abs(slope - 20.0) <= 0.1, f"fitted order {slope:.4f}")


def test_criterion_13_sign_census():
    pos4, neg4, _ = census(10**4, threads=4)
    t0 = time.perf_counter()
    pos5, neg5, records5 = census(10**5, threads=4)
    elapsed = time.perf_counter() - t0
    ok = (
        pos4 > 0
        and neg4 > 0
        and (pos4, neg4) == (1741, 1739)
        and (pos5, neg5) == (15019, 15204)
        and len(records5) == 30223
        and elapsed < 60.0
    )
    _check(
        13,
        ok,
        f"1e4: +{pos4}/-{neg4}; 1e5: +{pos5}/-{neg5} in {elapsed:.1f} s",
    )


def test_criterion_14_rsum_decomposition():
    worst_slack = math.inf
    r2_ok = True
    for X in (10**2, 10**3, 10**4):
        for rho in (4.5, 5.0, 6.0):
            r = compute_rsums(X, rho)
            slack_p = r.Rplus - (rho * r.R1 + rho * r.R2 - 2.0 * r.R3) + 1e-6 * r.R1
            slack_m = r.Rminus - (rho * r.R1 - rho * r.R2 - 2.0 * r.R3) + 1e-6 * r.R1
            worst_slack = min(worst_slack, slack_p, slack_m)
            r2_ok &= abs(r.R2) <= r.R1
    _check(14, worst_slack >= 0.0 and r2_ok, f"min slack {worst_slack:.3e}")


def test_criterion_15_vertical_sato_tate():
    t0 = time.perf_counter()
    d = discrepancy(vertical_sample(10007))
    elapsed = time.perf_counter() - t0
    _check(15, d < 0.05 and elapsed < 10.0, f"D = {d:.5f}, {elapsed:.2f} s")


def test_criterion_16_cli_determinism(tmp_path):
    commands = [
        dict(command="eval", q=101),
        dict(command="census", X=300.0),
        dict(command="rsums", X=200.0),
        dict(command="constants"),
        dict(command="residue-demo"),
        dict(command="satotate", X=200.0, a=1),
        dict(command="bvprobe", X=1000.0, q=10),
    ]
    mismatches = []
    for case in commands:
        blobs = []
        for i, threads in enumerate((1, 3)):
            out = tmp_path / f"{case['command']}-{i}.out"
            cfg = RunConfig(
                threads=threads,
                out=str(out),
                cache_dir=str(tmp_path / f"cache-{case['command']}-{i}"),
                **case,
            )
            assert run(cfg) == 0
            blobs.append(out.read_bytes())
        if blobs[0] != blobs[1]:
            mismatches.append(case["command"])
    _check(16, not mismatches, f"mismatched: {mismatches or 'none'}")
