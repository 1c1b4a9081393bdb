"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Criteria 3, 8 and 9 encode claims that do not survive implementation
(see notes in the repository root); their tests state the claim as given
and are expected to fail with a precise counterexample rather than being
weakened to pass.
"""

import math
import time

import numpy as np
import pytest

from driftlink import analysis as A
from driftlink.coding import generate_codebook
from driftlink.diamond import NetworkConfig, simulate_transmission
from driftlink.harness import ExperimentSpec, InfeasibleRunError, run_experiment

GRID_SEED = 2024


def _line(criterion: int, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")


def _network_grid(count: int, seed: int = GRID_SEED):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield (
            int(rng.integers(2, 65)),
            10.0 ** rng.uniform(-3, 3),
            10.0 ** rng.uniform(-3, 3),
            rng,
        )


def test_c01_binary_input_penalty_constant():
    start = time.perf_counter()
    bpsk = A.bpsk_awgn_capacity(0.5)
    awgn = A.awgn_capacity(0.5)
    gamma = A.gamma_constant()
    elapsed = time.perf_counter() - start
    ok = (
        abs(bpsk - 0.29048) <= 5e-4
        and abs(awgn - 0.29248) <= 1e-5
        and gamma >= 0.99
        and elapsed < 1.0
    )
    _line(1, ok, f"binary {bpsk:.5f}, gaussian {awgn:.5f}, gamma {gamma:.5f}, {elapsed:.2f}s")
    assert abs(bpsk - 0.29048) <= 5e-4
    assert abs(awgn - 0.29248) <= 1e-5
    assert gamma >= 0.99
    assert elapsed < 1.0


def test_c02_envelope_ratio_on_random_grid():
    start = time.perf_counter()
    target = 20.0 / math.log(2.0)
    worst = 0.0
    for K, g, h, _ in _network_grid(1000):
        ratio = A.sync_upper_bound(K, g, h) / A.unsync_lower_bound(K, g, h, 1.0)
        worst = max(worst, abs(ratio - target))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and target <= 29.0 and elapsed < 1.0
    _line(2, ok, f"max |ratio - 20/ln2| = {worst:.2e} over 1000 networks, {elapsed:.2f}s")
    assert worst <= 1e-9
    assert target <= 29.0
    assert elapsed < 1.0


def test_c03_snr_floor_interval_on_random_grid():
    start = time.perf_counter()
    violations = []
    worst_exact = 0.0
    for K, g, h, _ in _network_grid(1000):
        P1, P2, reg = A.select_powers(K, g, h, 1.0)
        s = A.snr_lb(P1, P2, K, g, h, 1.0)
        if not (1.0 / 3.0 - 1e-12 <= s <= 0.5 + 1e-12):
            violations.append((K, g, h, reg, s))
        if reg != A.REGIME_INTERMEDIATE:
            worst_exact = max(worst_exact, abs(s - 1.0 / (2.0 + 1.0 / K)))
    elapsed = time.perf_counter() - start
    assert worst_exact <= 1e-12, "MAC/BC floors must equal 1/(2 + 1/K) exactly"
    assert elapsed < 1.0
    ok = not violations
    detail = (
        f"MAC/BC exactness {worst_exact:.1e}; interval violations "
        f"{len(violations)}/1000"
    )
    if violations:
        k, g, h, reg, s = max(violations, key=lambda v: v[4])
        detail += (
            f"; worst K={k} g={g:.3g} h={h:.3g} ({reg}) floor={s:.4f} > 1/2 "
            "- the selected intermediate-regime powers give "
            "1/(1 + sqrt(g/(Kh)) + sqrt(h/(Kg))), whose denominator can "
            "reach 1 + 2/sqrt(K) < 2 once K > 4"
        )
    _line(3, ok, detail)
    assert not violations, detail


def test_c04_noiseless_pipeline_identity():
    start = time.perf_counter()
    worst = 0.0
    for K in (1, 2, 4):
        for g, h in ((1.0, 1.0), (2.0, 0.5)):
            P1, P2, _ = A.select_powers(K, g, h, 1.0)
            cfg = NetworkConfig.symmetric(
                K=K, g=g, h=h, mu=1.0, sigma2=0.0, N=64, Nprime=512,
                P1=P1, P2=P2, nu=1.0, beta=1.0, seed=4, noise_var=0.0,
            )
            cb = generate_codebook(8, cfg.N, cfg.P1, seed=14)
            rec = simulate_transmission(cfg, cb, 5, np.random.default_rng(1))
            gain = K * cfg.alphas()[0] * 1.0 * math.sqrt(g * h)
            worst = max(worst, float(np.max(np.abs(rec.uhat / (gain * cb.codewords[5]) - 1.0))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    _line(4, ok, f"max relative deviation {worst:.2e} over K in (1,2,4), {elapsed:.1f}s")
    assert worst <= 1e-9
    assert elapsed < 10.0


def test_c05_snr_floor_with_deterministic_alignment():
    start = time.perf_counter()
    P1, P2, reg = A.select_powers(2, 1.0, 1.0, 1.0)
    assert reg == A.REGIME_INTERMEDIATE
    cfg = NetworkConfig.symmetric(
        K=2, g=1.0, h=1.0, mu=1.0, sigma2=0.0, N=256, Nprime=4096,
        P1=P1, P2=P2, nu=1.0, beta=1.0, seed=55,
    )
    trials = math.ceil(100_000 / cfg.N)
    spec = ExperimentSpec(cfg=cfg, M=16, trials=trials, codebook_seed=15)
    res = run_experiment(spec)
    elapsed = time.perf_counter() - start
    rel = abs(res.snr_measured_mean / res.snr_lb - 1.0)
    ok = rel <= 0.05 and elapsed < 120.0
    _line(
        5,
        ok,
        f"measured snr {res.snr_measured_mean:.4f} vs floor {res.snr_lb:.4f} "
        f"({rel * 100:.2f}% off) over {trials * cfg.N} symbols, {elapsed:.0f}s",
    )
    assert rel <= 0.05
    assert elapsed < 120.0


@pytest.fixture(scope="module")
def desk_scale_run():
    P1, P2, _ = A.select_powers(2, 1.0, 1.0, 1.0)
    N, nprime, sigma2 = 256, 4096, 0.1
    nu, beta = A.desk_margins(N, nprime, sigma2)
    cfg = NetworkConfig.symmetric(
        K=2, g=1.0, h=1.0, mu=1.0, sigma2=sigma2, N=N, Nprime=nprime,
        P1=P1, P2=P2, nu=nu, beta=beta, seed=66,
    )
    spec = ExperimentSpec(cfg=cfg, M=16, trials=1000, codebook_seed=16)
    start = time.perf_counter()
    res = run_experiment(spec)
    return cfg, spec, res, time.perf_counter() - start


def test_c06_concentration_and_conditional_floor(desk_scale_run):
    cfg, spec, res, elapsed = desk_scale_run
    bound = A.e_idc_chebyshev_bound(cfg.K, cfg.N, cfg.Nprime, cfg.sigma2, cfg.nu, cfg.beta)
    se = 3 * math.sqrt(max(res.e_idc_freq * (1 - res.e_idc_freq), 1e-9) / res.trials)
    freq_ok = res.e_idc_freq <= bound + se

    delta = A.delta_n(cfg.N, 1.0, nu=cfg.nu, beta=cfg.beta, Nprime=cfg.Nprime)
    floor = (
        cfg.K * cfg.alphas()[0] * 1.0 * math.sqrt(cfg.g * cfg.h)
        * (1 - 4 * delta) * math.sqrt(cfg.P1)
    )
    floor_ok = res.good_trials > 0 and res.min_signed_signal_good >= floor - 1e-9
    ok = freq_ok and floor_ok and elapsed < 600.0
    _line(
        6,
        ok,
        f"misalignment {res.e_idc_freq:.4f} vs Chebyshev {bound:.4f}+3se({se:.4f}); "
        f"worst aligned signal {res.min_signed_signal_good:.4f} vs "
        f"(1-4*{delta:.3f}) floor {floor:.4f}; "
        f"{res.good_trials}/{res.trials} aligned, {elapsed:.0f}s",
    )
    assert freq_ok
    assert floor_ok
    assert elapsed < 600.0


def test_c07_energy_audit(desk_scale_run):
    cfg, spec, res, _ = desk_scale_run
    target = cfg.N * cfg.P1
    source_ok = (
        abs(res.source_energy_min - target) <= 1e-9 * target
        and abs(res.source_energy_max - target) <= 1e-9 * target
    )
    budget = cfg.N * cfg.P2[0]
    se = 3 * res.relay_energy_std / math.sqrt(res.trials * cfg.K)
    relay_ok = res.relay_energy_mean <= budget + se
    ok = source_ok and relay_ok
    _line(
        7,
        ok,
        f"source energy in [{res.source_energy_min:.9f}, {res.source_energy_max:.9f}] "
        f"vs N*P1 = {target:.9f}; relay mean {res.relay_energy_mean:.3f} vs "
        f"budget {budget:.3f} + 3se({se:.3f})",
    )
    assert source_ok
    assert relay_ok


def test_c08_end_to_end_rate_at_stated_block_length():
    P1, P2, _ = A.select_powers(2, 1.0, 1.0, 1.0)
    snr = A.snr_lb(P1, P2, 2, 1.0, 1.0, 1.0)
    rate = 0.8 * A.gamma_constant() * A.awgn_capacity(snr)
    N = 256
    M = 2 ** math.ceil(rate * N)
    nu, beta = A.desk_margins(N, 4096, 0.1)
    cfg = NetworkConfig.symmetric(
        K=2, g=1.0, h=1.0, mu=1.0, sigma2=0.1, N=N, Nprime=4096,
        P1=P1, P2=P2, nu=nu, beta=beta, seed=88,
    )
    spec = ExperimentSpec(cfg=cfg, M=M, trials=1000, codebook_seed=18)
    try:
        res = run_experiment(spec)
    except InfeasibleRunError as exc:
        detail = (
            f"M = 2^{int(math.log2(M))} codewords at rate {rate:.4f} b/sym: {exc}. "
            "Exhaustive-search decoding over a seeded random codebook of this "
            "size cannot be stored or searched; the same rate point is "
            "demonstrated at a feasible block size in tests/test_harness.py"
        )
        _line(8, False, detail)
        pytest.fail(detail)
    ok = res.bler_ci_hi < 0.10
    _line(8, ok, f"block error rate {res.bler:.4f} (CI hi {res.bler_ci_hi:.4f}) at M={M}")
    assert ok


def test_c09_unequal_drift_reduction_and_interval():
    start = time.perf_counter()
    rng = np.random.default_rng(GRID_SEED + 1)
    worst_reduction = 0.0
    for _ in range(200):
        K = int(rng.integers(1, 9))
        g = 10.0 ** rng.uniform(-2, 2)
        h = 10.0 ** rng.uniform(-2, 2)
        mu = rng.uniform(0.5, 1.5)
        P1, P2, _ = A.select_powers(K, g, h, mu)
        sym = A.snr_lb(P1, P2, K, g, h, mu)
        uneq = A.snr_lb_unequal(P1, (P2,) * K, (mu,) * K, (mu,) * K, g, h)
        worst_reduction = max(
            worst_reduction,
            abs(uneq - sym),
            abs(A.mu_tilde((mu,) * K, (mu,) * K) - mu),
        )
    reduction_ok = worst_reduction <= 1e-12
    assert reduction_ok, f"equal-drift reduction off by {worst_reduction:.2e}"

    violations = []
    for K, g, h, grid_rng in _network_grid(1000, seed=GRID_SEED + 2):
        mu1 = tuple(grid_rng.uniform(0.9, 1.1, K))
        mu2 = tuple(grid_rng.uniform(0.9, 1.1, K))
        P1, P2k, reg = A.select_powers_unequal(K, g, h, mu1, mu2)
        s = A.snr_lb_unequal(P1, P2k, mu1, mu2, g, h)
        if not (1.0 / 3.0 - 1e-12 <= s <= 0.5 + 1e-12):
            violations.append((K, g, h, reg, s))
    elapsed = time.perf_counter() - start
    ok = reduction_ok and not violations and elapsed < 1.0
    detail = (
        f"equal-drift reduction {worst_reduction:.1e}; drift-grid interval "
        f"violations {len(violations)}/1000, {elapsed:.2f}s"
    )
    if violations:
        k, g, h, reg, s = max(violations, key=lambda v: v[4])
        detail += (
            f"; worst K={k} ({reg}) floor={s:.4f} > 1/2 - normalizing the "
            "source power by min_k of the first-hop drifts overdrives the "
            "other relays, pushing the floor above 1/2 for K >= 3"
        )
    _line(9, ok, detail)
    assert not violations, detail


def test_c10_capacity_ceiling_consistent_with_envelope():
    start = time.perf_counter()
    factors = np.logspace(math.log10(0.25), math.log10(4.0), 7)
    worst = -math.inf
    for K, g, h, _ in _network_grid(200, seed=GRID_SEED + 3):
        P1, P2, _reg = A.select_powers(K, g, h, 1.0)
        envelope = A.sync_upper_bound(K, g, h)
        for f1 in factors:
            for f2 in factors:
                per_energy = A.capacity_upper_bound(P1 * f1, P2 * f2, K, g, h) / (
                    P1 * f1 + K * P2 * f2
                )
                worst = max(worst, per_energy - envelope)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    _line(10, ok, f"max (ceiling/energy - envelope) = {worst:.2e} on 200x49 grid, {elapsed:.1f}s")
    assert worst <= 1e-9
    assert elapsed < 10.0
