"""Monte Carlo experiment orchestration over the relay-fan simulator.

Trials are independent jobs keyed by (master seed, trial index); any
execution order or worker count produces bit-identical aggregates because
results are folded in trial-index order.  The achieved bits per unit
energy always uses the audited energy *budget* N (P1 + sum P2k), not the
realized energy, so the headline metric matches the code's allowance.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import analysis
from .coding import OuterCodebook, generate_codebook
from .diamond import NetworkConfig, simulate_transmission

#: Exact column order of sweep CSV output; JSON rows mirror these keys.
SWEEP_COLUMNS = [
    "K", "g", "h", "mu", "sigma2", "N", "Nprime", "M", "trials",
    "P1", "P2", "regime", "snr_lb", "snr_measured_mean",
    "snr_measured_min_good", "bler", "bler_ci_lo", "bler_ci_hi",
    "e_idc_freq", "e_idc_bound", "source_energy_mean", "relay_energy_mean",
    "rpue_achieved", "rpue_lb", "rpue_ub", "seed",
]


class InfeasibleRunError(RuntimeError):
    """Pre-flight estimate says the run cannot fit the memory budget."""


@dataclass(frozen=True)
class ExperimentSpec:
    """One reproducible experiment: network config, codebook shape, trial count."""

    cfg: NetworkConfig
    M: int
    trials: int
    codebook_seed: int = 1
    depth: int = 3
    decompose: bool = True
    n_jobs: int = 1
    memory_limit_bytes: int = 4 << 30

    def __post_init__(self) -> None:
        if self.M < 2:
            raise ValueError("M must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.depth < 1:
            raise ValueError("interleaver depth must be >= 1")
        if self.n_jobs < 1:
            raise ValueError("n_jobs must be >= 1")

    @property
    def rate_bits_per_symbol(self) -> float:
        return math.log2(self.M) / self.cfg.N


def estimate_memory_bytes(spec: ExperimentSpec) -> int:
    """Rough peak-resident estimate: codebook plus one trial's arrays.

    Codebook is M*N float64; a trial holds state sequences, expanded
    channel outputs, noise, and relay transmit arrays, all O(T) per relay,
    plus the signal-only twin when decomposition is on.
    """
    cfg = spec.cfg
    mu_max = max(max(cfg.mu1), max(cfg.mu2), 1.0)
    per_trial = 8.0 * cfg.T * mu_max * (6 * cfg.K + 4)
    if spec.decompose:
        per_trial *= 1.5
    codebook = 8.0 * float(spec.M) * cfg.N
    return int(codebook + per_trial)


def _preflight(spec: ExperimentSpec) -> None:
    estimate = estimate_memory_bytes(spec)
    if estimate > spec.memory_limit_bytes:
        raise InfeasibleRunError(
            f"estimated peak memory {estimate:.3e} bytes (M={spec.M}, N={spec.cfg.N}, "
            f"N'={spec.cfg.Nprime}, K={spec.cfg.K}) exceeds the "
            f"{spec.memory_limit_bytes:.3e}-byte limit; refusing to run"
        )


class TrialSummary(NamedTuple):
    index: int
    message: int
    decoded: int
    error: bool
    source_energy: float
    relay_energies: tuple[float, ...]
    relay_violations: int
    good: bool
    signal_sq_sum: float
    noise_sq_sum: float
    min_signed_signal: float
    n_symbols: int


def run_trial(spec: ExperimentSpec, cb: OuterCodebook, index: int) -> TrialSummary:
    """Run trial `index`: rng stream and message are derived from (seed, index)."""
    rng = np.random.default_rng([spec.cfg.seed, index])
    w = int(rng.integers(0, spec.M))
    rec = simulate_transmission(
        spec.cfg, cb, w, rng, depth=spec.depth, decompose=spec.decompose
    )
    if rec.uhat_signal is not None:
        signs = np.sign(cb.codewords[w])
        signal_sq = float(np.dot(rec.uhat_signal, rec.uhat_signal))
        noise = rec.uhat_noise
        noise_sq = float(np.dot(noise, noise))
        min_signed = float((rec.uhat_signal * signs).min())
    else:
        signal_sq = noise_sq = math.nan
        min_signed = math.nan
    return TrialSummary(
        index=index,
        message=w,
        decoded=rec.decoded,
        error=rec.decoded != w,
        source_energy=rec.source_energy,
        relay_energies=tuple(float(e) for e in rec.relay_energies),
        relay_violations=int(rec.relay_power_violation.sum()),
        good=rec.all_good,
        signal_sq_sum=signal_sq,
        noise_sq_sum=noise_sq,
        min_signed_signal=min_signed,
        n_symbols=spec.cfg.N,
    )


_WORKER_SPEC: ExperimentSpec | None = None
_WORKER_CB: OuterCodebook | None = None


def _init_worker(spec: ExperimentSpec) -> None:
    global _WORKER_SPEC, _WORKER_CB
    _WORKER_SPEC = spec
    _WORKER_CB = generate_codebook(spec.M, spec.cfg.N, spec.cfg.P1, spec.codebook_seed)


def _worker(index: int) -> TrialSummary:
    assert _WORKER_SPEC is not None and _WORKER_CB is not None
    return run_trial(_WORKER_SPEC, _WORKER_CB, index)


def binomial_ci(errors: int, trials: int) -> tuple[float, float]:
    """95% interval for an error rate: normal approximation p +- 1.96 sqrt(p(1-p)/n).

    Degenerate counts use the rule of three: zero errors give (0, 3/n),
    all-error runs give (1 - 3/n, 1).
    """
    p = errors / trials
    if errors == 0:
        return 0.0, min(1.0, 3.0 / trials)
    if errors == trials:
        return max(0.0, 1.0 - 3.0 / trials), 1.0
    half = 1.96 * math.sqrt(p * (1.0 - p) / trials)
    return max(0.0, p - half), min(1.0, p + half)


@dataclass(frozen=True)
class ExperimentResult:
    """Aggregates of one experiment; wall_clock_s is excluded from serialization."""

    trials: int
    errors: int
    bler: float
    bler_ci_lo: float
    bler_ci_hi: float
    good_trials: int
    e_idc_freq: float
    e_idc_bound: float
    snr_lb: float
    snr_measured_mean: float
    snr_measured_min_good: float
    min_signed_signal_good: float
    source_energy_mean: float
    source_energy_min: float
    source_energy_max: float
    relay_energy_mean: float
    relay_energy_std: float
    relay_energy_means: tuple[float, ...]
    relay_power_violation_freq: float
    rate_bits_per_symbol: float
    gamma_capacity: float
    rpue_achieved: float
    rpue_lb: float
    rpue_ub: float
    wall_clock_s: float = field(compare=False)

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "trials", "errors", "bler", "bler_ci_lo", "bler_ci_hi", "good_trials",
            "e_idc_freq", "e_idc_bound", "snr_lb", "snr_measured_mean",
            "snr_measured_min_good", "min_signed_signal_good",
            "source_energy_mean", "source_energy_min", "source_energy_max",
            "relay_energy_mean", "relay_energy_std",
            "relay_power_violation_freq", "rate_bits_per_symbol",
            "gamma_capacity", "rpue_achieved", "rpue_lb", "rpue_ub",
        )}
        d["relay_energy_means"] = list(self.relay_energy_means)
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Run all trials and fold the summaries in trial-index order."""
    _preflight(spec)
    start = time.perf_counter()
    cb = generate_codebook(spec.M, spec.cfg.N, spec.cfg.P1, spec.codebook_seed)

    if spec.n_jobs == 1:
        summaries = [run_trial(spec, cb, i) for i in range(spec.trials)]
    else:
        with ProcessPoolExecutor(
            max_workers=spec.n_jobs, initializer=_init_worker, initargs=(spec,)
        ) as pool:
            chunk = max(1, spec.trials // (4 * spec.n_jobs))
            summaries = list(pool.map(_worker, range(spec.trials), chunksize=chunk))
    summaries.sort(key=lambda s: s.index)

    cfg = spec.cfg
    errors = sum(s.error for s in summaries)
    good_trials = sum(s.good for s in summaries)
    lo, hi = binomial_ci(errors, spec.trials)

    sig_sq = sum(s.signal_sq_sum for s in summaries)
    noise_sq = sum(s.noise_sq_sum for s in summaries)
    n_sym = sum(s.n_symbols for s in summaries)
    if spec.decompose and noise_sq > 0:
        snr_mean = (sig_sq / n_sym) / (noise_sq / n_sym)
    else:
        snr_mean = math.nan

    good_noise_sq = sum(s.noise_sq_sum for s in summaries if s.good)
    good_sym = sum(s.n_symbols for s in summaries if s.good)
    min_signed = math.nan
    snr_min_good = math.nan
    if spec.decompose and good_trials > 0:
        min_signed = min(s.min_signed_signal for s in summaries if s.good)
        if good_noise_sq > 0:
            noise_var_good = good_noise_sq / good_sym
            # signed square keeps a sign flip visible as a negative SNR
            snr_min_good = math.copysign(min_signed * min_signed, min_signed) / noise_var_good

    snr_floor = analysis.snr_lb_unequal(cfg.P1, cfg.P2, cfg.mu1, cfg.mu2, cfg.g, cfg.h)
    mu_eff = analysis.mu_tilde(cfg.mu1, cfg.mu2)
    rpue = math.log2(spec.M) / cfg.energy_budget()
    relay_matrix = np.array([s.relay_energies for s in summaries])
    relay_means = tuple(float(v) for v in relay_matrix.mean(axis=0))
    source_energies = np.array([s.source_energy for s in summaries])
    return ExperimentResult(
        trials=spec.trials,
        errors=errors,
        bler=errors / spec.trials,
        bler_ci_lo=lo,
        bler_ci_hi=hi,
        good_trials=good_trials,
        e_idc_freq=1.0 - good_trials / spec.trials,
        e_idc_bound=analysis.e_idc_chebyshev_bound(
            cfg.K, cfg.N, cfg.Nprime, cfg.sigma2, cfg.nu, cfg.beta
        ),
        snr_lb=snr_floor,
        snr_measured_mean=snr_mean,
        snr_measured_min_good=snr_min_good,
        min_signed_signal_good=min_signed,
        source_energy_mean=float(source_energies.mean()),
        source_energy_min=float(source_energies.min()),
        source_energy_max=float(source_energies.max()),
        relay_energy_mean=float(relay_matrix.mean()),
        relay_energy_std=float(relay_matrix.std(ddof=1)) if relay_matrix.size > 1 else 0.0,
        relay_energy_means=relay_means,
        relay_power_violation_freq=sum(s.relay_violations for s in summaries)
        / (spec.trials * cfg.K),
        rate_bits_per_symbol=spec.rate_bits_per_symbol,
        gamma_capacity=analysis.gamma_constant() * analysis.awgn_capacity(snr_floor),
        rpue_achieved=rpue,
        rpue_lb=analysis.unsync_lower_bound(cfg.K, cfg.g, cfg.h, mu_eff),
        rpue_ub=analysis.sync_upper_bound(cfg.K, cfg.g, cfg.h),
        wall_clock_s=time.perf_counter() - start,
    )


def target_message_count(N: int, rate_bits_per_symbol: float) -> int:
    """Largest power-of-two M with log2(M)/N <= the requested rate (at least 2)."""
    if rate_bits_per_symbol <= 0:
        raise ValueError("rate must be > 0")
    return 2 ** max(1, math.floor(rate_bits_per_symbol * N))


def sweep(
    grid: Mapping[str, Sequence],
    *,
    trials: int,
    M: int,
    Nprime: int = 4096,
    seed: int = 0,
    margins: str = "desk",
    margin_c: float = 4.0,
    law: str = "three_point",
    depth: int = 3,
    noise_var: float = 1.0,
    decompose: bool = True,
    n_jobs: int = 1,
    defaults: Mapping[str, float] | None = None,
) -> list[dict]:
    """Run one experiment per grid point and return rows in SWEEP_COLUMNS form.

    Grid axes: K, g, h, mu, sigma2, N (any subset; missing axes come from
    `defaults` or built-in defaults).  Powers are selected per regime and
    margins follow the chosen preset ('desk' concentration-scaled margins,
    or 'paper' which also forces N' = N^4).  Row r uses master seed
    seed + r.  A failing row is kept with NaN measurements so the sweep
    always emits one row per point.
    """
    base = {"K": 2, "g": 1.0, "h": 1.0, "mu": 1.0, "sigma2": 0.1, "N": 64}
    if defaults:
        unknown = set(defaults) - set(base)
        if unknown:
            raise ValueError(f"unknown sweep defaults: {sorted(unknown)}")
        base.update(defaults)
    unknown = set(grid) - set(base)
    if unknown:
        raise ValueError(f"unknown sweep axes: {sorted(unknown)}")
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise ValueError("sweep grid must be nonempty")
    if margins not in ("desk", "paper"):
        raise ValueError("margins must be 'desk' or 'paper'")

    axes = [k for k in ("K", "g", "h", "mu", "sigma2", "N") if k in grid]
    rows: list[dict] = []
    for r, combo in enumerate(itertools.product(*(grid[a] for a in axes))):
        point = dict(base)
        point.update(dict(zip(axes, combo)))
        K, g, h = int(point["K"]), float(point["g"]), float(point["h"])
        mu, sigma2, N = float(point["mu"]), float(point["sigma2"]), int(point["N"])
        P1, P2, reg = analysis.select_powers(K, g, h, mu)
        if margins == "paper":
            nprime_r = N**4
            nu, beta = analysis.paper_margins(N)
        else:
            nprime_r = Nprime
            nu, beta = analysis.desk_margins(N, nprime_r, sigma2, margin_c)
        row = {
            "K": K, "g": g, "h": h, "mu": mu, "sigma2": sigma2, "N": N,
            "Nprime": nprime_r, "M": M, "trials": trials, "P1": P1, "P2": P2,
            "regime": reg, "seed": seed + r,
        }
        try:
            cfg = NetworkConfig.symmetric(
                K=K, g=g, h=h, mu=mu, sigma2=sigma2, N=N, Nprime=nprime_r,
                P1=P1, P2=P2, nu=nu, beta=beta, seed=seed + r, law=law,
                noise_var=noise_var,
            )
            spec = ExperimentSpec(
                cfg=cfg, M=M, trials=trials, depth=depth,
                decompose=decompose, n_jobs=n_jobs,
            )
            res = run_experiment(spec)
            row.update(
                snr_lb=res.snr_lb,
                snr_measured_mean=res.snr_measured_mean,
                snr_measured_min_good=res.snr_measured_min_good,
                bler=res.bler, bler_ci_lo=res.bler_ci_lo, bler_ci_hi=res.bler_ci_hi,
                e_idc_freq=res.e_idc_freq, e_idc_bound=res.e_idc_bound,
                source_energy_mean=res.source_energy_mean,
                relay_energy_mean=res.relay_energy_mean,
                rpue_achieved=res.rpue_achieved,
                rpue_lb=res.rpue_lb, rpue_ub=res.rpue_ub,
            )
        except Exception as exc:  # noqa: BLE001 - a bad point must not kill the sweep
            import warnings

            warnings.warn(f"sweep row {r} ({point}) failed: {exc}", RuntimeWarning)
            row.update({
                c: math.nan for c in SWEEP_COLUMNS
                if c not in row and c != "regime"
            })
            row.setdefault("regime", reg)
        rows.append({c: row[c] for c in SWEEP_COLUMNS})
    return rows


def write_sweep_csv(rows: Iterable[Mapping], path: str) -> None:
    """Write sweep rows with the exact SWEEP_COLUMNS header order."""
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({c: row[c] for c in SWEEP_COLUMNS})


def sweep_rows_to_json(rows: Sequence[Mapping], indent: int | None = 2) -> str:
    return json.dumps([{c: r[c] for c in SWEEP_COLUMNS} for r in rows], indent=indent)


@dataclass(frozen=True)
class VerifyCheck:
    name: str
    passed: bool
    measured: float
    bound: float
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    level: str
    checks: tuple[VerifyCheck, ...]
    wall_clock_s: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "measured": c.measured,
                    "bound": c.bound,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _noiseless_identity_check() -> VerifyCheck:
    worst = 0.0
    for K in (1, 2):
        P1, P2, _ = analysis.select_powers(K, 1.0, 1.0, 1.0)
        cfg = NetworkConfig.symmetric(
            K=K, g=1.0, h=1.0, mu=1.0, sigma2=0.0, N=16, Nprime=64,
            P1=P1, P2=P2, nu=1.0, beta=1.0, seed=11, noise_var=0.0,
        )
        cb = generate_codebook(8, cfg.N, cfg.P1, seed=3)
        rng = np.random.default_rng(5)
        rec = simulate_transmission(cfg, cb, 2, rng)
        gain = K * cfg.alphas()[0] * 1.0 * 1.0
        expected = gain * cb.codewords[2]
        worst = max(worst, float(np.max(np.abs(rec.uhat / expected - 1.0))))
    return VerifyCheck(
        name="noiseless-pipeline-identity",
        passed=worst <= 1e-9,
        measured=worst,
        bound=1e-9,
        detail="max relative deviation of the zero-noise destination statistic",
    )


def _snr_floor_check(noise_var_scale: float, trials: int = 300) -> VerifyCheck:
    P1, P2, _ = analysis.select_powers(2, 1.0, 1.0, 1.0)
    cfg = NetworkConfig.symmetric(
        K=2, g=1.0, h=1.0, mu=1.0, sigma2=0.0, N=64, Nprime=256,
        P1=P1, P2=P2, nu=1.0, beta=1.0, seed=23, noise_var=1.0 * noise_var_scale,
    )
    spec = ExperimentSpec(cfg=cfg, M=16, trials=trials, codebook_seed=9)
    res = run_experiment(spec)
    rel = abs(res.snr_measured_mean / res.snr_lb - 1.0)
    return VerifyCheck(
        name="snr-floor-zero-jitter",
        passed=rel <= 0.05,
        measured=res.snr_measured_mean,
        bound=res.snr_lb,
        detail=f"relative deviation {rel:.4f} (tolerance 5%)",
    )


def _quick_checks(noise_var_scale: float) -> list[VerifyCheck]:
    checks = []

    b = analysis.bpsk_awgn_capacity(0.5)
    a = analysis.awgn_capacity(0.5)
    gam = analysis.gamma_constant()
    checks.append(VerifyCheck(
        name="binary-input-penalty",
        passed=abs(b - 0.29048) <= 5e-4 and abs(a - 0.29248) <= 1e-5 and gam >= 0.99,
        measured=gam,
        bound=0.99,
        detail=f"binary {b:.5f}, gaussian {a:.5f}, ratio floor {gam:.5f}",
    ))

    rng = np.random.default_rng(1)
    worst = 0.0
    target = 20.0 / math.log(2.0)
    for _ in range(200):
        K = int(rng.integers(2, 65))
        g = 10.0 ** rng.uniform(-3, 3)
        h = 10.0 ** rng.uniform(-3, 3)
        ratio = analysis.sync_upper_bound(K, g, h) / analysis.unsync_lower_bound(K, g, h, 1.0)
        worst = max(worst, abs(ratio - target))
    checks.append(VerifyCheck(
        name="envelope-ratio",
        passed=worst <= 1e-9,
        measured=worst,
        bound=1e-9,
        detail=f"max |sync/unsync - {target:.4f}| over 200 networks",
    ))

    worst_exact = 0.0
    floor_ok = True
    for _ in range(200):
        K = int(rng.integers(1, 65))
        g = 10.0 ** rng.uniform(-3, 3)
        h = 10.0 ** rng.uniform(-3, 3)
        P1, P2, reg = analysis.select_powers(K, g, h, 1.0)
        s = analysis.snr_lb(P1, P2, K, g, h, 1.0)
        floor_ok &= s >= 1.0 / 3.0 - 1e-12
        if reg != analysis.REGIME_INTERMEDIATE:
            worst_exact = max(worst_exact, abs(s - 1.0 / (2.0 + 1.0 / K)))
    checks.append(VerifyCheck(
        name="power-selection-snr",
        passed=floor_ok and worst_exact <= 1e-12,
        measured=worst_exact,
        bound=1e-12,
        detail="MAC/BC floor exactness and snr >= 1/3 everywhere",
    ))

    checks.append(_noiseless_identity_check())

    amgm_ok = all(
        analysis.amgm_check(int(rng.integers(1, 65)), 10.0 ** rng.uniform(-3, 3), 10.0 ** rng.uniform(-3, 3))
        for _ in range(10_000)
    )
    checks.append(VerifyCheck(
        name="mean-inequality",
        passed=amgm_ok, measured=float(amgm_ok), bound=1.0,
        detail="Kg/(1+Kg/h) <= sqrt(Kgh)/2 on 10k random networks",
    ))

    worst_ratio = -math.inf
    factors = np.logspace(-0.6, 0.6, 5)
    for _ in range(50):
        K = int(rng.integers(2, 33))
        g = 10.0 ** rng.uniform(-2, 2)
        h = 10.0 ** rng.uniform(-2, 2)
        P1, P2, _ = analysis.select_powers(K, g, h, 1.0)
        ub = analysis.sync_upper_bound(K, g, h)
        for f1 in factors:
            for f2 in factors:
                val = analysis.capacity_upper_bound(P1 * f1, P2 * f2, K, g, h)
                worst_ratio = max(worst_ratio, val / (P1 * f1 + K * P2 * f2) - ub)
    checks.append(VerifyCheck(
        name="sync-envelope-consistency",
        passed=worst_ratio <= 1e-9,
        measured=worst_ratio,
        bound=1e-9,
        detail="capacity ceiling per unit energy minus sync envelope, local power grid",
    ))

    P1, P2, _ = analysis.select_powers(2, 1.0, 1.0, 1.0)
    nu, beta = analysis.desk_margins(32, 128, 0.1)
    cfg = NetworkConfig.symmetric(
        K=2, g=1.0, h=1.0, mu=1.0, sigma2=0.1, N=32, Nprime=128,
        P1=P1, P2=P2, nu=nu, beta=beta, seed=31,
    )
    spec = ExperimentSpec(cfg=cfg, M=8, trials=60, codebook_seed=13)
    res = run_experiment(spec)
    src_ok = abs(res.source_energy_mean - cfg.N * cfg.P1) <= 1e-9 * cfg.N * cfg.P1
    budget = cfg.N * cfg.P2[0]
    se = 3.0 * budget / math.sqrt(spec.trials)  # coarse spread allowance
    relay_ok = res.relay_energy_mean <= budget + se
    checks.append(VerifyCheck(
        name="energy-audit",
        passed=src_ok and relay_ok,
        measured=res.relay_energy_mean,
        bound=budget,
        detail=f"source energy {res.source_energy_mean:.6f} vs {cfg.N * cfg.P1:.6f}, "
        f"relay mean vs budget + allowance {se:.3f}",
    ))

    checks.append(_snr_floor_check(noise_var_scale))
    return checks


def _full_checks(noise_var_scale: float) -> list[VerifyCheck]:
    checks = []

    # concentration at the wide preset margins, growing N
    for N in (6, 8, 10):
        nu, beta = analysis.paper_margins(N)
        nprime = N**4
        sigma2 = 0.3
        P1, P2, _ = analysis.select_powers(2, 1.0, 1.0, 1.0)
        cfg = NetworkConfig.symmetric(
            K=2, g=1.0, h=1.0, mu=1.0, sigma2=sigma2, N=N, Nprime=nprime,
            P1=P1, P2=P2, nu=nu, beta=beta, seed=41 + N,
        )
        spec = ExperimentSpec(cfg=cfg, M=4, trials=400, codebook_seed=17, decompose=False)
        res = run_experiment(spec)
        bound = analysis.e_idc_probability_bound(cfg.K, N, sigma2)
        se = 3.0 * math.sqrt(max(res.e_idc_freq * (1 - res.e_idc_freq), 1e-12) / spec.trials)
        checks.append(VerifyCheck(
            name=f"alignment-union-bound-N{N}",
            passed=res.e_idc_freq <= bound + se,
            measured=res.e_idc_freq,
            bound=bound,
            detail=f"misalignment frequency vs 4K sigma^2/N + 3 s.e. ({se:.4f})",
        ))

    # conditional signal floor and misalignment bound at desk margins
    P1, P2, _ = analysis.select_powers(2, 1.0, 1.0, 1.0)
    N, nprime, sigma2 = 64, 1024, 0.1
    nu, beta = analysis.desk_margins(N, nprime, sigma2)
    cfg = NetworkConfig.symmetric(
        K=2, g=1.0, h=1.0, mu=1.0, sigma2=sigma2, N=N, Nprime=nprime,
        P1=P1, P2=P2, nu=nu, beta=beta, seed=53, noise_var=noise_var_scale,
    )
    spec = ExperimentSpec(cfg=cfg, M=16, trials=300, codebook_seed=19)
    res = run_experiment(spec)
    delta = analysis.delta_n(N, 1.0, nu=nu, beta=beta, Nprime=nprime)
    alpha = cfg.alphas()[0]
    floor = cfg.K * alpha * 1.0 * 1.0 * (1 - 4 * delta) * math.sqrt(cfg.P1)
    cheb = analysis.e_idc_chebyshev_bound(cfg.K, N, nprime, sigma2, nu, beta)
    se = 3.0 * math.sqrt(max(res.e_idc_freq * (1 - res.e_idc_freq), 1e-12) / spec.trials)
    checks.append(VerifyCheck(
        name="alignment-chebyshev-desk",
        passed=res.e_idc_freq <= cheb + se,
        measured=res.e_idc_freq,
        bound=cheb,
        detail=f"desk-margin misalignment frequency vs Chebyshev + 3 s.e. ({se:.4f})",
    ))
    checks.append(VerifyCheck(
        name="conditional-signal-floor",
        passed=res.good_trials == 0
        or res.min_signed_signal_good >= floor - 1e-9 * abs(floor),
        measured=res.min_signed_signal_good,
        bound=floor,
        detail="worst aligned-event per-symbol signal amplitude vs (1 - 4 delta) floor",
    ))

    # desk-size SNR floor, zero jitter
    checks.append(_snr_floor_check(noise_var_scale, trials=400))
    return checks


def verify(level: str = "quick", noise_var_scale: float = 1.0) -> VerifyReport:
    """Run the bundled invariant checks; `full` adds the slower studies.

    noise_var_scale is a test hook: scaling the receiver noise variance
    must break the SNR-floor check, proving the check has teeth.
    """
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    start = time.perf_counter()
    checks = _quick_checks(noise_var_scale)
    if level == "full":
        checks.extend(_full_checks(noise_var_scale))
    return VerifyReport(
        level=level, checks=tuple(checks), wall_clock_s=time.perf_counter() - start
    )
