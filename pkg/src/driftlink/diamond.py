"""End-to-end simulation of one codeword over the unsynchronized relay fan.

Source -> K parallel relays -> destination, no direct link.  Every hop
passes through an independent insertion/deletion channel followed by unit
variance Gaussian noise.  Relays never decode: each one block-averages its
received signal back to outer-symbol rate and re-encodes with the same
repetition code, amplified so its expected energy stays within budget.

A transmission can also be propagated noise-free through the *same*
sampled channel states, which splits every destination statistic exactly
into signal and noise parts (the pipeline is linear), making the per-symbol
floor and ceiling inequalities directly testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .coding import OuterCodebook, RepetitionParams, block_average, deinterleave, inner_encode, interleave, ml_decode
from .idc import IdcParams, apply_idc, is_idc_good, piece_stats, sample_states, truncate_pad


def compute_alpha(P2k: float, mu1k: float, g: float, P1: float) -> float:
    """Relay amplification sqrt(P2k / (1 + mu1k g P1)).

    The +1 in the denominator pays for the forwarded receiver noise; with
    this choice the relay's expected transmit energy is at most N * P2k.
    g = 0 is allowed as the degenerate no-input limit.
    """
    if P2k <= 0 or mu1k <= 0 or P1 <= 0 or g < 0:
        raise ValueError("compute_alpha needs P2k, mu1k, P1 > 0 and g >= 0")
    return math.sqrt(P2k / (1.0 + mu1k * g * P1))


@dataclass(frozen=True)
class NetworkConfig:
    """Static description of one network and one block-coding configuration.

    mu1/mu2 are the per-relay drift means on the first and second hop;
    P2 is the per-relay power budget.  nu and beta are the piece-alignment
    margins used to classify a transit as well aligned.  noise_var scales
    the receiver noise variance (1.0 is the modeled channel; 0 silences it
    for exact pipeline checks).
    """

    K: int
    g: float
    h: float
    mu1: tuple[float, ...]
    mu2: tuple[float, ...]
    sigma2: float
    N: int
    Nprime: int
    P1: float
    P2: tuple[float, ...]
    nu: float
    beta: float
    seed: int = 0
    law: str = "three_point"
    noise_var: float = 1.0

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"K must be >= 1, got {self.K}")
        if not (self.g > 0 and self.h > 0):
            raise ValueError("channel gains g, h must be > 0")
        if not (len(self.mu1) == len(self.mu2) == len(self.P2) == self.K):
            raise ValueError("mu1, mu2 and P2 must each have length K")
        if min(self.mu1) <= 0 or min(self.mu2) <= 0:
            raise ValueError("drift means must be > 0")
        if not np.isfinite(self.sigma2) or self.sigma2 < 0:
            raise ValueError("sigma2 must be finite and >= 0")
        if self.N < 1 or self.Nprime < 1:
            raise ValueError("N and Nprime must be >= 1")
        if self.P1 <= 0 or min(self.P2) <= 0:
            raise ValueError("powers must be > 0")
        if self.nu <= 0 or self.beta <= 0:
            raise ValueError("alignment margins nu, beta must be > 0")
        if self.noise_var < 0:
            raise ValueError("noise_var must be >= 0")
        # fail fast if any drift mean is unrealizable under the chosen law
        for m in set(self.mu1) | set(self.mu2):
            IdcParams(m, self.sigma2, self.law)

    @classmethod
    def symmetric(
        cls,
        K: int,
        g: float,
        h: float,
        mu: float,
        sigma2: float,
        N: int,
        Nprime: int,
        P1: float,
        P2: float,
        nu: float,
        beta: float,
        seed: int = 0,
        law: str = "three_point",
        noise_var: float = 1.0,
    ) -> "NetworkConfig":
        return cls(
            K=K, g=g, h=h, mu1=(mu,) * K, mu2=(mu,) * K, sigma2=sigma2,
            N=N, Nprime=Nprime, P1=P1, P2=(P2,) * K, nu=nu, beta=beta,
            seed=seed, law=law, noise_var=noise_var,
        )

    @property
    def symmetric_drift(self) -> bool:
        return len(set(self.mu1)) == 1 and set(self.mu1) == set(self.mu2)

    @property
    def mu(self) -> float:
        """Common drift mean; only meaningful for symmetric configurations."""
        return self.mu1[0]

    @property
    def T(self) -> int:
        """Source block length in channel uses."""
        return self.N * self.Nprime

    def relay_rep_lengths(self) -> tuple[tuple[int, ...], float]:
        """Per-relay repetition lengths N'_k and the residual width mismatch.

        N'_k = round(mu2[0] * N' / mu2[k]) targets a common output block
        width mu2[k] * N'_k across relays; exact equality needs rational
        drift ratios, so the largest absolute deviation from the common
        width is reported alongside.
        """
        target = self.mu2[0] * self.Nprime
        lengths = tuple(int(round(target / m)) for m in self.mu2)
        mismatch = max(abs(m * n - target) for m, n in zip(self.mu2, lengths))
        return lengths, mismatch

    def alphas(self) -> tuple[float, ...]:
        return tuple(
            compute_alpha(p2, m1, self.g, self.P1) for p2, m1 in zip(self.P2, self.mu1)
        )

    def energy_budget(self) -> float:
        """Total per-codeword energy allowance N * (P1 + sum_k P2k)."""
        return self.N * (self.P1 + sum(self.P2))


@dataclass
class TransmissionRecord:
    """Everything observable from one simulated codeword transmission.

    uhat (and the signal-only twin) are stored in codeword order, i.e.
    already deinterleaved, so index n lines up with codeword symbol n.
    idc_good holds the per-channel alignment verdicts, first hop channels
    0..K-1 then second hop channels K..2K-1.
    """

    message: int
    decoded: int
    source_energy: float
    relay_energies: np.ndarray
    relay_power_violation: np.ndarray
    uhat: np.ndarray
    uhat_signal: np.ndarray | None
    idc_good: np.ndarray
    T: int
    energy_budget: float

    @property
    def all_good(self) -> bool:
        return bool(self.idc_good.all())

    @property
    def uhat_noise(self) -> np.ndarray | None:
        if self.uhat_signal is None:
            return None
        return self.uhat - self.uhat_signal


@dataclass(frozen=True)
class EnergyAudit:
    """Realized energies next to the budget the rate metric divides by."""

    source: float
    relays: tuple[float, ...]
    budget: float

    @property
    def realized(self) -> float:
        return self.source + sum(self.relays)


def energy_audit(rec: TransmissionRecord) -> EnergyAudit:
    """Realized source/relay energies of a transmission and its fixed budget."""
    return EnergyAudit(
        source=rec.source_energy,
        relays=tuple(float(e) for e in rec.relay_energies),
        budget=rec.energy_budget,
    )


def simulate_transmission(
    cfg: NetworkConfig,
    cb: OuterCodebook,
    w: int,
    rng: np.random.Generator,
    depth: int = 3,
    decompose: bool = True,
) -> TransmissionRecord:
    """Run one codeword w end to end and return the full record.

    Draw order from rng is fixed: per relay k in index order the first-hop
    states then the relay noise, then per relay the second-hop states, then
    the destination noise.  Noise arrays are drawn even at noise_var = 0 so
    the sampled channel states match across noise settings.
    """
    if cb.N != cfg.N:
        raise ValueError(f"codebook N={cb.N} does not match config N={cfg.N}")
    if not math.isclose(cb.P1, cfg.P1, rel_tol=1e-12):
        raise ValueError(f"codebook P1={cb.P1} does not match config P1={cfg.P1}")
    if not 0 <= w < cb.M:
        raise ValueError(f"message index {w} outside [0, {cb.M})")
    if depth < 1:
        raise ValueError("interleaver depth must be >= 1")

    K, N, Nprime = cfg.K, cfg.N, cfg.Nprime
    T = cfg.T
    rep_lengths, _ = cfg.relay_rep_lengths()
    alphas = cfg.alphas()
    noise_scale = math.sqrt(cfg.noise_var)
    sqrt_g, sqrt_h = math.sqrt(cfg.g), math.sqrt(cfg.h)

    u = cb.codewords[w]
    x = inner_encode(interleave(u, depth), RepetitionParams(Nprime, 1.0 / math.sqrt(Nprime)))
    source_energy = float(np.dot(x, x))

    good = np.zeros(2 * K, dtype=bool)
    relay_energies = np.zeros(K)
    relay_tx: list[np.ndarray] = []
    relay_tx_signal: list[np.ndarray] = []

    for k in range(K):
        params1 = IdcParams(cfg.mu1[k], cfg.sigma2, cfg.law)
        s1 = sample_states(params1, T, rng)
        L1 = int(math.floor(cfg.mu1[k] * T))
        z1 = rng.standard_normal(L1)
        if cfg.noise_var != 1.0:
            z1 *= noise_scale
        good[k] = is_idc_good(piece_stats(s1, N, Nprime), cfg.mu1[k], Nprime, cfg.nu, cfg.beta)

        if s1.constant_value == 1 and L1 == T:
            xt = x * sqrt_g
        else:
            xt = truncate_pad(apply_idc(x, s1), L1)
            xt *= sqrt_g
        W1 = cfg.mu1[k] * Nprime
        rep_k = RepetitionParams(rep_lengths[k], alphas[k] / math.sqrt(rep_lengths[k]))
        if decompose:
            relay_tx_signal.append(inner_encode(block_average(xt, N, W1), rep_k))
        xt += z1
        u_k = block_average(xt, N, W1)
        v_k = inner_encode(u_k, rep_k)
        relay_energies[k] = float(np.dot(v_k, v_k))
        relay_tx.append(v_k)

    W2 = cfg.mu2[0] * rep_lengths[0]
    L2 = int(math.floor(N * W2))
    acc = np.zeros(L2)
    acc_signal = np.zeros(L2) if decompose else None
    for k in range(K):
        params2 = IdcParams(cfg.mu2[k], cfg.sigma2, cfg.law)
        s2 = sample_states(params2, N * rep_lengths[k], rng)
        good[K + k] = is_idc_good(
            piece_stats(s2, N, rep_lengths[k]), cfg.mu2[k], rep_lengths[k], cfg.nu, cfg.beta
        )
        if s2.constant_value == 1 and relay_tx[k].size == L2:
            acc += relay_tx[k]
            if decompose:
                acc_signal += relay_tx_signal[k]
        else:
            acc += truncate_pad(apply_idc(relay_tx[k], s2), L2)
            if decompose:
                acc_signal += truncate_pad(apply_idc(relay_tx_signal[k], s2), L2)

    z = rng.standard_normal(L2)
    if cfg.noise_var != 1.0:
        z *= noise_scale
    acc *= sqrt_h
    acc += z
    uhat = deinterleave(block_average(acc, N, W2), depth)
    if decompose:
        acc_signal *= sqrt_h
        uhat_signal = deinterleave(block_average(acc_signal, N, W2), depth)
    else:
        uhat_signal = None
    decoded = ml_decode(cb, uhat)

    budgets = np.array([cfg.N * p2 for p2 in cfg.P2])
    return TransmissionRecord(
        message=w,
        decoded=decoded,
        source_energy=source_energy,
        relay_energies=relay_energies,
        relay_power_violation=relay_energies > budgets * (1.0 + 1e-12),
        uhat=uhat,
        uhat_signal=uhat_signal,
        idc_good=good,
        T=T,
        energy_budget=cfg.energy_budget(),
    )
