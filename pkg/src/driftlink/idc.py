"""Insertion/deletion channel: each input symbol is emitted a random number of times.

The channel is driven by an i.i.d. sequence of nonnegative integer states,
one per input symbol; state s[t] is the number of copies of input t that
appear at the output.  The state law is chosen from a small family of
distributions parameterized by mean (clock drift) and variance (jitter),
so that downstream results can be checked to depend on the first two
moments only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

STATE_LAWS = ("three_point", "poisson", "geometric")


class ConfigError(ValueError):
    """A parameter combination outside the feasible range of a state law."""


def three_point_probabilities(mu: float, sigma2: float) -> tuple[float, float, float]:
    """Probabilities (p0, p1, p2) on {0, 1, 2} matching mean mu and variance sigma2.

    Feasible iff 0 < mu <= 2 and sigma2 lies in [lo, hi] with
    lo = mu(1-mu) for mu <= 1, (mu-1)(2-mu) for mu >= 1, and hi = mu(2-mu).
    """
    if not 0 < mu <= 2:
        raise ConfigError(f"three_point law needs 0 < mu <= 2, got mu={mu}")
    lo = mu * (1.0 - mu) if mu <= 1.0 else (mu - 1.0) * (2.0 - mu)
    hi = mu * (2.0 - mu)
    p2 = (sigma2 + mu * mu - mu) / 2.0
    p1 = 2.0 * mu - mu * mu - sigma2
    p0 = 1.0 - p1 - p2
    eps = 1e-12
    if min(p0, p1, p2) < -eps or max(p0, p1, p2) > 1 + eps:
        raise ConfigError(
            f"three_point law with mu={mu} admits sigma2 in [{lo:.6g}, {hi:.6g}], "
            f"got sigma2={sigma2}"
        )
    clip = lambda p: min(max(p, 0.0), 1.0)
    return clip(p0), clip(p1), clip(p2)


@dataclass(frozen=True)
class IdcParams:
    """State-law parameters: drift mean mu, jitter variance sigma2, law family.

    The three_point law (support {0, 1, 2}) is the default and covers any
    sigma2 up to its moment cap; poisson forces sigma2 == mu and geometric
    forces sigma2 == mu(1+mu), both rejected on mismatch.
    """

    mu: float
    sigma2: float
    law: str = "three_point"

    def __post_init__(self) -> None:
        if self.mu <= 0:
            raise ConfigError(f"mu must be > 0, got {self.mu}")
        if self.sigma2 < 0 or not np.isfinite(self.sigma2):
            raise ConfigError(f"sigma2 must be finite and >= 0, got {self.sigma2}")
        if self.law not in STATE_LAWS:
            raise ConfigError(f"unknown state law {self.law!r}; choose from {STATE_LAWS}")
        if self.law == "three_point":
            three_point_probabilities(self.mu, self.sigma2)
        elif self.law == "poisson":
            if abs(self.sigma2 - self.mu) > 1e-12:
                raise ConfigError(
                    f"poisson law forces sigma2 == mu; got sigma2={self.sigma2}, mu={self.mu}"
                )
        elif self.law == "geometric":
            forced = self.mu * (1.0 + self.mu)
            if abs(self.sigma2 - forced) > 1e-12:
                raise ConfigError(
                    f"geometric law forces sigma2 == mu(1+mu) = {forced}; "
                    f"got sigma2={self.sigma2}"
                )

    def law_moments(self) -> tuple[float, float]:
        """Analytic (mean, variance) of the realized law."""
        if self.law == "three_point":
            p0, p1, p2 = three_point_probabilities(self.mu, self.sigma2)
            mean = p1 + 2.0 * p2
            var = p1 + 4.0 * p2 - mean * mean
            return mean, var
        if self.law == "poisson":
            return self.mu, self.mu
        return self.mu, self.mu * (1.0 + self.mu)


@dataclass(frozen=True)
class StateSequence:
    """Sampled per-symbol repetition counts for one channel transit.

    constant_value is set by the sampler when the law is degenerate, which
    lets downstream code take exact shortcuts for the identity channel.
    """

    states: np.ndarray = field(repr=False)
    constant_value: int | None = None

    def __post_init__(self) -> None:
        states = np.asarray(self.states)
        if states.ndim != 1 or states.size == 0:
            raise ValueError("states must be a nonempty 1-d array")
        if not np.issubdtype(states.dtype, np.integer):
            raise ValueError("states must be integers")
        if states.min() < 0:
            raise ValueError("states must be >= 0")
        object.__setattr__(self, "states", states)

    @property
    def T(self) -> int:
        return int(self.states.size)

    @property
    def output_length(self) -> int:
        return int(self.states.sum())


@dataclass(frozen=True)
class PieceStats:
    """Output-side start position (1-based) and length of each constant piece."""

    starts: np.ndarray = field(repr=False)
    lengths: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return int(self.starts.size)


def sample_states(params: IdcParams, T: int, rng: np.random.Generator) -> StateSequence:
    """Draw T i.i.d. states from the configured law.

    A zero-variance law is a point mass; it consumes no randomness from rng.
    """
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if params.sigma2 == 0:
        value = int(round(params.mu))
        return StateSequence(np.full(T, value, dtype=np.int64), constant_value=value)
    if params.law == "three_point":
        p0, p1, _ = three_point_probabilities(params.mu, params.sigma2)
        states = np.searchsorted(
            np.array([p0, p0 + p1]), rng.random(T), side="right"
        ).astype(np.int64, copy=False)
    elif params.law == "poisson":
        states = rng.poisson(params.mu, T).astype(np.int64, copy=False)
    else:
        states = rng.geometric(1.0 / (1.0 + params.mu), T).astype(np.int64, copy=False) - 1
    return StateSequence(states)


def apply_idc(x: np.ndarray, states: StateSequence) -> np.ndarray:
    """Emit states[t] copies of x[t], in order; output length is sum(states)."""
    x = np.asarray(x)
    if x.ndim != 1 or x.size != states.T:
        raise ValueError(
            f"input length {x.size} does not match state sequence length {states.T}"
        )
    return np.repeat(x, states.states)


def truncate_pad(seq: np.ndarray, L: int) -> np.ndarray:
    """First L symbols of seq, zero-filled past its end; always a fresh array."""
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    seq = np.asarray(seq, dtype=float)
    if seq.size >= L:
        return seq[:L].copy()
    out = np.zeros(L)
    out[: seq.size] = seq
    return out


def piece_stats(states: StateSequence, N: int, Nprime: int) -> PieceStats:
    """Start and length of each output piece for an input of N pieces of width N'.

    Piece n (1-based) starts at 1 + sum(states[: (n-1) N']) and has length
    sum(states[(n-1) N' : n N']).
    """
    if N < 1 or Nprime < 1:
        raise ValueError("N and Nprime must be >= 1")
    if states.T != N * Nprime:
        raise ValueError(
            f"state sequence length {states.T} != N * Nprime = {N * Nprime}"
        )
    if states.constant_value is not None:
        width = states.constant_value * Nprime
        lengths = np.full(N, width, dtype=np.int64)
        starts = np.arange(N, dtype=np.int64) * width + 1
        return PieceStats(starts=starts, lengths=lengths)
    lengths = states.states.reshape(N, Nprime).sum(axis=1)
    starts = np.concatenate(([0], np.cumsum(lengths)[:-1])) + 1
    return PieceStats(starts=starts, lengths=lengths)


def piece_violations(
    stats: PieceStats, mu: float, Nprime: int, nu: float, beta: float
) -> tuple[np.ndarray, np.ndarray]:
    """Per-piece misalignment flags (start outside, length outside).

    Piece n is aligned when its start lies strictly inside
    ((n-1) mu N' + 1 - nu, (n-1) mu N' + 1 + nu) and its length strictly
    inside (mu N' - beta, mu N' + beta); boundary hits count as violations.
    """
    if nu <= 0 or beta <= 0:
        raise ValueError("nu and beta must be > 0")
    n = np.arange(stats.N, dtype=float)
    expected_starts = n * mu * Nprime + 1.0
    start_bad = np.abs(stats.starts - expected_starts) >= nu
    length_bad = np.abs(stats.lengths - mu * Nprime) >= beta
    return start_bad, length_bad


def is_idc_good(stats: PieceStats, mu: float, Nprime: int, nu: float, beta: float) -> bool:
    """True when every output piece starts and sizes itself within the margins."""
    start_bad, length_bad = piece_violations(stats, mu, Nprime, nu, beta)
    return not (bool(start_bad.any()) or bool(length_bad.any()))
