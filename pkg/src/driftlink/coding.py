"""Outer random antipodal code, inner attenuated repetition code, and decoding.

The outer code is M random length-N words over {-sqrt(P1), +sqrt(P1)}.
The inner code repeats each outer symbol N' times and scales the result;
at scale 1/sqrt(N') the repetition is exactly energy preserving.  The
receiver front end is a normalized block sum, and the outer decoder is a
correlation maximizer, which is maximum likelihood for equal-energy
codewords over an AWGN channel.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field

import numpy as np

_CODEBOOK_MAGIC = b"DLCB"
_CODEBOOK_VERSION = 1


@dataclass(frozen=True)
class OuterCodebook:
    """M antipodal codewords of length N at symbol power P1, derived from a seed."""

    M: int
    N: int
    P1: float
    seed: int
    codewords: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        if self.codewords.shape != (self.M, self.N):
            raise ValueError("codeword array shape does not match (M, N)")

    @property
    def codeword_energy(self) -> float:
        return self.N * self.P1


@dataclass(frozen=True)
class RepetitionParams:
    """Inner repetition length and per-symbol attenuation."""

    Nprime: int
    scale: float

    def __post_init__(self) -> None:
        if self.Nprime < 1:
            raise ValueError(f"Nprime must be >= 1, got {self.Nprime}")
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")


def generate_codebook(M: int, N: int, P1: float, seed: int) -> OuterCodebook:
    """Draw M i.i.d. uniform antipodal codewords; deterministic in seed."""
    if M < 2:
        raise ValueError(f"M must be >= 2, got {M}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not P1 > 0:
        raise ValueError(f"P1 must be > 0, got {P1}")
    if M > 2**N:
        warnings.warn(
            f"M={M} exceeds the 2^N={2**N} distinct antipodal words; duplicate "
            "codewords are unavoidable and decoding may be ambiguous",
            RuntimeWarning,
            stacklevel=2,
        )
    rng = np.random.default_rng(seed)
    signs = 2 * rng.integers(0, 2, size=(M, N), dtype=np.int8) - 1
    return OuterCodebook(M=M, N=N, P1=P1, seed=seed, codewords=signs * np.sqrt(P1))


def inner_encode(u: np.ndarray, p: RepetitionParams) -> np.ndarray:
    """Repeat each symbol N' times and attenuate by p.scale."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1:
        raise ValueError("u must be 1-d")
    return p.scale * np.repeat(u, p.Nprime)


def block_average(y: np.ndarray, N: int, W: float) -> np.ndarray:
    """Normalized block sums: out[n] = sum of block n of nominal width W, / sqrt(W).

    Block boundaries use cumulative flooring (block n covers samples
    floor((n-1)W) .. floor(nW)-1), which keeps the total span at floor(NW)
    for non-integer W.
    """
    y = np.asarray(y, dtype=float)
    if N < 1:
        raise ValueError("N must be >= 1")
    if W < 1:
        raise ValueError(f"block width W must be >= 1, got {W}")
    bounds = np.floor(W * np.arange(N + 1)).astype(np.int64)
    if y.size < bounds[-1]:
        raise ValueError(
            f"input of length {y.size} is shorter than N blocks of width {W} "
            f"(needs {bounds[-1]})"
        )
    sums = np.add.reduceat(y[: bounds[-1]], bounds[:-1])
    return sums / np.sqrt(W)


def _interleave_permutation(n: int, depth: int) -> np.ndarray:
    # Row-major write into rows of width `depth`, column-major read; a true
    # permutation for any n, ragged last row included.
    return np.argsort(np.arange(n) % depth, kind="stable")


def interleave(u: np.ndarray, depth: int) -> np.ndarray:
    """Reorder so that originally adjacent symbols end up ~n/depth apart."""
    u = np.asarray(u)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth == 1:
        return u.copy()
    return u[_interleave_permutation(u.size, depth)]


def deinterleave(u: np.ndarray, depth: int) -> np.ndarray:
    """Inverse of interleave at the same depth."""
    u = np.asarray(u)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth == 1:
        return u.copy()
    out = np.empty_like(u)
    out[_interleave_permutation(u.size, depth)] = u
    return out


def ml_decode(cb: OuterCodebook, uhat: np.ndarray) -> int:
    """Index of the codeword with the largest correlation with uhat.

    Equivalent to minimum Euclidean distance because all codewords have
    equal energy.  Ties resolve to the lowest index.
    """
    uhat = np.asarray(uhat, dtype=float)
    if uhat.shape != (cb.N,):
        raise ValueError(f"uhat must have shape ({cb.N},), got {uhat.shape}")
    return int(np.argmax(cb.codewords @ uhat))


def save_codebook(cb: OuterCodebook, path: str) -> None:
    """Write the codebook sidecar.

    Layout: magic 'DLCB', u16 version, u64 M, u64 N, f64 P1, u64 seed,
    then the sign bits (1 = positive) packed row-major.
    """
    signs = (cb.codewords > 0).astype(np.uint8).ravel()
    header = _CODEBOOK_MAGIC + struct.pack(
        "<HQQdQ", _CODEBOOK_VERSION, cb.M, cb.N, cb.P1, cb.seed % 2**64
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(np.packbits(signs).tobytes())


def load_codebook(path: str) -> OuterCodebook:
    """Read a codebook sidecar written by save_codebook."""
    with open(path, "rb") as f:
        blob = f.read()
    if blob[:4] != _CODEBOOK_MAGIC:
        raise ValueError(f"{path} is not a codebook sidecar")
    version, M, N, P1, seed = struct.unpack_from("<HQQdQ", blob, 4)
    if version != _CODEBOOK_VERSION:
        raise ValueError(f"unsupported codebook version {version}")
    offset = 4 + struct.calcsize("<HQQdQ")
    bits = np.unpackbits(np.frombuffer(blob, dtype=np.uint8, offset=offset))[: M * N]
    signs = bits.reshape(int(M), int(N)).astype(np.int8) * 2 - 1
    return OuterCodebook(
        M=int(M), N=int(N), P1=P1, seed=int(seed), codewords=signs * np.sqrt(P1)
    )
