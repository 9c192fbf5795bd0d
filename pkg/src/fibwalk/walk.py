"""Walk operators on a finite chain with reflective open boundaries.

The Hilbert space is n_sites copies of a two-level coin (L, R); the dense
basis ordering is (x=0,L), (x=0,R), (x=1,L), ...  One step is U = S C with
a site-dependent rotation coin

    R(theta) = [[cos theta, sin theta], [-sin theta, cos theta]]

and a chirality-conditioned shift whose out-of-lattice hops are replaced by
in-place coin flips: |0,L> -> alpha_L |0,R> and |N-1,R> -> alpha_R |N-1,L>,
with configurable unit phases (default +1).  This is the minimal unitary
completion that keeps the operator banded and local.

Two timeframes are provided.  PLAIN is U = S C and drives all dynamics and
spectra; SYMMETRIZED is U = C^(1/2) S C^(1/2) (half-angle rotations), which
satisfies the chiral relation Gamma U Gamma = U^dagger literally whenever
the boundary phases are real.  The two operators are related by conjugation
with C^(1/2) and have identical spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .sequence import CoinAngles, FibonacciWord, angles_for

PHASE_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-10


class Timeframe(Enum):
    PLAIN = "plain"
    SYMMETRIZED = "symmetrized"


@dataclass(frozen=True)
class WalkConfig:
    """Parameters fixing one walk operator."""

    n_sites: int
    coins: CoinAngles
    word: FibonacciWord
    boundary_phase_left: complex = 1.0 + 0.0j
    boundary_phase_right: complex = 1.0 + 0.0j
    timeframe: Timeframe = Timeframe.PLAIN

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if len(self.word) != self.n_sites:
            raise ValueError(
                f"word length {len(self.word)} != n_sites {self.n_sites}"
            )
        for name, phase in (
            ("boundary_phase_left", self.boundary_phase_left),
            ("boundary_phase_right", self.boundary_phase_right),
        ):
            if abs(abs(complex(phase)) - 1.0) > PHASE_TOLERANCE:
                raise ValueError(f"{name} must have unit modulus, got {phase!r}")

    def angles(self) -> np.ndarray:
        return angles_for(self.word, self.coins)


@dataclass
class WalkerState:
    """Coin-resolved amplitudes over sites; column 0 is L, column 1 is R."""

    amplitudes: np.ndarray
    origin: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 2 or amps.shape[1] != 2:
            raise ValueError(f"amplitudes must have shape (n_sites, 2), got {amps.shape}")
        if not 0 <= self.origin < amps.shape[0]:
            raise ValueError(f"origin {self.origin} outside lattice of {amps.shape[0]} sites")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"state norm {nrm} deviates from 1 beyond {NORM_TOLERANCE}")
        self.amplitudes = amps

    @property
    def n_sites(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def site_probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 0]) ** 2 + np.abs(self.amplitudes[:, 1]) ** 2


def localized_state(n_sites: int, site: int, coin="R") -> WalkerState:
    """Walker concentrated on one site; coin is 'L', 'R', or an (a, b) pair."""
    if isinstance(coin, str):
        if coin not in ("L", "R"):
            raise ValueError(f"coin must be 'L', 'R', or a length-2 sequence, got {coin!r}")
        spinor = np.array([1.0, 0.0] if coin == "L" else [0.0, 1.0], dtype=np.complex128)
    else:
        spinor = np.asarray(coin, dtype=np.complex128)
        if spinor.shape != (2,):
            raise ValueError("coin amplitudes must be a length-2 sequence")
        nrm = np.linalg.norm(spinor)
        if nrm == 0.0:
            raise ValueError("coin amplitudes must not be zero")
        spinor = spinor / nrm
    amps = np.zeros((n_sites, 2), dtype=np.complex128)
    amps[site] = spinor
    return WalkerState(amps, origin=site)


def _coin(amps: np.ndarray, c: np.ndarray, s: np.ndarray) -> np.ndarray:
    out = np.empty_like(amps)
    out[:, 0] = c * amps[:, 0] + s * amps[:, 1]
    out[:, 1] = -s * amps[:, 0] + c * amps[:, 1]
    return out


def _shift(amps: np.ndarray, alpha_l: complex, alpha_r: complex) -> np.ndarray:
    out = np.empty_like(amps)
    out[:-1, 0] = amps[1:, 0]
    out[-1, 0] = alpha_r * amps[-1, 1]
    out[1:, 1] = amps[:-1, 1]
    out[0, 1] = alpha_l * amps[0, 0]
    return out


def apply_step(state: WalkerState, config: WalkConfig) -> WalkerState:
    """One walk step, matrix-free (linear in n_sites)."""
    if state.n_sites != config.n_sites:
        raise ValueError(
            f"state has {state.n_sites} sites but config expects {config.n_sites}"
        )
    th = config.angles()
    al, ar = config.boundary_phase_left, config.boundary_phase_right
    if config.timeframe is Timeframe.PLAIN:
        amps = _shift(_coin(state.amplitudes, np.cos(th), np.sin(th)), al, ar)
    else:
        ch, sh = np.cos(th / 2.0), np.sin(th / 2.0)
        amps = _coin(_shift(_coin(state.amplitudes, ch, sh), al, ar), ch, sh)
    return WalkerState(amps, origin=state.origin)


def _coin_matrix(angles: np.ndarray) -> np.ndarray:
    n = len(angles)
    c, s = np.cos(angles), np.sin(angles)
    m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    i = 2 * np.arange(n)
    m[i, i] = c
    m[i, i + 1] = s
    m[i + 1, i] = -s
    m[i + 1, i + 1] = c
    return m


def _shift_rows(m: np.ndarray, alpha_l: complex, alpha_r: complex) -> np.ndarray:
    # (S M)[sigma(k), :] = phase_k * M[k, :] with S having one entry per column.
    n = m.shape[0] // 2
    out = np.zeros_like(m)
    left_src = 2 * np.arange(1, n)
    out[left_src - 2] = m[left_src]
    out[1] = alpha_l * m[0]
    right_src = 2 * np.arange(0, n - 1) + 1
    out[right_src + 2] = m[right_src]
    out[2 * n - 2] = alpha_r * m[2 * n - 1]
    return out


def _coin_rows(angles: np.ndarray, m: np.ndarray) -> np.ndarray:
    # Left-multiply by the block-diagonal coin without a dense matmul.
    n = len(angles)
    c, s = np.cos(angles), np.sin(angles)
    blocks = np.zeros((n, 2, 2), dtype=np.complex128)
    blocks[:, 0, 0] = c
    blocks[:, 0, 1] = s
    blocks[:, 1, 0] = -s
    blocks[:, 1, 1] = c
    out = np.einsum("nab,nbd->nad", blocks, m.reshape(n, 2, m.shape[1]))
    return out.reshape(m.shape)


def build_unitary(config: WalkConfig) -> np.ndarray:
    """Dense walk unitary of dimension 2*n_sites in the configured timeframe."""
    if config.n_sites < 2:
        raise ValueError(f"build_unitary needs n_sites >= 2, got {config.n_sites}")
    th = config.angles()
    al, ar = config.boundary_phase_left, config.boundary_phase_right
    if config.timeframe is Timeframe.PLAIN:
        return _shift_rows(_coin_matrix(th), al, ar)
    half = _coin_matrix(th / 2.0)
    return _coin_rows(th / 2.0, _shift_rows(half, al, ar))


def chiral_operator(n_sites: int) -> np.ndarray:
    """Block-diagonal sigma_x on every coin: swaps L_x and R_x."""
    if n_sites < 1:
        raise ValueError(f"n_sites must be >= 1, got {n_sites}")
    g = np.zeros((2 * n_sites, 2 * n_sites), dtype=np.complex128)
    i = 2 * np.arange(n_sites)
    g[i, i + 1] = 1.0
    g[i + 1, i] = 1.0
    return g
