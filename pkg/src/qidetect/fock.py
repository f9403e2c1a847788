"""Truncated Fock-space states and exact binary quantum detection.

States live in the number basis |0>, ..., |dim-1>.  Nothing is renormalized
after construction: the probability mass lost to truncation is measured and
the constructors raise :class:`TruncationError` when it exceeds
``TruncationConfig.leakage_tol``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .chernoff import DiscreteDistribution

HERMITIAN_TOL = 1e-12
NEGATIVE_EIG_TOL = 1e-10
EIG_CLIP = 1e-12
# float rounding slack on the upper trace/norm limit of 1
_UNIT_SLACK = 1e-12


class TruncationError(ValueError):
    """Raised when the Fock truncation loses more mass than allowed."""

    def __init__(self, message: str, suggested_dim: int | None = None):
        super().__init__(message)
        self.suggested_dim = suggested_dim


@dataclass(frozen=True)
class TruncationConfig:
    dim: int
    leakage_tol: float = 1e-10

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")
        if not 0 < self.leakage_tol < 1e-3:
            raise ValueError(f"leakage_tol must lie in (0, 1e-3), got {self.leakage_tol}")


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    leakage_tol: float = 1e-10

    def __post_init__(self):
        amps = _readonly(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("amplitudes must be a vector of length >= 2")
        object.__setattr__(self, "amplitudes", amps)
        norm2 = self.norm_squared
        if norm2 > 1 + _UNIT_SLACK:
            raise ValueError(f"squared norm {norm2} exceeds 1")
        if 1 - norm2 > self.leakage_tol:
            raise TruncationError(
                f"norm deficiency {1 - norm2:.3e} exceeds leakage_tol {self.leakage_tol:.1e}"
            )

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def density(self) -> DensityOperator:
        """Projector |psi><psi| onto this state."""
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.leakage_tol)


@dataclass(frozen=True)
class DensityOperator:
    matrix: np.ndarray
    leakage_tol: float = 1e-10
    _eig: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        mat = _readonly(self.matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise ValueError(f"matrix must be square with dim >= 2, got shape {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "matrix", mat)
        tr = self.trace
        if tr > 1 + _UNIT_SLACK:
            raise ValueError(f"trace {tr} exceeds 1")
        if 1 - tr > self.leakage_tol:
            raise TruncationError(
                f"trace deficiency {1 - tr:.3e} exceeds leakage_tol {self.leakage_tol:.1e}"
            )
        # Hermitian part only; the residual anti-Hermitian noise is below HERMITIAN_TOL
        w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
        if w[0] < -NEGATIVE_EIG_TOL:
            raise ValueError(f"matrix has negative eigenvalue {w[0]:.3e}")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "_eig", (w, v))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached (eigenvalues, eigenvectors), ascending."""
        return self._eig

    def expectation(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.matrix @ op))


# -- operators -------------------------------------------------------------


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def mean_photon_number(rho: DensityOperator) -> float:
    return float(np.dot(np.arange(rho.dim), np.diag(rho.matrix).real))


# -- truncation sizing -----------------------------------------------------


def default_dim(mean: float) -> int:
    """Rule-of-thumb dimension ceil(mean + 10 sqrt(mean + 1) + 10)."""
    return math.ceil(mean + 10 * math.sqrt(mean + 1) + 10)


def _thermal_tail_dim(nbar: float, tol: float) -> int:
    if nbar <= 0:
        return 2
    return math.ceil(math.log(tol) / math.log(nbar / (nbar + 1)))


@lru_cache(maxsize=256)
def adequate_dim(alpha: complex = 0.0, nbar: float = 0.0, leakage_tol: float = 1e-10) -> int:
    """Smallest dimension, no lower than :func:`default_dim`, that keeps the
    photon-number tail of D(alpha) rho_thermal(nbar) D(alpha)^dag within half of
    ``leakage_tol``.

    The mean-based rule alone undersizes hot states (a thermal state with
    nbar = 1 needs 34 levels to push its tail below 1e-10), so the tail is read
    off the populations computed on an oversized workspace.
    """
    amp2 = abs(alpha) ** 2
    start = default_dim(amp2 + nbar)
    if alpha == 0 and nbar == 0:
        return start
    generous = start + _thermal_tail_dim(nbar, leakage_tol) + math.ceil(
        amp2 + 8 * abs(alpha) * math.sqrt(2 * nbar + 1)
    )
    pops = _displaced_populations(alpha, nbar, 2 * generous)[:generous]
    tails = 1.0 - np.cumsum(pops)  # tails[d-1] is the mass at n >= d
    ok = np.nonzero(tails <= 0.5 * leakage_tol)[0]
    needed = int(ok[0]) + 1 if ok.size else generous
    return max(start, needed)


def _trunc(trunc: TruncationConfig | None, alpha: complex, nbar: float) -> TruncationConfig:
    if trunc is None:
        return TruncationConfig(adequate_dim(alpha, nbar))
    return trunc


# -- states ----------------------------------------------------------------


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    n = np.arange(dim)
    if alpha == 0:
        amps = np.zeros(dim, dtype=complex)
        amps[0] = 1.0
        return amps
    r = abs(alpha)
    phase = alpha / r
    log_mag = n * math.log(r) - 0.5 * r * r - 0.5 * np.array([math.lgamma(k + 1) for k in n])
    return np.exp(log_mag) * phase**n


def coherent_state(alpha: complex, trunc: TruncationConfig | None = None) -> StateVector:
    """Coherent state |alpha> with amplitudes alpha^n e^{-|alpha|^2/2} / sqrt(n!)."""
    trunc = _trunc(trunc, alpha, 0.0)
    amps = coherent_amplitudes(alpha, trunc.dim)
    deficiency = 1 - float(np.sum(np.abs(amps) ** 2))
    if deficiency > trunc.leakage_tol:
        raise TruncationError(
            f"coherent state alpha={alpha} loses {deficiency:.3e} beyond dim={trunc.dim}",
            suggested_dim=adequate_dim(alpha, 0.0, trunc.leakage_tol),
        )
    return StateVector(amps, trunc.leakage_tol)


def vacuum(trunc: TruncationConfig | None = None) -> DensityOperator:
    return thermal_state(0.0, trunc)


def number_state(n: int, trunc: TruncationConfig) -> StateVector:
    if not 0 <= n < trunc.dim:
        raise ValueError(f"number state {n} outside dim {trunc.dim}")
    amps = np.zeros(trunc.dim, dtype=complex)
    amps[n] = 1.0
    return StateVector(amps, trunc.leakage_tol)


def _bose_einstein(nbar: float, dim: int) -> np.ndarray:
    n = np.arange(dim)
    if nbar == 0:
        return (n == 0).astype(float)
    # log form avoids overflow of (nbar+1)^(n+1) at large dim
    return np.exp(n * math.log(nbar) - (n + 1) * math.log1p(nbar))


def thermal_state(nbar: float, trunc: TruncationConfig | None = None) -> DensityOperator:
    """Thermal state with Bose-Einstein populations nbar^n / (nbar+1)^(n+1)."""
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    trunc = _trunc(trunc, 0.0, nbar)
    if nbar > 0:
        tail = (nbar / (nbar + 1)) ** trunc.dim
        if tail > trunc.leakage_tol:
            raise TruncationError(
                f"thermal tail {tail:.3e} beyond dim={trunc.dim} exceeds {trunc.leakage_tol:.1e}",
                suggested_dim=adequate_dim(0.0, nbar, trunc.leakage_tol),
            )
    return DensityOperator(np.diag(_bose_einstein(nbar, trunc.dim)), trunc.leakage_tol)


def displacement(alpha: complex, dim: int) -> np.ndarray:
    """exp(alpha a^dag - alpha^* a) in a dim-level space; only the low block is accurate."""
    a = annihilation(dim)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def _displaced_thermal_matrix(alpha: complex, nbar: float, work: int) -> np.ndarray:
    d = displacement(alpha, work)
    return (d * _bose_einstein(nbar, work)) @ d.conj().T


def _displaced_populations(alpha: complex, nbar: float, work: int) -> np.ndarray:
    return np.diag(_displaced_thermal_matrix(alpha, nbar, work)).real


def displaced_thermal_state(
    alpha: complex, nbar: float, trunc: TruncationConfig | None = None
) -> DensityOperator:
    """D(alpha) rho_thermal(nbar) D(alpha)^dag.

    Built on a workspace twice the target size and cropped, so that the
    non-unitarity of the truncated displacement stays in the discarded block.
    """
    if nbar < 0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    trunc = _trunc(trunc, alpha, nbar)
    rho = _displaced_thermal_matrix(alpha, nbar, 2 * trunc.dim)
    rho = rho[: trunc.dim, : trunc.dim]
    rho = 0.5 * (rho + rho.conj().T)
    deficiency = 1 - float(np.trace(rho).real)
    if deficiency > trunc.leakage_tol:
        raise TruncationError(
            f"displaced thermal state (alpha={alpha}, nbar={nbar}) loses {deficiency:.3e} "
            f"beyond dim={trunc.dim}",
            suggested_dim=adequate_dim(alpha, nbar, trunc.leakage_tol),
        )
    return DensityOperator(rho, trunc.leakage_tol)


# -- linear algebra --------------------------------------------------------


def _clipped(w: np.ndarray) -> np.ndarray:
    return np.where(w > EIG_CLIP, w, 0.0)


def spectral_power(w: np.ndarray, s: float) -> np.ndarray:
    """w**s on the support, 0 elsewhere (so 0**0 is taken as 0)."""
    w = _clipped(w)
    out = np.zeros_like(w)
    mask = w > 0
    out[mask] = w[mask] ** s
    return out


def matrix_fractional_power(rho: DensityOperator, s: float) -> np.ndarray:
    """rho**s via the eigendecomposition, restricted to the support of rho."""
    if not 0 <= s <= 1:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    w, v = rho.eigh
    return (v * spectral_power(w, s)) @ v.conj().T


def support_projector(rho: DensityOperator) -> np.ndarray:
    return matrix_fractional_power(rho, 0.0)


def trace_norm(op: np.ndarray) -> float:
    w = np.linalg.eigvalsh(0.5 * (op + op.conj().T))
    w = np.where(np.abs(w) > EIG_CLIP, w, 0.0)
    return float(np.sum(np.abs(w)))


def helstrom_error(rho0: DensityOperator, rho1: DensityOperator, prior0: float = 0.5) -> float:
    """Minimum error probability (1 - ||p1 rho1 - p0 rho0||_1) / 2."""
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    if not 0 < prior0 < 1:
        raise ValueError(f"prior0 must lie in (0, 1), got {prior0}")
    prior1 = 1 - prior0
    gamma = prior1 * rho1.matrix - prior0 * rho0.matrix
    err = 0.5 * (1 - trace_norm(gamma))
    return min(max(err, 0.0), min(prior0, prior1))


def photon_number_distribution(rho: DensityOperator) -> DiscreteDistribution:
    mass = np.clip(np.diag(rho.matrix).real, 0.0, None)
    return DiscreteDistribution(np.arange(rho.dim), mass)
