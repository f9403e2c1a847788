"""Quantum and classical Chernoff quantities and error exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

if TYPE_CHECKING:
    from .fock import DensityOperator

GRID_POINTS = 41
S_TOL = 1e-6
# objectives whose spread over the grid is below this are treated as flat
FLAT_TOL = 1e-9
MASS_TOL = 1e-9
_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability mass on integer or labelled outcomes."""

    support: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support)
        mass = np.asarray(self.mass, dtype=float)
        if support.shape != mass.shape or mass.ndim != 1:
            raise ValueError("support and mass must be 1-d arrays of equal length")
        if np.any(mass < 0):
            raise ValueError("mass must be non-negative")
        total = float(mass.sum())
        if abs(total - 1) > MASS_TOL:
            raise ValueError(f"total mass {total!r} is not within {MASS_TOL} of 1")
        support.setflags(write=False)
        mass.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "mass", mass)

    @property
    def deficit(self) -> float:
        """Mass missing from the represented outcomes (truncation tail)."""
        return max(0.0, 1.0 - float(self.mass.sum()))

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.mass)

    def same_support(self, other: DiscreteDistribution) -> bool:
        return self.support.shape == other.support.shape and bool(
            np.all(self.support == other.support)
        )


@dataclass(frozen=True)
class ChernoffResult:
    q: float
    s_star: float
    exponent: float
    evaluations: int

    def bound(self, n_shots: int = 1) -> float:
        return bound_from_exponent(self.exponent, n_shots)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = S_TOL):
    """Minimize a unimodal f on [lo, hi] until the bracket is narrower than tol.

    Returns (x_min, f_min, evaluations); the endpoints are never evaluated.
    """
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    evals = 2
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
        evals += 1
    if f1 <= f2:
        return x1, f1, evals
    return x2, f2, evals


def minimize_unit_interval(f: Callable[[float], float]) -> ChernoffResult:
    """Coarse grid over [0, 1] then golden-section on the bracketing cell."""
    grid = np.linspace(0.0, 1.0, GRID_POINTS)
    values = np.array([f(float(s)) for s in grid])
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("non-finite Chernoff objective; check the state truncation")
    evals = GRID_POINTS
    i = int(np.argmin(values))
    s_best, q = float(grid[i]), float(values[i])
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, GRID_POINTS - 1)])
    s_gs, q_gs, n = golden_section(f, lo, hi)
    evals += n
    if q_gs < q:
        s_best, q = s_gs, q_gs
    if values.max() - values.min() <= FLAT_TOL:
        s_best = 0.5
    q = min(q, 1.0)
    if q <= 0:
        raise FloatingPointError(f"Chernoff quantity {q!r} is not positive")
    return ChernoffResult(q=q, s_star=s_best, exponent=-math.log(q), evaluations=evals)


def quantum_objective(rho0: DensityOperator, rho1: DensityOperator) -> Callable[[float], float]:
    """s -> Tr(rho0^s rho1^(1-s)), using one eigendecomposition per state."""
    from .fock import spectral_power

    w0, v0 = rho0.eigh
    w1, v1 = rho1.eigh
    overlap = np.abs(v0.conj().T @ v1) ** 2

    def objective(s: float) -> float:
        return float(spectral_power(w0, s) @ overlap @ spectral_power(w1, 1 - s))

    return objective


def quantum_chernoff(rho0: DensityOperator, rho1: DensityOperator) -> ChernoffResult:
    """Minimize Tr(rho0^s rho1^(1-s)) over s in [0, 1]."""
    if rho0.dim != rho1.dim:
        raise ValueError(f"dimension mismatch: {rho0.dim} vs {rho1.dim}")
    return minimize_unit_interval(quantum_objective(rho0, rho1))


def _pow_on_support(p: np.ndarray, s: float) -> np.ndarray:
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] = p[mask] ** s
    return out


def classical_objective(
    p0: DiscreteDistribution, p1: DiscreteDistribution
) -> Callable[[float], float]:
    a, b = p0.mass, p1.mass
    both = (a > 0) & (b > 0)
    a_in, b_in = a[both], b[both]

    def objective(s: float) -> float:
        # terms with one zero factor vanish except at the endpoints, where p^0 is the support indicator
        if s == 0.0:
            return float(b[a > 0].sum())
        if s == 1.0:
            return float(a[b > 0].sum())
        return float(np.sum(a_in**s * b_in ** (1 - s)))

    return objective


def classical_chernoff(p0: DiscreteDistribution, p1: DiscreteDistribution) -> ChernoffResult:
    """Minimize sum_x p0(x)^s p1(x)^(1-s) over s in [0, 1]."""
    if not p0.same_support(p1):
        raise ValueError("distributions must share the same support")
    return minimize_unit_interval(classical_objective(p0, p1))


def bound_from_exponent(exponent: float, n_shots: int) -> float:
    """exp(-N * exponent) / 2, clipped to [0, 1/2]."""
    if not math.isfinite(exponent):
        raise ValueError(f"exponent must be finite, got {exponent}")
    if n_shots < 1:
        raise ValueError(f"n_shots must be >= 1, got {n_shots}")
    return min(max(0.5 * math.exp(-n_shots * exponent), 0.0), 0.5)
