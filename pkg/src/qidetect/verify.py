"""Cross-checks of the closed-form exponents against numerical oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import bounds, fock, receivers
from .bounds import ChannelParams
from .chernoff import classical_chernoff, quantum_chernoff

DEFAULT_TOLERANCES = {
    "cs-exponent-vs-quantum-chernoff": 0.02,
    "single-shot-vs-helstrom": 1e-10,
    "homodyne-exponent-vs-gaussian-chernoff": 1e-9,
    "helstrom-below-chernoff": 1e-9,
    "counting-exponent-below-quantum": 1e-9,
}


@dataclass(frozen=True)
class OracleCheck:
    name: str
    closed_form: float
    oracle: float
    delta: float
    tolerance: float
    relative: bool = False

    @property
    def passed(self) -> bool:
        return self.delta <= self.tolerance


def _tol(name: str, override: float | None) -> float:
    return DEFAULT_TOLERANCES[name] if override is None else override


def run_checks(
    params: ChannelParams, trunc_dim: int | None = None, tolerance: float | None = None
) -> list[OracleCheck]:
    """Compare each closed form with its oracle at ``params``.

    ``tolerance`` replaces every default tolerance when given.  Raises
    :class:`fock.TruncationError` when ``trunc_dim`` is too small.
    """
    kappa, n_b = params.kappa, params.n_b
    alpha = math.sqrt(kappa)
    dim = trunc_dim or fock.adequate_dim(alpha, n_b)
    trunc = fock.TruncationConfig(dim)
    checks = []

    rho0 = fock.thermal_state(n_b, trunc)
    rho1 = fock.displaced_thermal_state(alpha, n_b, trunc)
    qc = quantum_chernoff(rho0, rho1)
    closed = bounds.cs_exponent(kappa, n_b)
    name = "cs-exponent-vs-quantum-chernoff"
    checks.append(
        OracleCheck(name, closed, qc.exponent, abs(qc.exponent - closed) / closed, _tol(name, tolerance), True)
    )

    vac_trunc = fock.TruncationConfig(max(dim, fock.adequate_dim(alpha)))
    helstrom = fock.helstrom_error(
        fock.vacuum(vac_trunc), fock.coherent_state(alpha, vac_trunc).density()
    )
    closed = bounds.cs_single_shot_error(kappa)
    name = "single-shot-vs-helstrom"
    checks.append(OracleCheck(name, closed, helstrom, abs(helstrom - closed), _tol(name, tolerance)))

    pair = receivers.homodyne_statistics(params)
    g0, g1 = receivers.discretize_gaussian_pair(pair)
    gc = classical_chernoff(g0, g1)
    closed = bounds.homodyne_exponent(kappa, n_b)
    name = "homodyne-exponent-vs-gaussian-chernoff"
    checks.append(OracleCheck(name, closed, gc.exponent, abs(gc.exponent - closed), _tol(name, tolerance)))

    h = fock.helstrom_error(rho0, rho1)
    name = "helstrom-below-chernoff"
    checks.append(OracleCheck(name, qc.q / 2, h, max(0.0, h - qc.q / 2), _tol(name, tolerance)))

    cc = classical_chernoff(fock.photon_number_distribution(rho0), fock.photon_number_distribution(rho1))
    name = "counting-exponent-below-quantum"
    checks.append(
        OracleCheck(name, qc.exponent, cc.exponent, max(0.0, cc.exponent - qc.exponent), _tol(name, tolerance))
    )
    return checks
