"""Closed-form error-probability exponents for the transmitters being compared.

Every bound has the form exp(-N E) / 2; ``BoundResult.exponent_per_shot``
holds E.  The entangled (``qi``) and single-photon (``sp``) formulas only hold
in asymptotic parameter regimes, so they are gated by :func:`classify_regime`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .chernoff import bound_from_exponent


class Regime(str, enum.Enum):
    GOOD = "good"
    BAD = "bad"
    OUTSIDE = "outside-model"
    AMBIGUOUS = "ambiguous"


class System(str, enum.Enum):
    QI = "qi"
    SP = "sp"


class FormulaId(str, enum.Enum):
    QI_GOOD = "qi-good"
    QI_BAD = "qi-bad"
    SP_GOOD = "sp-good"
    SP_BAD = "sp-bad"
    COHERENT = "coherent-state"
    MAJORITY_VOTE = "majority-vote"
    HOMODYNE = "homodyne"


class RegimeNotApplicable(ValueError):
    def __init__(self, system: System, regime: RegimeReport):
        super().__init__(f"{system.value} bound not applicable: regime is {regime.label.value}")
        self.system = system
        self.regime = regime


@dataclass(frozen=True)
class ChannelParams:
    kappa: float
    n_b: float
    modes: int = 1
    shots: int = 1

    def __post_init__(self):
        if not 0 < self.kappa <= 1:
            raise ValueError(f"kappa must lie in (0, 1], got {self.kappa}")
        if not (self.n_b >= 0 and math.isfinite(self.n_b)):
            raise ValueError(f"n_b must be a finite number >= 0, got {self.n_b}")
        if int(self.modes) != self.modes or self.modes < 1:
            raise ValueError(f"modes must be an integer >= 1, got {self.modes}")
        if int(self.shots) != self.shots or self.shots < 1:
            raise ValueError(f"shots must be an integer >= 1, got {self.shots}")


@dataclass(frozen=True)
class MarginPolicy:
    """``x << y`` is read as ``x * factor <= y``."""

    factor: float = 10.0

    def __post_init__(self):
        if not self.factor >= 2:
            raise ValueError(f"margin factor must be >= 2, got {self.factor}")


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float
    rhs: float
    margin: float
    satisfied: bool


@dataclass(frozen=True)
class RegimeReport:
    label: Regime
    checks: tuple[Check, ...] = ()

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class BoundResult:
    exponent_per_shot: float
    bound: float
    formula_id: FormulaId
    regime: RegimeReport | None = field(default=None)


def _much_less(name: str, small: float, large: float, factor: float) -> Check:
    lhs = small * factor
    return Check(name, lhs, large, factor, lhs <= large)


def classify_regime(
    params: ChannelParams, system: System | str, margin: MarginPolicy = MarginPolicy()
) -> RegimeReport:
    """Evaluate the good/bad-regime inequalities of the qi or sp bound."""
    system = System(system)
    f = margin.factor
    kappa, n_b, m = params.kappa, params.n_b, params.modes
    # the bad-regime noise floor per mode: N_B/M for qi, N_B for sp
    floor = n_b / m if system is System.QI else n_b
    kappa_small = _much_less("kappa<<1", kappa, 1.0, f)
    noise_small = _much_less("M*N_B<<1", m * n_b, 1.0, f)
    kappa_above = _much_less("kappa>>floor", floor, kappa, f)
    kappa_below = _much_less("kappa<<floor", kappa, floor, f)
    checks = (kappa_small, noise_small, kappa_above, kappa_below)

    if not (kappa_small.satisfied and noise_small.satisfied):
        label = Regime.OUTSIDE
    elif kappa_above.satisfied:
        label = Regime.GOOD
    elif kappa_below.satisfied:
        label = Regime.BAD
    else:
        label = Regime.AMBIGUOUS
    return RegimeReport(label, checks)


def _result(exponent: float, shots: int, formula: FormulaId, regime=None) -> BoundResult:
    return BoundResult(exponent, bound_from_exponent(exponent, shots), formula, regime)


def bad_regime_exponent(kappa: float, n_b: float) -> float:
    """kappa^2 / (8 N_B), the noise-limited single-photon exponent."""
    return kappa * kappa / (8 * n_b)


def qi_bound(params: ChannelParams, margin: MarginPolicy = MarginPolicy()) -> BoundResult:
    """Entangled single-photon transmitter: E = kappa (good) or kappa^2 M / 8 N_B (bad)."""
    regime = classify_regime(params, System.QI, margin)
    if regime.label is Regime.GOOD:
        return _result(params.kappa, params.shots, FormulaId.QI_GOOD, regime)
    if regime.label is Regime.BAD:
        exponent = params.modes * bad_regime_exponent(params.kappa, params.n_b)
        return _result(exponent, params.shots, FormulaId.QI_BAD, regime)
    raise RegimeNotApplicable(System.QI, regime)


def sp_bound(params: ChannelParams, margin: MarginPolicy = MarginPolicy()) -> BoundResult:
    """Unentangled single-photon transmitter: E = kappa (good) or kappa^2 / 8 N_B (bad)."""
    regime = classify_regime(params, System.SP, margin)
    if regime.label is Regime.GOOD:
        return _result(params.kappa, params.shots, FormulaId.SP_GOOD, regime)
    if regime.label is Regime.BAD:
        exponent = bad_regime_exponent(params.kappa, params.n_b)
        return _result(exponent, params.shots, FormulaId.SP_BAD, regime)
    raise RegimeNotApplicable(System.SP, regime)


def cs_exponent(kappa: float, n_b: float) -> float:
    return kappa * (math.sqrt(n_b + 1) - math.sqrt(n_b)) ** 2


def cs_bound(params: ChannelParams) -> BoundResult:
    """Coherent-state transmitter with the optimum quantum receiver."""
    return _result(cs_exponent(params.kappa, params.n_b), params.shots, FormulaId.COHERENT)


def cs_single_shot_error(kappa: float) -> float:
    """Helstrom error (1 - sqrt(1 - e^-kappa)) / 2 for vacuum vs a kappa-photon coherent state."""
    if not 0 < kappa <= 1:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa}")
    return 0.5 * (1 - math.sqrt(-math.expm1(-kappa)))


def cs_single_shot_error_approx(kappa: float) -> float:
    """Small-kappa form (1 - sqrt(kappa)) / 2; for comparison output only."""
    return 0.5 * (1 - math.sqrt(kappa))


def majority_vote_exponent(p: float) -> float:
    """-ln(2 sqrt(p (1 - p))), written as -log1p(-(1-2p)^2)/2 to survive p near 1/2."""
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return -0.5 * math.log1p(-((1 - 2 * p) ** 2))


def majority_vote_bound(p: float, n_shots: int) -> BoundResult:
    """Chernoff bound [2 sqrt(p (1-p))]^N / 2 on majority vote over N independent decisions."""
    return _result(majority_vote_exponent(p), n_shots, FormulaId.MAJORITY_VOTE)


def homodyne_exponent(kappa: float, n_b: float) -> float:
    return kappa / (4 * n_b + 2)


def homodyne_bound(params: ChannelParams) -> BoundResult:
    """Coherent-state transmitter with a homodyne receiver."""
    return _result(homodyne_exponent(params.kappa, params.n_b), params.shots, FormulaId.HOMODYNE)
