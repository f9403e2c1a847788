"""Concrete receivers: photon counting, homodyne, and majority-vote fusion.

Quadrature convention: vacuum variance 1/4, so background N_B gives variance
(2 N_B + 1) / 4 and a coherent return of amplitude a has mean a.  With this
convention the per-shot Gaussian Chernoff exponent is kappa / (4 N_B + 2).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, ndtr

from . import fock
from .bounds import ChannelParams, cs_single_shot_error
from .chernoff import DiscreteDistribution

MIN_TRIALS = 10_000
BLOCK_SIZE = 1 << 16


class Scenario(str, enum.Enum):
    PHOTON_COUNTING = "photon-counting"
    HOMODYNE = "homodyne"
    MAJORITY_VOTE = "majority-vote"


@dataclass(frozen=True)
class ThresholdPolicy:
    kind: str = "exhaustive-optimal"
    value: float | None = None

    def __post_init__(self):
        if self.kind not in ("midpoint", "exhaustive-optimal", "fixed"):
            raise ValueError(f"unknown threshold policy {self.kind!r}")
        if self.kind == "fixed" and (self.value is None or not math.isfinite(self.value)):
            raise ValueError("fixed threshold needs a finite value")

    @classmethod
    def midpoint(cls) -> ThresholdPolicy:
        return cls("midpoint")

    @classmethod
    def optimal(cls) -> ThresholdPolicy:
        return cls("exhaustive-optimal")

    @classmethod
    def fixed(cls, value: float) -> ThresholdPolicy:
        return cls("fixed", value)


@dataclass(frozen=True)
class GaussianPair:
    mean0: float
    mean1: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError(f"variance must be > 0, got {self.variance}")
        if self.mean1 < self.mean0:
            raise ValueError("mean1 must not be below mean0")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.variance)

    @property
    def separation(self) -> float:
        return self.mean1 - self.mean0

    def chernoff_exponent(self) -> float:
        """(mean1 - mean0)^2 / (8 variance), closed form for equal variances."""
        return self.separation**2 / (8 * self.variance)


@dataclass(frozen=True)
class TrialStats:
    trials: int
    errors: int
    error_rate: float
    ci_halfwidth_3sigma: float
    seed: int

    @classmethod
    def from_counts(cls, trials: int, errors: int, seed: int) -> TrialStats:
        rate = errors / trials
        return cls(trials, errors, rate, 3 * math.sqrt(rate * (1 - rate) / trials), seed)

    def consistent_with(self, exact: float) -> bool:
        return abs(self.error_rate - exact) <= self.ci_halfwidth_3sigma


# -- photon counting -------------------------------------------------------


def threshold_errors(dist0: DiscreteDistribution, dist1: DiscreteDistribution) -> np.ndarray:
    """Error for every integer threshold t = 0..dim (decide 'present' when n >= t)."""
    # mass above index t of dist0, counting the truncated tail as 'above'
    upper0 = 1.0 - np.concatenate(([0.0], np.cumsum(dist0.mass)))
    lower1 = np.concatenate(([0.0], np.cumsum(dist1.mass)))
    return 0.5 * (upper0 + lower1)


def photon_counting_error(
    dist0: DiscreteDistribution,
    dist1: DiscreteDistribution,
    policy: ThresholdPolicy = ThresholdPolicy(),
) -> tuple[float, int]:
    """Error of the count-threshold test; returns (error, threshold)."""
    if not dist0.same_support(dist1):
        raise ValueError("distributions must share the same support")
    errs = threshold_errors(dist0, dist1)
    if policy.kind == "exhaustive-optimal":
        t = int(np.argmin(errs))
    elif policy.kind == "midpoint":
        n = np.asarray(dist0.support, dtype=float)
        mid = 0.5 * (np.dot(n, dist0.mass) + np.dot(n, dist1.mass))
        t = min(math.ceil(mid), errs.size - 1)
    else:
        t = min(max(math.ceil(policy.value), 0), errs.size - 1)
    return float(errs[t]), t


def counting_states(params: ChannelParams, trunc: fock.TruncationConfig | None = None):
    """Background-only vs super-mode return with N kappa signal photons."""
    alpha = math.sqrt(params.kappa * params.shots)
    if trunc is None:
        trunc = fock.TruncationConfig(fock.adequate_dim(alpha, params.n_b))
    rho0 = fock.thermal_state(params.n_b, trunc)
    rho1 = fock.displaced_thermal_state(alpha, params.n_b, trunc)
    return rho0, rho1


# -- homodyne --------------------------------------------------------------


def homodyne_statistics(
    params: ChannelParams, signal_photons_per_shot: float = 1.0, coherent_combining: bool = False
) -> GaussianPair:
    if not signal_photons_per_shot > 0:
        raise ValueError("signal_photons_per_shot must be > 0")
    n = params.shots if coherent_combining else 1
    mean1 = math.sqrt(params.kappa * n * signal_photons_per_shot)
    return GaussianPair(0.0, mean1, (2 * params.n_b + 1) / 4)


def homodyne_error(pair: GaussianPair, policy: ThresholdPolicy = ThresholdPolicy.midpoint()) -> float:
    """Error of the quadrature-threshold test (decide 'present' above the threshold)."""
    sigma = pair.sigma
    if policy.kind == "fixed":
        t = policy.value
        return 0.5 * (ndtr((pair.mean0 - t) / sigma) + ndtr((t - pair.mean1) / sigma))
    # equal priors, equal variances: the likelihood-ratio test is the midpoint threshold
    return float(ndtr(-pair.separation / (2 * sigma)))


def discretize_gaussian_pair(
    pair: GaussianPair, bins_per_sigma: int = 4000, span: float = 12.0
) -> tuple[DiscreteDistribution, DiscreteDistribution]:
    """Bin both Gaussians on a shared grid; the outer bins absorb the tails."""
    sigma = pair.sigma
    lo = pair.mean0 - span * sigma
    hi = pair.mean1 + span * sigma
    n_bins = math.ceil((hi - lo) / sigma * bins_per_sigma)
    edges = np.linspace(lo, hi, n_bins + 1)
    edges[0], edges[-1] = -np.inf, np.inf
    p0 = np.diff(ndtr((edges - pair.mean0) / sigma))
    p1 = np.diff(ndtr((edges - pair.mean1) / sigma))
    support = np.arange(n_bins)
    return DiscreteDistribution(support, p0), DiscreteDistribution(support, p1)


# -- majority vote ---------------------------------------------------------


def majority_vote_exact(p: float, n_shots: int) -> float:
    """Probability that more than half of N independent decisions (each wrong w.p. p) are wrong."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n_shots < 1 or n_shots % 2 == 0:
        raise ValueError(f"majority vote needs an odd number of shots, got {n_shots}")
    if p == 0:
        return 0.0
    if p == 1:
        return 1.0
    k = np.arange(n_shots // 2 + 1, n_shots + 1)
    log_terms = (
        gammaln(n_shots + 1)
        - gammaln(k + 1)
        - gammaln(n_shots - k + 1)
        + k * math.log(p)
        + (n_shots - k) * math.log1p(-p)
    )
    return float(min(math.exp(logsumexp(log_terms)), 1.0))


# -- exact values per scenario --------------------------------------------


def exact_error(scenario: Scenario | str, params: ChannelParams) -> float:
    scenario = Scenario(scenario)
    if scenario is Scenario.PHOTON_COUNTING:
        rho0, rho1 = counting_states(params)
        err, _ = photon_counting_error(
            fock.photon_number_distribution(rho0), fock.photon_number_distribution(rho1)
        )
        return err
    if scenario is Scenario.HOMODYNE:
        return homodyne_error(homodyne_statistics(params, coherent_combining=True))
    return majority_vote_exact(cs_single_shot_error(params.kappa), params.shots)


# -- Monte Carlo -----------------------------------------------------------


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Counter-based substream for one block of trials: Philox keyed by the seed,
    with the block index in the top word of the counter."""
    return np.random.Generator(np.random.Philox(key=seed, counter=block << 192))


def _sampler(scenario: Scenario, params: ChannelParams):
    """Return f(rng, n) -> number of wrong decisions in n trials."""
    if scenario is Scenario.PHOTON_COUNTING:
        rho0, rho1 = counting_states(params)
        d0 = fock.photon_number_distribution(rho0)
        d1 = fock.photon_number_distribution(rho1)
        _, t = photon_counting_error(d0, d1)
        cdf0, cdf1 = d0.cdf(), d1.cdf()

        def run(rng, n):
            present = rng.random(n) < 0.5
            u = rng.random(n)
            # counts past the truncation land at dim, i.e. above every threshold
            counts = np.where(
                present, np.searchsorted(cdf1, u, side="right"), np.searchsorted(cdf0, u, side="right")
            )
            return int(np.count_nonzero((counts >= t) != present))

        return run

    if scenario is Scenario.HOMODYNE:
        pair = homodyne_statistics(params, coherent_combining=True)
        mid = 0.5 * (pair.mean0 + pair.mean1)

        def run(rng, n):
            present = rng.random(n) < 0.5
            x = np.where(present, pair.mean1, pair.mean0) + pair.sigma * rng.standard_normal(n)
            return int(np.count_nonzero((x > mid) != present))

        return run

    p = cs_single_shot_error(params.kappa)
    shots = params.shots
    if shots % 2 == 0:
        raise ValueError(f"majority vote needs an odd number of shots, got {shots}")

    def run(rng, n):
        rng.random(n)  # hypothesis draw; the per-shot error rate is symmetric
        wrong = rng.binomial(shots, p, size=n)
        return int(np.count_nonzero(2 * wrong > shots))

    return run


def monte_carlo(
    scenario: Scenario | str,
    params: ChannelParams,
    trials: int,
    seed: int,
    workers: int = 1,
) -> TrialStats:
    """Simulate equiprobable target absence/presence and count receiver errors.

    Trials are split into fixed blocks of BLOCK_SIZE, each with its own
    counter-based stream, so the result does not depend on ``workers``.
    """
    scenario = Scenario(scenario)
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be >= {MIN_TRIALS}, got {trials}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    run = _sampler(scenario, params)
    n_blocks = -(-trials // BLOCK_SIZE)

    def do_block(b: int) -> int:
        n = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        return run(block_generator(seed, b), n)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            errors = sum(pool.map(do_block, range(n_blocks)))
    else:
        errors = sum(do_block(b) for b in range(n_blocks))
    return TrialStats.from_counts(trials, errors, seed)
