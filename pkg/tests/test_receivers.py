import math

import numpy as np
import pytest
from scipy.stats import binom, norm

from qidetect import bounds, fock, receivers
from qidetect.bounds import ChannelParams
from qidetect.chernoff import DiscreteDistribution, classical_chernoff
from qidetect.receivers import GaussianPair, ThresholdPolicy


def pmf(values):
    values = np.asarray(values, dtype=float)
    return DiscreteDistribution(np.arange(values.size), values)


def brute_threshold_error(d0, d1, t):
    return 0.5 * (sum(d0.mass[n] for n in range(t, d0.mass.size)) + d0.deficit
                  + sum(d1.mass[n] for n in range(min(t, d1.mass.size))))


def test_photon_counting_identical():
    d = pmf([0.2, 0.3, 0.5])
    for t in range(4):
        err, _ = receivers.photon_counting_error(d, d, ThresholdPolicy.fixed(t))
        assert err == pytest.approx(0.5, abs=1e-15)


def test_photon_counting_vacuum_vs_poisson():
    t = fock.TruncationConfig(40)
    d0 = fock.photon_number_distribution(fock.vacuum(t))
    d1 = fock.photon_number_distribution(fock.coherent_state(math.sqrt(5), t).density())
    err, thr = receivers.photon_counting_error(d0, d1)
    assert thr == 1
    assert err == pytest.approx(math.exp(-5) / 2, rel=1e-12)


def test_photon_counting_matches_brute_force():
    t = fock.TruncationConfig(fock.adequate_dim(1.2, 0.3))
    d0 = fock.photon_number_distribution(fock.thermal_state(0.3, t))
    d1 = fock.photon_number_distribution(fock.displaced_thermal_state(1.2, 0.3, t))
    errs = receivers.threshold_errors(d0, d1)
    for t in range(errs.size):
        assert errs[t] == pytest.approx(brute_threshold_error(d0, d1, t), abs=1e-14)
    err, thr = receivers.photon_counting_error(d0, d1)
    assert err == min(errs) and thr == int(np.argmin(errs))
    mid_err, _ = receivers.photon_counting_error(d0, d1, ThresholdPolicy.midpoint())
    assert mid_err >= err


def test_photon_counting_low_noise_near_claim():
    rho0, rho1 = receivers.counting_states(ChannelParams(0.05, 0.0, shots=100))
    err, _ = receivers.photon_counting_error(
        fock.photon_number_distribution(rho0), fock.photon_number_distribution(rho1)
    )
    assert err == pytest.approx(math.exp(-5) / 2, rel=1e-10)


def test_photon_counting_support_mismatch():
    with pytest.raises(ValueError):
        receivers.photon_counting_error(pmf([1.0, 0.0]), pmf([1.0, 0.0, 0.0]))


def test_counting_not_better_than_helstrom():
    for nb in (0.0, 0.01, 0.2):
        rho0, rho1 = receivers.counting_states(ChannelParams(0.02, nb, shots=50))
        err, _ = receivers.photon_counting_error(
            fock.photon_number_distribution(rho0), fock.photon_number_distribution(rho1)
        )
        assert err >= fock.helstrom_error(rho0, rho1) - 1e-9


def test_homodyne_statistics():
    pair = receivers.homodyne_statistics(ChannelParams(0.04, 0.0, shots=100), coherent_combining=True)
    assert (pair.mean0, pair.mean1, pair.variance) == (0.0, pytest.approx(2.0), 0.25)
    assert receivers.homodyne_statistics(ChannelParams(0.04, 0.5)).variance == 0.5
    per_shot = receivers.homodyne_statistics(ChannelParams(0.04, 0.0, shots=100))
    assert per_shot.mean1 == pytest.approx(0.2)
    with pytest.raises(ValueError):
        receivers.homodyne_statistics(ChannelParams(0.04, 0.0), signal_photons_per_shot=0)


@pytest.mark.parametrize("kappa,nb", [(0.05, 0.3), (0.01, 0.0), (0.1, 2.0)])
def test_homodyne_gaussian_exponent_identity(kappa, nb):
    pair = receivers.homodyne_statistics(ChannelParams(kappa, nb))
    closed = kappa / (4 * nb + 2)
    assert pair.chernoff_exponent() == pytest.approx(closed, rel=1e-14)
    res = classical_chernoff(*receivers.discretize_gaussian_pair(pair))
    assert abs(res.exponent - closed) <= 1e-9


def test_homodyne_error():
    assert receivers.homodyne_error(GaussianPair(0.0, 0.0, 0.25)) == 0.5
    assert receivers.homodyne_error(GaussianPair(0.0, 2.0, 0.25)) == pytest.approx(
        0.022750131948179195, rel=1e-12
    )
    seps = np.linspace(0, 4, 50)
    errs = [receivers.homodyne_error(GaussianPair(0.0, d, 0.25)) for d in seps]
    assert np.all(np.diff(errs) < 0)
    pair = GaussianPair(0.0, 1.0, 0.3)
    midpoint = receivers.homodyne_error(pair)
    for t in np.linspace(-1, 2, 31):
        assert receivers.homodyne_error(pair, ThresholdPolicy.fixed(t)) >= midpoint - 1e-15
    assert receivers.homodyne_error(pair, ThresholdPolicy.fixed(0.5)) == pytest.approx(midpoint)


def test_majority_vote_exact_values():
    assert receivers.majority_vote_exact(0.0, 7) == 0.0
    assert receivers.majority_vote_exact(0.3, 3) == pytest.approx(0.216, abs=1e-15)
    assert receivers.majority_vote_exact(0.45, 101) == pytest.approx(binom.sf(50, 101, 0.45), rel=1e-12)
    assert receivers.majority_vote_exact(0.45, 101) <= bounds.majority_vote_bound(0.45, 101).bound
    with pytest.raises(ValueError):
        receivers.majority_vote_exact(0.3, 4)


@pytest.mark.parametrize("p", [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45])
def test_majority_vote_below_chernoff_bound(p):
    for n in range(1, 202, 2):
        exact = receivers.majority_vote_exact(p, n)
        assert exact == pytest.approx(binom.sf(n // 2, n, p), rel=1e-10, abs=1e-300)
        assert exact <= bounds.majority_vote_bound(p, n).bound


# Chernoff tightness: the finite-N slope only nears the exponent once N * exponent
# dwarfs the sqrt(N) prefactor, which for N in [151, 201] holds up to p = 0.35.
@pytest.mark.parametrize("p", [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35])
def test_majority_vote_exponent_tightness(p):
    slope = (math.log(receivers.majority_vote_exact(p, 151)) - math.log(receivers.majority_vote_exact(p, 201))) / 50
    assert slope == pytest.approx(bounds.majority_vote_exponent(p), rel=0.10)


def test_trial_stats():
    s = receivers.TrialStats.from_counts(10_000, 100, 7)
    assert s.error_rate == 0.01
    assert s.ci_halfwidth_3sigma == pytest.approx(3 * math.sqrt(0.01 * 0.99 / 10_000))


def test_monte_carlo_deterministic_and_parallel_invariant():
    params = ChannelParams(0.04, 0.0, shots=100)
    a = receivers.monte_carlo("homodyne", params, 200_000, 42)
    b = receivers.monte_carlo("homodyne", params, 200_000, 42)
    c = receivers.monte_carlo("homodyne", params, 200_000, 42, workers=4)
    assert a == b == c
    assert receivers.monte_carlo("homodyne", params, 200_000, 43) != a


def test_monte_carlo_blocks_are_independent_of_total():
    # a trial's outcome depends only on (seed, block, offset), so extending a run
    # by whole blocks only adds the new blocks' errors
    params = ChannelParams(0.05, 0.0, shots=100)
    one = receivers.monte_carlo("photon-counting", params, receivers.BLOCK_SIZE, 9)
    two = receivers.monte_carlo("photon-counting", params, 2 * receivers.BLOCK_SIZE, 9)
    second = receivers._sampler(receivers.Scenario.PHOTON_COUNTING, params)(
        receivers.block_generator(9, 1), receivers.BLOCK_SIZE
    )
    assert two.errors == one.errors + second


def test_monte_carlo_photon_counting():
    params = ChannelParams(0.05, 0.0, shots=100)
    stats = receivers.monte_carlo("photon-counting", params, 10**6, 42)
    assert stats.consistent_with(math.exp(-5) / 2)


def test_monte_carlo_homodyne():
    stats = receivers.monte_carlo("homodyne", ChannelParams(0.04, 0.0, shots=100), 10**6, 42)
    assert stats.consistent_with(norm.cdf(-2))


def test_monte_carlo_majority_vote():
    params = ChannelParams(0.01, 0.0, shots=101)
    stats = receivers.monte_carlo("majority-vote", params, 10**5, 3)
    assert stats.consistent_with(receivers.exact_error("majority-vote", params))


def test_monte_carlo_rejects_bad_input():
    params = ChannelParams(0.04, 0.0, shots=100)
    with pytest.raises(ValueError):
        receivers.monte_carlo("heterodyne", params, 10**5, 1)
    with pytest.raises(ValueError):
        receivers.monte_carlo("homodyne", params, 100, 1)
    with pytest.raises(ValueError):
        receivers.monte_carlo("majority-vote", params, 10**5, 1)


def test_monte_carlo_calibration_majority_vote():
    params = ChannelParams(0.01, 0.0, shots=51)
    exact = receivers.exact_error("majority-vote", params)
    hits = sum(
        receivers.monte_carlo("majority-vote", params, 20_000, seed).consistent_with(exact)
        for seed in range(100)
    )
    assert hits >= 99


@pytest.mark.parametrize("nb", [0.0, 0.001, 0.01, 0.1])
def test_counting_error_closed_form(nb):
    # threshold 1: P0(n >= 1) = N_B/(1+N_B), P1(n = 0) = exp(-|a|^2/(1+N_B))/(1+N_B)
    mean = 5.0
    rho0, rho1 = receivers.counting_states(ChannelParams(0.05, nb, shots=100))
    err, _ = receivers.photon_counting_error(
        fock.photon_number_distribution(rho0),
        fock.photon_number_distribution(rho1),
        ThresholdPolicy.fixed(1),
    )
    expected = 0.5 * (nb / (1 + nb) + math.exp(-mean / (1 + nb)) / (1 + nb))
    assert err == pytest.approx(expected, rel=1e-9)
