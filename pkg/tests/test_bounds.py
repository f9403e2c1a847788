import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qidetect import bounds, fock
from qidetect.bounds import (
    ChannelParams,
    FormulaId,
    MarginPolicy,
    Regime,
    RegimeNotApplicable,
    classify_regime,
)


def test_params_validation():
    for bad in (dict(kappa=0.0, n_b=0), dict(kappa=1.5, n_b=0), dict(kappa=0.1, n_b=-1),
                dict(kappa=0.1, n_b=0, modes=0), dict(kappa=0.1, n_b=0, shots=0)):
        with pytest.raises(ValueError):
            ChannelParams(**bad)
    with pytest.raises(ValueError):
        MarginPolicy(1.5)


def test_classify_qi_good():
    reg = classify_regime(ChannelParams(0.01, 1e-5, 100), "qi", MarginPolicy(10))
    assert reg.label is Regime.GOOD
    chk = reg.check("kappa>>floor")
    assert chk.lhs == pytest.approx(1e-6) and chk.satisfied


def test_classify_qi_bad():
    reg = classify_regime(ChannelParams(1e-4, 0.01, 10), "qi")
    assert reg.label is Regime.BAD


def test_classify_outside_model():
    assert classify_regime(ChannelParams(0.5, 0.0), "qi").label is Regime.OUTSIDE
    assert classify_regime(ChannelParams(0.01, 0.2, 1), "sp").label is Regime.OUTSIDE


def test_classify_ambiguous():
    # kappa ~ N_B: neither kappa >> N_B nor kappa << N_B at factor 10
    assert classify_regime(ChannelParams(1e-3, 1e-3, 1), "sp").label is Regime.AMBIGUOUS


def test_qi_bound_branches():
    good = bounds.qi_bound(ChannelParams(0.01, 1e-5, 100, 10_000))
    assert good.exponent_per_shot == 0.01
    assert good.bound == pytest.approx(math.exp(-100) / 2, rel=1e-12)
    assert good.formula_id is FormulaId.QI_GOOD
    bad = bounds.qi_bound(ChannelParams(1e-4, 0.01, 10))
    assert bad.exponent_per_shot == pytest.approx(1.25e-6, rel=1e-12)
    with pytest.raises(RegimeNotApplicable) as info:
        bounds.qi_bound(ChannelParams(0.5, 0.0))
    assert info.value.regime.label is Regime.OUTSIDE


def test_sp_bound_branches():
    assert bounds.sp_bound(ChannelParams(0.01, 1e-5, 100)).exponent_per_shot == 0.01
    bad = bounds.sp_bound(ChannelParams(1e-4, 0.01, 10))
    assert bad.exponent_per_shot == pytest.approx(1.25e-7, rel=1e-12)
    qi = bounds.qi_bound(ChannelParams(1e-4, 0.01, 10))
    assert qi.exponent_per_shot / bad.exponent_per_shot == pytest.approx(10, rel=1e-15)
    with pytest.raises(RegimeNotApplicable):
        bounds.sp_bound(ChannelParams(1e-3, 1e-3, 1))


def test_cs_bound():
    assert bounds.cs_bound(ChannelParams(0.3, 0.0)).exponent_per_shot == 0.3
    assert bounds.cs_bound(ChannelParams(0.01, 1.0)).exponent_per_shot == pytest.approx(
        0.0017157287525381, rel=1e-12
    )


def test_cs_bound_matches_quantum_chernoff():
    from qidetect.chernoff import quantum_chernoff

    kappa, nb = 0.02, 0.1
    t = fock.TruncationConfig(fock.adequate_dim(math.sqrt(kappa), nb))
    oracle = quantum_chernoff(fock.thermal_state(nb, t), fock.displaced_thermal_state(math.sqrt(kappa), nb, t))
    assert bounds.cs_bound(ChannelParams(kappa, nb)).exponent_per_shot == pytest.approx(
        oracle.exponent, rel=0.02
    )


def test_cs_single_shot_error():
    assert bounds.cs_single_shot_error(1e-300) == pytest.approx(0.5, abs=1e-12)
    assert bounds.cs_single_shot_error(0.01) == pytest.approx(0.45012473997353025, abs=1e-15)
    assert bounds.cs_single_shot_error(0.01) == pytest.approx(0.45, abs=1e-3)
    t = fock.TruncationConfig(30)
    helstrom = fock.helstrom_error(fock.vacuum(t), fock.coherent_state(0.2, t).density())
    assert bounds.cs_single_shot_error(0.04) == pytest.approx(helstrom, abs=1e-10)
    assert bounds.cs_single_shot_error_approx(0.01) == pytest.approx(0.45)
    with pytest.raises(ValueError):
        bounds.cs_single_shot_error(0.0)


def test_majority_vote_bound():
    res = bounds.majority_vote_bound(0.5, 33)
    assert res.bound == 0.5 and res.exponent_per_shot == 0.0
    res = bounds.majority_vote_bound(0.45, 101)
    assert math.exp(-res.exponent_per_shot) == pytest.approx(0.99498743710662, rel=1e-12)
    assert res.bound == pytest.approx(0.30098671808756694, rel=1e-12)
    kappa = 1e-4
    res = bounds.majority_vote_bound((1 - math.sqrt(kappa)) / 2, 1)
    assert res.exponent_per_shot == pytest.approx(5.000250016667366e-05, rel=1e-9)
    assert res.exponent_per_shot == pytest.approx(kappa / 2, rel=1e-4)


def test_majority_vote_exponent_with_exact_single_shot_is_half_kappa():
    # 4 p (1 - p) = e^{-kappa} when p is the exact single-shot Helstrom error
    for kappa in (1e-6, 1e-3, 0.1, 1.0):
        p = bounds.cs_single_shot_error(kappa)
        assert bounds.majority_vote_exponent(p) == pytest.approx(kappa / 2, rel=1e-8)


def test_homodyne_bound():
    assert bounds.homodyne_bound(ChannelParams(0.2, 0.0)).exponent_per_shot == 0.1
    assert bounds.homodyne_bound(ChannelParams(0.1, 0.5)).exponent_per_shot == pytest.approx(0.025)


kappas = st.floats(1e-6, 0.1)
noises = st.floats(1e-8, 0.1)
modes = st.sampled_from([1, 2, 10, 100, 1000])


@settings(max_examples=300, deadline=None)
@given(kappas, noises, modes, st.integers(1, 10**6))
def test_bound_invariants(kappa, nb, m, n):
    params = ChannelParams(kappa, nb, m, n)
    results = [bounds.cs_bound(params), bounds.homodyne_bound(params)]
    qi = sp = None
    try:
        qi = bounds.qi_bound(params)
        results.append(qi)
    except RegimeNotApplicable:
        pass
    try:
        sp = bounds.sp_bound(params)
        results.append(sp)
    except RegimeNotApplicable:
        pass
    for r in results:
        assert r.exponent_per_shot >= 0
        assert 0 <= r.bound <= 0.5
        assert r.bound == pytest.approx(math.exp(-n * r.exponent_per_shot) / 2, abs=1e-12)
    if qi and sp and qi.regime.label is Regime.GOOD and sp.regime.label is Regime.GOOD:
        assert qi.exponent_per_shot == sp.exponent_per_shot == kappa
    if qi and sp and qi.regime.label is Regime.BAD and sp.regime.label is Regime.BAD:
        assert qi.exponent_per_shot == m * sp.exponent_per_shot
    cs = results[0].exponent_per_shot
    if qi and nb <= 1e-3:
        assert cs >= qi.exponent_per_shot * (1 - 2 * math.sqrt(nb))


def _gap(nb):
    p = ChannelParams(0.01, nb)
    return bounds.cs_bound(p).exponent_per_shot / bounds.homodyne_bound(p).exponent_per_shot


def test_homodyne_gap_tends_to_two():
    # the ratio (4 N_B + 2)(sqrt(N_B + 1) - sqrt(N_B))^2 leaves [1.9, 2] just above N_B = 6e-4
    for nb in np.geomspace(1e-12, 5e-4, 20):
        assert 1.9 <= _gap(nb) <= 2.0
    assert _gap(1e-12) == pytest.approx(2.0, abs=1e-5)
    assert _gap(1e-3) == pytest.approx(2.004 * (math.sqrt(1.001) - math.sqrt(1e-3)) ** 2, rel=1e-12)


def test_exponents_decrease_with_noise():
    nbs = np.linspace(0, 5, 200)
    cs = [bounds.cs_exponent(0.05, nb) for nb in nbs]
    hom = [bounds.homodyne_exponent(0.05, nb) for nb in nbs]
    assert np.all(np.diff(cs) < 0)
    assert np.all(np.diff(hom) < 0)
