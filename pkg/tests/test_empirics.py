import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxmin_ident import (
    Anchor,
    Exponential,
    Grid,
    ScaleVectors,
    SampleBatch,
    Uniform,
    ValidationError,
    dkw_bound,
    empirical_law,
    fgm_generator,
    independent_generator,
    joint_cdf_maxima,
    plugin_reconstruct,
    sample_scaled_maxima,
    sample_scaled_minima,
    sample_shared_component,
)
from maxmin_ident.empirics import _DominanceCounter, worker_count

U = Uniform()
E1, E2, E3 = Exponential(1), Exponential(2), Exponential(3)

# Closed form sqrt(ln(2/alpha)/(2n)), frozen.
DKW_20000 = 0.009603227913199208
DKW_1 = 1.3581015157406195


def test_sampling_is_deterministic():
    a = sample_shared_component(U, U, U, 4, seed=11)
    b = sample_shared_component(U, U, U, 4, seed=11)
    assert len(a) == 4
    np.testing.assert_array_equal(a.pairs, b.pairs)
    assert not np.array_equal(a.pairs, sample_shared_component(U, U, U, 4, seed=12).pairs)


def test_sampling_independent_of_thread_count(monkeypatch):
    n = 3 * (1 << 16) + 17
    monkeypatch.setenv("MAXMIN_IDENT_THREADS", "1")
    one = sample_shared_component(E1, E2, E3, n, seed=5, scheme="minmax3", theta=0.4)
    monkeypatch.setenv("MAXMIN_IDENT_THREADS", "4")
    four = sample_shared_component(E1, E2, E3, n, seed=5, scheme="minmax3", theta=0.4)
    np.testing.assert_array_equal(one.pairs, four.pairs)


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("MAXMIN_IDENT_THREADS", "2")
    assert worker_count(8) == 2
    monkeypatch.setenv("MAXMIN_IDENT_THREADS", "zero")
    with pytest.raises(ValidationError):
        worker_count()


def test_maxima_sample_matches_law():
    batch = sample_shared_component(U, U, U, 10**5, seed=1)
    assert abs(empirical_law(batch)(0.5, 0.5) - 0.125) < 0.006


def test_minmax_sample_matches_rectangle():
    batch = sample_shared_component(U, U, U, 10**5, seed=2, scheme="minmax3")
    law = empirical_law(batch)
    assert law.mode == "rectangle"
    assert abs(law(0.25, 0.75) - 0.28125) < 0.006


def test_minima_sample_matches_survival():
    batch = sample_shared_component(U, U, U, 10**5, seed=3, scheme="minima3")
    assert abs(empirical_law(batch)(0.5, 0.5) - 0.125) < 0.006


def test_scaled_sample_matches_law():
    sv = ScaleVectors((1, 1), (1, 2))
    batch = sample_scaled_maxima((U, U), sv, 10**5, seed=4)
    assert abs(empirical_law(batch)(0.5, 0.8) - 0.2) < 0.006
    np.testing.assert_array_equal(batch.pairs, sample_scaled_maxima((U, U), sv, 10**5, seed=4).pairs)


def test_scaled_single_component_is_degenerate():
    one = ScaleVectors((1,), (1,))
    for sampler in (sample_scaled_maxima, sample_scaled_minima):
        batch = sampler((E1,), one, 100, seed=0)
        np.testing.assert_array_equal(batch.y1, batch.y2)


def test_fgm_sampler_matches_generator_law():
    fs = (E1, E2, E3)
    batch = sample_shared_component(*fs, 10**5, seed=9, theta=0.8)
    G = joint_cdf_maxima(*fs, fgm_generator(fs, 0.8))
    emp = empirical_law(batch)
    pts = np.array([0.3, 0.8, 1.5])
    A, B = np.meshgrid(pts, pts, indexing="ij")
    assert np.abs(emp(A, B) - G(A, B)).max() < 0.006
    # at (0.3, 0.3) the dependence shifts the law by ~0.009, about 10 binomial sd
    G0 = joint_cdf_maxima(*fs, independent_generator(3))
    assert abs(emp(0.3, 0.3) - G(0.3, 0.3)) < 0.003
    assert abs(G0(0.3, 0.3) - G(0.3, 0.3)) > 0.008


def test_empirical_law_counting():
    batch = SampleBatch(np.array([[0.2, 0.3], [0.6, 0.7]]), seed=0, scheme="maxima3")
    cdf = empirical_law(batch, "cdf")
    assert cdf(0.5, 0.5) == 0.5
    assert cdf(math.inf, math.inf) == 1.0
    assert empirical_law(batch, "survival")(-math.inf, -math.inf) == 1.0
    assert empirical_law(batch, "rectangle")(0.5, 0.8) == 0.5
    assert cdf.marginal(1)(0.2) == 0.5


def test_empirical_law_rejects_bad_input():
    with pytest.raises(ValidationError):
        SampleBatch(np.empty((0, 2)), seed=0, scheme="maxima3")
    batch = SampleBatch(np.array([[0.0, 1.0]]), seed=0, scheme="maxima3")
    with pytest.raises(ValidationError):
        empirical_law(batch, "density")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.integers(0, 2**32 - 1))
def test_dominance_counter_matches_brute_force(n, seed):
    rng = np.random.default_rng(seed)
    # rounding forces ties
    x, y = np.round(rng.random(n), 1), np.round(rng.random(n), 1)
    qx, qy = np.round(rng.uniform(-0.1, 1.1, 60), 1), np.round(rng.uniform(-0.1, 1.1, 60), 1)
    brute = ((x[None, :] <= qx[:, None]) & (y[None, :] <= qy[:, None])).sum(axis=1)
    np.testing.assert_array_equal(_DominanceCounter(x, y).count(qx, qy), brute)


def test_empirical_law_monotone():
    batch = sample_shared_component(E1, E2, E3, 2000, seed=8)
    law = empirical_law(batch)
    pts = np.linspace(0, 4, 30)
    A, B = np.meshgrid(pts, pts, indexing="ij")
    vals = law(A, B)
    assert np.all(np.diff(vals, axis=0) >= 0) and np.all(np.diff(vals, axis=1) >= 0)
    assert vals.min() >= 0 and vals.max() <= 1


def test_dkw_examples():
    assert dkw_bound(20000, 0.05) == pytest.approx(DKW_20000, rel=1e-15)
    assert dkw_bound(1, 0.05) == pytest.approx(DKW_1, rel=1e-15)
    assert dkw_bound(10**5, 0.05) == pytest.approx(0.00430, abs=1e-5)
    assert dkw_bound(100) > dkw_bound(1000)
    for bad in (0.0, 1.0):
        with pytest.raises(ValidationError):
            dkw_bound(10, bad)


def test_plugin_maxima_round_trip():
    batch = sample_shared_component(U, U, U, 10**5, seed=21)
    grid = Grid.linspace(0.1, 0.9, 81)
    rep = plugin_reconstruct(batch, grid, truth=(U, U, U))
    assert max(rep.sup_errors) < 0.05
    assert rep.extras["dkw_bound"] == pytest.approx(dkw_bound(10**5))
    assert rep.extras["error_budget"] == pytest.approx(5 * dkw_bound(10**5))
    assert not rep.extras["vacuous"]


def test_plugin_scaled_round_trip():
    sv = ScaleVectors((1, 1), (1, 2))
    batch = sample_scaled_maxima((E1, E2), sv, 10**5, seed=22)
    lo, hi = max(E1.quantile(0.1), E2.quantile(0.1)), min(E1.quantile(0.9), E2.quantile(0.9))
    rep = plugin_reconstruct(batch, Grid.linspace(lo, hi, 60), scales=sv, truth=(E1, E2))
    assert max(rep.sup_errors) < 0.08


def test_plugin_minmax_and_minima_round_trip():
    batch = sample_shared_component(U, U, U, 10**5, seed=23, scheme="minmax3")
    rep = plugin_reconstruct(batch, Grid.linspace(0.1, 0.9, 41), anchor=Anchor(0.5, 0.5), truth=(U, U, U))
    assert max(rep.sup_errors) < 0.05
    batch = sample_shared_component(U, U, U, 10**5, seed=24, scheme="minima3")
    rep = plugin_reconstruct(batch, Grid.linspace(0.1, 0.9, 41), truth=(U, U, U))
    assert max(rep.sup_errors) < 0.05


def test_plugin_flags_vacuous_budget():
    batch = sample_shared_component(U, U, U, 10, seed=0)
    rep = plugin_reconstruct(batch, Grid.linspace(0.1, 0.9, 5))
    assert rep.extras["vacuous"]
    assert any("vacuous" in n for n in rep.notes)


def test_plugin_scaled_requires_scales():
    batch = sample_scaled_maxima((E1, E2), ScaleVectors((1, 1), (1, 2)), 100, seed=0)
    with pytest.raises(ValidationError):
        plugin_reconstruct(batch, Grid.linspace(0.1, 1, 5))


def test_empirical_cdf_converges_at_root_n_rate():
    G = joint_cdf_maxima(E1, E2, E3, independent_generator(3))
    pts = np.linspace(0.1, 3, 25)
    A, B = np.meshgrid(pts, pts, indexing="ij")
    truth = G(A, B)
    ratios = []
    for seed in range(20):
        small = sample_shared_component(E1, E2, E3, 10**4, seed=seed)
        big = sample_shared_component(E1, E2, E3, 4 * 10**4, seed=1000 + seed)
        e_small = np.abs(empirical_law(small)(A, B) - truth).max()
        e_big = np.abs(empirical_law(big)(A, B) - truth).max()
        ratios.append(e_small / e_big)
    assert 1.4 <= float(np.mean(ratios)) <= 2.9


def test_batch_csv_footer():
    text = sample_shared_component(U, U, U, 3, seed=7).to_csv()
    lines = text.splitlines()
    assert lines[0] == "y1,y2" and len(lines) == 5
    assert lines[-1] == "#summary,scheme=maxima3,n=3,seed=7"
    a, b = lines[1].split(",")
    assert float(a) == sample_shared_component(U, U, U, 3, seed=7).pairs[0, 0]
