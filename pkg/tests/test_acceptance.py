"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line."""

import time

import numpy as np
import pytest

from maxmin_ident import (
    MIN_INDEPENDENT,
    Anchor,
    Exponential,
    Grid,
    GridCdf,
    Gumbel,
    ScaleVectors,
    Uniform,
    Weibull,
    check_uniqueness,
    dkw_bound,
    fgm_generator,
    fgm_rect_generator,
    independent_generator,
    joint_cdf_maxima,
    joint_cdf_scaled_maxima,
    joint_survival_minima,
    joint_survival_scaled_minima,
    lift_to_rect,
    minmax_law,
    plugin_reconstruct,
    recover_from_maxima,
    recover_from_minima,
    recover_from_minmax,
    recover_scaled_extremes,
    sample_shared_component,
    shared_component_generator,
    shared_component_triple,
    single_max_nonuniqueness_demo,
    validate_generator,
)
from maxmin_ident.runner import _probe_grid, random_model_pair

pytestmark = pytest.mark.acceptance

U = Uniform()


def _weibull_or_exp(k, s):
    return Exponential(1.0 / s) if k == 1.0 else Weibull(k, s)


def _positive(rng):
    if rng.random() < 0.5:
        return Exponential(float(rng.uniform(0.4, 3.0)))
    return Weibull(float(rng.uniform(0.7, 3.0)), float(rng.uniform(0.5, 2.0)))


def _ratio_is_cdf(log_num, log_den, pts, decreasing=False):
    """``num / den`` is monotone on ``pts``: the latent factor divides out."""
    with np.errstate(divide="ignore"):
        lnum, lden = log_num(pts), log_den(pts)
    keep = np.isfinite(lnum) & np.isfinite(lden)
    r = lnum[keep] - lden[keep]
    d = np.diff(-r if decreasing else r)
    return bool(np.all(d >= -1e-12 * np.maximum(1.0, np.abs(r[1:]))))


def _triple(rng, shared, minima):
    """Random triple with common support plus a generator for it.

    Shared-component generators use a latent law ``H`` for which ``F_i / H``
    (maxima) or ``S_i / S_H`` (minima) is again a distribution, so the
    construction ``max(W, Z_i)`` / ``min(W, Z_i)`` exists exactly.
    """
    kind = MIN_INDEPENDENT if minima else None
    uniform = rng.random() < 0.2
    if uniform:
        fs = (U, U, U)
    elif shared:
        k = float(rng.choice([1.0, float(rng.uniform(1.0, 3.0))]))
        s1, s2 = rng.uniform(0.5, 2.0, 2)
        fs = (_positive(rng), _weibull_or_exp(k, float(s1)), _weibull_or_exp(k, float(s2)))
    else:
        fs = tuple(_positive(rng) for _ in range(3))
    if not shared:
        g = independent_generator(3, kind) if minima else independent_generator(3)
        return fs, g, "independent"
    if uniform:
        latent = Uniform(0.0, float(rng.uniform(1.2, 3.0))) if minima else Uniform(0.0, float(rng.uniform(0.2, 0.8)))
    elif minima:
        latent = _weibull_or_exp(k, 2.0 * float(max(s1, s2)))
    else:
        latent = _weibull_or_exp(k, 0.5 * float(min(s1, s2)))
    pts = np.linspace(1e-3, 6, 4000)
    for f in fs[1:]:
        if minima:
            assert _ratio_is_cdf(f.logsf, latent.logsf, pts, decreasing=True)
        else:
            assert _ratio_is_cdf(f.logcdf, latent.logcdf, pts)
    g = shared_component_triple(latent, kind) if minima else shared_component_triple(latent)
    return fs, g, "shared_component"


def _central_grid(fs, lo=0.05, hi=0.95, count=200):
    return Grid.linspace(min(float(f.quantile(lo)) for f in fs), max(float(f.quantile(hi)) for f in fs), count)


def _round_trip_suite(minima):
    rng = np.random.default_rng(20240601 + int(minima))
    worst, worst_case = 0.0, ""
    start = time.perf_counter()
    for i in range(25):
        fs, g, name = _triple(rng, shared=bool(i % 2), minima=minima)
        grid = _central_grid(fs)
        if minima:
            rep = recover_from_minima(joint_survival_minima(*fs, g), g, grid, truth=fs)
        else:
            rep = recover_from_maxima(joint_cdf_maxima(*fs, g), g, grid, truth=fs)
        err = max(rep.errors_on_quantile_range(0.05, 0.95))
        if err >= worst:
            worst, worst_case = err, f"{name} {fs}"
    return worst, worst_case, time.perf_counter() - start


def test_criterion_1_maxima_round_trip(criterion):
    worst, case, elapsed = _round_trip_suite(minima=False)
    ok = worst < 1e-9 and elapsed < 5.0
    criterion(1, ok, f"maxima round trip, 25 triples, worst sup error {worst:.3g} ({case}), {elapsed:.2f} s")
    assert ok


def test_criterion_2_minima_round_trip(criterion):
    worst, case, elapsed = _round_trip_suite(minima=True)
    ok = worst < 1e-9 and elapsed < 5.0
    criterion(2, ok, f"minima round trip, 25 triples, worst sup error {worst:.3g} ({case}), {elapsed:.2f} s")
    assert ok


def test_criterion_3_minmax_anchor(criterion):
    fixtures = []
    for fs in ((U, U, U), (Exponential(1), Exponential(2), Exponential(3)), (Exponential(0.7), Exponential(1.5), Exponential(0.4))):
        fixtures.append((fs, lift_to_rect(independent_generator(3))))
        fixtures.append((fs, fgm_rect_generator(fs, 0.6)))
    worst_err, worst_drift = 0.0, 0.0
    for fs, g in fixtures:
        law = minmax_law(*fs, g)
        grid = _central_grid(fs, count=150)
        f0 = []
        for u in (0.3, 0.5, 0.7):
            rep = recover_from_minmax(law, g, Anchor.at_quantile(fs[0], u), grid, truth=fs)
            worst_err = max(worst_err, *rep.errors_on_quantile_range(0.05, 0.95))
            f0.append(rep.recovered[0].values)
        worst_drift = max(worst_drift, max(float(np.abs(v - f0[1]).max()) for v in f0))
    ok = worst_err < 1e-8 and worst_drift < 1e-8
    criterion(3, ok, f"min/max anchors 0.3/0.5/0.7, worst sup error {worst_err:.3g}, anchor drift {worst_drift:.3g}")
    assert ok


def test_criterion_4_scaled_maxima(criterion):
    rng = np.random.default_rng(7)
    worst, steps = 0.0, 0
    start = time.perf_counter()
    for c in ((1.0, 2.0), (1.0, 2.0, 4.0), (1.0, 1.5, 2.5, 4.0)):
        for gen in ("independent", "fgm"):
            n = len(c)
            fs = tuple(_positive(rng) for _ in range(n))
            a = rng.uniform(0.5, 2.0, n)
            perm = rng.permutation(n)
            sv = ScaleVectors(tuple(a), tuple(a * np.asarray(c)[perm]))
            g = independent_generator(n) if gen == "independent" else fgm_generator(fs, float(rng.uniform(-0.8, 0.8)))
            grid = _central_grid(fs, count=150)
            rep = recover_scaled_extremes(joint_cdf_scaled_maxima(fs, sv, g), sv, g, grid, truth=fs)
            worst = max(worst, *rep.errors_on_quantile_range(0.05, 0.95))
            steps = max(steps, rep.iterations)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and steps <= 200 and elapsed < 10.0
    criterion(4, ok, f"scaled maxima n=2,3,4, worst sup error {worst:.3g}, max steps {steps}, {elapsed:.2f} s")
    assert ok


def test_criterion_5_real_line(criterion):
    fs = (Gumbel(-0.5, 1.0), Gumbel(0.0, 1.0), Gumbel(0.7, 1.3))
    sv = ScaleVectors((1.0, 1.0, 1.0), (1.0, 2.0, 4.0))
    grid = Grid.linspace(-4.0, 6.0, 201)
    neg = grid.points < 0
    worst, worst_neg = 0.0, 0.0
    for g in (independent_generator(3), fgm_generator(fs, 0.5)):
        rep = recover_scaled_extremes(joint_cdf_scaled_maxima(fs, sv, g), sv, g, grid, truth=fs)
        worst = max(worst, *rep.sup_errors)
        for rec, t in zip(rep.recovered, fs):
            worst_neg = max(worst_neg, float(np.abs(rec.values[neg] - t.cdf(grid.points[neg])).max()))
    ok = worst < 1e-6 and worst_neg < 1e-6 and neg.sum() > 0
    criterion(5, ok, f"gumbel n=3 on [-4, 6], sup error {worst:.3g}, on t<0 {worst_neg:.3g} ({int(neg.sum())} points)")
    assert ok


def test_criterion_6_min_mirror(criterion):
    fs = (Exponential(1.0), Weibull(1.5, 2.0), Exponential(0.5))
    sv = ScaleVectors((1.0, 2.0, 1.0), (1.0, 1.0, 3.0))
    g = fgm_generator(fs, -0.5, MIN_INDEPENDENT)
    rep = recover_scaled_extremes(joint_survival_scaled_minima(fs, sv, g), sv, g, _central_grid(fs, count=150), scheme="min", truth=fs)
    worst = max(rep.errors_on_quantile_range(0.05, 0.95))
    ok = worst < 1e-6
    criterion(6, ok, f"scaled minima n=3, sup error {worst:.3g}, steps {rep.iterations}")
    assert ok


def test_criterion_7_uniqueness(criterion):
    rng = np.random.default_rng(77)
    base = Grid.linspace(0.05, 4.0, 25)
    counts = {}
    for scheme in ("maxima3", "minima3", "minmax3", "scaled_max_n", "scaled_min_n"):
        bad = 0
        for _ in range(200):
            law_a, law_b = random_model_pair(rng, scheme)
            bad += check_uniqueness(law_a, law_b, _probe_grid(law_a, law_b, base)).contradiction
        counts[scheme] = bad
    ok = sum(counts.values()) == 0
    criterion(7, ok, "contradictions per 200 pairs: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    assert ok


def test_criterion_8_nonuniqueness_demo(criterion):
    sq = GridCdf(Grid.linspace(0, 1, 1001), np.linspace(0, 1, 1001) ** 2)
    rec = single_max_nonuniqueness_demo(U, sq, Grid.linspace(0, 1, 101))
    y, a, b = rec.witness
    ok = rec.product_gap == 0.0 and abs(a - b) >= 0.1
    criterion(8, ok, f"product gap {rec.product_gap}, witness y={y:.3g} with |F0 - F1| = {abs(a - b):.3g}")
    assert ok


def _ks_sup(sample, cdf):
    x = np.sort(sample)
    n = x.size
    f = cdf(x)
    i = np.arange(1, n + 1)
    return float(max((i / n - f).max(), (f - (i - 1) / n).max()))


def test_criterion_9_monte_carlo(criterion):
    n = 10**5
    bound = dkw_bound(n, 0.05)
    start = time.perf_counter()
    # seeds fixed in advance; F_{Y1} = F0 F1 = y^2 on [0, 1]
    inside, worst_plugin = 0, 0.0
    for seed in range(100):
        batch = sample_shared_component(U, U, U, n, seed=seed)
        inside += _ks_sup(batch.y1, lambda y: y * y) <= bound
        if seed < 5:
            rep = plugin_reconstruct(batch, Grid.linspace(0.1, 0.9, 81), truth=(U, U, U))
            worst_plugin = max(worst_plugin, *rep.errors_on_quantile_range(0.1, 0.9))
    elapsed = time.perf_counter() - start
    ok = inside >= 95 and worst_plugin < 0.05 and elapsed < 30.0
    criterion(9, ok, f"{inside}/100 runs within DKW {bound:.5f}, plug-in sup error {worst_plugin:.3g}, {elapsed:.2f} s")
    assert ok


def _shared_component_reports():
    fixtures = ((U, Grid.linspace(0.02, 1.0, 50)), (Exponential(1.0), Grid.linspace(0.02, 6.0, 50)), (Weibull(2.0, 1.0), Grid.linspace(0.05, 3.0, 50)))
    return [(f0, validate_generator(shared_component_generator(f0), grid)) for f0, grid in fixtures]


def test_criterion_10_generator_validation(criterion):
    reps = _shared_component_reports()
    ok = all(r.positive and r.limits_ok and r.min_value >= 1.0 for _, r in reps)
    lo = min(r.min_value for _, r in reps)
    hi = max(r.max_value for _, r in reps)
    criterion(10, ok, f"shared-component generator positive with unit limits, eta range [{lo:.3g}, {hi:.3g}]")
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="generators of max-independent triples are not bounded by 1: "
    "F0(min(y1, y2)) / (F0(y1) F0(y2)) >= 1, so the (0, 1] range does not hold",
)
def test_generator_range_is_not_unit_interval():
    assert all(r.max_value <= 1.0 for _, r in _shared_component_reports())
