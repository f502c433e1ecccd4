import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from maxmin_ident import (
    Anchor,
    Exponential,
    MaximaReconstructor,
    MinimaReconstructor,
    MinMaxReconstructor,
    ScaledExtremesReconstructor,
    ScaleVectors,
    Uniform,
    ValidationError,
    independent_generator,
    sample_scaled_maxima,
    sample_shared_component,
)

U = Uniform()


def test_get_params_and_clone():
    est = MinMaxReconstructor(anchor=(0.5, 0.5), grid_count=50)
    params = est.get_params()
    assert params["anchor"] == (0.5, 0.5) and params["grid_count"] == 50
    twin = clone(est)
    assert twin.get_params() == params and twin is not est
    est.set_params(grid_count=20)
    assert est.grid_count == 20


def test_maxima_fit_transform():
    X = sample_shared_component(U, U, U, 10**5, seed=0).pairs
    est = MaximaReconstructor(grid=np.linspace(0.1, 0.9, 41)).fit(X)
    assert est.n_samples_ == 10**5 and len(est.components_) == 3
    out = est.transform([0.25, 0.5, 0.75])
    assert out.shape == (3, 3)
    assert np.abs(out - np.array([0.25, 0.5, 0.75])[:, None]).max() < 0.05
    assert est.error_budget_ == pytest.approx(est.report_.extras["error_budget"])
    assert est.fit_transform(X).shape == (41, 3)


def test_default_grid_from_sample_quantiles():
    X = sample_shared_component(U, U, U, 20000, seed=1, scheme="minima3").pairs
    est = MinimaReconstructor(grid_count=30).fit(X)
    lo, hi = np.quantile(X, [0.01, 0.99])
    assert est.grid_.points[0] == pytest.approx(lo) and est.grid_.points[-1] == pytest.approx(hi)
    assert est.grid_.points.size == 30


def test_minmax_needs_anchor():
    X = sample_shared_component(U, U, U, 1000, seed=2, scheme="minmax3").pairs
    with pytest.raises(ValidationError, match="anchor required"):
        MinMaxReconstructor().fit(X)
    est = MinMaxReconstructor(anchor=Anchor(0.5, 0.5), grid=np.linspace(0.2, 0.8, 13)).fit(X)
    assert est.transform(np.array([[0.5]]))[0, 0] == 0.5


def test_scaled_estimator():
    e1, e2 = Exponential(1), Exponential(2)
    X = sample_scaled_maxima((e1, e2), ScaleVectors((1, 1), (1, 2)), 10**5, seed=3).pairs
    est = ScaledExtremesReconstructor(a=(1, 1), b=(1, 2), grid=np.linspace(0.2, 1.5, 30)).fit(X)
    pts = np.linspace(0.2, 1.5, 30)
    truth = np.column_stack([e1.cdf(pts), e2.cdf(pts)])
    assert np.abs(est.transform(pts) - truth).max() < 0.08
    with pytest.raises(ValidationError):
        ScaledExtremesReconstructor(scheme="median").fit(X)


def test_not_fitted_and_bad_input():
    with pytest.raises(NotFittedError):
        MaximaReconstructor().transform([0.5])
    with pytest.raises(ValidationError):
        MaximaReconstructor().fit(np.ones((10, 3)))
    with pytest.raises(ValueError):
        MaximaReconstructor().fit(np.array([[np.nan, 1.0]]))
    with pytest.raises(ValidationError):
        MaximaReconstructor(generator="independent").fit(np.ones((5, 2)))
    est = MaximaReconstructor(generator=independent_generator(3), grid=[0.2, 0.5, 0.8])
    est.fit(sample_shared_component(U, U, U, 5000, seed=4).pairs)
    with pytest.raises(ValidationError):
        est.transform(np.ones((3, 2)))
    with pytest.raises(ValidationError):
        est.transform([np.nan])
