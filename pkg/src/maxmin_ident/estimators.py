"""scikit-learn style front end for plug-in reconstruction from samples.

Each estimator is fitted on an ``(n, 2)`` array of observed pairs
``(Y1, Y2)`` and exposes the recovered component CDFs through
``transform``, which maps evaluation points to a column of CDF values per
component.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_count
from .dependence import PointGenerator, RectGenerator
from .dist_core import Grid
from .empirics import SampleBatch, plugin_reconstruct
from .exceptions import ValidationError
from .forward_model import ScaleVectors
from .reconstruct import Anchor

__all__ = [
    "MaximaReconstructor",
    "MinimaReconstructor",
    "MinMaxReconstructor",
    "ScaledExtremesReconstructor",
]


class _BaseReconstructor(TransformerMixin, BaseEstimator):
    """Shared fit/transform logic; subclasses fix the scheme."""

    _scheme = None

    def _grid(self, pairs):
        if self.grid is not None:
            return self.grid if isinstance(self.grid, Grid) else Grid(self.grid)
        count = check_count(self.grid_count, "grid_count", minimum=2)
        lo, hi = np.quantile(pairs, [0.01, 0.99])
        if not hi > lo:
            raise ValidationError("sample has no spread; pass an explicit grid")
        return Grid.linspace(lo, hi, count)

    def _recover(self, batch, grid):
        return plugin_reconstruct(batch, grid, generator=self.generator, alpha=self.alpha)

    def fit(self, X, y=None):
        """Estimate the components from observed pairs ``X`` of shape ``(n, 2)``."""
        pairs = check_array(X, dtype=np.float64, ensure_min_samples=1)
        if pairs.shape[1] != 2:
            raise ValidationError(f"expected pairs (n, 2), got shape {pairs.shape}")
        batch = SampleBatch(pairs, seed=-1, scheme=self._scheme)
        grid = self._grid(pairs)
        self.report_ = self._recover(batch, grid)
        self.components_ = list(self.report_.recovered)
        self.grid_ = grid
        self.n_samples_ = pairs.shape[0]
        self.error_budget_ = self.report_.extras["error_budget"]
        return self

    def transform(self, X):
        """CDF values of each recovered component at the points in ``X``.

        ``X`` is a 1-d array of points or a single-column 2-d array; the
        result has one column per component.
        """
        check_is_fitted(self, "components_")
        pts = np.asarray(X, dtype=float)
        if pts.ndim == 2:
            if pts.shape[1] != 1:
                raise ValidationError("transform expects a single column of evaluation points")
            pts = pts[:, 0]
        pts = check_array(pts.reshape(-1, 1), dtype=np.float64, ensure_all_finite=False)[:, 0]
        if np.isnan(pts).any():
            raise ValidationError("NaN is not a valid evaluation point")
        return np.column_stack([np.asarray(c.cdf(pts)) for c in self.components_])

    def fit_transform(self, X, y=None, **fit_params):
        """Fit on pairs, then evaluate the components at the fitted grid."""
        return self.fit(X, y).transform(self.grid_.points)


class MaximaReconstructor(_BaseReconstructor):
    """Recover ``F0, F1, F2`` from pairs ``(max(X0, X1), max(X0, X2))``.

    Parameters
    ----------
    generator : PointGenerator, optional
        Max-independence generator of the triple; independent if omitted.
    grid : array_like or Grid, optional
        Evaluation grid.  Defaults to ``grid_count`` points between the 1%
        and 99% quantiles of the pooled sample.
    grid_count : int
    alpha : float
        DKW confidence level for the reported error budget.
    """

    _scheme = "maxima3"

    def __init__(self, generator=None, grid=None, grid_count=200, alpha=0.05):
        self.generator = generator
        self.grid = grid
        self.grid_count = grid_count
        self.alpha = alpha

    def fit(self, X, y=None):
        if self.generator is not None and not isinstance(self.generator, PointGenerator):
            raise ValidationError("generator must be a PointGenerator")
        return super().fit(X, y)


class MinimaReconstructor(MaximaReconstructor):
    """Recover the components from pairs ``(min(X0, X1), min(X0, X2))``."""

    _scheme = "minima3"


class MinMaxReconstructor(_BaseReconstructor):
    """Recover the components from pairs ``(min(X0, X1), max(X0, X2))``.

    Parameters
    ----------
    anchor : Anchor or tuple
        Known point ``(x0, q)`` with ``F0(x0) = q``; required.
    generator : RectGenerator, optional
    grid, grid_count, alpha
        As in :class:`MaximaReconstructor`.
    """

    _scheme = "minmax3"

    def __init__(self, anchor=None, generator=None, grid=None, grid_count=200, alpha=0.05):
        self.anchor = anchor
        self.generator = generator
        self.grid = grid
        self.grid_count = grid_count
        self.alpha = alpha

    def _recover(self, batch, grid):
        if self.anchor is None:
            raise ValidationError("anchor required for min/max recovery")
        anchor = self.anchor if isinstance(self.anchor, Anchor) else Anchor(*self.anchor)
        if self.generator is not None and not isinstance(self.generator, RectGenerator):
            raise ValidationError("generator must be a RectGenerator")
        return plugin_reconstruct(batch, grid, generator=self.generator, anchor=anchor, alpha=self.alpha)


class ScaledExtremesReconstructor(_BaseReconstructor):
    """Recover ``n`` components from ``(max_i a_i X_i, max_i b_i X_i)`` pairs.

    Parameters
    ----------
    a, b : sequence of float
        Positive scale vectors with pairwise distinct ratios ``b_i / a_i``.
    scheme : {"max", "min"}
        Maxima or minima of the scaled variables.
    generator : PointGenerator, optional
    grid, grid_count, alpha
        As in :class:`MaximaReconstructor`.
    """

    def __init__(self, a=(1.0, 1.0), b=(1.0, 2.0), scheme="max", generator=None, grid=None, grid_count=200, alpha=0.05):
        self.a = a
        self.b = b
        self.scheme = scheme
        self.generator = generator
        self.grid = grid
        self.grid_count = grid_count
        self.alpha = alpha

    @property
    def _scheme(self):
        if self.scheme not in ("max", "min"):
            raise ValidationError(f"scheme must be 'max' or 'min', got {self.scheme!r}")
        return "scaled_max_n" if self.scheme == "max" else "scaled_min_n"

    def _recover(self, batch, grid):
        sv = ScaleVectors(tuple(self.a), tuple(self.b))
        return plugin_reconstruct(batch, grid, generator=self.generator, scales=sv, alpha=self.alpha)
