"""Univariate distributions on the extended real line.

Every distribution evaluates exactly at ``-inf`` and ``+inf`` (CDF 0 and 1),
so the limits ``y -> +/-inf`` used when inverting joint laws are computed by
direct evaluation rather than by large finite surrogates.  Extended reals are
plain floats; ``math.inf`` and ``-math.inf`` are the two infinities.
"""

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_array, check_open_unit, check_positive, check_strictly_increasing
from .exceptions import ValidationError

__all__ = [
    "Grid",
    "Distribution",
    "Uniform",
    "Exponential",
    "Weibull",
    "Gumbel",
    "GridCdf",
    "cdf_eval",
    "survival_eval",
    "quantile",
    "sample",
    "discretize",
    "parse_distribution",
]

# Offset keeping inverse-transform uniforms inside the open interval (0, 1).
_HALF_ULP = 2.0 ** -54


def _finish(arr, like):
    """Return a Python float for scalar input, otherwise the array."""
    if np.ndim(like) == 0:
        return float(arr)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Finite, strictly increasing set of evaluation points."""

    points: np.ndarray

    def __post_init__(self):
        pts = check_strictly_increasing(self.points).copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, lo, hi, count):
        return cls(np.linspace(lo, hi, int(count)))

    @property
    def min(self):
        return float(self.points[0])

    @property
    def max(self):
        return float(self.points[-1])

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, Grid) and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())


class Distribution(ABC):
    """Univariate law with CDF, survival function, quantile and sampler."""

    @abstractmethod
    def _cdf_finite(self, x):
        """CDF on an array of finite points."""

    @abstractmethod
    def _quantile(self, u):
        """Generalized inverse on an array of levels in (0, 1)."""

    @property
    @abstractmethod
    def literal(self):
        """Configuration literal, e.g. ``exponential(1)``."""

    def cdf(self, x):
        arr = as_float_array(x)
        out = np.empty(arr.shape, dtype=float)
        finite = np.isfinite(arr)
        out[arr == -np.inf] = 0.0
        out[arr == np.inf] = 1.0
        if finite.any():
            out[finite] = self._cdf_finite(arr[finite])
        return _finish(out, x)

    def sf(self, x):
        """Survival function, computed as ``1 - cdf(x)`` so the two sum to one."""
        arr = as_float_array(x)
        out = 1.0 - np.asarray(self.cdf(arr), dtype=float)
        return _finish(out, x)

    def logcdf(self, x):
        """``log F(x)``; ``-inf`` where the CDF vanishes."""
        arr = as_float_array(x)
        v = np.asarray(self.cdf(arr), dtype=float)
        with np.errstate(divide="ignore"):
            return _finish(np.log(v), x)

    def logsf(self, x):
        """``log(1 - F(x))``; ``-inf`` where the survival function vanishes."""
        arr = as_float_array(x)
        v = np.asarray(self.sf(arr), dtype=float)
        with np.errstate(divide="ignore"):
            return _finish(np.log(v), x)

    def quantile(self, u):
        arr = np.asarray(u, dtype=float)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise ValidationError("quantile levels must lie strictly inside (0, 1)")
        return _finish(np.asarray(self._quantile(arr), dtype=float), u)

    def sample(self, rng, size=None):
        """Inverse-transform draws; ``rng`` is a ``numpy.random.Generator``."""
        u = rng.random(size) + _HALF_ULP
        return self.quantile(u)

    def __repr__(self):
        return self.literal


@dataclass(frozen=True, repr=False)
class Uniform(Distribution):
    lo: float = 0.0
    hi: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValidationError(f"uniform needs finite lo < hi, got ({self.lo}, {self.hi})")

    def _cdf_finite(self, x):
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def _quantile(self, u):
        return self.lo + u * (self.hi - self.lo)

    @property
    def literal(self):
        return f"uniform({self.lo:g},{self.hi:g})"


@dataclass(frozen=True, repr=False)
class Exponential(Distribution):
    rate: float = 1.0

    def __post_init__(self):
        check_positive(self.rate, "rate")

    def _cdf_finite(self, x):
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)

    def _quantile(self, u):
        return -np.log1p(-u) / self.rate

    def logsf(self, x):
        arr = as_float_array(x)
        return _finish(-self.rate * np.maximum(arr, 0.0), x)

    @property
    def literal(self):
        return f"exponential({self.rate:g})"


@dataclass(frozen=True, repr=False)
class Weibull(Distribution):
    shape: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        check_positive(self.shape, "shape")
        check_positive(self.scale, "scale")

    def _cdf_finite(self, x):
        z = np.maximum(x, 0.0) / self.scale
        return np.where(x > 0, -np.expm1(-(z ** self.shape)), 0.0)

    def _quantile(self, u):
        return self.scale * (-np.log1p(-u)) ** (1.0 / self.shape)

    def logsf(self, x):
        arr = as_float_array(x)
        return _finish(-((np.maximum(arr, 0.0) / self.scale) ** self.shape), x)

    @property
    def literal(self):
        return f"weibull({self.shape:g},{self.scale:g})"


@dataclass(frozen=True, repr=False)
class Gumbel(Distribution):
    """Gumbel (maximum) law; its CDF is strictly positive on the whole line."""

    location: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.location):
            raise ValidationError("gumbel location must be finite")
        check_positive(self.scale, "scale")

    def _cdf_finite(self, x):
        return np.exp(-np.exp(-(x - self.location) / self.scale))

    def _quantile(self, u):
        return self.location - self.scale * np.log(-np.log(u))

    def logcdf(self, x):
        # closed form avoids underflow of exp(-exp(.)) far in the left tail
        arr = as_float_array(x)
        with np.errstate(over="ignore"):
            out = -np.exp(-(arr - self.location) / self.scale)
        return _finish(out, x)

    def logsf(self, x):
        arr = as_float_array(x)
        with np.errstate(over="ignore", divide="ignore"):
            out = np.log(-np.expm1(-np.exp(-(arr - self.location) / self.scale)))
        return _finish(out, x)

    @property
    def literal(self):
        return f"gumbel({self.location:g},{self.scale:g})"


@dataclass(frozen=True, eq=False, repr=False)
class GridCdf(Distribution):
    """Piecewise-linear CDF on a grid.

    Parameters
    ----------
    grid : Grid
        Knots.
    values : array_like
        Nondecreasing CDF values in [0, 1] at the knots.
    lower_tail : {"zero", "clamp-first"}
        Value for finite ``x`` below the grid: 0, or ``values[0]``.
    upper_tail : {"one", "clamp-last"}
        Value for finite ``x`` above the grid: 1, or ``values[-1]``.

    Notes
    -----
    Whatever the tail mode, ``cdf(-inf) == 0`` and ``cdf(inf) == 1``.
    Quantiles on a flat stretch return its left endpoint; levels that a
    clamped tail never reaches map to ``-inf`` or ``inf``.
    """

    grid: Grid
    values: np.ndarray
    lower_tail: str = "zero"
    upper_tail: str = "one"

    def __post_init__(self):
        if not isinstance(self.grid, Grid):
            object.__setattr__(self, "grid", Grid(self.grid))
        vals = np.array(self.values, dtype=float)
        if vals.shape != self.grid.points.shape:
            raise ValidationError("values must align with the grid")
        if np.any(~np.isfinite(vals)) or vals.min() < 0.0 or vals.max() > 1.0:
            raise ValidationError("CDF values must lie in [0, 1]")
        if np.any(np.diff(vals) < 0):
            raise ValidationError("CDF values must be nondecreasing")
        if self.lower_tail not in ("zero", "clamp-first"):
            raise ValidationError(f"unknown lower_tail {self.lower_tail!r}")
        if self.upper_tail not in ("one", "clamp-last"):
            raise ValidationError(f"unknown upper_tail {self.upper_tail!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def _cdf_finite(self, x):
        g, v = self.grid.points, self.values
        below = 0.0 if self.lower_tail == "zero" else v[0]
        above = 1.0 if self.upper_tail == "one" else v[-1]
        out = np.interp(x, g, v)
        out = np.where(x < g[0], below, out)
        return np.where(x > g[-1], above, out)

    def _quantile(self, u):
        g, v = self.grid.points, self.values
        j = np.searchsorted(v, u, side="left")
        jm = np.clip(j - 1, 0, v.size - 1)
        jc = np.clip(j, 0, v.size - 1)
        dv = v[jc] - v[jm]
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(dv > 0, (u - v[jm]) / dv, 0.0)
        x = g[jm] + frac * (g[jc] - g[jm])
        first = g[0] if self.lower_tail == "zero" else -np.inf
        last = g[-1] if self.upper_tail == "one" else np.inf
        x = np.where(j == 0, first, x)
        return np.where(j >= v.size, last, x)

    @property
    def literal(self):
        return f"gridcdf(<{self.grid.points.size} points>)"


def cdf_eval(d, x):
    """``F(x)`` for an extended real ``x``; ``F(-inf)=0`` and ``F(inf)=1``."""
    return d.cdf(x)


def survival_eval(d, x):
    """``1 - F(x)``, exactly the complement of :func:`cdf_eval`."""
    return d.sf(x)


def quantile(d, u):
    """Generalized inverse ``inf{x : F(x) >= u}`` for ``0 < u < 1``."""
    if np.ndim(u) == 0:
        check_open_unit(u, "u")
    return d.quantile(u)


def sample(d, rng, size=None):
    """Inverse-transform sampling, deterministic for a seeded generator."""
    return d.sample(rng, size)


def discretize(d, grid):
    """Restrict ``d`` to ``grid`` as a :class:`GridCdf` with exact tails."""
    if not isinstance(grid, Grid):
        grid = Grid(grid)
    vals = np.clip(np.asarray(d.cdf(grid.points), dtype=float), 0.0, 1.0)
    return GridCdf(grid, np.maximum.accumulate(vals))


_FAMILIES = {
    "uniform": (Uniform, 2),
    "exponential": (Exponential, 1),
    "weibull": (Weibull, 2),
    "gumbel": (Gumbel, 2),
}
_LITERAL = re.compile(r"^\s*([a-z_]+)\s*\((.*)\)\s*$")


def parse_distribution(text):
    """Parse a literal such as ``weibull(2, 1)`` into a distribution."""
    m = _LITERAL.match(str(text))
    if not m or m.group(1) not in _FAMILIES:
        raise ValidationError(
            f"cannot parse distribution {text!r}; expected one of "
            + ", ".join(f"{k}(...)" for k in _FAMILIES)
        )
    cls, nargs = _FAMILIES[m.group(1)]
    try:
        args = [float(a) for a in m.group(2).split(",")] if m.group(2).strip() else []
    except ValueError as exc:
        raise ValidationError(f"non-numeric parameter in {text!r}") from exc
    if len(args) != nargs:
        raise ValidationError(f"{m.group(1)} takes {nargs} parameter(s), got {len(args)}")
    return cls(*args)
