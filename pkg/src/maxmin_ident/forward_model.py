"""Joint laws of observable extremes built from components and a generator.

Five coupling schemes are supported:

``maxima3``
    ``(max(X0, X1), max(X0, X2))``; evaluated as a joint CDF.
``minima3``
    ``(min(X0, X1), min(X0, X2))``; evaluated as a joint survival function.
``minmax3``
    ``(min(X0, X1), max(X0, X2))``; evaluated as ``P(Y1 > y1, Y2 <= y2)``.
``scaled_max_n``
    ``(max_i a_i X_i, max_i b_i X_i)``; joint CDF.
``scaled_min_n``
    ``(min_i a_i X_i, min_i b_i X_i)``; joint survival function.

Laws are closures over their components and generator, so limits at
``+/-inf`` are evaluated exactly.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import as_float_array, check_positive
from .dependence import MAX_INDEPENDENT, MIN_INDEPENDENT, PointGenerator, RectGenerator
from .dist_core import Distribution, Grid, GridCdf
from .exceptions import GeneratorDomainError, ValidationError

__all__ = [
    "SCHEMES",
    "ScaleVectors",
    "JointExtremeLaw",
    "JointValidationReport",
    "joint_cdf_maxima",
    "joint_survival_minima",
    "minmax_law",
    "rect_prob_minmax",
    "joint_cdf_scaled_maxima",
    "joint_survival_scaled_minima",
    "marginal_of_max",
    "validate_joint",
    "build_law",
]

logger = logging.getLogger(__name__)

SCHEMES = ("maxima3", "minima3", "minmax3", "scaled_max_n", "scaled_min_n")
_MODE = {
    "maxima3": "cdf",
    "minima3": "survival",
    "minmax3": "rectangle",
    "scaled_max_n": "cdf",
    "scaled_min_n": "survival",
}
JOINT_TOL = 1e-12


@dataclass(frozen=True)
class ScaleVectors:
    """Coefficient vectors ``a`` and ``b``; ratios ``b_i / a_i`` must differ."""

    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(check_positive(float(v), "a_i") for v in self.a)
        b = tuple(check_positive(float(v), "b_i") for v in self.b)
        if len(a) != len(b) or not a:
            raise ValidationError("scale vectors a and b must be nonempty and of equal length")
        c = np.array(b) / np.array(a)
        if np.unique(c).size != c.size:
            raise ValidationError(f"ratio-distinctness violated: b_i/a_i = {c.tolist()} are not pairwise distinct")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self):
        return len(self.a)

    @property
    def c(self):
        """Ratios ``b_i / a_i`` in component order."""
        return np.array(self.b) / np.array(self.a)

    @property
    def order(self):
        """Permutation sorting the ratios ascending."""
        return np.argsort(self.c, kind="stable")

    @property
    def c_sorted(self):
        return self.c[self.order]

    def scaled(self, factor):
        return ScaleVectors(tuple(factor * v for v in self.a), tuple(factor * v for v in self.b))


@dataclass(frozen=True)
class JointExtremeLaw:
    """Evaluable law of ``(Y1, Y2)``; call it with broadcastable arrays."""

    scheme: str
    components: tuple
    generator: object
    scales: ScaleVectors = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        comps = tuple(self.components)
        if not all(isinstance(c, Distribution) for c in comps):
            raise ValidationError("components must be Distribution instances")
        object.__setattr__(self, "components", comps)
        g = self.generator
        if self.scheme.startswith("scaled"):
            if self.scales is None or self.scales.n != len(comps):
                raise ValidationError("scaled schemes need scale vectors with one entry per component")
            want = MAX_INDEPENDENT if self.scheme == "scaled_max_n" else MIN_INDEPENDENT
            if not isinstance(g, PointGenerator) or g.arity != len(comps) or g.kind != want:
                raise ValidationError(f"{self.scheme} needs a {want} point generator of arity {len(comps)}")
        else:
            if len(comps) != 3:
                raise ValidationError(f"{self.scheme} needs exactly 3 components, got {len(comps)}")
            if self.scheme == "minmax3":
                if not isinstance(g, RectGenerator) or g.arity != 3:
                    raise ValidationError("minmax3 needs a rectangle generator of arity 3")
            else:
                want = MAX_INDEPENDENT if self.scheme == "maxima3" else MIN_INDEPENDENT
                if not isinstance(g, PointGenerator) or g.arity != 3 or g.kind != want:
                    raise ValidationError(f"{self.scheme} needs a {want} point generator of arity 3")

    @property
    def mode(self):
        return _MODE[self.scheme]

    def __call__(self, y1, y2):
        a1, a2 = np.broadcast_arrays(as_float_array(y1), as_float_array(y2))
        out = getattr(self, "_eval_" + self.scheme)(a1.astype(float), a2.astype(float))
        if np.ndim(y1) == 0 and np.ndim(y2) == 0:
            return float(out)
        return out

    def _corrected(self, prod, eta_fn):
        # eta only matters where the marginal product carries mass
        out = np.zeros(prod.shape)
        live = prod > 0
        if live.any():
            eta = np.asarray(eta_fn(live), dtype=float)
            if np.isnan(eta).any():
                raise GeneratorDomainError(f"generator {self.generator.name} undefined where the law has mass")
            out[live] = prod[live] * eta
        return out

    def _eval_maxima3(self, y1, y2):
        f0, f1, f2 = self.components
        z = np.minimum(y1, y2)
        prod = np.asarray(f0.cdf(z)) * np.asarray(f1.cdf(y1)) * np.asarray(f2.cdf(y2))
        return self._corrected(prod, lambda m: self.generator(z[m], y1[m], y2[m], strict=False))

    def _eval_minima3(self, y1, y2):
        f0, f1, f2 = self.components
        z = np.maximum(y1, y2)
        prod = np.asarray(f0.sf(z)) * np.asarray(f1.sf(y1)) * np.asarray(f2.sf(y2))
        return self._corrected(prod, lambda m: self.generator(z[m], y1[m], y2[m], strict=False))

    def _eval_minmax3(self, y1, y2):
        f0, f1, f2 = self.components
        nonempty = y1 < y2
        mass0 = np.where(nonempty, np.asarray(f0.cdf(y2)) - np.asarray(f0.cdf(y1)), 0.0)
        prod = mass0 * np.asarray(f1.sf(y1)) * np.asarray(f2.cdf(y2))

        def eta(m):
            lo, hi = y1[m], y2[m]
            return self.generator(((lo, hi), (lo, np.full(lo.shape, np.inf)), (np.full(hi.shape, -np.inf), hi)))

        return self._corrected(prod, eta)

    def _scaled_points(self, t, s, pick):
        a, b = self.scales.a, self.scales.b
        with np.errstate(invalid="ignore"):
            return [pick(t / ai, s / bi) for ai, bi in zip(a, b)]

    def _eval_scaled_max_n(self, t, s):
        pts = self._scaled_points(t, s, np.minimum)
        prod = np.prod([np.asarray(f.cdf(x)) for f, x in zip(self.components, pts)], axis=0)
        return self._corrected(prod, lambda m: self.generator(*(x[m] for x in pts), strict=False))

    def _eval_scaled_min_n(self, t, s):
        pts = self._scaled_points(t, s, np.maximum)
        prod = np.prod([np.asarray(f.sf(x)) for f, x in zip(self.components, pts)], axis=0)
        return self._corrected(prod, lambda m: self.generator(*(x[m] for x in pts), strict=False))

    def log_value(self, t, s):
        """Logarithm of a maxima, minima or scaled law, summed term by term.

        Far in the tails the product of component CDFs underflows although
        each factor is representable; the sum of logs does not.
        """
        if self.scheme == "minmax3":
            raise ValidationError("log_value is not defined for minmax3")
        t, s = np.broadcast_arrays(as_float_array(t), as_float_array(s))
        t, s = t.astype(float), s.astype(float)
        if self.scheme == "maxima3":
            pts = [np.minimum(t, s), t, s]
        elif self.scheme == "minima3":
            pts = [np.maximum(t, s), t, s]
        elif self.scheme == "scaled_max_n":
            pts = self._scaled_points(t, s, np.minimum)
        else:
            pts = self._scaled_points(t, s, np.maximum)
        if self.mode == "cdf":
            terms = [np.asarray(f.logcdf(x), dtype=float) for f, x in zip(self.components, pts)]
        else:
            terms = [np.asarray(f.logsf(x), dtype=float) for f, x in zip(self.components, pts)]
        total = np.array(np.sum(terms, axis=0), dtype=float)
        live = np.isfinite(total)
        if live.any():
            eta = np.asarray(self.generator(*(x[live] for x in pts), strict=False), dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                total[live] += np.log(eta)
        if total.ndim == 0:
            return float(total)
        return total

    def with_components(self, components):
        """Same scheme, generator and scales with other components."""
        return JointExtremeLaw(self.scheme, tuple(components), self.generator, self.scales)


def joint_cdf_maxima(f0, f1, f2, g):
    """``G(y1, y2) = F0(m) F1(y1) F2(y2) eta(m, y1, y2)`` with ``m = min(y1, y2)``."""
    return JointExtremeLaw("maxima3", (f0, f1, f2), g)


def joint_survival_minima(f0, f1, f2, g):
    """``S(y1, y2) = S0(m) S1(y1) S2(y2) eta(m, y1, y2)`` with ``m = max(y1, y2)``."""
    return JointExtremeLaw("minima3", (f0, f1, f2), g)


def minmax_law(f0, f1, f2, g):
    """``R(y1, y2) = P(min(X0, X1) > y1, max(X0, X2) <= y2)``."""
    return JointExtremeLaw("minmax3", (f0, f1, f2), g)


def rect_prob_minmax(f0, f1, f2, g, y1, y2):
    """Scalar ``P(Y1 > y1, Y2 <= y2)``; an empty rectangle gives 0 and a log record."""
    if not y1 < y2:
        logger.info("empty rectangle: y1=%r >= y2=%r, probability 0", y1, y2)
        return 0.0
    return minmax_law(f0, f1, f2, g)(float(y1), float(y2))


def joint_cdf_scaled_maxima(fs, sv, g):
    """``G(t, s) = prod_i F_i(min(t/a_i, s/b_i)) * eta(min(t/a_i, s/b_i))``."""
    return JointExtremeLaw("scaled_max_n", tuple(fs), g, sv)


def joint_survival_scaled_minima(fs, sv, g):
    """``S(t, s) = prod_i S_i(max(t/a_i, s/b_i)) * eta(max(t/a_i, s/b_i))``."""
    return JointExtremeLaw("scaled_min_n", tuple(fs), g, sv)


def build_law(scheme, components, generator, scales=None):
    """Dispatch on the scheme name."""
    return JointExtremeLaw(scheme, tuple(components), generator, scales)


def _default_grid(dists, count=1001, tail=1e-4):
    lo = min(float(d.quantile(tail)) for d in dists)
    hi = max(float(d.quantile(1 - tail)) for d in dists)
    return Grid.linspace(lo, hi, count)


def marginal_of_max(f0, fi, grid=None):
    """CDF ``F0 * Fi`` of ``max(X0, Xi)`` as a :class:`GridCdf` on ``grid``."""
    if grid is None:
        grid = _default_grid((f0, fi))
    elif not isinstance(grid, Grid):
        grid = Grid(grid)
    vals = np.asarray(f0.cdf(grid.points)) * np.asarray(fi.cdf(grid.points))
    return GridCdf(grid, np.maximum.accumulate(np.clip(vals, 0.0, 1.0)))


@dataclass
class JointValidationReport:
    """Named pass/fail checks for a joint law on a probe lattice."""

    checks: dict = field(default_factory=dict)
    worst: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    @property
    def failures(self):
        return [k for k, v in self.checks.items() if not v]


def _edge_marginals(law, y):
    """Exact edge values of the law along the infinite borders."""
    c = law.components
    if law.scheme == "maxima3":
        return [(y, math.inf, c[0].cdf(y) * c[1].cdf(y)), (math.inf, y, c[0].cdf(y) * c[2].cdf(y))]
    if law.scheme == "minima3":
        return [(y, -math.inf, c[0].sf(y) * c[1].sf(y)), (-math.inf, y, c[0].sf(y) * c[2].sf(y))]
    if law.scheme == "minmax3":
        return [(y, math.inf, c[0].sf(y) * c[1].sf(y)), (-math.inf, y, c[0].cdf(y) * c[2].cdf(y))]
    # an infinite edge leaves every generator coordinate finite, so eta stays
    a, b = law.scales.a, law.scales.b
    g = law.generator
    fn = (lambda f, x: f.cdf(x)) if law.scheme == "scaled_max_n" else (lambda f, x: f.sf(x))
    edge = math.inf if law.scheme == "scaled_max_n" else -math.inf
    out = []
    for e1, e2, scale in ((y, edge, a), (edge, y, b)):
        pts = [y / v for v in scale]
        prod = np.prod([fn(f, x) for f, x in zip(c, pts)], axis=0)
        live = prod > 0
        expected = np.zeros(y.shape)
        expected[live] = prod[live] * np.asarray(g(*(x[live] for x in pts), strict=False))
        out.append((e1, e2, expected))
    return out


def validate_joint(law, probe_grid, tol=JOINT_TOL):
    """Check that ``law`` behaves like a bivariate distribution on a lattice.

    Checks: values in [0, 1]; monotonicity in each argument in the direction
    implied by the scheme; nonnegative rectangle masses (2-increasing);
    corner limits; and the infinite-edge marginals implied by the components.
    """
    if not isinstance(probe_grid, Grid):
        probe_grid = Grid(probe_grid)
    pts = np.concatenate(([-np.inf], probe_grid.points, [np.inf]))
    Y1, Y2 = np.meshgrid(pts, pts, indexing="ij")
    V = np.asarray(law(Y1, Y2), dtype=float)
    report = JointValidationReport()

    def record(name, worst):
        report.worst[name] = float(worst)
        report.checks[name] = bool(worst <= tol)

    record("range", max(0.0, -V.min(), V.max() - 1.0))
    d1 = np.diff(V, axis=0)
    d2 = np.diff(V, axis=1)
    if law.mode == "cdf":
        record("monotone", max(0.0, -d1.min(), -d2.min()))
    elif law.mode == "survival":
        record("monotone", max(0.0, d1.max(), d2.max()))
    else:
        record("monotone", max(0.0, d1.max(), -d2.min()))
    # mass of (y1_i, y1_{i+1}] x (y2_j, y2_{j+1}] up to orientation
    mass = V[1:, 1:] - V[:-1, 1:] - V[1:, :-1] + V[:-1, :-1]
    if law.mode == "rectangle":
        mass = -mass
    record("two_increasing", max(0.0, -mass.min()))

    inf = math.inf
    if law.mode == "cdf":
        corner_err = max(abs(law(inf, inf) - 1.0), float(np.abs(V[0, :]).max()), float(np.abs(V[:, 0]).max()))
    elif law.mode == "survival":
        corner_err = max(abs(law(-inf, -inf) - 1.0), float(np.abs(V[-1, :]).max()), float(np.abs(V[:, -1]).max()))
    else:
        corner_err = max(abs(law(-inf, inf) - 1.0), float(np.abs(V[-1, :]).max()), float(np.abs(V[:, 0]).max()))
    record("corners", corner_err)

    y = probe_grid.points
    edge_err = 0.0
    for e1, e2, expected in _edge_marginals(law, y):
        got = np.asarray(law(e1, e2), dtype=float)
        edge_err = max(edge_err, float(np.abs(got - np.asarray(expected)).max()))
    record("edge_marginals", edge_err)
    return report
