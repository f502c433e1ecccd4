"""Dependence generators for max-, min- and quasi-independent vectors.

A *point generator* ``eta(x_1, ..., x_n)`` corrects the product of marginal
CDFs (max-independence) or of marginal survival functions
(min-independence) into the joint law.  A *rectangle generator* does the same
for probabilities of boxes ``B_1 x ... x B_n`` (quasi-independence).

Generators only have to be strictly positive and tend to 1 at the relevant
boundary; values above 1 are allowed, which is what the shared-component
construction produces.  The min-independent boundary limit is 1 as any
coordinate goes to ``-inf``.

Intervals are ``(lo, hi)`` pairs read as ``(lo, hi]``; ``(-inf, inf)`` is the
whole line.
"""

import csv
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from ._validation import as_float_array, check_count
from .dist_core import Grid
from .exceptions import GeneratorDomainError, ValidationError

__all__ = [
    "MAX_INDEPENDENT",
    "MIN_INDEPENDENT",
    "DENOMINATOR_FLOOR",
    "PointGenerator",
    "RectGenerator",
    "ValidationReport",
    "independent_generator",
    "shared_component_generator",
    "min_shared_component_generator",
    "shared_component_triple",
    "fgm_generator",
    "fgm_rect_generator",
    "tabulated_generator",
    "load_tabulated_generator",
    "lift_to_rect",
    "joint_from_generator",
    "validate_generator",
    "rect_prob_from_generator",
    "frechet_bounds",
]

MAX_INDEPENDENT = "max_independent"
MIN_INDEPENDENT = "min_independent"
_KINDS = (MAX_INDEPENDENT, MIN_INDEPENDENT)

DENOMINATOR_FLOOR = 1e-300
LIMIT_TOL = 1e-12


def _check_kind(kind):
    if kind not in _KINDS:
        raise ValidationError(f"kind must be one of {_KINDS}, got {kind!r}")
    return kind


@dataclass(frozen=True)
class PointGenerator:
    """Generator evaluated at points of the extended real lattice.

    ``func`` receives ``arity`` broadcast float arrays and returns the
    generator values; NaN marks points where the formula is undefined.
    """

    arity: int
    func: Callable = field(repr=False)
    kind: str = MAX_INDEPENDENT
    name: str = "custom"
    constant: bool = False

    def __post_init__(self):
        check_count(self.arity, "arity")
        _check_kind(self.kind)

    @property
    def boundary(self):
        """Coordinate value at which the generator must equal 1."""
        return math.inf if self.kind == MAX_INDEPENDENT else -math.inf

    def __call__(self, *coords, strict=True):
        if len(coords) != self.arity:
            raise ValidationError(f"generator {self.name} takes {self.arity} coordinates, got {len(coords)}")
        arrays = np.broadcast_arrays(*(as_float_array(c) for c in coords))
        out = np.asarray(self.func(*arrays), dtype=float)
        out = np.broadcast_to(out, arrays[0].shape).copy()
        if strict and np.isnan(out).any():
            raise GeneratorDomainError(
                f"generator {self.name} is undefined at {int(np.isnan(out).sum())} point(s): "
                "denominator below the positivity floor"
            )
        if np.ndim(coords[0]) == 0 and out.ndim == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class RectGenerator:
    """Generator evaluated on boxes; ``func(los, his)`` gets lists of arrays."""

    arity: int
    func: Callable = field(repr=False)
    name: str = "custom"
    constant: bool = False

    def __post_init__(self):
        check_count(self.arity, "arity")

    def __call__(self, rect):
        if len(rect) != self.arity:
            raise ValidationError(f"rectangle generator {self.name} takes {self.arity} sides, got {len(rect)}")
        los = [as_float_array(side[0]) for side in rect]
        his = [as_float_array(side[1]) for side in rect]
        arrays = np.broadcast_arrays(*los, *his)
        los, his = arrays[: self.arity], arrays[self.arity:]
        out = np.broadcast_to(np.asarray(self.func(los, his), dtype=float), los[0].shape).copy()
        # A full-line side makes the box a lower-dimensional marginal event.
        full = np.zeros(out.shape, dtype=bool)
        for lo, hi in zip(los, his):
            full |= (lo == -np.inf) & (hi == np.inf)
        out[full] = 1.0
        if out.ndim == 0:
            return float(out)
        return out


@dataclass
class ValidationReport:
    """Outcome of a probe-grid check; violations are recorded, never raised."""

    min_value: float
    max_value: float
    positive: bool
    limits_ok: bool
    n_points: int
    limit_max_deviation: float = 0.0
    domain_errors: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.positive and self.limits_ok and not self.failures


def independent_generator(n, kind=MAX_INDEPENDENT):
    """The constant generator 1 of independent variables."""
    check_count(n, "n")

    def one(*xs):
        return np.ones(np.shape(xs[0]))

    return PointGenerator(n, one, _check_kind(kind), name="independent", constant=True)


def shared_component_generator(f0, floor=DENOMINATOR_FLOOR):
    """``F0(min(y1, y2)) / (F0(y1) F0(y2))`` of ``(max(X0, X1), max(X0, X2))``.

    Evaluation where ``F0(y1) F0(y2) <= floor`` raises
    :class:`GeneratorDomainError` (or yields NaN with ``strict=False``).
    """

    def eta(y1, y2):
        den = np.asarray(f0.cdf(y1)) * np.asarray(f0.cdf(y2))
        num = np.asarray(f0.cdf(np.minimum(y1, y2)))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(den > floor, num / den, np.nan)
        return np.where((np.asarray(y1) == np.inf) | (np.asarray(y2) == np.inf), 1.0, out)

    return PointGenerator(2, eta, MAX_INDEPENDENT, name=f"shared_component({f0.literal})")


def min_shared_component_generator(f0, floor=DENOMINATOR_FLOOR):
    """Survival mirror ``S0(max(y1, y2)) / (S0(y1) S0(y2))`` for minima."""

    def eta(y1, y2):
        den = np.asarray(f0.sf(y1)) * np.asarray(f0.sf(y2))
        num = np.asarray(f0.sf(np.maximum(y1, y2)))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(den > floor, num / den, np.nan)
        return np.where((np.asarray(y1) == -np.inf) | (np.asarray(y2) == -np.inf), 1.0, out)

    return PointGenerator(2, eta, MIN_INDEPENDENT, name=f"min_shared_component({f0.literal})")


def shared_component_triple(latent, kind=MAX_INDEPENDENT, floor=DENOMINATOR_FLOOR):
    """Generator of the triple ``(X0, X1, X2)`` whose last two share a latent.

    With ``X1 = max(W, Z1)`` and ``X2 = max(W, Z2)`` (``W ~ latent``, all else
    independent) the joint CDF is ``F0 F1 F2 * H(min(x1, x2)) / (H(x1) H(x2))``.
    The first slot is ignored; on the diagonal ``z = min(y1, y2)`` used by the
    maxima scheme this equals ``H(z) / (H(y1) H(y2))``.  ``kind`` selects the
    minima mirror built from survival functions and ``W`` entering by ``min``.
    """
    pair = (shared_component_generator if kind == MAX_INDEPENDENT else min_shared_component_generator)(
        latent, floor
    )

    def eta(z, y1, y2):
        return pair.func(y1, y2)

    return PointGenerator(3, eta, _check_kind(kind), name=f"shared_component({latent.literal})")


def fgm_generator(marginals, theta, kind=MAX_INDEPENDENT):
    """Generator of the FGM copula with only the top-order interaction term.

    The copula ``prod(u) * (1 + theta * prod(1 - u))`` has independent lower
    dimensional margins, so its generator tends to 1 at any boundary.  For
    survival functions the factor becomes ``1 + (-1)^n theta prod(u)``.
    Requires ``|theta| < 1`` for strict positivity.
    """
    marginals = tuple(marginals)
    n = len(marginals)
    if n < 2 or not -1.0 < theta < 1.0:
        raise ValidationError("FGM generator needs at least 2 marginals and |theta| < 1")
    _check_kind(kind)

    def eta(*xs):
        if kind == MAX_INDEPENDENT:
            prod = np.prod([1.0 - np.asarray(m.cdf(x)) for m, x in zip(marginals, xs)], axis=0)
            return 1.0 + theta * prod
        prod = np.prod([np.asarray(m.cdf(x)) for m, x in zip(marginals, xs)], axis=0)
        return 1.0 + (-1.0) ** n * theta * prod

    return PointGenerator(n, eta, kind, name=f"fgm({theta:g})")


def fgm_rect_generator(marginals, theta):
    """Box generator of the top-order FGM copula.

    The copula mass of a box is ``prod(du) + theta * prod(d[u(1-u)])``, hence
    ``eta = 1 + theta * prod(d[u(1-u)] / du)``.  Each ratio lies in [-1, 1] and
    vanishes on a full-line side.
    """
    marginals = tuple(marginals)
    if len(marginals) < 2 or not -1.0 < theta < 1.0:
        raise ValidationError("FGM generator needs at least 2 marginals and |theta| < 1")

    def eta(los, his):
        prod = 1.0
        for m, lo, hi in zip(marginals, los, his):
            ul, uh = np.asarray(m.cdf(lo)), np.asarray(m.cdf(hi))
            du = uh - ul
            dg = uh * (1.0 - uh) - ul * (1.0 - ul)
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(du > 0, dg / du, 1.0 - 2.0 * uh)
            prod = prod * ratio
        return 1.0 + theta * prod

    return RectGenerator(len(marginals), eta, name=f"fgm({theta:g})")


def tabulated_generator(points, table, kind=MAX_INDEPENDENT):
    """Multilinear interpolation of generator values on a square lattice.

    ``table`` has shape ``(m,) * n`` over ``points`` (length ``m``) on each
    axis.  Coordinates outside the lattice are clamped to its edge; a
    coordinate at the boundary infinity returns exactly 1.
    """
    pts = Grid(points).points
    tab = np.asarray(table, dtype=float)
    n = tab.ndim
    if tab.shape != (pts.size,) * n:
        raise ValidationError(f"table shape {tab.shape} does not match {pts.size} lattice points per axis")
    if not np.all(np.isfinite(tab)) or tab.min() <= 0:
        raise ValidationError("tabulated generator values must be finite and positive")
    _check_kind(kind)
    interp = RegularGridInterpolator((pts,) * n, tab, method="linear")
    edge = math.inf if kind == MAX_INDEPENDENT else -math.inf

    def eta(*xs):
        shape = np.shape(xs[0])
        at_edge = np.zeros(shape, dtype=bool)
        cols = []
        for x in xs:
            x = np.asarray(x, dtype=float)
            at_edge |= x == edge
            cols.append(np.clip(x, pts[0], pts[-1]).ravel())
        vals = interp(np.column_stack(cols)).reshape(shape)
        return np.where(at_edge, 1.0, vals)

    return PointGenerator(n, eta, kind, name="tabulated")


def load_tabulated_generator(path, kind=MAX_INDEPENDENT):
    """Read a CSV lattice: a header of ``m`` grid points, then ``m**(n-1)`` rows.

    Rows enumerate the leading axes in C order; each row holds ``m`` values
    along the last axis.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if len(rows) < 2:
        raise ValidationError(f"{path}: need a header row and at least one value row")
    try:
        pts = [float(v) for v in rows[0]]
        body = np.array([[float(v) for v in r] for r in rows[1:]])
    except ValueError as exc:
        raise ValidationError(f"{path}: non-numeric entry") from exc
    m = len(pts)
    if body.ndim != 2 or body.shape[1] != m:
        raise ValidationError(f"{path}: every row must have {m} values")
    n = 1
    while m ** (n - 1) < body.shape[0]:
        n += 1
    if m < 2 or m ** (n - 1) != body.shape[0]:
        raise ValidationError(f"{path}: {body.shape[0]} rows is not a power of {m}")
    return tabulated_generator(pts, body.reshape((m,) * n), kind)


def joint_from_generator(marginals, g, coords):
    """Joint CDF (or survival, for min-independent ``g``) from marginals and ``g``."""
    if len(marginals) != g.arity or len(coords) != g.arity:
        raise ValidationError("arity mismatch between marginals, generator and point")
    if g.kind == MAX_INDEPENDENT:
        parts = [np.asarray(m.cdf(x)) for m, x in zip(marginals, coords)]
    else:
        parts = [np.asarray(m.sf(x)) for m, x in zip(marginals, coords)]
    prod = np.prod(np.broadcast_arrays(*parts), axis=0)
    eta = np.asarray(g(*coords, strict=False))
    return np.where(prod > 0, prod * eta, 0.0)


def lift_to_rect(g, marginals=None):
    """Box form of a point generator.

    A constant generator lifts to the constant box generator.  Otherwise the
    box mass follows from the joint CDF (or survival function) by
    inclusion-exclusion over the ``2**n`` corners and is divided by the
    product of marginal box probabilities.
    """
    if g.constant:
        return RectGenerator(g.arity, lambda los, his: np.ones(np.shape(los[0])), name=g.name, constant=True)
    if marginals is None or len(marginals) != g.arity:
        raise ValidationError("lifting a non-constant generator needs its marginals")
    marginals = tuple(marginals)

    def eta(los, his):
        mass = 0.0
        for choice in itertools.product((0, 1), repeat=g.arity):
            if g.kind == MAX_INDEPENDENT:
                # choice 1 -> lower corner, sign (-1)^{#lower}
                corner = [lo if c else hi for c, lo, hi in zip(choice, los, his)]
            else:
                corner = [hi if c else lo for c, lo, hi in zip(choice, los, his)]
            mass = mass + (-1) ** sum(choice) * joint_from_generator(marginals, g, corner)
        prod = np.prod([np.asarray(m.cdf(hi)) - np.asarray(m.cdf(lo)) for m, lo, hi in zip(marginals, los, his)], axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(prod > 0, mass / prod, 1.0)

    return RectGenerator(g.arity, eta, name=f"rect[{g.name}]")


def _probe_lattice(points, n, max_points, seed=0):
    pts = np.asarray(points, dtype=float)
    m = pts.size
    if m ** n <= max_points:
        mesh = np.meshgrid(*([pts] * n), indexing="ij")
        return [c.ravel() for c in mesh]
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, m, size=(max_points, n))
    return [pts[idx[:, i]] for i in range(n)]


def validate_generator(g, probe_grid, limit_slots=None):
    """Probe ``g`` for positivity and its boundary limit.

    The full lattice ``probe_grid ** n`` is used up to ``n = 3``; beyond
    that a seeded random subset of ``len(probe_grid) ** 3`` lattice points
    stands in.  ``limit_slots`` restricts the limit check to some coordinates
    (by default every coordinate is sent to the boundary in turn).
    """
    if not isinstance(probe_grid, Grid):
        probe_grid = Grid(probe_grid)
    n = g.arity
    budget = len(probe_grid) ** min(n, 3)
    coords = _probe_lattice(probe_grid.points, n, budget)
    vals = np.asarray(g(*coords, strict=False), dtype=float)
    defined = ~np.isnan(vals)
    failures = []
    if not defined.all():
        failures.append(f"{int((~defined).sum())} probe point(s) outside the generator's domain")
    good = vals[defined]
    positive = bool(good.size and np.all(good > 0))
    if not positive:
        failures.append("generator is not strictly positive on the probe lattice")

    slots = range(n) if limit_slots is None else limit_slots
    worst = 0.0
    edge_coords = _probe_lattice(probe_grid.points, max(n - 1, 1), len(probe_grid) ** min(max(n - 1, 1), 3))
    for i in slots:
        pts = list(edge_coords[: n - 1]) if n > 1 else []
        size = edge_coords[0].size
        pts.insert(i, np.full(size, g.boundary))
        lim = np.asarray(g(*pts, strict=False), dtype=float)
        dev = float(np.nanmax(np.abs(lim - 1.0))) if lim.size else 0.0
        if np.isnan(lim).any():
            dev = math.inf
        worst = max(worst, dev)
    limits_ok = worst <= LIMIT_TOL
    if not limits_ok:
        failures.append(f"boundary limit violated: max |eta - 1| = {worst:.3g} at an infinite coordinate")
    return ValidationReport(
        min_value=float(good.min()) if good.size else math.nan,
        max_value=float(good.max()) if good.size else math.nan,
        positive=positive,
        limits_ok=limits_ok,
        n_points=int(vals.size),
        limit_max_deviation=worst,
        domain_errors=int((~defined).sum()),
        failures=failures,
    )


def rect_prob_from_generator(marginals, g, rect, return_clipped=False):
    """``prod_j P(X_j in B_j) * eta(B_1 x ... x B_n)`` clamped to [0, 1].

    With ``return_clipped`` the result is ``(value, clipped)`` where
    ``clipped`` counts entries moved by the clamp.
    """
    if len(marginals) != g.arity or len(rect) != g.arity:
        raise ValidationError(
            f"arity mismatch: {len(marginals)} marginals, {len(rect)} sides, generator arity {g.arity}"
        )
    prod = 1.0
    for m, (lo, hi) in zip(marginals, rect):
        prod = prod * (np.asarray(m.cdf(hi)) - np.asarray(m.cdf(lo)))
    raw = np.asarray(prod) * np.asarray(g(rect))
    val = np.clip(raw, 0.0, 1.0)
    clipped = int(np.count_nonzero(val != raw))
    if val.ndim == 0:
        val = float(val)
    return (val, clipped) if return_clipped else val


def frechet_bounds(marginal_values):
    """Lower and upper Frechet bounds for a joint CDF given marginal CDF values."""
    vals = np.asarray(marginal_values, dtype=float)
    n = vals.shape[0]
    lower = np.maximum(vals.sum(axis=0) - (n - 1), 0.0)
    upper = vals.min(axis=0)
    return lower, upper
