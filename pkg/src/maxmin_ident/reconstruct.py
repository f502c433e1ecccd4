"""Recover component distributions from the joint law of the extremes.

Each recovery inverts one coupling scheme pointwise on a grid, given the
generator.  The three-component schemes have closed forms built from the
law's infinite edges; the scaled schemes are solved by telescoping along
rays between consecutive coefficient ratios.

Grid points whose denominators fall below a positivity floor carry no
information; they are dropped and refilled by interpolation from the
recovered neighbours.  Recovered values are then clipped to [0, 1] and
made nondecreasing, and every such event is counted in the report.
"""

import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_open_unit
from .dependence import PointGenerator
from .dist_core import Grid, GridCdf
from .exceptions import UnrecoverableRegionError, ValidationError
from .forward_model import JointExtremeLaw

__all__ = [
    "RECOVERY_FLOOR",
    "Anchor",
    "ReconstructionReport",
    "UniquenessVerdict",
    "DemoRecord",
    "recover_from_maxima",
    "recover_from_minima",
    "recover_from_minmax",
    "recover_scaled_extremes",
    "solve_peeling",
    "check_uniqueness",
    "single_max_nonuniqueness_demo",
    "monotone_repair",
]

RECOVERY_FLOOR = 1e-12
SINGULAR_TOL = 1e-9
# Tail seed: once |log F| < TAIL_TOL the remaining telescoping sum is dropped.
TAIL_TOL = 1e-12
# Relative step-off from 0 used to approach the origin by continuity.
ZERO_TOL = 1e-13
MAX_TELESCOPING_STEPS = 200


def _fmt(x):
    return repr(float(x)) if not math.isfinite(x) else f"{x:.17g}"


@dataclass(frozen=True)
class Anchor:
    """Known point ``F0(x0) = q`` pinning the min/max scheme."""

    x0: float
    q: float

    def __post_init__(self):
        if not math.isfinite(self.x0):
            raise ValidationError("anchor x0 must be finite")
        check_open_unit(self.q, "anchor q")

    @classmethod
    def at_quantile(cls, f0, u):
        return cls(float(f0.quantile(u)), float(u))


@dataclass
class ReconstructionReport:
    """Recovered component CDFs plus diagnostics."""

    scheme: str
    grid: Grid
    recovered: list
    clip_count: int = 0
    repair_count: int = 0
    repair_mass: float = 0.0
    excluded: list = field(default_factory=list)
    iterations: int = 0
    iterations_per_component: list = field(default_factory=list)
    sup_errors: list = None
    truth: list = None
    notes: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def attach_truth(self, truth, mask=None):
        """Store true components and their sup-norm errors on the grid.

        ``mask`` is an optional list of boolean arrays restricting the error
        to part of the grid, one per component.
        """
        if len(truth) != len(self.recovered):
            raise ValidationError("truth must list one distribution per recovered component")
        self.truth = list(truth)
        y = self.grid.points
        errs = []
        for i, (rec, t) in enumerate(zip(self.recovered, truth)):
            diff = np.abs(rec.values - np.asarray(t.cdf(y)))
            if mask is not None:
                diff = diff[mask[i]]
            errs.append(float(diff.max()) if diff.size else 0.0)
        self.sup_errors = errs
        return self

    def errors_on_quantile_range(self, lo=0.05, hi=0.95):
        """Sup errors restricted to each true component's ``[q_lo, q_hi]``."""
        if self.truth is None:
            raise ValidationError("no truth attached")
        y = self.grid.points
        out = []
        for rec, t in zip(self.recovered, self.truth):
            m = (y >= t.quantile(lo)) & (y <= t.quantile(hi))
            diff = np.abs(rec.values - np.asarray(t.cdf(y)))[m]
            out.append(float(diff.max()) if diff.size else 0.0)
        return out

    def summary(self):
        items = {
            "scheme": self.scheme,
            "components": len(self.recovered),
            "grid_points": len(self.grid),
            "clip_count": self.clip_count,
            "repair_count": self.repair_count,
            "repair_mass": _fmt(self.repair_mass),
            "excluded": sum(self.excluded),
            "iterations": self.iterations,
        }
        if self.sup_errors is not None:
            items["sup_error"] = _fmt(max(self.sup_errors))
            for i, e in enumerate(self.sup_errors):
                items[f"sup_error_{i}"] = _fmt(e)
        for k, v in self.extras.items():
            if isinstance(v, bool):
                v = str(v).lower()
            elif isinstance(v, float):
                v = _fmt(v)
            items[k] = v
        return items

    def to_csv(self, fh=None):
        """Rows ``component,y,recovered,truth,abs_error`` and a summary footer."""
        own = fh is None
        fh = io.StringIO() if own else fh
        fh.write("component,y,recovered,truth,abs_error\n")
        y = self.grid.points
        for i, rec in enumerate(self.recovered):
            tv = None if self.truth is None else np.asarray(self.truth[i].cdf(y))
            for j, yj in enumerate(y):
                if tv is None:
                    fh.write(f"{i},{_fmt(yj)},{_fmt(rec.values[j])},,\n")
                else:
                    err = abs(rec.values[j] - tv[j])
                    fh.write(f"{i},{_fmt(yj)},{_fmt(rec.values[j])},{_fmt(tv[j])},{_fmt(err)}\n")
        fh.write("#summary," + ",".join(f"{k}={v}" for k, v in self.summary().items()) + "\n")
        if own:
            return fh.getvalue()
        return None


def monotone_repair(values):
    """Clip to [0, 1] then take the running maximum.

    Returns ``(repaired, clip_count, repair_count, repair_mass)``.
    """
    vals = np.asarray(values, dtype=float)
    clipped = np.clip(vals, 0.0, 1.0)
    clip_count = int(np.count_nonzero(clipped != vals))
    repaired = np.maximum.accumulate(clipped)
    moved = repaired - clipped
    return repaired, clip_count, int(np.count_nonzero(moved)), float(moved.sum())


def _finalize(raw, grid, report, label):
    """Fill excluded points, repair, and wrap in a GridCdf."""
    y = grid.points
    raw = np.asarray(raw, dtype=float)
    good = np.isfinite(raw)
    if not good.any():
        raise UnrecoverableRegionError(
            f"component {label}: every grid point is below the positivity floor; "
            "move the grid inside the common support"
        )
    n_bad = int((~good).sum())
    if n_bad:
        report.notes.append(f"component {label}: {n_bad} grid point(s) excluded and interpolated")
        raw = np.interp(y, y[good], raw[good])
    vals, nclip, nrep, mass = monotone_repair(raw)
    report.clip_count += nclip
    report.repair_count += nrep
    report.repair_mass += mass
    report.excluded.append(n_bad)
    return GridCdf(grid, vals, lower_tail="clamp-first", upper_tail="clamp-last")


def _as_grid(grid):
    return grid if isinstance(grid, Grid) else Grid(grid)


def _safe_div(num, den, floor):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(den > floor, num / den, np.nan)


def _diag_eta(g, y):
    eta = np.asarray(g(y, y, y, strict=False), dtype=float)
    return np.where(eta > 0, eta, np.nan)


def _log_diag(law, y, edge, g):
    """Log-domain pieces ``(log L(y, y), log L(y, edge), log L(edge, y), log eta)``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        eta = np.log(_diag_eta(g, y))
    lv = getattr(law, "log_value", None)
    if lv is not None:
        return np.asarray(lv(y, y)), np.asarray(lv(y, edge)), np.asarray(lv(edge, y)), eta
    with np.errstate(divide="ignore"):
        logs = [np.log(np.asarray(law(a, b), dtype=float)) for a, b in ((y, y), (y, edge), (edge, y))]
    return (*logs, eta)


def _three_way(law, g, grid, edge, floor):
    """Logs of the shared and the two private factors on the grid.

    The shared factor is ``L(y, edge) L(edge, y) eta(y, y, y) / L(y, y)``;
    the private ones are the edges divided by it.  Points whose law values
    fall under ``floor`` are NaN, unless the law evaluates its own logarithm,
    in which case only non-finite logs are dropped.
    """
    y = grid.points
    lyy, ly_e, le_y, leta = _log_diag(law, y, edge, g)
    log_floor = -np.inf if hasattr(law, "log_value") else math.log(floor)
    ok = (lyy > log_floor) & np.isfinite(lyy) & np.isfinite(leta)
    with np.errstate(invalid="ignore"):
        shared = np.where(ok, ly_e + le_y + leta - lyy, np.nan)
        ok &= np.isfinite(shared) & (shared > log_floor)
        shared = np.where(ok, shared, np.nan)
        first = np.where(ok, ly_e - shared, np.nan)
        second = np.where(ok, le_y - shared, np.nan)
    return shared, first, second


def recover_from_maxima(G, g, grid, truth=None, floor=RECOVERY_FLOOR):
    """Invert ``G(y1, y2) = F0(min) F1(y1) F2(y2) eta(min, y1, y2)``.

    With the edges ``G(y, inf) = F0 F1`` and ``G(inf, y) = F0 F2``::

        F0(y) = G(y, inf) G(inf, y) eta(y, y, y) / G(y, y)
        F1(y) = G(y, inf) / F0(y),   F2(y) = G(inf, y) / F0(y)

    The quotients are taken in logs.
    """
    grid = _as_grid(grid)
    logs = _three_way(G, g, grid, np.inf, floor)
    report = ReconstructionReport("maxima3", grid, [])
    report.recovered = [_finalize(np.exp(v), grid, report, i) for i, v in enumerate(logs)]
    if truth is not None:
        report.attach_truth(truth)
    return report


def recover_from_minima(S, g, grid, truth=None, floor=RECOVERY_FLOOR):
    """Survival mirror of :func:`recover_from_maxima` using ``S(y, -inf)`` and ``S(-inf, y)``."""
    grid = _as_grid(grid)
    logs = _three_way(S, g, grid, -np.inf, floor)
    report = ReconstructionReport("minima3", grid, [])
    report.recovered = [_finalize(-np.expm1(v), grid, report, i) for i, v in enumerate(logs)]
    if truth is not None:
        report.attach_truth(truth)
    return report


def recover_from_minmax(R, g, anchor, grid, truth=None, floor=RECOVERY_FLOOR):
    """Invert ``R(y1, y2) = P(min(X0, X1) > y1, max(X0, X2) <= y2)``.

    The edges give ``A(y) = R(y, inf) = S0 S1`` and ``B(y) = R(-inf, y) = F0 F2``.
    Below the anchor, ``rho = R(y, x0) q / (eta A(y) B(x0))`` equals
    ``(q - F0) / (1 - F0)``; above it, ``sigma = R(x0, y) (1 - q) / (eta A(x0) B(y))``
    equals ``1 - q / F0``.  Solving for ``F0`` and dividing the edges
    recovers ``S1 = A / S0`` and ``F2 = B / F0``.
    """
    if anchor is None:
        raise ValidationError("anchor required for min/max recovery")
    grid = _as_grid(grid)
    y = grid.points
    x0, q = anchor.x0, anchor.q
    A = np.asarray(R(y, np.inf), dtype=float)
    B = np.asarray(R(-np.inf, y), dtype=float)
    A0 = float(R(x0, np.inf))
    B0 = float(R(-np.inf, x0))
    if A0 <= floor or B0 <= floor:
        raise UnrecoverableRegionError(f"anchor x0={x0} lies where the edge laws vanish")
    report = ReconstructionReport("minmax3", grid, [])
    f0 = np.full(y.shape, np.nan)
    inf_arr = np.full(y.shape, np.inf)

    below = y < x0
    if below.any():
        yb = y[below]
        xb = np.full(yb.shape, x0)
        eta = np.asarray(g(((yb, xb), (yb, inf_arr[below]), (-inf_arr[below], xb))), dtype=float)
        rho = _safe_div(np.asarray(R(yb, xb)) * q, eta * B0 * A[below], floor)
        singular = np.abs(1.0 - rho) < SINGULAR_TOL
        f0[below] = np.where(singular, np.nan, (q - rho) / (1.0 - rho))
    above = y > x0
    if above.any():
        ya = y[above]
        xa = np.full(ya.shape, x0)
        eta = np.asarray(g(((xa, ya), (xa, inf_arr[above]), (-inf_arr[above], ya))), dtype=float)
        sigma = _safe_div(np.asarray(R(xa, ya)) * (1.0 - q), eta * A0 * B[above], floor)
        singular = np.abs(1.0 - sigma) < SINGULAR_TOL
        f0[above] = np.where(singular, np.nan, q / (1.0 - sigma))
    f0[y == x0] = q
    s1 = _safe_div(A, 1.0 - f0, floor)
    f2 = _safe_div(B, f0, floor)
    report.recovered = [
        _finalize(f0, grid, report, 0),
        _finalize(1.0 - s1, grid, report, 1),
        _finalize(f2, grid, report, 2),
    ]
    report.extras["anchor_x0"] = float(x0)
    report.extras["anchor_q"] = float(q)
    if truth is not None:
        report.attach_truth(truth)
    return report


def _log(v):
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(v > 0, np.log(v), np.where(v == 0, -np.inf, np.nan))


def _tail_sum(log_h, c_lo, c_hi, x, max_iter):
    """Sum of the components whose band starts at ``c_lo``, for ``x > 0``.

    With ``t = x / c_lo`` both ``s = x`` and ``s = (c_hi / c_lo) x`` lie on
    the closed band ``[c_lo t, c_hi t]``, where only these components depend
    on ``s``; their sum therefore changes by ``log_h(t, x) - log_h(t, r x)``.
    The increments telescope towards ``+inf`` where the sum vanishes.
    """
    r = c_hi / c_lo
    total = np.zeros(x.shape)
    cur = x.astype(float).copy()
    active = np.ones(x.shape, dtype=bool)
    steps = 0
    while active.any() and steps < max_iter:
        idx = np.flatnonzero(active)
        t = cur[idx] / c_lo
        lo = log_h(t, cur[idx])
        # lo <= (remaining sum) <= 0, so a tiny |lo| bounds the dropped tail
        done = lo > -TAIL_TOL
        go = idx[~done]
        active[idx[done]] = False
        if go.size:
            hi = log_h(t[~done], r * cur[go])
            # -inf - (-inf) where an empirical law is zero: NaN, excluded later
            with np.errstate(invalid="ignore"):
                total[go] += lo[~done] - hi
            cur[go] *= r
        steps += 1
    total[active] = np.nan
    return total, steps, int(active.sum())


def _head_sum(log_h, c_lo, c_hi, x, origin_value, delta, max_iter):
    """Sum of the components up to the band ending at ``c_lo``, for ``x < 0``.

    Mirror of :func:`_tail_sum` on the negative axis: increments telescope
    towards 0 and the sum there is ``origin_value`` by continuity.
    """
    r = c_hi / c_lo
    total = np.zeros(x.shape)
    cur = x.astype(float).copy()
    active = np.ones(x.shape, dtype=bool)
    steps = 0
    while active.any() and steps < max_iter:
        idx = np.flatnonzero(active)
        done = np.abs(cur[idx]) < delta
        active[idx[done]] = False
        go = idx[~done]
        if go.size:
            t = cur[go] / c_hi
            with np.errstate(invalid="ignore"):
                total[go] += log_h(t, cur[go]) - log_h(t, cur[go] / r)
            cur[go] /= r
        steps += 1
    total[active] = np.nan
    return total + origin_value, steps, int(active.sum())


def solve_peeling(log_h, c, x, max_iter=MAX_TELESCOPING_STEPS):
    """Solve ``sum_i L_i(min(c_i t, s)) = log_h(t, s)`` for every ``L_k`` at ``x``.

    ``c`` must be strictly increasing and positive.  For ``s`` between
    ``c_{k-1} t`` and ``c_k t`` (``t > 0``) only the components ``i >= k``
    depend on ``s``, so differences of ``log_h`` along that band determine the
    tail sum ``P_k = sum_{i>=k} L_i`` up to its value at ``+inf``, which is
    0.  Components are peeled off as ``L_k = P_k - P_{k+1}``, highest ratio
    first.  For ``t < 0`` the bands reverse order and the head sums
    ``Q_k = sum_{i<=k} L_i`` telescope towards 0, where continuity ties them
    to the positive side.

    Returns ``(L, steps, stalled)``: ``L[k]`` holds ``L_k(x)`` (NaN where
    the telescoping did not converge), ``steps[k]`` the longest series run
    for band ``k`` and ``stalled[k]`` the number of points that hit the cap.
    """
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float)
    n = c.size
    if np.any(c <= 0) or np.any(np.diff(c) <= 0):
        raise ValidationError("ratios must be positive and strictly increasing")
    steps = [0] * n
    stalled = [0] * n
    pos, neg, zero = x > 0, x < 0, x == 0
    L = np.full((n, x.size), np.nan)

    def tail(k, pts):
        if k >= n:
            return np.zeros(pts.shape)
        if k == 0:
            return log_h(np.full(pts.shape, np.inf), pts)
        vals, used, bad = _tail_sum(log_h, c[k - 1], c[k], pts, max_iter)
        steps[k] = max(steps[k], used)
        stalled[k] += bad
        return vals

    if pos.any():
        xp = x[pos]
        P = [tail(k, xp) for k in range(n + 1)]
        for k in range(n):
            L[k, pos] = P[k] - P[k + 1]

    if neg.any() or zero.any():
        delta = ZERO_TOL * max(1.0, float(np.abs(x).max()))
        eps = np.array([delta])
        at0 = [float(tail(k, eps)[0]) for k in range(n + 1)]
        total0 = at0[0]
        if zero.any():
            for k in range(n):
                L[k, zero] = at0[k] - at0[k + 1]
        if neg.any():
            xn = x[neg]
            Q = [np.zeros(xn.shape)]
            for k in range(n):
                if k == n - 1:
                    Q.append(log_h(np.zeros(xn.shape), xn))
                    continue
                origin = total0 - at0[k + 1]
                vals, used, bad = _head_sum(log_h, c[k], c[k + 1], xn, origin, delta, max_iter)
                steps[k] = max(steps[k], used)
                stalled[k] += bad
                Q.append(vals)
            for k in range(n):
                L[k, neg] = Q[k + 1] - Q[k]
    return L, steps, stalled


def recover_scaled_extremes(G, sv, g, grid, scheme="max", truth=None, max_iter=MAX_TELESCOPING_STEPS):
    """Recover ``n`` components from scaled maxima (or minima).

    ``G(t, s)`` is the joint CDF of ``(max a_i X_i, max b_i X_i)`` (``scheme="max"``)
    or the joint survival function of the minima (``scheme="min"``).  The
    generator is divided out pointwise, then :func:`solve_peeling` runs on the
    log of the product of component CDFs.  Grid points ``y <= 0`` need every
    component CDF to be positive on the whole line.  Minima are handled by
    reflecting ``X -> -X``, which turns them into maxima.
    """
    if scheme not in ("max", "min"):
        raise ValidationError(f"scheme must be 'max' or 'min', got {scheme!r}")
    if not isinstance(g, PointGenerator) or g.arity != sv.n:
        raise ValidationError("generator arity must match the number of components")
    grid = _as_grid(grid)
    a = np.array(sv.a)
    b = np.array(sv.b)
    order = sv.order
    c_sorted = sv.c_sorted
    sign = 1.0 if scheme == "max" else -1.0

    # laws that can evaluate their own logarithm avoid underflow in far tails
    log_value = getattr(G, "log_value", None)

    def log_h(t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        with np.errstate(invalid="ignore"):
            pts = [np.minimum(t / ai, s / bi) for ai, bi in zip(a, b)]
        # reflected problem: G'(t, s) = S(-t, -s), eta'(x) = eta(-x)
        if log_value is not None:
            log_val = np.asarray(log_value(sign * t, sign * s), dtype=float)
        else:
            log_val = _log(np.asarray(G(sign * t, sign * s), dtype=float))
        eta = np.asarray(g(*(sign * p for p in pts), strict=False), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return log_val - _log(eta)

    y = grid.points
    report = ReconstructionReport("scaled_max_n" if scheme == "max" else "scaled_min_n", grid, [None] * sv.n)
    report.iterations_per_component = [0] * sv.n
    for k, comp in enumerate(order):
        xs = b[comp] * sign * y
        L, steps, stalled = solve_peeling(log_h, c_sorted, xs, max_iter=max_iter)
        Fk = np.exp(L[k])
        if scheme == "min":
            Fk = 1.0 - Fk
        undefined = ~np.isfinite(L[k])
        if undefined.any():
            report.notes.append(
                f"component {comp}: log undefined at {int(undefined.sum())} grid point(s); "
                "shrink the domain to where every component CDF is positive"
            )
        if stalled[k]:
            report.notes.append(f"component {comp}: telescoping hit the {max_iter}-step cap at {stalled[k]} point(s)")
        Fk = np.where(undefined, np.nan, Fk)
        report.recovered[comp] = _finalize(Fk, grid, report, comp)
        report.iterations_per_component[comp] = int(steps[k])
    report.iterations = max(report.iterations_per_component)
    if truth is not None:
        report.attach_truth(truth)
    return report


@dataclass
class UniquenessVerdict:
    joint_distance: float
    component_distances: list
    tol: float
    scheme: str

    @property
    def joint_equal(self):
        return self.joint_distance <= self.tol

    @property
    def components_equal(self):
        return all(d <= 10 * self.tol for d in self.component_distances)

    @property
    def contradiction(self):
        """Equal joint laws with components that differ on the common support."""
        return self.joint_equal and not self.components_equal

    @property
    def label(self):
        if not self.joint_equal:
            return "joints differ"
        return "contradiction" if self.contradiction else "equal/equal"


def _probe_pairs(law, pts):
    ext = np.concatenate(([-np.inf], pts, [np.inf]))
    Y1, Y2 = np.meshgrid(ext, ext, indexing="ij")
    return Y1.ravel(), Y2.ravel()


def check_uniqueness(law_a, law_b, probe_grid, tol=1e-9):
    """Compare two models through their joint laws and their components.

    The joint distance is the sup over the probe lattice extended by the
    infinite edges.  Component distances are sups over probe points where
    both CDFs lie strictly inside (0, 1).
    """
    if not (isinstance(law_a, JointExtremeLaw) and isinstance(law_b, JointExtremeLaw)):
        raise ValidationError("check_uniqueness compares two JointExtremeLaw objects")
    if law_a.scheme != law_b.scheme:
        raise ValidationError(f"scheme mismatch: {law_a.scheme} vs {law_b.scheme}")
    if law_a.scales != law_b.scales:
        raise ValidationError("scale vectors differ between the two models")
    if len(law_a.components) != len(law_b.components):
        raise ValidationError("component counts differ")
    probe_grid = _as_grid(probe_grid)
    y1, y2 = _probe_pairs(law_a, probe_grid.points)
    joint = float(np.max(np.abs(np.asarray(law_a(y1, y2)) - np.asarray(law_b(y1, y2)))))
    y = probe_grid.points
    comps = []
    for fa, fb in zip(law_a.components, law_b.components):
        va, vb = np.asarray(fa.cdf(y)), np.asarray(fb.cdf(y))
        common = (va > 0) & (va < 1) & (vb > 0) & (vb < 1)
        comps.append(float(np.abs(va - vb)[common].max()) if common.any() else 0.0)
    return UniquenessVerdict(joint, comps, tol, law_a.scheme)


@dataclass
class DemoRecord:
    """Two component orderings with the same law of ``max(X0, X1)``."""

    pair: tuple
    swapped: tuple
    grid: Grid
    product: np.ndarray
    product_swapped: np.ndarray
    witness: tuple = None

    @property
    def degenerate(self):
        return self.witness is None

    @property
    def product_gap(self):
        return float(np.max(np.abs(self.product - self.product_swapped)))

    def to_text(self):
        f0, f1 = self.pair
        lines = [
            "single-maximum non-identifiability",
            f"  model A: X0 ~ {f0.literal}, X1 ~ {f1.literal}",
            f"  model B: X0 ~ {f1.literal}, X1 ~ {f0.literal}",
            f"  grid: {len(self.grid)} points on [{self.grid.min:.6g}, {self.grid.max:.6g}]",
            f"  sup |F_Y1(A) - F_Y1(B)| = {self.product_gap:.17g}",
        ]
        if self.degenerate:
            lines.append("  degenerate: the components coincide on the grid, so swapping changes nothing")
        else:
            yw, a, b = self.witness
            lines.append(f"  witness y = {yw:.17g}: F0(y) = {a:.17g}, F1(y) = {b:.17g}, gap = {abs(a - b):.17g}")
            lines.append("  Y1 alone cannot tell the two models apart")
        return "\n".join(lines) + "\n"


def single_max_nonuniqueness_demo(f0, f1, grid=None):
    """Show that ``F_{Y1} = F0 F1`` is blind to swapping the two components.

    The witness is the grid point where the components differ most.
    """
    if grid is None:
        lo = min(float(f0.quantile(1e-3)), float(f1.quantile(1e-3)))
        hi = max(float(f0.quantile(1 - 1e-3)), float(f1.quantile(1 - 1e-3)))
        grid = Grid.linspace(lo, hi, 1001)
    grid = _as_grid(grid)
    y = grid.points
    v0, v1 = np.asarray(f0.cdf(y)), np.asarray(f1.cdf(y))
    gap = np.abs(v0 - v1)
    witness = None
    if gap.max() > 0:
        j = int(np.argmax(gap))
        witness = (float(y[j]), float(v0[j]), float(v1[j]))
    return DemoRecord((f0, f1), (f1, f0), grid, v0 * v1, v1 * v0, witness)
