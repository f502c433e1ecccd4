"""Monte Carlo sampling of observable extremes and plug-in reconstruction.

Draws are split into fixed-size chunks, each with its own substream spawned
from ``numpy.random.SeedSequence(seed)``.  The chunk layout depends only on
``n``, so a batch is bit-identical whatever number of worker threads
produced it.  ``MAXMIN_IDENT_THREADS`` caps the worker count.
"""

import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_array, check_count, check_open_unit, check_pairs
from .dependence import MAX_INDEPENDENT, MIN_INDEPENDENT, independent_generator, lift_to_rect
from .exceptions import ValidationError
from .forward_model import ScaleVectors
from .reconstruct import (
    recover_from_maxima,
    recover_from_minima,
    recover_from_minmax,
    recover_scaled_extremes,
)

__all__ = [
    "SampleBatch",
    "EmpiricalJointLaw",
    "sample_shared_component",
    "sample_scaled_maxima",
    "sample_scaled_minima",
    "empirical_law",
    "dkw_bound",
    "plugin_reconstruct",
    "worker_count",
    "AMPLIFICATION",
]

CHUNK_SIZE = 1 << 16
THREADS_ENV = "MAXMIN_IDENT_THREADS"
# Recovery divides empirical quantities, so the DKW half-width is inflated.
AMPLIFICATION = 5.0
_HALF_ULP = 2.0 ** -54
_TRIPLE_SCHEMES = ("maxima3", "minima3", "minmax3")
_MODES = ("cdf", "survival", "rectangle")
_DEFAULT_MODE = {
    "maxima3": "cdf",
    "minima3": "survival",
    "minmax3": "rectangle",
    "scaled_max_n": "cdf",
    "scaled_min_n": "survival",
}


def worker_count(default=None):
    """Number of sampling threads, capped by ``MAXMIN_IDENT_THREADS``."""
    n = default or os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
        if cap < 1:
            raise ValidationError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
        n = min(n, cap)
    return max(1, n)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Observed pairs ``(y1, y2)`` together with their provenance."""

    pairs: np.ndarray
    seed: int
    scheme: str

    def __post_init__(self):
        arr = check_pairs(self.pairs).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "pairs", arr)

    def __len__(self):
        return self.pairs.shape[0]

    @property
    def y1(self):
        return self.pairs[:, 0]

    @property
    def y2(self):
        return self.pairs[:, 1]

    def to_csv(self, fh=None):
        own = fh is None
        fh = io.StringIO() if own else fh
        fh.write("y1,y2\n")
        for a, b in self.pairs:
            fh.write(f"{a:.17g},{b:.17g}\n")
        fh.write(f"#summary,scheme={self.scheme},n={len(self)},seed={self.seed}\n")
        return fh.getvalue() if own else None


def _chunked(n, seed, draw):
    """Run ``draw(rng, size)`` over deterministic chunks and stack the results."""
    n = check_count(n, "n")
    sizes = [CHUNK_SIZE] * (n // CHUNK_SIZE)
    if n % CHUNK_SIZE:
        sizes.append(n % CHUNK_SIZE)
    children = np.random.SeedSequence(int(seed)).spawn(len(sizes))
    jobs = list(zip(children, sizes))

    def run(job):
        ss, size = job
        return draw(np.random.default_rng(ss), size)

    workers = min(worker_count(), len(jobs))
    if workers == 1:
        parts = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, jobs))
    return np.concatenate(parts, axis=0)


def _uniforms(rng, size, dim, theta):
    """``size`` draws of ``dim`` uniforms, FGM-coupled when ``theta`` is set.

    The top-order FGM density ``1 + theta * prod(1 - 2 u_i)`` is bounded by
    ``1 + |theta|``, so plain rejection sampling is exact.
    """
    if not theta:
        return rng.random((size, dim)) + _HALF_ULP
    out = np.empty((0, dim))
    while out.shape[0] < size:
        need = size - out.shape[0]
        u = rng.random((2 * need + 16, dim)) + _HALF_ULP
        dens = 1.0 + theta * np.prod(1.0 - 2.0 * u, axis=1)
        keep = rng.random(u.shape[0]) * (1.0 + abs(theta)) < dens
        out = np.concatenate((out, u[keep][:need]))
    return out


def _check_theta(theta):
    if theta is None:
        return 0.0
    theta = float(theta)
    if not -1.0 < theta < 1.0:
        raise ValidationError(f"FGM theta must lie in (-1, 1), got {theta}")
    return theta


def sample_shared_component(f0, f1, f2, n, seed, scheme="maxima3", theta=None):
    """Sample ``(Y1, Y2)`` from a triple ``(X0, X1, X2)``.

    The components are independent unless ``theta`` is given, in which case
    they are coupled by the top-order FGM copula (the law generated by
    :func:`~maxmin_ident.dependence.fgm_generator`).  ``scheme`` picks
    ``(max, max)``, ``(min, min)`` or ``(min, max)`` of ``(X0, X1)`` and
    ``(X0, X2)``.
    """
    if scheme not in _TRIPLE_SCHEMES:
        raise ValidationError(f"scheme must be one of {_TRIPLE_SCHEMES}, got {scheme!r}")
    theta = _check_theta(theta)
    comps = (f0, f1, f2)

    def draw(rng, size):
        u = _uniforms(rng, size, 3, theta)
        x0, x1, x2 = (np.asarray(f.quantile(u[:, i])) for i, f in enumerate(comps))
        if scheme == "maxima3":
            return np.column_stack((np.maximum(x0, x1), np.maximum(x0, x2)))
        if scheme == "minima3":
            return np.column_stack((np.minimum(x0, x1), np.minimum(x0, x2)))
        return np.column_stack((np.minimum(x0, x1), np.maximum(x0, x2)))

    return SampleBatch(_chunked(n, seed, draw), int(seed), scheme)


def _sample_scaled(fs, sv, n, seed, theta, reduce, scheme):
    fs = tuple(fs)
    if not isinstance(sv, ScaleVectors):
        sv = ScaleVectors(*sv)
    if len(fs) != sv.n:
        raise ValidationError("one distribution per scale entry is required")
    theta = _check_theta(theta)
    a = np.array(sv.a)
    b = np.array(sv.b)

    def draw(rng, size):
        u = _uniforms(rng, size, len(fs), theta)
        x = np.column_stack([np.asarray(f.quantile(u[:, i])) for i, f in enumerate(fs)])
        return np.column_stack((reduce(x * a, axis=1), reduce(x * b, axis=1)))

    return SampleBatch(_chunked(n, seed, draw), int(seed), scheme)


def sample_scaled_maxima(fs, sv, n, seed, theta=None):
    """Sample ``(max_i a_i X_i, max_i b_i X_i)`` for independent (or FGM) ``X_i``."""
    return _sample_scaled(fs, sv, n, seed, theta, np.max, "scaled_max_n")


def sample_scaled_minima(fs, sv, n, seed, theta=None):
    """Sample ``(min_i a_i X_i, min_i b_i X_i)``."""
    return _sample_scaled(fs, sv, n, seed, theta, np.min, "scaled_min_n")


class _DominanceCounter:
    """Count points with ``x <= qx`` and ``y <= qy`` for many queries at once.

    A merge-sort tree over the points ordered by ``x``: level ``l`` stores the
    ``y``-ranks sorted within consecutive blocks of ``2**l`` points.  The
    prefix of the first ``k`` points splits into one block per set bit of
    ``k``, each answered by a binary search.
    """

    def __init__(self, x, y):
        order = np.argsort(x, kind="stable")
        self.xs = x[order]
        self.ys = np.sort(y)
        n = x.size
        self.n = n
        rank = np.searchsorted(self.ys, y[order], side="left").astype(np.int64)
        pos = np.arange(n, dtype=np.int64)
        self.levels = []
        level = 0
        while (1 << level) <= n:
            keys = (pos >> level) * n + rank
            self.levels.append(np.sort(keys))
            level += 1

    def count(self, qx, qy):
        k = np.searchsorted(self.xs, qx, side="right").astype(np.int64)
        r = np.searchsorted(self.ys, qy, side="right").astype(np.int64)
        total = np.zeros(k.shape, dtype=np.int64)
        n = self.n
        for level, keys in enumerate(self.levels):
            hit = ((k >> level) & 1).astype(bool)
            if not hit.any():
                continue
            j = (k[hit] >> level) - 1
            found = np.searchsorted(keys, j * n + r[hit], side="left")
            total[hit] += found - j * (1 << level)
        return total

    def count_x(self, qx):
        return np.searchsorted(self.xs, qx, side="right")

    def count_y(self, qy):
        return np.searchsorted(self.ys, qy, side="right")


class EmpiricalJointLaw:
    """Step-function estimate of the joint law of a :class:`SampleBatch`.

    ``mode`` is ``"cdf"`` for ``P(Y1 <= y1, Y2 <= y2)``, ``"survival"`` for
    ``P(Y1 > y1, Y2 > y2)`` and ``"rectangle"`` for ``P(Y1 > y1, Y2 <= y2)``.
    Evaluations are read-only and safe to share across threads.
    """

    def __init__(self, batch, mode=None):
        if not isinstance(batch, SampleBatch):
            raise ValidationError("empirical_law needs a SampleBatch")
        mode = mode or _DEFAULT_MODE.get(batch.scheme)
        if mode not in _MODES:
            raise ValidationError(f"mode must be one of {_MODES}, got {mode!r}")
        self.batch = batch
        self.mode = mode
        self.scheme = batch.scheme
        self._counter = _DominanceCounter(batch.y1, batch.y2)

    @property
    def n(self):
        return len(self.batch)

    def __call__(self, y1, y2):
        a1, a2 = np.broadcast_arrays(as_float_array(y1), as_float_array(y2))
        shape = a1.shape
        q1, q2 = a1.ravel().astype(float), a2.ravel().astype(float)
        c = self._counter
        both = c.count(q1, q2)
        if self.mode == "cdf":
            cnt = both
        elif self.mode == "survival":
            cnt = self.n - c.count_x(q1) - c.count_y(q2) + both
        else:
            cnt = c.count_y(q2) - both
        out = (cnt / self.n).reshape(shape)
        if not shape:
            return float(out)
        return out

    def marginal(self, which=1):
        """Empirical CDF of ``Y1`` (``which=1``) or ``Y2`` as a callable."""
        c = self._counter
        fn = c.count_x if which == 1 else c.count_y
        return lambda y: fn(as_float_array(y)) / self.n


def empirical_law(batch, mode=None):
    """Plug-in estimate of ``G``, ``S`` or ``R``; ``mode`` defaults from the scheme."""
    return EmpiricalJointLaw(batch, mode)


def dkw_bound(n, alpha=0.05):
    """Half-width ``sqrt(ln(2 / alpha) / (2 n))`` of the DKW confidence band.

    Exact for a univariate empirical CDF; applied per slice of a bivariate
    estimate it is only a heuristic.
    """
    n = check_count(n, "n")
    alpha = check_open_unit(alpha, "alpha")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def plugin_reconstruct(batch, grid, generator=None, anchor=None, scales=None, truth=None, alpha=0.05):
    """Run the matching recovery on the empirical law of ``batch``.

    ``generator`` defaults to the independent one for the scheme.  The
    report's ``extras`` carry the DKW half-width, the amplified error budget
    and a ``vacuous`` flag when that budget reaches 1.
    """
    law = empirical_law(batch)
    scheme = batch.scheme
    if scheme == "maxima3":
        g = generator or independent_generator(3, MAX_INDEPENDENT)
        report = recover_from_maxima(law, g, grid, truth=truth)
    elif scheme == "minima3":
        g = generator or independent_generator(3, MIN_INDEPENDENT)
        report = recover_from_minima(law, g, grid, truth=truth)
    elif scheme == "minmax3":
        g = generator or lift_to_rect(independent_generator(3))
        report = recover_from_minmax(law, g, anchor, grid, truth=truth)
    elif scheme in ("scaled_max_n", "scaled_min_n"):
        if scales is None:
            raise ValidationError("scaled schemes need scale vectors")
        kind = MAX_INDEPENDENT if scheme == "scaled_max_n" else MIN_INDEPENDENT
        g = generator or independent_generator(scales.n, kind)
        direction = "max" if scheme == "scaled_max_n" else "min"
        report = recover_scaled_extremes(law, scales, g, grid, scheme=direction, truth=truth)
    else:
        raise ValidationError(f"unknown scheme {scheme!r}")
    half = dkw_bound(len(batch), alpha)
    report.extras["n_samples"] = len(batch)
    report.extras["alpha"] = float(alpha)
    report.extras["dkw_bound"] = half
    report.extras["error_budget"] = AMPLIFICATION * half
    report.extras["vacuous"] = AMPLIFICATION * half >= 1.0
    if report.extras["vacuous"]:
        report.notes.append("error budget is vacuous at this sample size")
    return report
