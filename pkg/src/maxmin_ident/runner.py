"""Experiment configuration and the batch commands behind the CLI.

A configuration is a JSON object::

    {
      "scheme": "maxima3",
      "components": ["uniform(0,1)", "exponential(1)", "weibull(2,1)"],
      "generator": "independent",
      "grid": {"min": 0.05, "max": 3.0, "count": 101},
      "anchor": {"quantile": 0.5},
      "scales": {"a": [1, 1], "b": [1, 2]},
      "mc": {"n": 100000, "seed": 0, "alpha": 0.05},
      "output": "out.csv"
    }

Every ``run_*`` function returns the full text of its CSV report; the last
line always starts with ``#summary,``.  Reals are written with 17
significant digits so reruns are byte-identical.
"""

import io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .dependence import (
    MAX_INDEPENDENT,
    MIN_INDEPENDENT,
    fgm_generator,
    fgm_rect_generator,
    independent_generator,
    lift_to_rect,
    load_tabulated_generator,
    shared_component_triple,
)
from .dist_core import Exponential, Grid, Uniform, Weibull, Gumbel, parse_distribution
from .empirics import plugin_reconstruct, sample_scaled_maxima, sample_scaled_minima, sample_shared_component
from .exceptions import ConfigError, ValidationError
from .forward_model import SCHEMES, ScaleVectors, build_law, validate_joint
from .reconstruct import (
    Anchor,
    check_uniqueness,
    recover_from_maxima,
    recover_from_minima,
    recover_from_minmax,
    recover_scaled_extremes,
    single_max_nonuniqueness_demo,
)

__all__ = [
    "ExperimentConfig",
    "GridSpec",
    "McSpec",
    "load_config",
    "parse_config",
    "resolve_generator",
    "random_model_pair",
    "run_forward",
    "run_recover",
    "run_verify",
    "run_mc",
    "run_demo",
    "fmt_real",
]

_GEN = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")


def fmt_real(x):
    """17 significant digits; infinities as ``inf`` and ``-inf``."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _footer(items):
    parts = []
    for k, v in items.items():
        if isinstance(v, bool):
            v = str(v).lower()
        elif isinstance(v, float):
            v = fmt_real(v)
        parts.append(f"{k}={v}")
    return "#summary," + ",".join(parts) + "\n"


@dataclass(frozen=True)
class GridSpec:
    min: float
    max: float
    count: int

    def build(self):
        return Grid.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class McSpec:
    n: int
    seed: int = 0
    alpha: float = 0.05


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description."""

    scheme: str
    components: tuple = ()
    components_alt: tuple = ()
    scheme_alt: str = None
    generator: str = "independent"
    scales: ScaleVectors = None
    anchor: dict = None
    grid: GridSpec = None
    mc: McSpec = None
    trials: int = 0
    seed: int = 0
    law_table: str = None
    output: str = None
    extra: dict = field(default_factory=dict)

    def anchor_for(self, f0):
        """Resolve the anchor block against the true first component if needed."""
        if self.anchor is None:
            return None
        if "quantile" in self.anchor:
            if f0 is None:
                raise ConfigError("a quantile anchor needs the first component", "anchor")
            return Anchor.at_quantile(f0, self.anchor["quantile"])
        return Anchor(self.anchor["x0"], self.anchor["q"])


def _need(d, key, kind, where):
    if key not in d:
        raise ConfigError("missing required key", f"{where}{key}")
    val = d[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"expected a number, got {val!r}", f"{where}{key}")
        return float(val)
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise ConfigError(f"expected an integer, got {val!r}", f"{where}{key}")
        return val
    return val


def _components(raw, key):
    if not isinstance(raw, list) or not raw:
        raise ConfigError("expected a nonempty list of distribution literals", key)
    out = []
    for i, lit in enumerate(raw):
        try:
            out.append(parse_distribution(lit))
        except ValidationError as exc:
            raise ConfigError(str(exc), f"{key}[{i}]") from exc
    return tuple(out)


def parse_config(data, seed=None, grid_count=None):
    """Validate a decoded JSON object; ``seed`` and ``grid_count`` override it."""
    if not isinstance(data, dict):
        raise ConfigError("top level must be a JSON object", "config")
    scheme = data.get("scheme")
    if scheme not in SCHEMES:
        raise ConfigError(f"expected one of {', '.join(SCHEMES)}, got {scheme!r}", "scheme")
    kw = {"scheme": scheme}
    if "components" in data:
        kw["components"] = _components(data["components"], "components")
    if "components_alt" in data:
        kw["components_alt"] = _components(data["components_alt"], "components_alt")
    if "scheme_alt" in data:
        kw["scheme_alt"] = data["scheme_alt"]
    gen = data.get("generator", "independent")
    if not isinstance(gen, str) or not _GEN.match(gen):
        raise ConfigError(f"cannot parse generator {gen!r}", "generator")
    kw["generator"] = gen
    if "scales" in data:
        s = data["scales"]
        if not isinstance(s, dict):
            raise ConfigError("expected an object with lists a and b", "scales")
        a, b = _need(s, "a", list, "scales."), _need(s, "b", list, "scales.")
        try:
            kw["scales"] = ScaleVectors(tuple(a), tuple(b))
        except (ValidationError, TypeError) as exc:
            raise ConfigError(str(exc), "scales") from exc
    elif scheme.startswith("scaled"):
        raise ConfigError("scaled schemes need scale vectors", "scales")
    if "anchor" in data:
        anc = data["anchor"]
        if not isinstance(anc, dict):
            raise ConfigError("expected an object", "anchor")
        if "quantile" in anc:
            u = _need(anc, "quantile", float, "anchor.")
            if not 0.0 < u < 1.0:
                raise ConfigError("must lie strictly inside (0, 1)", "anchor.quantile")
            kw["anchor"] = {"quantile": u}
        else:
            x0 = _need(anc, "x0", float, "anchor.")
            q = _need(anc, "q", float, "anchor.")
            if not math.isfinite(x0):
                raise ConfigError("must be finite", "anchor.x0")
            if not 0.0 < q < 1.0:
                raise ConfigError("must lie strictly inside (0, 1)", "anchor.q")
            kw["anchor"] = {"x0": x0, "q": q}
    if "grid" in data:
        g = data["grid"]
        if not isinstance(g, dict):
            raise ConfigError("expected an object with min, max, count", "grid")
        lo, hi = _need(g, "min", float, "grid."), _need(g, "max", float, "grid.")
        count = grid_count if grid_count is not None else _need(g, "count", int, "grid.")
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError("need finite min < max", "grid")
        if isinstance(count, bool) or not isinstance(count, int) or count < 2:
            raise ConfigError(f"must be an integer >= 2, got {count!r}", "grid.count")
        kw["grid"] = GridSpec(lo, hi, count)
    elif grid_count is not None:
        raise ConfigError("--grid-count given but the config has no grid block", "grid")
    base_seed = data.get("seed", 0)
    if "mc" in data:
        m = data["mc"]
        if not isinstance(m, dict):
            raise ConfigError("expected an object", "mc")
        n = _need(m, "n", int, "mc.")
        if n < 1:
            raise ConfigError(f"must be >= 1, got {n}", "mc.n")
        alpha = _need(m, "alpha", float, "mc.") if "alpha" in m else 0.05
        if not 0.0 < alpha < 1.0:
            raise ConfigError(f"must lie strictly inside (0, 1), got {m.get('alpha')!r}", "mc.alpha")
        mc_seed = m.get("seed", base_seed)
        if isinstance(mc_seed, bool) or not isinstance(mc_seed, int) or mc_seed < 0:
            raise ConfigError(f"must be a nonnegative integer, got {mc_seed!r}", "mc.seed")
        kw["mc"] = McSpec(n, seed if seed is not None else mc_seed, alpha)
    if isinstance(base_seed, bool) or not isinstance(base_seed, int) or base_seed < 0:
        raise ConfigError(f"must be a nonnegative integer, got {base_seed!r}", "seed")
    kw["seed"] = seed if seed is not None else base_seed
    if "trials" in data:
        t = _need(data, "trials", int, "")
        if t < 1:
            raise ConfigError(f"must be >= 1, got {t}", "trials")
        kw["trials"] = t
    if "law_table" in data:
        kw["law_table"] = str(data["law_table"])
    if "output" in data:
        kw["output"] = str(data["output"])
    comps = kw.get("components", ())
    if comps:
        if scheme.startswith("scaled"):
            if kw["scales"].n != len(comps):
                raise ConfigError("one component per scale entry is required", "components")
        elif len(comps) != 3:
            raise ConfigError(f"{scheme} needs exactly 3 components, got {len(comps)}", "components")
    return ExperimentConfig(**kw)


def load_config(path, seed=None, grid_count=None):
    """Read and validate a JSON configuration file."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}", "config") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}") from exc
    return parse_config(data, seed=seed, grid_count=grid_count)


def resolve_generator(spec, scheme, components):
    """Build the generator named by ``spec`` for ``scheme`` and ``components``.

    Accepted forms: ``independent``, ``shared_component(<dist>)`` (triple
    schemes), ``fgm(<theta>)`` and ``tabulated(<csv path>)``.
    """
    m = _GEN.match(spec)
    if not m:
        raise ConfigError(f"cannot parse generator {spec!r}", "generator")
    name, arg = m.group(1), (m.group(2) or "").strip()
    kind = MIN_INDEPENDENT if scheme in ("minima3", "scaled_min_n") else MAX_INDEPENDENT
    n = len(components) if scheme.startswith("scaled") else 3
    try:
        if name == "independent":
            g = independent_generator(n, kind)
        elif name == "shared_component":
            if scheme.startswith("scaled"):
                raise ConfigError("shared_component applies to the three-variable schemes", "generator")
            if not arg:
                raise ConfigError("shared_component needs a latent distribution, e.g. shared_component(exponential(1))", "generator")
            g = shared_component_triple(parse_distribution(arg), kind)
        elif name == "fgm":
            theta = float(arg)
            if scheme == "minmax3":
                return fgm_rect_generator(components, theta)
            g = fgm_generator(components, theta, kind)
        elif name == "tabulated":
            g = load_tabulated_generator(arg, kind)
            if g.arity != n:
                raise ConfigError(f"table has arity {g.arity}, scheme needs {n}", "generator")
        else:
            raise ConfigError(f"unknown generator family {name!r}", "generator")
    except ConfigError:
        raise
    except (ValidationError, ValueError, OSError) as exc:
        raise ConfigError(str(exc), "generator") from exc
    if scheme == "minmax3":
        return lift_to_rect(g, components)
    return g


def _build(cfg, components, scheme=None):
    scheme = scheme or cfg.scheme
    g = resolve_generator(cfg.generator, scheme, components)
    try:
        return build_law(scheme, components, g, cfg.scales)
    except ValidationError as exc:
        raise ConfigError(str(exc), "scheme") from exc


def _require(cfg, *names):
    for name in names:
        if not getattr(cfg, name):
            raise ConfigError("missing required key", name)


def _edges(mode):
    """Infinite edge coordinates realising the two marginals in each mode."""
    if mode == "cdf":
        return math.inf, math.inf
    if mode == "survival":
        return -math.inf, -math.inf
    return math.inf, -math.inf


def run_forward(cfg):
    """Lattice table ``y1,y2,value`` plus the infinite-edge rows."""
    _require(cfg, "components", "grid")
    law = _build(cfg, cfg.components)
    grid = cfg.grid.build()
    y = grid.points
    Y1, Y2 = np.meshgrid(y, y, indexing="ij")
    vals = np.asarray(law(Y1, Y2))
    e1, e2 = _edges(law.mode)
    first = np.asarray(law(y, np.full(y.shape, e1)))
    second = np.asarray(law(np.full(y.shape, e2), y))
    report = validate_joint(law, grid)
    out = io.StringIO()
    out.write("y1,y2,value\n")
    for i in range(y.size):
        for j in range(y.size):
            out.write(f"{fmt_real(y[i])},{fmt_real(y[j])},{fmt_real(vals[i, j])}\n")
    for j in range(y.size):
        out.write(f"{fmt_real(y[j])},{fmt_real(e1)},{fmt_real(first[j])}\n")
    for j in range(y.size):
        out.write(f"{fmt_real(e2)},{fmt_real(y[j])},{fmt_real(second[j])}\n")
    items = {
        "command": "forward",
        "scheme": cfg.scheme,
        "mode": law.mode,
        "generator": law.generator.name,
        "rows": int(y.size * y.size + 2 * y.size),
        "edge_rows": int(2 * y.size),
        "validate_joint": "pass" if report.ok else "fail",
    }
    for k, v in report.worst.items():
        items[f"worst_{k}"] = float(v)
    out.write(_footer(items))
    return out.getvalue()


class LatticeLaw:
    """Joint law read back from a forward table.

    Lattice and edge values are exact; other finite points are interpolated
    bilinearly (clamped to the lattice), and the remaining infinite corners
    take their limiting values.
    """

    def __init__(self, scheme, grid, values, first_edge, second_edge):
        self.scheme = scheme
        self.mode = {"maxima3": "cdf", "minima3": "survival", "minmax3": "rectangle"}.get(scheme)
        if self.mode is None:
            raise ConfigError("law tables are supported for the three-variable schemes", "law_table")
        self.grid = grid
        self.values = values
        self.first_edge = first_edge
        self.second_edge = second_edge
        self.e1, self.e2 = _edges(self.mode)
        self._interp = RegularGridInterpolator((grid.points, grid.points), values)

    @classmethod
    def from_csv(cls, path, scheme):
        try:
            with open(path) as fh:
                lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc.strerror}", "law_table") from exc
        if not lines or lines[0] != "y1,y2,value":
            raise ConfigError("expected a forward table with header y1,y2,value", "law_table")
        try:
            rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        except ValueError as exc:
            raise ConfigError("non-numeric entry", "law_table") from exc
        fin = np.isfinite(rows[:, 0]) & np.isfinite(rows[:, 1])
        pts = np.unique(rows[fin, 0])
        m = pts.size
        if m < 2 or fin.sum() != m * m:
            raise ConfigError("lattice rows do not form a square grid", "law_table")
        body = rows[fin]
        i = np.searchsorted(pts, body[:, 0])
        j = np.searchsorted(pts, body[:, 1])
        vals = np.full((m, m), np.nan)
        vals[i, j] = body[:, 2]
        law = cls.__new__(cls)
        mode = {"maxima3": "cdf", "minima3": "survival", "minmax3": "rectangle"}.get(scheme)
        e1, e2 = _edges(mode) if mode else (None, None)
        first = np.full(m, np.nan)
        second = np.full(m, np.nan)
        for r in rows[~fin]:
            if r[1] == e1 and np.isfinite(r[0]):
                first[np.searchsorted(pts, r[0])] = r[2]
            elif r[0] == e2 and np.isfinite(r[1]):
                second[np.searchsorted(pts, r[1])] = r[2]
        if np.isnan(vals).any() or np.isnan(first).any() or np.isnan(second).any():
            raise ConfigError("lattice or edge rows are incomplete", "law_table")
        law.__init__(scheme, Grid(pts), vals, first, second)
        return law

    def _corner(self, a, b):
        """Limit values when both coordinates are infinite."""
        if self.mode == "cdf":
            return 1.0 if (a == np.inf and b == np.inf) else 0.0
        if self.mode == "survival":
            return 1.0 if (a == -np.inf and b == -np.inf) else 0.0
        return 1.0 if (a == -np.inf and b == np.inf) else 0.0

    def __call__(self, y1, y2):
        a1, a2 = np.broadcast_arrays(np.asarray(y1, dtype=float), np.asarray(y2, dtype=float))
        shape = a1.shape
        a1, a2 = a1.ravel(), a2.ravel()
        pts = self.grid.points
        out = np.empty(a1.shape)
        f1, f2 = np.isfinite(a1), np.isfinite(a2)
        both = f1 & f2
        if both.any():
            q = np.column_stack((np.clip(a1[both], pts[0], pts[-1]), np.clip(a2[both], pts[0], pts[-1])))
            out[both] = self._interp(q)
        for idx in np.flatnonzero(~both):
            a, b = a1[idx], a2[idx]
            if np.isfinite(a) and b == self.e1:
                out[idx] = np.interp(a, pts, self.first_edge)
            elif np.isfinite(b) and a == self.e2:
                out[idx] = np.interp(b, pts, self.second_edge)
            elif np.isfinite(a) or np.isfinite(b):
                # the other infinite edge carries no mass in this mode
                out[idx] = 0.0
            else:
                out[idx] = self._corner(a, b)
        out = out.reshape(shape)
        return float(out) if not shape else out


def _recover(cfg, law, grid, truth, components):
    scheme = cfg.scheme
    g = resolve_generator(cfg.generator, scheme, components) if components else None
    if scheme == "minmax3":
        if cfg.anchor is None:
            raise ConfigError("anchor required for minmax3 recovery", "anchor")
        anchor = cfg.anchor_for(components[0] if components else None)
        if g is None:
            g = lift_to_rect(independent_generator(3))
        return recover_from_minmax(law, g, anchor, grid, truth=truth)
    if g is None:
        if cfg.generator != "independent":
            raise ConfigError("a law table without components supports only the independent generator", "generator")
        kind = MIN_INDEPENDENT if scheme == "minima3" else MAX_INDEPENDENT
        g = independent_generator(3, kind)
    if scheme == "maxima3":
        return recover_from_maxima(law, g, grid, truth=truth)
    if scheme == "minima3":
        return recover_from_minima(law, g, grid, truth=truth)
    direction = "max" if scheme == "scaled_max_n" else "min"
    return recover_scaled_extremes(law, cfg.scales, g, grid, scheme=direction, truth=truth)


def run_recover(cfg):
    """Reconstruction report; truth columns are filled when components are known."""
    _require(cfg, "grid")
    if cfg.scheme == "minmax3" and cfg.anchor is None:
        raise ConfigError("anchor required for minmax3 recovery", "anchor")
    grid = cfg.grid.build()
    comps = cfg.components
    if cfg.law_table:
        law = LatticeLaw.from_csv(cfg.law_table, cfg.scheme)
    else:
        _require(cfg, "components")
        law = _build(cfg, comps)
    report = _recover(cfg, law, grid, comps or None, comps)
    report.extras["command"] = "recover"
    return report.to_csv()


def _model_pair_row(i, label, verdict):
    comps = ",".join(fmt_real(d) for d in verdict.component_distances)
    return f"{i},{label},{fmt_real(verdict.joint_distance)},{comps}\n"


def run_verify(cfg):
    """Uniqueness check of two component lists, or a randomized search.

    With ``trials`` set, each trial draws a random admissible pair of models
    (see :func:`random_model_pair`) and the report counts contradictions.
    """
    _require(cfg, "grid")
    grid = cfg.grid.build()
    out = io.StringIO()
    out.write("trial,verdict,joint_distance,component_distances\n")
    if cfg.trials:
        rng = np.random.default_rng(cfg.seed)
        counts = {"equal/equal": 0, "joints differ": 0, "contradiction": 0}
        for i in range(cfg.trials):
            law_a, law_b = random_model_pair(rng, cfg.scheme)
            probe = _probe_grid(law_a, law_b, grid)
            v = check_uniqueness(law_a, law_b, probe)
            counts[v.label] += 1
            out.write(_model_pair_row(i, v.label, v))
        items = {"command": "verify", "scheme": cfg.scheme, "trials": cfg.trials, "seed": cfg.seed}
        items.update({k.replace("/", "_").replace(" ", "_"): n for k, n in counts.items()})
        out.write(_footer(items))
        return out.getvalue()
    _require(cfg, "components", "components_alt")
    if cfg.scheme_alt is not None and cfg.scheme_alt != cfg.scheme:
        raise ConfigError(f"scheme mismatch: {cfg.scheme} vs {cfg.scheme_alt}", "scheme_alt")
    if len(cfg.components_alt) != len(cfg.components):
        raise ConfigError("both component lists must have the same length", "components_alt")
    law_a = _build(cfg, cfg.components)
    law_b = _build(cfg, cfg.components_alt)
    v = check_uniqueness(law_a, law_b, grid)
    out.write(_model_pair_row(0, v.label, v))
    out.write(_footer({"command": "verify", "scheme": cfg.scheme, "verdict": v.label, "tol": v.tol}))
    return out.getvalue()


def _probe_grid(law_a, law_b, grid):
    """The configured grid, widened to cover the central range of both models."""
    lo, hi = grid.min, grid.max
    for law in (law_a, law_b):
        for d in law.components:
            lo = min(lo, float(d.quantile(0.01)))
            hi = max(hi, float(d.quantile(0.99)))
    return Grid.linspace(lo, hi, len(grid))


def run_mc(cfg):
    """Sample, estimate the joint law, recover and report the DKW budget."""
    _require(cfg, "components", "grid", "mc")
    if cfg.scheme == "minmax3" and cfg.anchor is None:
        raise ConfigError("anchor required for minmax3 recovery", "anchor")
    m = _GEN.match(cfg.generator)
    name = m.group(1)
    if name == "independent":
        theta = None
    elif name == "fgm":
        theta = float(m.group(2))
    else:
        raise ConfigError(
            "only independent and fgm(theta) constructions can be sampled exactly", "generator"
        )
    comps = cfg.components
    if cfg.scheme == "scaled_max_n":
        batch = sample_scaled_maxima(comps, cfg.scales, cfg.mc.n, cfg.mc.seed, theta=theta)
    elif cfg.scheme == "scaled_min_n":
        batch = sample_scaled_minima(comps, cfg.scales, cfg.mc.n, cfg.mc.seed, theta=theta)
    else:
        batch = sample_shared_component(*comps, cfg.mc.n, cfg.mc.seed, scheme=cfg.scheme, theta=theta)
    g = resolve_generator(cfg.generator, cfg.scheme, comps)
    anchor = cfg.anchor_for(comps[0]) if cfg.scheme == "minmax3" else None
    report = plugin_reconstruct(
        batch, cfg.grid.build(), generator=g, anchor=anchor, scales=cfg.scales, truth=comps, alpha=cfg.mc.alpha
    )
    report.extras["command"] = "mc"
    report.extras["seed"] = cfg.mc.seed
    return report.to_csv()


def run_demo(cfg):
    """Single-maximum non-identifiability demonstration as plain text."""
    _require(cfg, "components")
    if len(cfg.components) < 2:
        raise ConfigError("the demo needs two components", "components")
    grid = cfg.grid.build() if cfg.grid else None
    rec = single_max_nonuniqueness_demo(cfg.components[0], cfg.components[1], grid)
    items = {
        "command": "demo",
        "product_gap": rec.product_gap,
        "degenerate": rec.degenerate,
        "witness_gap": 0.0 if rec.degenerate else abs(rec.witness[1] - rec.witness[2]),
    }
    return rec.to_text() + _footer(items)


# ---------------------------------------------------------------------------
# random admissible models for the uniqueness search


def _positive_component(rng):
    family = rng.integers(3)
    if family == 0:
        return Uniform(0.0, float(rng.uniform(0.5, 3.0)))
    if family == 1:
        return Exponential(float(rng.uniform(0.3, 3.0)))
    return Weibull(float(rng.uniform(0.6, 3.0)), float(rng.uniform(0.5, 2.5)))


def _anchored_component(rng, x0, q):
    """Random law with ``F(x0) = q``."""
    family = rng.integers(3)
    if family == 0:
        return Uniform(0.0, x0 / q)
    if family == 1:
        return Exponential(-math.log1p(-q) / x0)
    k = float(rng.uniform(0.6, 3.0))
    return Weibull(k, x0 / (-math.log1p(-q)) ** (1.0 / k))


def _perturb(rng, d):
    """Small random change of one parameter, or ``d`` itself."""
    if rng.random() < 0.3:
        return d
    eps = float(rng.choice([1e-6, 1e-3, 0.05]))
    if isinstance(d, Uniform):
        return Uniform(d.lo, d.hi * (1 + eps))
    if isinstance(d, Exponential):
        return Exponential(d.rate * (1 + eps))
    if isinstance(d, Weibull):
        return Weibull(d.shape * (1 + eps), d.scale)
    return Gumbel(d.location + eps, d.scale)


def random_model_pair(rng, scheme):
    """Two admissible models sharing the known side information.

    Both models use the same generator family (and the same latent law or
    FGM parameter), the same scale vectors and, for ``minmax3``, the same
    anchor.  About half of the second models are small perturbations of the
    first, so near-ties in the joint law are exercised.
    """
    if scheme in ("maxima3", "minima3", "minmax3"):
        kind = MIN_INDEPENDENT if scheme == "minima3" else MAX_INDEPENDENT
        if scheme == "minmax3":
            x0, q = float(rng.uniform(0.3, 1.2)), float(rng.uniform(0.2, 0.8))
            first = [_anchored_component(rng, x0, q)] + [_positive_component(rng) for _ in range(2)]
        else:
            first = [_positive_component(rng) for _ in range(3)]
        if rng.random() < 0.5:
            second = [_perturb(rng, d) for d in first]
            if scheme == "minmax3":
                second[0] = first[0] if rng.random() < 0.5 else _anchored_component(rng, x0, q)
        elif scheme == "minmax3":
            second = [_anchored_component(rng, x0, q)] + [_positive_component(rng) for _ in range(2)]
        else:
            second = [_positive_component(rng) for _ in range(3)]
        choice = rng.integers(3)
        if choice == 0:
            gens = [independent_generator(3, kind)] * 2
        elif choice == 1:
            latent = Exponential(float(rng.uniform(0.5, 2.0)))
            gens = [shared_component_triple(latent, kind)] * 2
        else:
            theta = float(rng.uniform(-0.9, 0.9))
            gens = [fgm_generator(first, theta, kind), fgm_generator(second, theta, kind)]
        if scheme == "minmax3":
            gens = [lift_to_rect(g, comps) for g, comps in zip(gens, (first, second))]
        return build_law(scheme, first, gens[0]), build_law(scheme, second, gens[1])
    n = int(rng.integers(2, 5))
    c = np.sort(rng.choice(np.arange(1, 9), size=n, replace=False)).astype(float) / 2.0
    a = rng.uniform(0.5, 2.0, size=n)
    sv = ScaleVectors(tuple(a), tuple(a * c))
    kind = MAX_INDEPENDENT if scheme == "scaled_max_n" else MIN_INDEPENDENT
    first = [_positive_component(rng) for _ in range(n)]
    second = [_perturb(rng, d) for d in first] if rng.random() < 0.5 else [_positive_component(rng) for _ in range(n)]
    if rng.random() < 0.5:
        gens = [independent_generator(n, kind)] * 2
    else:
        theta = float(rng.uniform(-0.9, 0.9))
        gens = [fgm_generator(first, theta, kind), fgm_generator(second, theta, kind)]
    return build_law(scheme, first, gens[0], sv), build_law(scheme, second, gens[1], sv)

