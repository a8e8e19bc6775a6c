"""Experiment configuration files.

Configurations are YAML mappings. Every section and key is optional and
falls back to the defaults below, but unknown keys are rejected: a typo in
``gamma`` or ``alpha`` must not silently run a different experiment. Errors
carry the line number of the offending entry.

Example::

    seed: 7
    methods: [dpg, primal_pg]
    scenario:
      model: er
      n_nodes: 50
      switch_times: [1000]
    solver:
      memory: ewma
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .synth import GraphScenario

METHODS = ("dpg", "primal_pg")

# Tuned on the standard ER scenario (N=100, p=0.2, T=2000, sigma=0.01, seed 0)
# by `topotrack gridsearch --config configs/gridsearch_er100.yaml`;
# the score table is committed under results/gridsearch_er100/.
DEFAULT_ALPHA = 10.0
DEFAULT_BETA = 0.0003


class ConfigError(ValueError):
    """Invalid configuration; the message names the file and line."""


@dataclass
class SolverParams:
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    memory: str = "infinite"
    gamma: float = 0.002
    ewma_init: str = "first"
    tol: float = 1e-8
    max_iter: int = 50_000
    inner_steps: int = 1
    init: str = "ones"


@dataclass
class BaselineParams:
    step_size: float | None = None
    degree_floor: float = 1e-9


@dataclass
class DataSource:
    """A signal (or dissimilarity) file and its event annotations.

    ``events`` and ``snapshots`` are 1-based sample indices.
    ``snapshot_offsets_s`` are extra snapshot times in seconds relative to
    the first event and need ``sampling_rate``.
    """

    path: Path
    kind: str = "signals"
    sampling_rate: float | None = None
    zscore: bool = False
    events: tuple[int, ...] = ()
    snapshots: tuple[int, ...] = ()
    snapshot_offsets_s: tuple[float, ...] = ()

    def snapshot_samples(self, n_samples: int) -> list[int]:
        times = set(self.snapshots)
        if self.snapshot_offsets_s:
            if not self.events or not self.sampling_rate:
                raise ConfigError("snapshot_offsets_s needs data.events and data.sampling_rate")
            for off in self.snapshot_offsets_s:
                times.add(int(round(self.events[0] + off * self.sampling_rate)))
        return sorted(t for t in times if 1 <= t <= n_samples)


@dataclass
class GridParams:
    alpha: tuple[float, ...] = (0.1, 1.0, 10.0)
    beta: tuple[float, ...] = (0.0001, 0.0003, 0.001, 0.003, 0.01, 0.03, 0.1)
    window: int = 100
    n_jobs: int = 1


@dataclass
class ExperimentConfig:
    scenario: GraphScenario | None = None
    data: DataSource | None = None
    methods: tuple[str, ...] = METHODS
    solver: SolverParams = field(default_factory=SolverParams)
    baseline: BaselineParams = field(default_factory=BaselineParams)
    grid: GridParams = field(default_factory=GridParams)
    relative_threshold: float = 1e-4
    output_dir: Path = Path("results")
    seed: int = 0

    def with_seed(self, seed: int) -> ExperimentConfig:
        scenario = self.scenario
        if scenario is not None:
            scenario = dataclasses.replace(scenario, seed=seed)
        return dataclasses.replace(self, seed=seed, scenario=scenario)


# -- loading -----------------------------------------------------------------

class _Reader:
    """Walks a composed YAML node tree, keeping line numbers for messages."""

    def __init__(self, source: str):
        self.source = source

    def fail(self, node, message: str):
        line = node.start_mark.line + 1 if node is not None else "?"
        raise ConfigError(f"{self.source}:{line}: {message}")

    def mapping(self, node, where: str, allowed) -> dict:
        if not isinstance(node, yaml.MappingNode):
            self.fail(node, f"{where} must be a mapping")
        out = {}
        for key_node, value_node in node.value:
            key = key_node.value
            if key not in allowed:
                known = ", ".join(sorted(allowed))
                self.fail(key_node, f"unknown key {where + '.' if where else ''}{key!r} (allowed: {known})")
            if key in out:
                self.fail(key_node, f"duplicate key {key!r}")
            out[key] = value_node
        return out

    def value(self, node):
        return yaml.safe_load(yaml.serialize(node))

    def number(self, node, name, *, positive=False, nonneg=False, unit=False, integer=False,
               nullable=False):
        raw = self.value(node)
        if raw is None and nullable:
            return None
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            self.fail(node, f"{name} must be a number, got {raw!r}")
        if integer and not float(raw).is_integer():
            self.fail(node, f"{name} must be an integer, got {raw!r}")
        if positive and not raw > 0:
            self.fail(node, f"{name} must be positive, got {raw!r}")
        if nonneg and not raw >= 0:
            self.fail(node, f"{name} must be nonnegative, got {raw!r}")
        if unit and not 0 < raw < 1:
            self.fail(node, f"{name} must lie in (0, 1), got {raw!r}")
        return int(raw) if integer else float(raw)

    def numbers(self, node, name, **kw):
        if not isinstance(node, yaml.SequenceNode):
            self.fail(node, f"{name} must be a list")
        return tuple(self.number(item, name, **kw) for item in node.value)

    def choice(self, node, name, options):
        raw = self.value(node)
        if raw not in options:
            self.fail(node, f"{name} must be one of {', '.join(options)}, got {raw!r}")
        return raw

    def boolean(self, node, name):
        raw = self.value(node)
        if not isinstance(raw, bool):
            self.fail(node, f"{name} must be true or false, got {raw!r}")
        return raw


_SCENARIO_KEYS = {f.name for f in dataclasses.fields(GraphScenario) if f.init}


def load_config(path) -> ExperimentConfig:
    """Read and validate a configuration file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read configuration ({exc.strerror})") from exc
    return parse_config(text, source=str(path), base_dir=path.parent)


def parse_config(text: str, source: str = "<config>", base_dir=Path(".")) -> ExperimentConfig:
    r = _Reader(source)
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else "?"
        raise ConfigError(f"{source}:{line}: malformed YAML ({getattr(exc, 'problem', exc)})") from exc
    if root is None:
        return ExperimentConfig()
    top = r.mapping(root, "", {"seed", "output_dir", "methods", "scenario", "solver",
                               "baseline", "data", "grid", "metrics"})
    cfg = ExperimentConfig()

    if "seed" in top:
        cfg.seed = r.number(top["seed"], "seed", nonneg=True, integer=True)
    if "output_dir" in top:
        cfg.output_dir = base_dir / str(r.value(top["output_dir"]))
    if "methods" in top:
        node = top["methods"]
        if not isinstance(node, yaml.SequenceNode) or not node.value:
            r.fail(node, "methods must be a non-empty list")
        cfg.methods = tuple(r.choice(item, "method", METHODS) for item in node.value)

    if "solver" in top:
        cfg.solver = _solver(r, top["solver"])
    if "baseline" in top:
        sec = r.mapping(top["baseline"], "baseline", {"step_size", "degree_floor"})
        b = BaselineParams()
        if "step_size" in sec:
            b.step_size = r.number(sec["step_size"], "baseline.step_size", positive=True, nullable=True)
        if "degree_floor" in sec:
            b.degree_floor = r.number(sec["degree_floor"], "baseline.degree_floor", positive=True)
        cfg.baseline = b
    if "grid" in top:
        sec = r.mapping(top["grid"], "grid", {"alpha", "beta", "window", "n_jobs"})
        g = GridParams()
        if "alpha" in sec:
            g.alpha = r.numbers(sec["alpha"], "grid.alpha", positive=True)
        if "beta" in sec:
            g.beta = r.numbers(sec["beta"], "grid.beta", positive=True)
        for name in ("alpha", "beta"):
            if name in sec and not getattr(g, name):
                r.fail(sec[name], f"grid.{name} must not be empty")
        if "window" in sec:
            g.window = r.number(sec["window"], "grid.window", positive=True, integer=True)
        if "n_jobs" in sec:
            g.n_jobs = r.number(sec["n_jobs"], "grid.n_jobs", positive=True, integer=True)
        cfg.grid = g
    if "metrics" in top:
        sec = r.mapping(top["metrics"], "metrics", {"relative_threshold"})
        if "relative_threshold" in sec:
            cfg.relative_threshold = r.number(sec["relative_threshold"],
                                              "metrics.relative_threshold", positive=True)
    if "scenario" in top:
        cfg.scenario = _scenario(r, top["scenario"], cfg.seed)
    if "data" in top:
        cfg.data = _data(r, top["data"], base_dir)
    if cfg.scenario is not None:
        cfg.scenario = dataclasses.replace(cfg.scenario, seed=cfg.seed)
    return cfg


def _solver(r: _Reader, node) -> SolverParams:
    sec = r.mapping(node, "solver", {f.name for f in dataclasses.fields(SolverParams)})
    s = SolverParams()
    for name in ("alpha", "beta", "tol"):
        if name in sec:
            setattr(s, name, r.number(sec[name], f"solver.{name}", positive=True))
    if "gamma" in sec:
        s.gamma = r.number(sec["gamma"], "solver.gamma", unit=True)
    for name in ("max_iter", "inner_steps"):
        if name in sec:
            setattr(s, name, r.number(sec[name], f"solver.{name}", positive=True, integer=True))
    if "memory" in sec:
        s.memory = r.choice(sec["memory"], "solver.memory", ("infinite", "ewma"))
    if "ewma_init" in sec:
        s.ewma_init = r.choice(sec["ewma_init"], "solver.ewma_init", ("first", "debiased"))
    if "init" in sec:
        s.init = r.choice(sec["init"], "solver.init", ("ones", "random"))
    return s


def _scenario(r: _Reader, node, seed: int) -> GraphScenario:
    allowed = _SCENARIO_KEYS - {"seed"}
    sec = r.mapping(node, "scenario", allowed)
    kw = {}
    if "model" in sec:
        kw["model"] = r.choice(sec["model"], "scenario.model", ("er", "sbm"))
    for name in ("n_nodes", "horizon"):
        if name in sec:
            kw[name] = r.number(sec[name], f"scenario.{name}", positive=True, integer=True)
    for name in ("p", "p_in", "p_out", "resample_fraction"):
        if name in sec:
            value = r.number(sec[name], f"scenario.{name}", nonneg=True)
            if value > 1:
                r.fail(sec[name], f"scenario.{name} must lie in [0, 1], got {value}")
            kw[name] = value
    if "noise_sigma" in sec:
        kw["noise_sigma"] = r.number(sec["noise_sigma"], "scenario.noise_sigma", nonneg=True)
    if "blocks" in sec:
        kw["blocks"] = r.numbers(sec["blocks"], "scenario.blocks", positive=True, integer=True)
    if "switch_times" in sec:
        kw["switch_times"] = r.numbers(sec["switch_times"], "scenario.switch_times",
                                       positive=True, integer=True)
    try:
        return GraphScenario(seed=seed, **kw)
    except ValueError as exc:
        r.fail(node, f"invalid scenario: {exc}")


def _data(r: _Reader, node, base_dir: Path) -> DataSource:
    sec = r.mapping(node, "data", {f.name for f in dataclasses.fields(DataSource)})
    if "path" not in sec:
        r.fail(node, "data.path is required")
    path = Path(str(r.value(sec["path"])))
    if not path.is_absolute():
        path = base_dir / path
    if not path.is_file():
        r.fail(sec["path"], f"data file {str(path)!r} does not exist")
    d = DataSource(path=path)
    if "kind" in sec:
        d.kind = r.choice(sec["kind"], "data.kind", ("signals", "dissimilarity"))
    if "sampling_rate" in sec:
        d.sampling_rate = r.number(sec["sampling_rate"], "data.sampling_rate", positive=True,
                                   nullable=True)
    if "zscore" in sec:
        d.zscore = r.boolean(sec["zscore"], "data.zscore")
    if "events" in sec:
        d.events = r.numbers(sec["events"], "data.events", positive=True, integer=True)
    if "snapshots" in sec:
        d.snapshots = r.numbers(sec["snapshots"], "data.snapshots", positive=True, integer=True)
    if "snapshot_offsets_s" in sec:
        d.snapshot_offsets_s = r.numbers(sec["snapshot_offsets_s"], "data.snapshot_offsets_s")
    return d
