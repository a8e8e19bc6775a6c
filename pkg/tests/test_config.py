from pathlib import Path

import pytest

from topotrack.config import ConfigError, ExperimentConfig, load_config, parse_config

ROOT = Path(__file__).resolve().parents[1]


def test_empty_config_gives_defaults():
    cfg = parse_config("")
    assert cfg == ExperimentConfig()
    assert cfg.solver.gamma == 0.002 and cfg.methods == ("dpg", "primal_pg")


def test_full_config(tmp_path):
    (tmp_path / "x.csv").write_text("1,2\n3,4\n")
    cfg = parse_config(
        """
seed: 4
methods: [dpg]
output_dir: out
scenario: {model: sbm, n_nodes: 10, blocks: [5, 5], switch_times: [50], horizon: 100}
solver: {alpha: 2, beta: 0.5, memory: ewma, gamma: 0.01, ewma_init: debiased, init: random}
baseline: {step_size: 0.1}
grid: {alpha: [1, 2], beta: [0.1], window: 10, n_jobs: 2}
metrics: {relative_threshold: 0.001}
data: {path: x.csv, sampling_rate: 400, events: [2], snapshots: [1]}
""", base_dir=tmp_path)
    assert cfg.seed == 4 and cfg.scenario.seed == 4
    assert cfg.scenario.blocks == (5, 5) and cfg.scenario.switch_times == (50,)
    assert cfg.solver.ewma_init == "debiased" and cfg.solver.alpha == 2.0
    assert cfg.baseline.step_size == 0.1
    assert cfg.grid.alpha == (1.0, 2.0) and cfg.grid.n_jobs == 2
    assert cfg.output_dir == tmp_path / "out"
    assert cfg.data.path == tmp_path / "x.csv" and cfg.data.events == (2,)


@pytest.mark.parametrize("text,line,fragment", [
    ("seed: 1\nsolver:\n  gama: 0.1\n", 3, "unknown key solver.'gama'"),
    ("solver:\n  gamma: 1.5\n", 2, "gamma must lie in (0, 1)"),
    ("solver:\n  alpha: -1\n", 2, "alpha must be positive"),
    ("solver:\n  beta: 0\n", 2, "beta must be positive"),
    ("solver:\n  memory: sliding\n", 2, "memory must be one of"),
    ("methods: [dpg, admm]\n", 1, "method must be one of"),
    ("scenario:\n  p: 2\n", 2, "must lie in [0, 1]"),
    ("scenario:\n  n_nodes: 10\n  switch_times: [20]\n  horizon: 10\n", 2, "invalid scenario"),
    ("seed: -3\n", 1, "nonnegative"),
    ("data:\n  path: missing.csv\n", 2, "does not exist"),
    ("grid:\n  alpha: []\n", 2, "must not be empty"),
    ("solver: [1, 2]\n", 1, "must be a mapping"),
    ("seed: 1\nseed: 2\n", 2, "duplicate key"),
    ("solver: {alpha: 1\n", 2, "malformed YAML"),
])
def test_errors_are_line_precise(text, line, fragment, tmp_path):
    with pytest.raises(ConfigError) as info:
        parse_config(text, source="exp.yaml", base_dir=tmp_path)
    msg = str(info.value)
    assert msg.startswith(f"exp.yaml:{line}:"), msg
    assert fragment in msg


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/config.yaml")


@pytest.mark.parametrize("name", sorted(p.name for p in (ROOT / "configs").glob("*.yaml")))
def test_shipped_configs_load(name):
    cfg = load_config(ROOT / "configs" / name)
    assert cfg.scenario is not None


def test_with_seed_propagates_to_scenario():
    cfg = parse_config("scenario: {n_nodes: 5}\n").with_seed(11)
    assert cfg.seed == 11 and cfg.scenario.seed == 11


def test_snapshot_offsets():
    from topotrack.config import DataSource
    d = DataSource(Path("x"), sampling_rate=10.0, events=(100,), snapshot_offsets_s=(-2.5, 2.5),
                   snapshots=(1,))
    assert d.snapshot_samples(1000) == [1, 75, 125]
    with pytest.raises(ConfigError):
        DataSource(Path("x"), snapshot_offsets_s=(1.0,)).snapshot_samples(10)
