import csv
import json
import math
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from levymoments.cli import bundled_config, main, parse_process, read_curves_csv
from levymoments.exceptions import ConfigError, LevyError
from levymoments.experiment import ExperimentConfig, run_experiment, run_verify
from levymoments.sampler import Scheme, SchemeKind


def gamma_moment(p, t):
    return math.exp(math.lgamma(p + t) - math.lgamma(t))


configs = st.builds(
    ExperimentConfig,
    process=st.sampled_from([{"family": "Gamma", "params": {}},
                             {"family": "NIG", "params": {"alpha": 2.0, "gamma": 0.5, "delta": 1.0}},
                             {"family": "Stable", "params": {"alpha": 1.5, "C1": 1.0, "C2": 0.5}}]),
    p_list=st.lists(st.floats(0.1, 3.0), min_size=1, max_size=4),
    t_max=st.floats(0.01, 1.0),
    t_min=st.floats(1e-6, 0.009),
    points=st.integers(2, 30),
    n_paths=st.integers(100, 10 ** 6),
    scheme=st.builds(Scheme, st.sampled_from(list(SchemeKind)), st.one_of(st.none(), st.floats(1e-6, 0.1))),
    seed=st.integers(0, 2 ** 32),
    with_log=st.sampled_from([None, True, False]),
)


@given(configs)
def test_config_round_trip(cfg):
    back = ExperimentConfig.from_json(cfg.to_json())
    assert back == cfg
    assert back.to_json() == cfg.to_json()


@pytest.mark.parametrize("change", [{"n_paths": 0}, {"t_min": 0.5, "t_max": 0.1}, {"t_max": 2.0},
                                    {"p_list": [-1.0]}, {"process": {"family": "Nope"}},
                                    {"process": {"family": "NIG", "params": {"alpha": 1.0}}}])
def test_config_validation(change):
    d = ExperimentConfig(process={"family": "Gamma", "params": {}}).to_dict()
    d.update(change)
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(d).validate()


def test_config_rejects_unknown_keys_and_bad_json():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"process": {"family": "Gamma"}, "paths": 3})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_json("{not json")


def test_experiment_is_byte_reproducible(tmp_path):
    cfg = ExperimentConfig(process={"family": "NIG", "params": {"alpha": 1.0, "gamma": 0.0, "delta": 1.0}},
                           p_list=[0.5, 2.0], t_max=0.05, t_min=0.0005, points=7, n_paths=500,
                           output=str(tmp_path / "a"))
    first = run_experiment(cfg)
    a = (open(first["curves"], "rb").read(), open(first["fit"], "rb").read())
    run_experiment(cfg)
    b = (open(first["curves"], "rb").read(), open(first["fit"], "rb").read())
    assert a == b


def test_bundled_quickcheck(tmp_path):
    cfg = ExperimentConfig.load(bundled_config("gamma_quickcheck.json"))
    cfg.output = str(tmp_path)
    start = time.perf_counter()
    res = run_experiment(cfg)
    assert time.perf_counter() - start < 60
    with open(res["curves"], newline="") as fh:
        for row in csv.DictReader(fh):
            t, p, m, se = (float(row[k]) for k in ("t", "p", "estimate", "std_error"))
            assert abs(m - gamma_moment(p, t)) <= 4 * se


def test_io_error_names_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = ExperimentConfig(process={"family": "Gamma", "params": {}}, n_paths=100, points=6,
                           output=str(blocker / "sub"))
    with pytest.raises(OSError, match="file"):
        run_experiment(cfg)


def test_run_verify_examples(tmp_path):
    cfg = ExperimentConfig(process={"family": "Gamma", "params": {}}, p_list=[0.5], t_max=2 ** -6,
                           t_min=2 ** -16, points=11, n_paths=100_000, seed=1, output=str(tmp_path))
    report = run_verify(cfg)
    row = report.rows[0]
    assert row.status == "pass" and 0.95 <= row.fitted.gamma <= 1.05
    assert (tmp_path / "verify.json").exists() and (tmp_path / "verify.txt").exists()


def test_verify_not_covered_row_is_not_a_failure(tmp_path):
    cfg = ExperimentConfig(process={"family": "Stable", "params": {"alpha": 1.5}}, p_list=[1.5],
                           n_paths=100, points=6, output=str(tmp_path))
    report = run_verify(cfg)
    assert report.rows[0].status == "not covered" and report.ok


@pytest.mark.parametrize("text, expected", [
    ("Gamma", {"family": "Gamma", "params": {}}),
    ("NIG:alpha=1,gamma=0.5,delta=2", {"family": "NIG", "params": {"alpha": 1.0, "gamma": 0.5, "delta": 2.0}}),
    ("Stable:alpha=1.5,drift=0.2", {"family": "Stable", "params": {"alpha": 1.5}, "drift_a": 0.2}),
    ('{"family": "Meixner", "params": {"gamma": 0, "delta": 1}}',
     {"family": "Meixner", "params": {"gamma": 0, "delta": 1}}),
])
def test_parse_process(text, expected):
    assert parse_process(text) == expected


@pytest.mark.parametrize("text", ["NIG:alpha", "NIG:alpha=x", '{"params": {}}', "{bad"])
def test_parse_process_errors(text):
    with pytest.raises(LevyError):
        parse_process(text)


def test_cli_catalog_and_predict(tmp_path, capsys):
    assert main(["catalog", "--json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["family"] for r in rows} >= {"Gamma", "NIG", "Meixner", "Hyperbolic"}
    out = tmp_path / "pred.json"
    assert main(["predict", "--process", "NIG:alpha=1,gamma=0,delta=1", "--p", "1", "2", "--out", str(out)]) == 0
    pred = json.loads(out.read_text())
    assert (pred["1.0"]["gamma"], pred["1.0"]["delta"]) == (1.0, 1.0)
    assert set(pred["2.0"]) >= {"gamma", "delta", "stderr_gamma", "stderr_delta", "source", "n_points"}
    assert main(["predict", "--process", "Stable:alpha=1.5", "--p", "1.5"]) == 0
    assert json.loads(capsys.readouterr().out)["1.5"]["source"] == "not covered"


def test_cli_moment_then_fit(tmp_path):
    out = tmp_path / "m"
    assert main(["moment", "--process", "Gamma", "--p", "1", "--paths", "20000", "--t-max", "0.25",
                 "--t-min", "0.0039", "--grid-points", "7", "--seed", "3", "--out", str(out)]) == 0
    curves = read_curves_csv(out / "curves.csv")
    t, m, se = curves[1.0]
    assert np.all(np.abs(m - t) <= 4 * se)
    meta = json.loads((out / "curves.json").read_text())
    assert meta["config"]["seed"] == 3 and len(meta["curves"][0]["rows"]) == 7
    fit_out = tmp_path / "fit.json"
    assert main(["fit", str(out / "curves.csv"), "--out", str(fit_out)]) == 0
    fit = json.loads(fit_out.read_text())
    assert set(fit) == {"gamma", "delta", "stderr_gamma", "stderr_delta", "source", "n_points"}
    assert abs(fit["gamma"] - 1.0) < 4 * fit["stderr_gamma"] + 0.02


def test_cli_simulate(tmp_path):
    out = tmp_path / "s"
    args = ["simulate", "--process", "NIG:alpha=1,gamma=0,delta=1", "--paths", "3", "--t-max", "0.1",
            "--scheme", "cp", "--epsilon", "0.01", "--seed", "5", "--out", str(out)]
    assert main(args) == 0
    first = (out / "paths.csv").read_bytes()
    with open(out / "paths.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert {r["path_id"] for r in rows} == {"0", "1", "2"}
    jumps = json.loads((out / "jumps.json").read_text())
    n_jumps = sum(len(p["jumps"]) for p in jumps["paths"])
    assert n_jumps > 0 and all(abs(j[1]) > 0.01 for p in jumps["paths"] for j in p["jumps"])
    assert main(args) == 0
    assert (out / "paths.csv").read_bytes() == first


def test_flags_override_config(tmp_path):
    cfg = ExperimentConfig(process={"family": "Gamma", "params": {}}, p_list=[0.5], n_paths=300, points=6,
                           seed=1, output=str(tmp_path / "from_config"))
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    assert main(["run", "--config", str(path), "--seed", "9", "--out", str(tmp_path / "flag")]) == 0
    fit = json.loads((tmp_path / "flag" / "fit.json").read_text())
    assert fit["config"]["seed"] == 9 and fit["config"]["n_paths"] == 300
    assert not (tmp_path / "from_config").exists()


def test_verify_exit_codes(tmp_path):
    base = ["verify", "--process", "Gamma", "--p", "0.5", "--paths", "20000", "--t-max", "0.0625",
            "--t-min", "0.0001", "--grid-points", "8", "--out", str(tmp_path)]
    assert main(base) == 0
    assert main(base + ["--tol-gamma", "1e-9"]) == 1


def test_specfun_command(capsys):
    assert main(["specfun", "besselk", "--nu", "0.5", "--z", "2"]) == 0
    val = json.loads(capsys.readouterr().out)["value"]
    assert val == pytest.approx(math.sqrt(math.pi / 4) * math.exp(-2), rel=1e-12)


def test_cli_reports_errors(capsys):
    assert main(["predict", "--process", "Nope", "--p", "1"]) == 2
    assert "error" in capsys.readouterr().err
