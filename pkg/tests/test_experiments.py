"""Experiment harness: config validation, report layout, determinism."""

import json

import pytest

from proclab.cli import main
from proclab.errors import ConfigError
from proclab.experiments import (
    ExperimentConfig,
    ExperimentReport,
    ReportRow,
    config_from_file,
    make_config,
    run_experiment,
)

SW_SMALL = dict(replicates=30, n_paths=51, grid=(0.0, 4.0, 65))


def test_defaults_merge():
    cfg = make_config("cov-check")
    assert cfg.seed == 101
    assert cfg.n_paths == 50_000
    assert cfg.grid == (0.0, 2.0, 17)
    cfg = make_config("cov-check", n_paths=1000, seed=None)
    assert cfg.n_paths == 1000
    assert cfg.seed == 101  # None means "not provided", not "override with None"


def test_unknown_experiment():
    with pytest.raises(ConfigError):
        make_config("frobnicate")
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="frobnicate")


@pytest.mark.parametrize(
    "kw",
    [
        dict(grid=(2.0, 0.0, 17)),
        dict(grid=(0.0, 2.0, 1)),
        dict(grid=(-1.0, 2.0, 17)),
        dict(rho=0.7),
        dict(rho=0.0),
        dict(hurst=1.0),
        dict(seed=-3),
        dict(n_paths=0),
        dict(format="yaml"),
        dict(method="spectral"),
        dict(gamma=5.0),  # outside the grid span
    ],
)
def test_rejects_bad_config(kw):
    with pytest.raises(ConfigError):
        make_config("prop3", **kw)


def test_swanson_needs_odd_paths():
    with pytest.raises(ConfigError):
        make_config("swanson", n_paths=200)


def test_bk_rate_needs_dyadic_ladder():
    with pytest.raises(ConfigError):
        make_config("bk-rate", n_list=(64, 100, 200, 400))
    with pytest.raises(ConfigError):
        make_config("bk-rate", n_list=(64, 128, 256))
    with pytest.raises(ConfigError):
        make_config("bk-rate", n_list=(32, 64, 128, 256))


def test_lil_trace_needs_increasing_ladder():
    with pytest.raises(ConfigError):
        make_config("lil-trace", n_list=(256, 128))
    with pytest.raises(ConfigError):
        make_config("lil-trace", n_list=(8, 64))


def test_config_file_merge(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"replicates": 25, "n_paths": 51, "grid": [0.0, 4.0, 65]}))
    cfg = config_from_file("swanson", path, replicates=30)
    assert cfg.replicates == 30  # flag wins
    assert cfg.n_paths == 51  # file wins over default
    assert cfg.grid == (0.0, 4.0, 65)


def test_config_file_rejects_garbage(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text("not json")
    with pytest.raises(ConfigError):
        config_from_file("swanson", path)
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        config_from_file("swanson", path)
    with pytest.raises(ConfigError):
        config_from_file("swanson", tmp_path / "missing.json")


# ---------------------------------------------------------------------
# report layout


def _toy_report(rows):
    return ExperimentReport(
        experiment="rates",
        params={},
        rows=tuple(rows),
        seconds=1.25,
        seed=7,
        reproducible=True,
    )


def test_csv_layout():
    rep = _toy_report(
        [
            ReportRow(name="a", estimate=0.5, std_error=0.25, target=0.0, tol=4.0, passed=True),
            ReportRow(name="b", estimate=1.5),
            ReportRow(name="c", estimate=2.0, target=0.0, tol=1.0, passed=False),
        ]
    )
    lines = rep.to_csv().splitlines()
    assert lines[0] == "name,estimate,std_error,target,tol,pass"
    assert lines[1] == "a,0.5,0.25,0.0,4.0,true"
    assert lines[2] == "b,1.5,,,,"
    assert lines[3] == "c,2.0,,0.0,1.0,false"
    assert rep.to_csv().endswith("\n")


def test_pass_semantics():
    assert not _toy_report([ReportRow(name="b", estimate=1.5)]).passed  # no verdicts
    assert _toy_report(
        [ReportRow(name="a", estimate=0.0, passed=True), ReportRow(name="b", estimate=0.0)]
    ).passed
    assert not _toy_report(
        [ReportRow(name="a", estimate=0.0, passed=True), ReportRow(name="b", estimate=0.0, passed=False)]
    ).passed


def test_json_layout():
    rep = _toy_report([ReportRow(name="a", estimate=0.5, passed=True)])
    obj = json.loads(rep.to_json())
    assert list(obj.keys()) == ["experiment", "pass", "rows", "meta"]
    assert obj["pass"] is True
    assert obj["rows"][0]["name"] == "a"
    assert obj["rows"][0]["std_error"] is None
    meta = obj["meta"]
    assert meta["seed"] == 7 and meta["reproducible"] is True
    assert meta["seconds"] == 1.25


# ---------------------------------------------------------------------
# determinism


def test_rerun_is_byte_identical():
    a = run_experiment(make_config("swanson", **SW_SMALL))
    b = run_experiment(make_config("swanson", **SW_SMALL))
    assert a.to_csv() == b.to_csv()
    assert a.seconds != 0.0  # wall clock varies but stays out of the CSV


def test_workers_do_not_change_results():
    serial = run_experiment(make_config("swanson", **SW_SMALL))
    parallel = run_experiment(make_config("swanson", **SW_SMALL, workers=3))
    assert serial.to_csv() == parallel.to_csv()


def test_seed_zero_draws_entropy():
    rep = run_experiment(make_config("rates", replicates=20, seed=0))
    assert rep.reproducible is False
    assert rep.seed != 0
    rep2 = run_experiment(make_config("rates", replicates=20, seed=0))
    assert rep2.seed != rep.seed


# ---------------------------------------------------------------------
# runners at small scale


def test_cov_check_small():
    rep = run_experiment(make_config("cov-check", n_paths=2000, grid=(0.0, 2.0, 9)))
    assert rep.passed
    assert not rep.underpowered
    names = [r.name for r in rep.rows]
    assert names[0] == "max_cov_dev_over_se"


def test_cov_check_underpowered_flag():
    rep = run_experiment(make_config("cov-check", n_paths=20, grid=(0.0, 2.0, 9)))
    # relative SE on the diagonal is about sqrt(2/20), far above the 0.25 bar
    assert rep.underpowered


def test_swanson_small():
    rep = run_experiment(make_config("swanson", **SW_SMALL))
    assert rep.passed
    assert {r.name for r in rep.rows} == {"cov_1_1", "cov_1_4", "cov_2_2"}


def test_swanson_grid_must_contain_pair_times():
    with pytest.raises(ConfigError):
        run_experiment(make_config("swanson", replicates=5, grid=(0.0, 2.0, 33)))


def test_prop3_small():
    rep = run_experiment(make_config("prop3", replicates=10))
    assert rep.passed
    by_name = {r.name: r for r in rep.rows}
    assert by_name["violations"].estimate == 0.0
    assert by_name["pairs_checked"].estimate > 0


def test_lil_trace_small():
    rep = run_experiment(make_config("lil-trace", n_list=(64, 128, 256)))
    by_name = {r.name: r for r in rep.rows}
    assert by_name["var_sup_identity"].estimate == pytest.approx(0.25, abs=1e-10)
    assert by_name["mc_indicator_var"].passed
    assert rep.passed


def test_bk_rate_small():
    rep = run_experiment(make_config("bk-rate", replicates=16, n_list=(64, 128, 256, 512)))
    by_name = {r.name: r for r in rep.rows}
    assert by_name["slope"].passed
    assert by_name["normalized_max_over_min"].estimate < 3.0
    assert rep.passed


def test_rates_full():
    rep = run_experiment(make_config("rates"))
    assert rep.passed
    by_name = {r.name: r for r in rep.rows}
    assert by_name["tau1_normalization_max_dev"].estimate <= 1e-12
    assert by_name["m_at_half"].estimate == 10.0


def test_limit_sim_small():
    rep = run_experiment(make_config("limit-sim", n_paths=4000))
    assert rep.passed
    by_name = {r.name: r for r in rep.rows}
    assert by_name["max_cov_dev_over_se"].estimate < 3.0


# ---------------------------------------------------------------------
# cli


def test_cli_pass_exit_code(tmp_path, capsys):
    out = tmp_path / "report.csv"
    code = main(["swanson", "--replicates", "30", "--n-paths", "51", "--grid", "0:4:65", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert text.splitlines()[0] == "name,estimate,std_error,target,tol,pass"
    assert "swanson: PASS" in capsys.readouterr().out


def test_cli_rates_prints_sweep_table(capsys):
    code = main(["rates", "--replicates", "20"])
    assert code == 0
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines[0] == "h,nu0,h0,tau2,tau1_at_0,tau1p(kappa),eta_star,mu(delta),m"
    assert len(lines) == 10  # header plus nine h rows
    assert "rates: PASS" in captured.err


def test_cli_usage_exit_code(capsys):
    assert main(["cov-check", "--rho", "0.7"]) == 2
    assert "rho" in capsys.readouterr().err


def test_cli_failure_exit_code(monkeypatch):
    failing = ExperimentReport(
        experiment="rates",
        params={},
        rows=(ReportRow(name="x", estimate=1.0, target=0.0, tol=0.5, passed=False),),
        seconds=0.0,
        seed=1,
        reproducible=True,
    )
    monkeypatch.setattr("proclab.cli.run_experiment", lambda cfg: failing)
    assert main(["rates"]) == 1


def test_cli_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(dict(SW_SMALL, grid=list(SW_SMALL["grid"]))))
    assert main(["swanson", "--config", str(path)]) == 0


def test_cli_json_format(tmp_path):
    out = tmp_path / "report.json"
    code = main(
        ["swanson", "--replicates", "30", "--n-paths", "51", "--grid", "0:4:65",
         "--format", "json", "--out", str(out)]
    )
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["experiment"] == "swanson"
    assert obj["meta"]["params"]["n_paths"] == 51
