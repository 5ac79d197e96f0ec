import json

import pytest

import asyncbo.cli as cli
from asyncbo.bench import SuiteConfig, read_csv


def _args(tmp_path, *extra):
    return [
        "run",
        "--policies", "pessimistic",
        "--buffers", "0", "2",
        "--dims", "2",
        "--noise", "0.0",
        "--replicates", "2",
        "--budget", "8",
        "--candidates-per-dim", "32",
        "--seed", "5",
        "--out", str(tmp_path / "out"),
        *extra,
    ]


def test_run_produces_csv_and_svg(tmp_path, capsys):
    code = cli.main(_args(tmp_path))
    assert code == 0
    out = tmp_path / "out"
    assert (out / "curves.csv").is_file()
    assert (out / "summary.json").is_file()
    svgs = list(out.glob("*.svg"))
    assert len(svgs) == 1
    curves = read_csv(out / "curves.csv")
    assert {c.cell.policy for c in curves} == {"serial", "pessimistic"}


def test_run_twice_is_byte_identical(tmp_path):
    assert cli.main(_args(tmp_path / "a")) == 0
    assert cli.main(_args(tmp_path / "b")) == 0
    a = (tmp_path / "a" / "out" / "curves.csv").read_bytes()
    b = (tmp_path / "b" / "out" / "curves.csv").read_bytes()
    assert a == b


def test_plot_renders_from_csv(tmp_path):
    assert cli.main(_args(tmp_path)) == 0
    csv_path = tmp_path / "out" / "curves.csv"
    plot_dir = tmp_path / "plots"
    code = cli.main(["plot", str(csv_path), "--out", str(plot_dir), "--log-y"])
    assert code == 0
    assert list(plot_dir.glob("*.svg"))


def test_config_file_and_flag_precedence(tmp_path, monkeypatch):
    captured = {}

    def fake_run_suite(cfg, workers=1, force=False, log=None):
        captured["cfg"] = cfg
        captured["workers"] = workers
        raise SystemExit(0)

    monkeypatch.setattr(cli, "run_suite", fake_run_suite)
    config = {
        "policies": ["greedy"],
        "buffers": [0, 3],
        "dims": [2],
        "noise": [0.0],
        "replicates": 4,
        "budget": 10,
        "output_dir": str(tmp_path / "cfg-out"),
    }
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(config))
    with pytest.raises(SystemExit):
        cli.main(["run", "--config", str(path), "--replicates", "7", "--workers", "3"])
    cfg: SuiteConfig = captured["cfg"]
    assert cfg.policies == ("greedy",)
    assert cfg.replicates == 7  # flag overrides file
    assert cfg.budget == 10
    assert captured["workers"] == 3


def test_unknown_config_key_is_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"policies": ["serial"], "buffer_count": 3}))
    assert cli.main(["run", "--config", str(path)]) == 1


def test_invalid_json_is_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert cli.main(["run", "--config", str(path)]) == 1


def test_bad_policy_name_is_config_error(tmp_path):
    code = cli.main(_args(tmp_path, "--policies", "optimist"))
    assert code == 1


def test_bad_flag_usage_exits_one():
    with pytest.raises(SystemExit) as err:
        cli.main(["run", "--budget", "not-a-number"])
    assert err.value.code == 1


def test_unknown_subcommand_exits_one():
    with pytest.raises(SystemExit) as err:
        cli.main(["unknown-subcommand"])
    assert err.value.code == 1


def test_replicates_below_two_is_config_error(tmp_path):
    assert cli.main(_args(tmp_path, "--replicates", "1")) == 1


def test_unwritable_output_is_io_error(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("x")
    code = cli.main(_args(tmp_path, "--out", str(blocker)))
    assert code == 3


def test_suite_failures_exit_runtime_code(tmp_path, monkeypatch):
    from asyncbo.bench import CellKey, SuiteResult

    def fake_run_suite(cfg, workers=1, force=False, log=None):
        return SuiteResult(
            curves=[],
            failures={CellKey("pessimistic", 2, 2, 0.0): "synthetic"},
            cached=[],
            csv_path=tmp_path / "none.csv",
            summary_path=tmp_path / "summary.json",
        )

    monkeypatch.setattr(cli, "run_suite", fake_run_suite)
    assert cli.main(_args(tmp_path)) == 2


def test_figure_presets_parse(monkeypatch, tmp_path):
    seen = {}

    def fake_run_suite(cfg, workers=1, force=False, log=None):
        seen["cfg"] = cfg
        raise SystemExit(0)

    monkeypatch.setattr(cli, "run_suite", fake_run_suite)
    for name, dims in (("figure2", (5,)), ("figure3", (2, 3, 4, 5, 6))):
        with pytest.raises(SystemExit):
            cli.main([name, "--replicates", "2", "--out", str(tmp_path)])
        assert seen["cfg"].dims == dims
        assert seen["cfg"].replicates == 2
    with pytest.raises(SystemExit):
        cli.main(["figure4", "--out", str(tmp_path)])
    assert seen["cfg"].noise == (0.01, 0.02, 0.05)
