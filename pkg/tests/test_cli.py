"""Command-line interface: exit codes, error payloads, artifact generation."""

import json

import yaml

from qdcascade.cli import COMMANDS, build_parser, main

FAST_DYNAMICS = {
    "run": "dynamics",
    "scenario": {
        "dot": {"delta_b_mev": 1.0},
        "decay": {"gamma_x_per_ps": 0.01, "gamma_b_per_ps": 0.02},
        "cavity": {"g_mev": 0.06, "kappa_mev": 0.12},
        "pulses": [
            {"alpha_pi": 2.585287322998047, "sigma_ps": 2.7,
             "delta_mev": -0.5, "t0_ps": 0.0},
        ],
    },
    "grid": {"dynamics_t_end_ps": 20.0, "dynamics_dt_out_ps": 2.0},
}


def test_parser_has_all_subcommands():
    parser = build_parser()
    text = parser.format_help()
    for name in COMMANDS:
        assert name in text


def test_missing_config_file(tmp_path, capsys):
    rc = main(["dynamics", "--config", str(tmp_path / "nope.yaml")])
    assert rc == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "file_not_found"


def test_config_error_is_machine_readable(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(yaml.safe_dump({"run": "dynamics"}))  # no scenario
    rc = main(["dynamics", "--config", str(path)])
    assert rc == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "config_error"
    assert err["field"] == "scenario"


def test_dynamics_run_writes_outputs(tmp_path, capsys):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(yaml.safe_dump(FAST_DYNAMICS))
    out_dir = tmp_path / "out"
    rc = main(["dynamics", "--config", str(cfg), "--out", str(out_dir)])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["command"] == "dynamics"
    assert (out_dir / "trajectory.csv").exists()
    assert (out_dir / "manifest.json").exists()


def test_subcommand_overrides_run_kind(tmp_path, capsys):
    """The subcommand decides what runs, whatever the config says."""
    doc = dict(FAST_DYNAMICS, run="concurrence")
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(yaml.safe_dump(doc))
    out_dir = tmp_path / "out"
    rc = main(["dynamics", "--config", str(cfg), "--out", str(out_dir)])
    assert rc == 0
    assert (out_dir / "trajectory.csv").exists()


def test_threads_flag_parses(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text(yaml.safe_dump(FAST_DYNAMICS))
    args = build_parser().parse_args(
        ["dynamics", "--config", str(cfg), "--threads", "4",
         "--grid-scale", "fine"]
    )
    assert args.threads == 4
    assert args.grid_scale == "fine"
