import os

import pandas as pd
import pytest

from src.cli import EXIT_FAILURES, EXIT_OK, EXIT_USAGE, build_parser, main, overrides_from_args

from conftest import AND_MODULE


def test_graph_command(tmp_path, write_design):
    design = write_design("and2", {"m.v": AND_MODULE})
    out = tmp_path / "out"
    assert main(["graph", design, "--out", str(out), "--workers", "1"]) == EXIT_OK
    summary = pd.read_csv(out / "summary.csv")
    assert summary.loc[summary["design"] == "and2", "nodes"].item() == 4
    assert (out / "and2.json").exists()


def test_graph_failure_exit_code(tmp_path, write_design):
    design = write_design("broken", {"m.v": "module m(; endmodule\n"})
    assert main(["graph", design, "--out", str(tmp_path / "out"), "--workers", "1"]) == EXIT_FAILURES


def test_graph_without_designs_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["graph"])
    assert exc.value.code == 2


def test_embed_without_designs_or_corpus_is_a_usage_error(tmp_path):
    ckpt = tmp_path / "absent.ckpt"
    assert main(["embed", "--checkpoint", str(ckpt), "--out", str(tmp_path / "out")]) == EXIT_USAGE
    assert not (tmp_path / "out").exists()


@pytest.mark.parametrize("pair", [["", "b"], ["a", " "]])
def test_infer_ip_needs_two_designs(pair):
    with pytest.raises(SystemExit) as exc:
        main(["infer-ip", *pair])
    assert exc.value.code == 2


def test_missing_manifest_is_a_config_error(tmp_path, write_design):
    write_design("and2", {"m.v": AND_MODULE})
    assert main(["train-ht", "--corpus", str(tmp_path), "--out", str(tmp_path / "out")]) == EXIT_USAGE


def test_bad_preset_is_a_config_error(tmp_path, write_design):
    preset = tmp_path / "bad.yaml"
    preset.write_text("model:\n  pooling_ratio: 2.0\n")
    design = write_design("and2", {"m.v": AND_MODULE})
    assert main(["graph", design, "--config", str(preset)]) == EXIT_USAGE


def test_synth_writes_a_corpus(tmp_path):
    root = tmp_path / "ip"
    assert main(["synth", "ip", str(root), "--seed", "3"]) == EXIT_OK
    assert (root / "labels.json").exists()
    assert len([d for d in os.listdir(root) if os.path.isdir(root / d)]) == 40


def test_overrides_from_flags():
    args = build_parser().parse_args(["train-ht", "--kind", "AST", "--epochs", "3", "--leave-out", "AES",
                                      "--cache", "/tmp/c", "--seed", "5"])
    assert overrides_from_args(args) == {
        "graph_kind": "AST", "leave_out": "AES",
        "train": {"seed": 5, "epochs": 3}, "paths": {"cache_dir": "/tmp/c"},
    }


def test_help_lists_configuration_keys(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "train.mini_test_interval" in capsys.readouterr().out
