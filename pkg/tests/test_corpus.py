import json

import pytest

from src.data.corpus import base_circuit, design_dirs, load_corpus, read_manifest, write_manifest
from src.errors import ConfigError


def make_corpus(root, names, manifest=None):
    for name in names:
        (root / name).mkdir()
        (root / name / "top.v").write_text("module top(input a, output y); assign y = a; endmodule\n")
    (root / "notes").mkdir()
    if manifest is not None:
        (root / "labels.json").write_text(json.dumps(manifest))


def test_base_circuit():
    assert base_circuit("AES-T100") == "AES"
    assert base_circuit("c17") == "c17"


def test_load_with_string_and_object_entries(tmp_path):
    make_corpus(tmp_path, ["AES-T100", "RS232-T1"],
                {"AES-T100": "Trojan", "RS232-T1": {"label": "Non_Trojan", "circuit": "uart"}})
    items = load_corpus(str(tmp_path))
    assert [(i.name, i.label, i.circuit) for i in items] == [
        ("AES-T100", "Trojan", "AES"), ("RS232-T1", "Non_Trojan", "uart")
    ]


def test_design_dirs_skip_non_verilog(tmp_path):
    make_corpus(tmp_path, ["b", "a"])
    assert design_dirs(str(tmp_path)) == ["a", "b"]


def test_mismatched_manifest(tmp_path):
    make_corpus(tmp_path, ["a", "b"], {"a": "Trojan", "ghost": "Trojan"})
    with pytest.raises(ConfigError, match="ghost"):
        load_corpus(str(tmp_path))


def test_unlabeled_corpus(tmp_path):
    make_corpus(tmp_path, ["a"])
    assert load_corpus(str(tmp_path), require_labels=False)[0].label is None
    with pytest.raises(ConfigError):
        load_corpus(str(tmp_path))


def test_bad_manifest_entries(tmp_path):
    path = tmp_path / "labels.json"
    path.write_text('{"a": 3}')
    with pytest.raises(ConfigError):
        read_manifest(str(path))
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        read_manifest(str(path))


def test_write_manifest_round_trip(tmp_path):
    write_manifest(str(tmp_path), {"x-1": "A"})
    assert read_manifest(str(tmp_path / "labels.json")) == {"x-1": {"label": "A", "circuit": "x"}}
