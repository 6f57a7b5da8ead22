import os

import pytest

from src.errors import (
    AmbiguousTopModule, DuplicateModule, EmptyDesign, NoTopModule, UnresolvedInclude, UnsupportedConstruct,
)
from src.hwgraph.source import Abstraction, SourceUnit, detect_abstraction, flatten, strip_comments


def unit(*files, name="d"):
    return SourceUnit(files=list(files), name=name)


def test_single_module_is_top():
    flat = flatten(SourceUnit.from_text("module m(input a, output b); assign b = a; endmodule"))
    assert flat.top_module == "m"
    assert flat.modules == ["m"]


def test_top_is_the_module_never_instantiated():
    text = (
        "module leaf(input a, output b); assign b = ~a; endmodule\n"
        "module top(input x, output y); leaf u1(.a(x), .b(y)); endmodule\n"
    )
    flat = flatten(SourceUnit.from_text(text))
    assert flat.top_module == "top"
    assert flat.module_counts == {"leaf": 2, "top": 1}


def test_two_independent_modules_are_ambiguous():
    text = "module a(input x, output y); assign y = x; endmodule\nmodule b(input x, output y); assign y = x; endmodule\n"
    with pytest.raises(AmbiguousTopModule):
        flatten(SourceUnit.from_text(text))


def test_top_override_must_be_declared():
    with pytest.raises(NoTopModule):
        flatten(SourceUnit.from_text("module m(input a, output b); assign b = a; endmodule"), top="nope")


def test_top_override_resolves_ambiguity():
    text = "module a(input x, output y); assign y = x; endmodule\nmodule b(input x, output y); assign y = x; endmodule\n"
    assert flatten(SourceUnit.from_text(text), top="b").top_module == "b"


def test_duplicate_module_across_files():
    text = "module m(input a, output b); assign b = a; endmodule\n"
    with pytest.raises(DuplicateModule) as err:
        flatten(unit(("x.v", text), ("y.v", text)))
    assert "m" in str(err.value)


def test_comment_only_file_is_empty():
    with pytest.raises(EmptyDesign):
        flatten(unit(("x.v", "// nothing here\n/* at all */\n")))


def test_comments_keep_line_numbers():
    text = "a /* one\ntwo */ b // tail\nc"
    stripped = strip_comments(text)
    assert stripped.count("\n") == text.count("\n")
    assert "one" not in stripped and "tail" not in stripped


def test_define_and_ifdef_are_applied():
    text = (
        "`define W 4\n"
        "`define FAST\n"
        "module m(input [`W-1:0] a, output [`W-1:0] b);\n"
        "`ifdef FAST\n"
        "  assign b = a;\n"
        "`else\n"
        "  assign b = ~a;\n"
        "`endif\n"
        "endmodule\n"
    )
    flat = flatten(SourceUnit.from_text(text))
    assert "`" not in flat.text
    assert "4-1" in flat.text
    assert "~a" not in flat.text


def test_undefined_macro_is_reported_with_its_line():
    text = "module m(input a, output b);\n  assign b = a & `MISSING;\nendmodule\n"
    with pytest.raises(UnsupportedConstruct, match="MISSING") as info:
        flatten(SourceUnit.from_text(text))
    assert info.value.line == 2


def test_line_directives_are_dropped():
    text = "`timescale 1ns / 1ps\n`default_nettype none\nmodule m(input a, output b); assign b = a; endmodule\n"
    flat = flatten(SourceUnit.from_text(text))
    assert "timescale" not in flat.text and "none" not in flat.text
    assert flat.top_module == "m"


def test_include_is_inlined_once(designs_dir):
    design = SourceUnit.from_directory(os.path.join(designs_dir, "adder4"))
    flat = flatten(design)
    assert flat.top_module == "adder4"
    assert flat.modules == ["full_adder", "adder4"]
    assert flat.text.count("module full_adder") == 1


def test_missing_include_is_reported():
    with pytest.raises(UnresolvedInclude):
        flatten(unit(("top.v", '`include "nowhere.vh"\nmodule m(input a, output b); assign b = a; endmodule\n')))


def test_abstraction_detection(designs_dir):
    assert SourceUnit.from_directory(os.path.join(designs_dir, "c17")).abstraction == Abstraction.GLN
    assert SourceUnit.from_directory(os.path.join(designs_dir, "counter")).abstraction == Abstraction.RTL
    assert detect_abstraction(unit(("x.v", "module m(input a, output b); buf g(b, a); endmodule"))) == Abstraction.GLN
