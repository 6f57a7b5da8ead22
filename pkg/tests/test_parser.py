import pytest

from src.errors import UnsupportedConstruct, VerilogSyntaxError
from src.hwgraph.lexer import VerilogLexer
from src.hwgraph.parser import parse_text

from conftest import AND_MODULE, parse


def only_module(text):
    (module,) = parse_text(text)
    return module


def rhs_of_first_assign(text):
    module = only_module(text)
    return module.find("Assign")[0].children[1].children[0]


def test_lexer_positions():
    toks = VerilogLexer().tokenize("module m;\n  wire w;\nendmodule")
    wire = [t for t in toks if t.type == "WIRE"][0]
    assert (wire.lineno, wire.column) == (2, 3)


def test_parse_tree_root_is_top_module():
    tree = parse(AND_MODULE)
    assert tree.top == "m"
    assert tree.root.kind == "ModuleDef" and tree.root.name == "m"


def test_binary_precedence():
    rhs = rhs_of_first_assign("module m(input a, b, c, output y); assign y = a | b & c; endmodule")
    assert repr(rhs) == "Or[Identifier(a), And[Identifier(b), Identifier(c)]]"


def test_left_associative_minus():
    rhs = rhs_of_first_assign("module m(input a, b, c, output y); assign y = a - b - c; endmodule")
    assert repr(rhs) == "Minus[Minus[Identifier(a), Identifier(b)], Identifier(c)]"


def test_ternary_concat_and_selects():
    rhs = rhs_of_first_assign(
        "module m(input s, input [3:0] a, output [7:0] y); assign y = s ? {a[0], a[3:1]} : {2{a}}; endmodule"
    )
    assert rhs.kind == "Cond"
    cond, true, false = rhs.children
    assert [c.kind for c in true.children] == ["Pointer", "Partselect"]
    assert false.kind == "Repeat"


def test_non_ansi_ports_and_declarations():
    module = only_module(
        "module m(a, b, y);\n input a, b;\n output y;\n wire t;\n assign t = a ^ b;\n assign y = ~t;\nendmodule"
    )
    assert [p.name for p in module.find("Port")] == ["a", "b", "y"]
    assert len(module.find("Assign")) == 2


def test_always_with_if_and_case():
    module = only_module(
        "module m(input clk, input [1:0] s, input a, output reg q);\n"
        "always @(posedge clk) begin\n"
        "  if (s == 2'b00) q <= a;\n"
        "  else case (s)\n"
        "    2'b01, 2'b10: q <= ~a;\n"
        "    default: q <= 1'b0;\n"
        "  endcase\n"
        "end\nendmodule"
    )
    (always,) = module.find("Always")
    assert always.children[0].children[0].attrs["type"] == "posedge"
    case = module.find("CaseStatement")[0]
    assert len(case.children[1].children) == 3  # two labels + statement
    assert case.children[2].attrs.get("default")


def test_gate_and_module_instances():
    module = only_module(
        "module top(input a, b, output y);\n wire t;\n nand g1(t, a, b);\n sub u1(.x(t), .z(y));\nendmodule"
    )
    lists = module.find("InstanceList")
    assert lists[0].attrs.get("primitive") and lists[0].name == "nand"
    assert lists[1].name == "sub"
    assert [a.name for a in lists[1].children[0].children] == ["x", "z"]


def test_syntax_error_carries_position():
    with pytest.raises(VerilogSyntaxError) as err:
        parse_text("module m(input a, output b);\n  assign b = a\nendmodule")
    assert err.value.line == 3


@pytest.mark.parametrize("body, construct", [
    ("always @(a) b = #1 a;", "delay"),
    ("generate endgenerate", "generate"),
    ("assign b = f(a);", "function call"),
])
def test_unsupported_constructs(body, construct):
    with pytest.raises(UnsupportedConstruct) as err:
        parse_text(f"module m(input a, output reg b);\n{body}\nendmodule")
    assert construct in str(err.value)
