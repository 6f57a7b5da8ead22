"""Parse-tree node type and the Verilog grammar token names it uses."""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, Optional

# Binary operator token -> node kind
BINARY_OPS = {
    "LOR": "Lor", "LAND": "Land", "OR": "Or", "XOR": "Xor", "XNOR": "Xnor", "AND": "And",
    "EQ": "Eq", "NE": "NotEq", "EQL": "Eql", "NEL": "NotEql",
    "LT": "LessThan", "GT": "GreaterThan", "LE": "LessEq", "GE": "GreaterEq",
    "LSHIFT": "Sll", "RSHIFT": "Srl", "LSHIFTA": "Sla", "RSHIFTA": "Sra",
    "PLUS": "Plus", "MINUS": "Minus", "TIMES": "Times", "DIVIDE": "Divide", "MOD": "Mod",
    "POWER": "Power",
}

UNARY_OPS = {
    "PLUS": "Uplus", "MINUS": "Uminus", "LNOT": "Ulnot", "NOT": "Unot",
    "AND": "Uand", "NAND": "Unand", "OR": "Uor", "NOR": "Unor", "XOR": "Uxor", "XNOR": "Uxnor",
}

# Gate primitive -> operator node kind used in the data-flow graph
GATE_OPS = {
    "and": "And", "or": "Or", "nand": "Nand", "nor": "Nor", "xor": "Xor", "xnor": "Xnor",
    "not": "Unot",
}

STRUCTURAL_KINDS = (
    "ModuleDef", "Paramlist", "Portlist", "Port", "Ioport", "Decl",
    "Input", "Output", "Inout", "Wire", "Reg", "Integer", "Parameter", "Localparam", "Width",
    "Assign", "Lvalue", "Rvalue", "Always", "Initial", "SensList", "Sens", "Block",
    "BlockingSubstitution", "NonblockingSubstitution", "IfStatement", "CaseStatement",
    "CasexStatement", "CasezStatement", "Case", "InstanceList", "Instance", "PortArg",
    "ParamArg", "SystemCall", "Identifier", "IntConst", "StringConst", "Cond", "Concat",
    "LConcat", "Repeat", "Pointer", "Partselect",
)

# Every label an AST node may carry.
AST_LABELS = frozenset(STRUCTURAL_KINDS) | frozenset(BINARY_OPS.values()) | frozenset(UNARY_OPS.values())

NAMED_KINDS = frozenset({
    "ModuleDef", "Port", "Input", "Output", "Inout", "Wire", "Reg", "Integer", "Parameter",
    "Localparam", "Instance", "InstanceList", "PortArg", "ParamArg", "SystemCall",
    "Identifier", "IntConst", "StringConst", "Block",
})


@dataclass
class Node:
    kind: str
    children: List["Node"] = field(default_factory=list)
    name: Optional[str] = None
    lineno: int = 0
    attrs: Dict[str, object] = field(default_factory=dict)

    def walk(self) -> Iterator["Node"]:
        """Preorder traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def find(self, kind: str) -> List["Node"]:
        return [n for n in self.walk() if n.kind == kind]

    def __repr__(self):
        label = f"{self.kind}({self.name})" if self.name is not None else self.kind
        if not self.children:
            return label
        return f"{label}[{', '.join(repr(c) for c in self.children)}]"


def module_items(module: Node) -> List[Node]:
    """Items of a ModuleDef, i.e. everything after the Paramlist/Portlist headers."""
    return [c for c in module.children if c.kind not in ("Paramlist", "Portlist")]


@dataclass
class ParseTree:
    modules: Dict[str, Node]
    top: str
    design_name: str = ""

    @property
    def root(self) -> Node:
        return self.modules[self.top]

    @cached_property
    def dataflow(self):
        from src.hwgraph.dataflow import DataflowAnalyzer
        return DataflowAnalyzer(self).analyze()
