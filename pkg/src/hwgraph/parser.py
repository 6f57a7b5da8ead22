"""
Recursive-descent parser for the supported Verilog subset.

Covers module/endmodule with ANSI and non-ANSI ports, net/variable/parameter
declarations with ranges, continuous assignments, always/initial blocks with
blocking and non-blocking assignments, if/else, case/casex/casez, the full
operator set, concatenation/replication, bit- and part-selects, sized/based
literals, and module or gate-primitive instantiation.
"""
import logging
from typing import List, Optional

from src.errors import UnsupportedConstruct, VerilogSyntaxError
from src.hwgraph.ast import BINARY_OPS, UNARY_OPS, Node, ParseTree
from src.hwgraph.lexer import GATE_PRIMITIVES, VerilogLexer
from src.hwgraph.source import FlatDesign

logger = logging.getLogger(__name__)

# weakest first
BINARY_LEVELS = (
    ("LOR",),
    ("LAND",),
    ("OR",),
    ("XOR", "XNOR"),
    ("AND",),
    ("EQ", "NE", "EQL", "NEL"),
    ("LT", "GT", "LE", "GE"),
    ("LSHIFT", "RSHIFT", "LSHIFTA", "RSHIFTA"),
    ("PLUS", "MINUS"),
    ("TIMES", "DIVIDE", "MOD"),
    ("POWER",),
)

DIRECTIONS = {"INPUT": "Input", "OUTPUT": "Output", "INOUT": "Inout"}
NET_TYPES = ("WIRE", "TRI", "SUPPLY0", "SUPPLY1")


class _Eof:
    type = "EOF"
    value = "<end of input>"

    def __init__(self, lineno, column):
        self.lineno = lineno
        self.column = column


class Parser:
    """Recursive-descent parser producing a ParseTree."""

    def __init__(self, tokens: list):
        self.tokens = tokens
        last = tokens[-1] if tokens else None
        self.eof = _Eof(last.lineno if last else 1, (last.column + len(str(last.value))) if last else 1)
        self.pos = 0

    # ---- Token navigation ----

    def _cur(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else self.eof

    def _peek(self, offset=1):
        p = self.pos + offset
        return self.tokens[p] if p < len(self.tokens) else self.eof

    def _at(self, *types) -> bool:
        return self._cur().type in types

    def _error(self, msg: str, tok=None):
        tok = tok or self._cur()
        return VerilogSyntaxError(f"{msg} (got {tok.value!r})", tok.lineno, tok.column)

    def _eat(self, tt: str):
        tok = self._cur()
        if tok.type != tt:
            raise self._error(f"expected {tt}")
        self.pos += 1
        return tok

    def _eat_if(self, tt: str):
        if self._cur().type == tt:
            return self._eat(tt)
        return None

    def _no_delay(self):
        if self._at("SHARP"):
            raise UnsupportedConstruct("delay (#)", self._cur().lineno)

    # ---- Source ----

    def parse_source(self) -> List[Node]:
        modules = []
        while not self._at("EOF"):
            if self._at("MODULE", "MACROMODULE"):
                modules.append(self._module())
            elif self._at("SEMICOLON"):
                self.pos += 1
            else:
                raise self._error("expected 'module'")
        return modules

    def _module(self) -> Node:
        start = self._cur()
        self.pos += 1
        name = self._eat("ID").value
        mod = Node("ModuleDef", name=name, lineno=start.lineno)
        if self._eat_if("SHARP"):
            mod.children.append(self._header_params())
        portlist = Node("Portlist", lineno=start.lineno)
        if self._eat_if("LPAREN"):
            portlist.children = self._ports()
            self._eat("RPAREN")
        mod.children.append(portlist)
        self._eat("SEMICOLON")
        while not self._at("ENDMODULE"):
            if self._at("EOF"):
                raise self._error(f"missing 'endmodule' for module '{name}'")
            mod.children.extend(self._module_item())
        self._eat("ENDMODULE")
        return mod

    def _header_params(self) -> Node:
        plist = Node("Paramlist", lineno=self._cur().lineno)
        self._eat("LPAREN")
        kind = "Parameter"
        while not self._at("RPAREN"):
            if self._at("PARAMETER", "LOCALPARAM"):
                kind = "Parameter" if self._cur().type == "PARAMETER" else "Localparam"
                self.pos += 1
            self._eat_if("SIGNED")
            self._eat_if("INTEGER")
            width = self._range_opt()
            tok = self._eat("ID")
            self._eat("EQUALS")
            param = Node(kind, name=tok.value, lineno=tok.lineno)
            if width is not None:
                param.children.append(width)
            param.children.append(Node("Rvalue", [self._expr()], lineno=tok.lineno))
            plist.children.append(Node("Decl", [param], lineno=tok.lineno))
            if not self._eat_if("COMMA"):
                break
        self._eat("RPAREN")
        return plist

    def _ports(self) -> List[Node]:
        if self._at("RPAREN"):
            return []
        if self._at(*DIRECTIONS):
            return self._ansi_ports()
        ports = []
        while True:
            if self._at("DOT", "LBRACE"):
                raise UnsupportedConstruct("port expression", self._cur().lineno)
            tok = self._eat("ID")
            ports.append(Node("Port", name=tok.value, lineno=tok.lineno))
            if not self._eat_if("COMMA"):
                return ports

    def _ansi_ports(self) -> List[Node]:
        ports = []
        while True:
            kind, attrs, width = self._direction_header()
            while True:
                tok = self._eat("ID")
                decl = Node(kind, name=tok.value, lineno=tok.lineno, attrs=dict(attrs))
                if width is not None:
                    decl.children.append(_copy(width))
                ports.append(Node("Ioport", [decl], lineno=tok.lineno))
                if not self._eat_if("COMMA"):
                    return ports
                if self._at(*DIRECTIONS):
                    break

    def _direction_header(self):
        tok = self._cur()
        kind = DIRECTIONS[tok.type]
        self.pos += 1
        attrs = {}
        if self._at("WIRE", "TRI"):
            self.pos += 1
        elif self._eat_if("REG"):
            attrs["reg"] = True
        elif self._eat_if("INTEGER"):
            attrs["reg"] = True
            attrs["integer"] = True
        if self._eat_if("SIGNED"):
            attrs["signed"] = True
        return kind, attrs, self._range_opt()

    def _range_opt(self) -> Optional[Node]:
        if not self._at("LBRACKET"):
            return None
        tok = self._eat("LBRACKET")
        msb = self._expr()
        self._eat("COLON")
        lsb = self._expr()
        self._eat("RBRACKET")
        return Node("Width", [msb, lsb], lineno=tok.lineno)

    # ---- Module items ----

    def _module_item(self) -> List[Node]:
        tok = self._cur()
        t = tok.type
        if t in DIRECTIONS:
            return [self._io_decl()]
        if t in NET_TYPES:
            return self._net_decl()
        if t == "REG":
            return [self._reg_decl()]
        if t == "INTEGER":
            return [self._integer_decl()]
        if t in ("PARAMETER", "LOCALPARAM"):
            return [self._param_decl()]
        if t == "ASSIGN":
            return self._assign()
        if t == "ALWAYS":
            return [self._always()]
        if t == "INITIAL":
            self.pos += 1
            return [Node("Initial", [self._statement()], lineno=tok.lineno)]
        if t == "OR_KW" or (t == "ID" and tok.value in GATE_PRIMITIVES):
            return [self._gate_instances()]
        if t == "ID":
            return [self._module_instances()]
        if t == "SEMICOLON":
            self.pos += 1
            return []
        raise self._error("unexpected token in module body")

    def _io_decl(self) -> Node:
        start = self._cur()
        kind, attrs, width = self._direction_header()
        decl = Node("Decl", lineno=start.lineno)
        for tok in self._id_list():
            node = Node(kind, name=tok.value, lineno=tok.lineno, attrs=dict(attrs))
            if width is not None:
                node.children.append(_copy(width))
            decl.children.append(node)
        self._eat("SEMICOLON")
        return decl

    def _id_list(self) -> list:
        toks = [self._eat("ID")]
        while self._eat_if("COMMA"):
            toks.append(self._eat("ID"))
        return toks

    def _net_decl(self) -> List[Node]:
        start = self._cur()
        self.pos += 1
        supply = start.type in ("SUPPLY0", "SUPPLY1")
        self._no_delay()
        attrs = {"signed": True} if self._eat_if("SIGNED") else {}
        width = self._range_opt()
        self._no_delay()
        decl = Node("Decl", lineno=start.lineno)
        items = [decl]
        while True:
            tok = self._eat("ID")
            wire = Node("Wire", name=tok.value, lineno=tok.lineno, attrs=dict(attrs))
            if width is not None:
                wire.children.append(_copy(width))
            decl.children.append(wire)
            if supply:
                value = "1'b1" if start.type == "SUPPLY1" else "1'b0"
                items.append(_assign_node(Node("Identifier", name=tok.value, lineno=tok.lineno),
                                          Node("IntConst", name=value, lineno=tok.lineno), tok.lineno))
            if self._eat_if("EQUALS"):
                rhs = self._expr()
                items.append(_assign_node(Node("Identifier", name=tok.value, lineno=tok.lineno),
                                          rhs, tok.lineno))
            if not self._eat_if("COMMA"):
                break
        self._eat("SEMICOLON")
        return items

    def _reg_decl(self) -> Node:
        start = self._eat("REG")
        attrs = {"signed": True} if self._eat_if("SIGNED") else {}
        width = self._range_opt()
        decl = Node("Decl", lineno=start.lineno)
        while True:
            tok = self._eat("ID")
            reg = Node("Reg", name=tok.value, lineno=tok.lineno, attrs=dict(attrs))
            if width is not None:
                reg.children.append(_copy(width))
            dim = self._range_opt()
            if dim is not None:
                dim.attrs["array"] = True
                reg.children.append(dim)
            if self._eat_if("EQUALS"):
                reg.children.append(Node("Rvalue", [self._expr()], lineno=tok.lineno))
            decl.children.append(reg)
            if not self._eat_if("COMMA"):
                break
        self._eat("SEMICOLON")
        return decl

    def _integer_decl(self) -> Node:
        start = self._eat("INTEGER")
        decl = Node("Decl", lineno=start.lineno)
        for tok in self._id_list():
            decl.children.append(Node("Integer", name=tok.value, lineno=tok.lineno))
        self._eat("SEMICOLON")
        return decl

    def _param_decl(self) -> Node:
        start = self._cur()
        kind = "Parameter" if start.type == "PARAMETER" else "Localparam"
        self.pos += 1
        self._eat_if("SIGNED")
        self._eat_if("INTEGER")
        width = self._range_opt()
        decl = Node("Decl", lineno=start.lineno)
        while True:
            tok = self._eat("ID")
            self._eat("EQUALS")
            param = Node(kind, name=tok.value, lineno=tok.lineno)
            if width is not None:
                param.children.append(_copy(width))
            param.children.append(Node("Rvalue", [self._expr()], lineno=tok.lineno))
            decl.children.append(param)
            if not self._eat_if("COMMA"):
                break
        self._eat("SEMICOLON")
        return decl

    def _assign(self) -> List[Node]:
        start = self._eat("ASSIGN")
        self._no_delay()
        items = []
        while True:
            lhs = self._lvalue()
            self._eat("EQUALS")
            items.append(_assign_node(lhs, self._expr(), start.lineno))
            if not self._eat_if("COMMA"):
                break
        self._eat("SEMICOLON")
        return items

    def _always(self) -> Node:
        start = self._eat("ALWAYS")
        self._no_delay()
        sens = Node("SensList", lineno=start.lineno)
        if self._eat_if("AT"):
            sens.children = self._sensitivity()
        return Node("Always", [sens, self._statement()], lineno=start.lineno)

    def _sensitivity(self) -> List[Node]:
        if self._eat_if("TIMES"):
            return [Node("Sens", attrs={"type": "all"})]
        if self._at("ID"):
            tok = self._eat("ID")
            return [Node("Sens", [Node("Identifier", name=tok.value, lineno=tok.lineno)],
                         lineno=tok.lineno, attrs={"type": "level"})]
        self._eat("LPAREN")
        if self._eat_if("TIMES"):
            self._eat("RPAREN")
            return [Node("Sens", attrs={"type": "all"})]
        items = []
        while True:
            tok = self._cur()
            edge = "level"
            if self._eat_if("POSEDGE"):
                edge = "posedge"
            elif self._eat_if("NEGEDGE"):
                edge = "negedge"
            items.append(Node("Sens", [self._expr()], lineno=tok.lineno, attrs={"type": edge}))
            if not (self._eat_if("OR_KW") or self._eat_if("COMMA")):
                break
        self._eat("RPAREN")
        return items

    # ---- Instantiation ----

    def _module_instances(self) -> Node:
        mod_tok = self._eat("ID")
        ilist = Node("InstanceList", name=mod_tok.value, lineno=mod_tok.lineno)
        params = []
        if self._eat_if("SHARP"):
            self._eat("LPAREN")
            params = self._connections("ParamArg")
            self._eat("RPAREN")
        ilist.children.extend(params)
        while True:
            tok = self._eat("ID")
            if self._at("LBRACKET"):
                raise UnsupportedConstruct("instance array", tok.lineno)
            inst = Node("Instance", name=tok.value, lineno=tok.lineno,
                        attrs={"module": mod_tok.value})
            self._eat("LPAREN")
            inst.children = self._connections("PortArg")
            self._eat("RPAREN")
            ilist.children.append(inst)
            if not self._eat_if("COMMA"):
                break
        self._eat("SEMICOLON")
        return ilist

    def _connections(self, kind: str) -> List[Node]:
        conns = []
        if self._at("RPAREN"):
            return conns
        while True:
            tok = self._cur()
            if self._eat_if("DOT"):
                name = self._eat("ID").value
                self._eat("LPAREN")
                arg = Node(kind, name=name, lineno=tok.lineno)
                if not self._at("RPAREN"):
                    arg.children.append(self._expr())
                self._eat("RPAREN")
            elif self._at("COMMA", "RPAREN"):
                arg = Node(kind, lineno=tok.lineno)  # unconnected positional slot
            else:
                arg = Node(kind, [self._expr()], lineno=tok.lineno)
            conns.append(arg)
            if not self._eat_if("COMMA"):
                return conns

    def _gate_instances(self) -> Node:
        gate_tok = self._cur()
        gate = gate_tok.value
        self.pos += 1
        self._no_delay()
        ilist = Node("InstanceList", name=gate, lineno=gate_tok.lineno, attrs={"primitive": True})
        while True:
            tok = self._cur()
            name = self._eat("ID").value if self._at("ID") else None
            if self._at("LBRACKET"):
                raise UnsupportedConstruct("instance array", tok.lineno)
            self._eat("LPAREN")
            terms = [Node("PortArg", [self._expr()], lineno=tok.lineno)]
            while self._eat_if("COMMA"):
                terms.append(Node("PortArg", [self._expr()], lineno=tok.lineno))
            self._eat("RPAREN")
            if len(terms) < 2:
                raise VerilogSyntaxError(f"gate '{gate}' needs an output and at least one input",
                                         tok.lineno, tok.column)
            ilist.children.append(Node("Instance", terms, name=name, lineno=tok.lineno,
                                       attrs={"module": gate, "primitive": True}))
            if not self._eat_if("COMMA"):
                break
        self._eat("SEMICOLON")
        return ilist

    # ---- Statements ----

    def _statement(self) -> Node:
        tok = self._cur()
        t = tok.type
        if t == "BEGIN":
            self.pos += 1
            block = Node("Block", lineno=tok.lineno)
            if self._eat_if("COLON"):
                block.name = self._eat("ID").value
            while not self._eat_if("END"):
                if self._at("EOF"):
                    raise self._error("missing 'end'")
                block.children.append(self._statement())
            return block
        if t == "IF":
            self.pos += 1
            self._eat("LPAREN")
            cond = self._expr()
            self._eat("RPAREN")
            node = Node("IfStatement", [cond, self._statement()], lineno=tok.lineno)
            if self._eat_if("ELSE"):
                node.children.append(self._statement())
            return node
        if t in ("CASE", "CASEX", "CASEZ"):
            return self._case()
        if t == "SEMICOLON":
            self.pos += 1
            return Node("Block", lineno=tok.lineno)
        if t == "SYSID":
            self.pos += 1
            call = Node("SystemCall", name=tok.value, lineno=tok.lineno)
            if self._eat_if("LPAREN"):
                call.children = self._expr_list("RPAREN")
                self._eat("RPAREN")
            self._eat("SEMICOLON")
            return call
        if t == "SHARP":
            raise UnsupportedConstruct("delay (#)", tok.lineno)
        if t == "AT":
            raise UnsupportedConstruct("event control", tok.lineno)
        if t == "ASSIGN":
            raise UnsupportedConstruct("procedural continuous assignment", tok.lineno)
        lhs = self._lvalue()
        if self._eat_if("EQUALS"):
            kind = "BlockingSubstitution"
        elif self._eat_if("LE"):
            kind = "NonblockingSubstitution"
        else:
            raise self._error("expected '=' or '<='")
        self._no_delay()
        rhs = self._expr()
        self._eat("SEMICOLON")
        return Node(kind, [Node("Lvalue", [lhs], lineno=tok.lineno),
                           Node("Rvalue", [rhs], lineno=tok.lineno)], lineno=tok.lineno)

    def _case(self) -> Node:
        tok = self._cur()
        kind = {"CASE": "CaseStatement", "CASEX": "CasexStatement", "CASEZ": "CasezStatement"}[tok.type]
        self.pos += 1
        self._eat("LPAREN")
        node = Node(kind, [self._expr()], lineno=tok.lineno)
        self._eat("RPAREN")
        while not self._eat_if("ENDCASE"):
            item_tok = self._cur()
            if self._eat_if("DEFAULT"):
                self._eat_if("COLON")
                item = Node("Case", [self._statement()], lineno=item_tok.lineno, attrs={"default": True})
            else:
                conds = self._expr_list("COLON")
                self._eat("COLON")
                item = Node("Case", conds + [self._statement()], lineno=item_tok.lineno)
            node.children.append(item)
        return node

    # ---- Expressions ----

    def _lvalue(self) -> Node:
        tok = self._cur()
        if self._eat_if("LBRACE"):
            parts = [self._lvalue()]
            while self._eat_if("COMMA"):
                parts.append(self._lvalue())
            self._eat("RBRACE")
            return Node("LConcat", parts, lineno=tok.lineno)
        ident = self._eat("ID")
        return self._selects(Node("Identifier", name=ident.value, lineno=ident.lineno))

    def _selects(self, base: Node) -> Node:
        while self._at("LBRACKET"):
            tok = self._eat("LBRACKET")
            first = self._expr()
            if self._eat_if("COLON"):
                base = Node("Partselect", [base, first, self._expr()], lineno=tok.lineno)
            elif self._at("PLUS", "MINUS") and self._peek().type == "COLON":
                mode = "+:" if self._cur().type == "PLUS" else "-:"
                self.pos += 2
                base = Node("Partselect", [base, first, self._expr()], lineno=tok.lineno,
                            attrs={"indexed": mode})
            else:
                base = Node("Pointer", [base, first], lineno=tok.lineno)
            self._eat("RBRACKET")
        if self._at("DOT"):
            raise UnsupportedConstruct("hierarchical reference", self._cur().lineno)
        return base

    def _expr_list(self, end: str) -> List[Node]:
        items = []
        if self._at(end):
            return items
        items.append(self._expr())
        while self._eat_if("COMMA"):
            items.append(self._expr())
        return items

    def _expr(self) -> Node:
        cond = self._binary(0)
        if self._at("COND"):
            tok = self._eat("COND")
            true = self._expr()
            self._eat("COLON")
            false = self._expr()
            return Node("Cond", [cond, true, false], lineno=tok.lineno)
        return cond

    def _binary(self, level: int) -> Node:
        if level == len(BINARY_LEVELS):
            return self._unary()
        left = self._binary(level + 1)
        while self._at(*BINARY_LEVELS[level]):
            tok = self._cur()
            self.pos += 1
            right = self._binary(level + 1)
            left = Node(BINARY_OPS[tok.type], [left, right], lineno=tok.lineno)
        return left

    def _unary(self) -> Node:
        tok = self._cur()
        if tok.type in UNARY_OPS:
            self.pos += 1
            return Node(UNARY_OPS[tok.type], [self._unary()], lineno=tok.lineno)
        return self._primary()

    def _primary(self) -> Node:
        tok = self._cur()
        t = tok.type
        if t in ("INTNUMBER", "BASEDNUMBER"):
            self.pos += 1
            return Node("IntConst", name=tok.value, lineno=tok.lineno)
        if t == "STRING":
            self.pos += 1
            return Node("StringConst", name=tok.value, lineno=tok.lineno)
        if t == "ID":
            self.pos += 1
            if self._at("LPAREN"):
                raise UnsupportedConstruct("function call", tok.lineno)
            return self._selects(Node("Identifier", name=tok.value, lineno=tok.lineno))
        if t == "SYSID":
            self.pos += 1
            call = Node("SystemCall", name=tok.value, lineno=tok.lineno)
            if self._eat_if("LPAREN"):
                call.children = self._expr_list("RPAREN")
                self._eat("RPAREN")
            return call
        if t == "LPAREN":
            self.pos += 1
            inner = self._expr()
            self._eat("RPAREN")
            return inner
        if t == "LBRACE":
            self.pos += 1
            first = self._expr()
            if self._at("LBRACE"):
                self.pos += 1
                items = self._expr_list("RBRACE")
                self._eat("RBRACE")
                self._eat("RBRACE")
                return Node("Repeat", [first, Node("Concat", items, lineno=tok.lineno)], lineno=tok.lineno)
            items = [first]
            while self._eat_if("COMMA"):
                items.append(self._expr())
            self._eat("RBRACE")
            return Node("Concat", items, lineno=tok.lineno)
        raise self._error("expected an expression")


def _assign_node(lhs: Node, rhs: Node, lineno: int) -> Node:
    return Node("Assign", [Node("Lvalue", [lhs], lineno=lineno), Node("Rvalue", [rhs], lineno=lineno)],
                lineno=lineno)


def _copy(node: Node) -> Node:
    return Node(node.kind, [_copy(c) for c in node.children], node.name, node.lineno, dict(node.attrs))


_lexer = VerilogLexer()


def parse_text(text: str) -> List[Node]:
    return Parser(_lexer.tokenize(text)).parse_source()


def parse_verilog(flat: FlatDesign) -> ParseTree:
    modules = parse_text(flat.text)
    by_name = {m.name: m for m in modules}
    if flat.top_module not in by_name:
        raise VerilogSyntaxError(f"top module '{flat.top_module}' has no parsed declaration", 1, 1)
    logger.debug("parsed %d module(s) of %s", len(modules), flat.design_name)
    return ParseTree(modules=by_name, top=flat.top_module, design_name=flat.design_name)
