"""Tokenizer for the supported Verilog subset, built on ply.lex."""
import ply.lex as lex

from src.errors import UnsupportedConstruct, VerilogSyntaxError

keywords = (
    "MODULE", "MACROMODULE", "ENDMODULE", "INPUT", "OUTPUT", "INOUT", "WIRE", "REG",
    "INTEGER", "SIGNED", "PARAMETER", "LOCALPARAM", "ASSIGN", "ALWAYS", "INITIAL",
    "POSEDGE", "NEGEDGE", "OR_KW", "BEGIN", "END", "IF", "ELSE", "CASE", "CASEX", "CASEZ",
    "ENDCASE", "DEFAULT", "TRI", "SUPPLY0", "SUPPLY1",
)

# Keywords that exist in Verilog/SystemVerilog but fall outside the supported subset.
UNSUPPORTED_KEYWORDS = {
    "generate": "generate", "endgenerate": "generate", "genvar": "generate",
    "function": "function", "endfunction": "function", "task": "task", "endtask": "task",
    "event": "event", "specify": "specify", "endspecify": "specify",
    "for": "for loop", "while": "while loop", "repeat": "repeat loop", "forever": "forever loop",
    "fork": "fork/join", "wait": "wait", "real": "real", "realtime": "real", "time": "time",
    "primitive": "UDP", "table": "UDP",
    "logic": "SystemVerilog", "bit": "SystemVerilog", "always_ff": "SystemVerilog",
    "always_comb": "SystemVerilog", "always_latch": "SystemVerilog",
    "interface": "SystemVerilog", "package": "SystemVerilog", "typedef": "SystemVerilog",
    "struct": "SystemVerilog", "enum": "SystemVerilog", "import": "SystemVerilog",
}

GATE_PRIMITIVES = ("and", "or", "nand", "nor", "xor", "xnor", "not", "buf")

tokens = keywords + (
    "ID", "SYSID", "INTNUMBER", "BASEDNUMBER", "STRING",
    # operators
    "LOR", "LAND", "LNOT", "OR", "AND", "XOR", "XNOR", "NOT", "NAND", "NOR",
    "EQL", "NEL", "EQ", "NE", "LE", "GE", "LT", "GT",
    "LSHIFTA", "RSHIFTA", "LSHIFT", "RSHIFT",
    "PLUS", "MINUS", "POWER", "TIMES", "DIVIDE", "MOD",
    "COND", "EQUALS", "AT", "SHARP", "DOT", "COMMA", "COLON", "SEMICOLON",
    "LPAREN", "RPAREN", "LBRACKET", "RBRACKET", "LBRACE", "RBRACE",
)

reserved = {k.lower(): k for k in keywords if k != "OR_KW"}
reserved["or"] = "OR_KW"  # sensitivity-list separator, also the 'or' gate primitive

t_ignore = " \t\r\f"

t_LOR = r"\|\|"
t_LAND = r"&&"
t_NOR = r"~\|"
t_NAND = r"~&"
t_XNOR = r"~\^|\^~"
t_OR = r"\|"
t_AND = r"&"
t_XOR = r"\^"
t_EQL = r"==="
t_NEL = r"!=="
t_EQ = r"=="
t_NE = r"!="
t_LNOT = r"!"
t_NOT = r"~"
t_LSHIFTA = r"<<<"
t_RSHIFTA = r">>>"
t_LSHIFT = r"<<"
t_RSHIFT = r">>"
t_LE = r"<="
t_GE = r">="
t_LT = r"<"
t_GT = r">"
t_POWER = r"\*\*"
t_PLUS = r"\+"
t_MINUS = r"-"
t_TIMES = r"\*"
t_DIVIDE = r"/"
t_MOD = r"%"
t_COND = r"\?"
t_EQUALS = r"="
t_AT = r"@"
t_SHARP = r"\#"
t_DOT = r"\."
t_COMMA = r","
t_COLON = r":"
t_SEMICOLON = r";"
t_LPAREN = r"\("
t_RPAREN = r"\)"
t_LBRACKET = r"\["
t_RBRACKET = r"\]"
t_LBRACE = r"\{"
t_RBRACE = r"\}"


def t_STRING(t):
    r'"(?:\\.|[^"\\\n])*"'
    return t


def t_BASEDNUMBER(t):
    r"(?:[0-9][0-9_]*\s*)?'[sS]?[bBoOdDhH]\s*[0-9a-fA-FxXzZ_?]+"
    t.value = "".join(t.value.split())
    return t


def t_INTNUMBER(t):
    r"[0-9][0-9_]*"
    return t


def t_SYSID(t):
    r"\$[A-Za-z_][\w$]*"
    return t


def t_ESCAPEDID(t):
    r"\\[^\s]+"
    t.type = "ID"
    t.value = t.value[1:]
    return t


def t_ID(t):
    r"[A-Za-z_][\w$]*"
    if t.value in UNSUPPORTED_KEYWORDS:
        raise UnsupportedConstruct(UNSUPPORTED_KEYWORDS[t.value], t.lexer.lineno)
    t.type = reserved.get(t.value, "ID")
    return t


def t_newline(t):
    r"\n+"
    t.lexer.lineno += len(t.value)
    t.lexer.line_start = t.lexpos + len(t.value)


def t_error(t):
    col = t.lexpos - getattr(t.lexer, "line_start", 0) + 1
    raise VerilogSyntaxError(f"illegal character {t.value[0]!r}", t.lexer.lineno, col)


_lexer = lex.lex(optimize=False)


class VerilogLexer:
    """Produces a flat token list with line and column positions."""

    def tokenize(self, text: str) -> list:
        lexer = _lexer.clone()
        lexer.lineno = 1
        lexer.line_start = 0
        lexer.input(text)
        toks = []
        for tok in iter(lexer.token, None):
            tok.column = tok.lexpos - _line_start(text, tok.lexpos) + 1
            toks.append(tok)
        return toks


def _line_start(text: str, pos: int) -> int:
    return text.rfind("\n", 0, pos) + 1
