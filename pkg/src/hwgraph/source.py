"""PRE_PROC: flatten a multi-file design into one text and locate its top module."""
import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from src.errors import (
    AmbiguousTopModule,
    DuplicateModule,
    EmptyDesign,
    NoTopModule,
    UnbalancedModule,
    UnresolvedInclude,
    UnsupportedConstruct,
)

logger = logging.getLogger(__name__)

VERILOG_SUFFIXES = (".v", ".vh", ".vg", ".verilog")


class Abstraction(str, Enum):
    RTL = "RTL"
    GLN = "GLN"


@dataclass
class SourceUnit:
    files: List[Tuple[str, str]]
    abstraction: Abstraction = Abstraction.RTL
    name: str = ""

    @classmethod
    def from_directory(cls, path: str, abstraction: Optional[Abstraction] = None) -> "SourceUnit":
        files = []
        for entry in sorted(os.listdir(path)):
            if entry.endswith(VERILOG_SUFFIXES):
                with open(os.path.join(path, entry), encoding="utf-8") as fh:
                    files.append((entry, fh.read()))
        if not files:
            raise EmptyDesign(f"{path}: no Verilog files")
        unit = cls(files=files, name=os.path.basename(os.path.normpath(path)))
        unit.abstraction = abstraction or detect_abstraction(unit)
        return unit

    @classmethod
    def from_text(cls, text: str, name: str = "design", path: str = "design.v") -> "SourceUnit":
        return cls(files=[(path, text)], name=name)


@dataclass
class FlatDesign:
    text: str
    top_module: str
    module_counts: Dict[str, int] = field(default_factory=dict)
    modules: List[str] = field(default_factory=list)  # declaration order
    design_name: str = ""


_COMMENT_RE = re.compile(r'"(?:\\.|[^"\\\n])*"|//[^\n]*|/\*.*?\*/', re.DOTALL)
_MODULE_DECL_RE = re.compile(r"\b(?:module|macromodule)\s+([A-Za-z_][\w$]*)")
_ENDMODULE_RE = re.compile(r"\bendmodule\b")
_WORD_RE = re.compile(r"\d*\s*'[sS]?[bBoOdDhH]\s*[0-9a-fA-FxXzZ_?]+|\$?[A-Za-z_][\w$]*")
_DIRECTIVE_RE = re.compile(r"`([A-Za-z_]\w*)")
_BEHAVIOURAL_RE = re.compile(r"\b(assign|always|initial)\b")
# directives whose whole line carries no design text
LINE_DIRECTIVES = frozenset({
    "timescale", "default_nettype", "celldefine", "endcelldefine", "resetall", "unconnected_drive",
    "nounconnected_drive", "line", "pragma", "begin_keywords", "end_keywords",
})


def strip_comments(text: str) -> str:
    """Blank out comments, keeping line numbers and string literals intact."""
    def repl(m):
        s = m.group(0)
        if s.startswith('"'):
            return s
        return "\n" * s.count("\n") if s.startswith("/*") else ""
    return _COMMENT_RE.sub(repl, text)


def detect_abstraction(unit: SourceUnit) -> Abstraction:
    for _, text in unit.files:
        if _BEHAVIOURAL_RE.search(strip_comments(text)):
            return Abstraction.RTL
    return Abstraction.GLN


class _Preprocessor:
    """Resolves `include, expands object-like `define macros, evaluates `ifdef blocks."""

    def __init__(self, files: List[Tuple[str, str]]):
        self.files = {path: strip_comments(text) for path, text in files}
        self.by_base = {}
        for path in self.files:
            self.by_base.setdefault(os.path.basename(path), path)
        self.defines: Dict[str, str] = {}
        self.included: set = set()

    def _lookup(self, target: str, source: str) -> Optional[str]:
        candidates = [
            os.path.normpath(os.path.join(os.path.dirname(source), target)),
            os.path.normpath(target),
        ]
        for c in candidates:
            if c in self.files:
                return c
        return self.by_base.get(os.path.basename(target))

    def expand(self, path: str, stack: Tuple[str, ...] = ()) -> str:
        out = []
        active = [True]  # conditional-compilation stack
        taken = [True]
        for lineno, line in enumerate(self.files[path].split("\n"), start=1):
            stripped = line.strip()
            m = _DIRECTIVE_RE.match(stripped)
            if m and m.group(1) in ("ifdef", "ifndef", "elsif", "else", "endif"):
                self._conditional(m.group(1), stripped, active, taken)
                out.append("")
                continue
            if not all(active):
                out.append("")
                continue
            if m and m.group(1) == "include":
                inc = re.match(r'`include\s+"([^"]+)"', stripped)
                if not inc:
                    raise UnresolvedInclude(stripped, path, "malformed directive")
                target = self._lookup(inc.group(1), path)
                if target is None:
                    raise UnresolvedInclude(inc.group(1), path)
                if target in stack or target == path:
                    raise UnresolvedInclude(inc.group(1), path, "include cycle")
                self.included.add(target)
                out.append(self.expand(target, stack + (path,)))
                continue
            if m and m.group(1) == "define":
                d = re.match(r"`define\s+([A-Za-z_]\w*)(\s+(.*))?$", stripped)
                if d:
                    self.defines[d.group(1)] = (d.group(3) or "").strip()
                out.append("")
                continue
            if m and m.group(1) == "undef":
                self.defines.pop(stripped.split()[-1], None)
                out.append("")
                continue
            out.append(self._substitute(line, path, lineno))
        return "\n".join(out)

    def _conditional(self, kind, stripped, active, taken):
        parts = stripped.split()
        name = parts[1] if len(parts) > 1 else ""
        if kind in ("ifdef", "ifndef"):
            cond = (name in self.defines) == (kind == "ifdef")
            active.append(cond)
            taken.append(cond)
        elif kind == "elsif":
            cond = not taken[-1] and name in self.defines
            active[-1] = cond
            taken[-1] = taken[-1] or cond
        elif kind == "else":
            active[-1] = not taken[-1]
            taken[-1] = True
        elif len(active) > 1:
            active.pop()
            taken.pop()

    def _substitute(self, line: str, path: str, lineno: int) -> str:
        def repl(m):
            name = m.group(1)
            if name in self.defines:
                return self.defines[name]
            if name in LINE_DIRECTIVES:
                return "\x00"
            raise UnsupportedConstruct(f"undefined macro `{name} in {path}", lineno)
        line = _DIRECTIVE_RE.sub(repl, line)
        if "\x00" in line:
            line = line[: line.index("\x00")]
        return line


def flatten(design: SourceUnit, top: Optional[str] = None) -> FlatDesign:
    if not design.files:
        raise EmptyDesign("design has no files")
    for path, text in design.files:
        if not strip_comments(text).strip():
            raise EmptyDesign(f"{path} is empty after comment stripping")

    pre = _Preprocessor(design.files)
    expanded = []
    for path, _ in design.files:
        expanded.append((path, pre.expand(path)))
    # files pulled in through `include are not concatenated a second time
    parts = [(p, t) for p, t in expanded if p not in pre.included]

    declared: Dict[str, List[str]] = {}
    order: List[str] = []
    for path, text in parts:
        opened = len(_MODULE_DECL_RE.findall(text))
        closed = len(_ENDMODULE_RE.findall(text))
        if opened != closed:
            raise UnbalancedModule(path, opened, closed)
        for name in _MODULE_DECL_RE.findall(text):
            if name in declared:
                raise DuplicateModule(name, declared[name] + [path])
            declared[name] = [path]
            order.append(name)

    text = "\n".join(t for _, t in parts)
    words = Counter(w for w in _WORD_RE.findall(text) if not w[0].isdigit() and "'" not in w)
    counts = {name: words[name] for name in order}

    if top is not None:
        if top not in counts:
            raise NoTopModule(counts, f"requested top module '{top}' is not declared")
        top_module = top
    else:
        top_module = _select_top(counts)
    logger.debug("flattened %d file(s), modules=%s, top=%s", len(parts), counts, top_module)
    return FlatDesign(text=text, top_module=top_module, module_counts=counts,
                      modules=order, design_name=design.name or top_module)


def _select_top(counts: Dict[str, int]) -> str:
    if not counts:
        raise NoTopModule(counts, "no module declarations found")
    once = [name for name, n in counts.items() if n == 1]
    if not once:
        raise NoTopModule(counts)
    if len(once) > 1:
        raise AmbiguousTopModule(once, counts)
    return once[0]


def find_top_module(flat: FlatDesign) -> str:
    return _select_top(flat.module_counts)
