"""
Data-flow analysis of an elaborated design.

The analyzer walks the top module, inlines module instances under hierarchical names
(``u1.sig``) and records, for every driven signal, the expression tree that produces its
value. Per-signal DFG fragments are dependency closures over those expressions; merging
the fragments of every driven signal yields the design's DFG.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.errors import ElaborationDepthExceeded, EmptyGraph, UnknownModule, UnknownSignal, UnsupportedConstruct
from src.hwgraph.ast import BINARY_OPS, GATE_OPS, UNARY_OPS, Node, ParseTree, module_items
from src.hwgraph.graph import SIGNAL_LABELS, GraphKind, HWGraph, canonicalize

logger = logging.getLogger(__name__)

MAX_DEPTH = 32

EXPRESSION_OPS = frozenset(BINARY_OPS.values()) | frozenset(UNARY_OPS.values()) | {
    "Concat", "Repeat", "Pointer", "Partselect",
}
# Every operator label a DFG node may carry.
DFG_OPERATOR_LABELS = EXPRESSION_OPS | frozenset(GATE_OPS.values()) | {"Branch"}


class DExpr:
    """One node of a driver expression: a signal reference, an operator or a leaf constant."""

    __slots__ = ("kind", "label", "name", "children", "uid")

    def __init__(self, kind: str, label: str, name: Optional[str] = None,
                 children: Optional[List["DExpr"]] = None, uid: int = -1):
        self.kind = kind  # sig | op | const | param
        self.label = label
        self.name = name
        self.children = children or []
        self.uid = uid

    @property
    def key(self) -> str:
        if self.kind == "sig":
            return f"sig:{self.name}"
        if self.kind == "param":
            return f"param:{self.name}"
        return f"op:{self.uid}"

    def __repr__(self):
        if self.kind in ("sig", "param", "const"):
            return f"{self.label}({self.name})"
        return f"{self.label}[{', '.join(map(repr, self.children))}]"


@dataclass
class SignalInfo:
    name: str
    role: str  # input | output | signal


@dataclass
class Dataflow:
    design_name: str
    signals: Dict[str, SignalInfo] = field(default_factory=dict)  # declaration order
    drivers: Dict[str, DExpr] = field(default_factory=dict)
    refs: Dict[str, DExpr] = field(default_factory=dict, repr=False)

    def driven_signals(self) -> List[str]:
        return [name for name in self.signals if name in self.drivers]

    def ref(self, name: str) -> DExpr:
        return self.refs[name]


@dataclass
class _Scope:
    prefix: str
    directions: Dict[str, str] = field(default_factory=dict)
    params: set = field(default_factory=set)
    ports: List[str] = field(default_factory=list)


class DataflowAnalyzer:
    def __init__(self, tree: ParseTree, max_depth: int = MAX_DEPTH):
        self.tree = tree
        self.max_depth = max_depth
        self.flow = Dataflow(design_name=tree.design_name or tree.top)
        self._uids = itertools.count()
        # bit and part selects written so far by continuous drivers, newest first
        self._partials: Dict[str, List[DExpr]] = {}

    def analyze(self) -> Dataflow:
        self._elaborate(self.tree.root, "", 0, top=True)
        logger.debug("dataflow of %s: %d signals, %d driven", self.flow.design_name,
                     len(self.flow.signals), len(self.flow.drivers))
        return self.flow

    # ---- Scope / declarations ----

    def _elaborate(self, module: Node, prefix: str, depth: int, top: bool) -> _Scope:
        scope = self._declare(module, prefix, top)
        for item in module_items(module):
            if item.kind == "Assign":
                self._continuous(item, scope)
            elif item.kind == "Always":
                self._always(item, scope)
            elif item.kind == "InstanceList":
                if item.attrs.get("primitive"):
                    self._gates(item, scope)
                else:
                    self._instances(item, scope, depth)
            # Decl handled by _declare; Initial carries no data flow
        return scope

    def _declare(self, module: Node, prefix: str, top: bool) -> _Scope:
        scope = _Scope(prefix)
        names: List[str] = []
        for child in module.children:
            if child.kind == "Paramlist":
                scope.params.update(p.name for d in child.children for p in d.children)
            elif child.kind == "Portlist":
                for port in child.children:
                    if port.kind == "Ioport":
                        decl = port.children[0]
                        scope.directions[decl.name] = decl.kind
                        names.append(decl.name)
                    else:
                        names.append(port.name)
        scope.ports = list(names)
        for item in module_items(module):
            if item.kind != "Decl":
                continue
            for decl in item.children:
                if decl.kind in ("Parameter", "Localparam"):
                    scope.params.add(decl.name)
                    continue
                if decl.kind in ("Input", "Output", "Inout"):
                    scope.directions[decl.name] = decl.kind
                if decl.name not in names:
                    names.append(decl.name)
        for name in names:
            role = "signal"
            if top:
                direction = scope.directions.get(name)
                role = "output" if direction == "Output" else "input" if direction else "signal"
            self._add_signal(prefix + name, role)
        return scope

    def _add_signal(self, name: str, role: str) -> DExpr:
        if name not in self.flow.signals:
            self.flow.signals[name] = SignalInfo(name, role)
            self.flow.refs[name] = DExpr("sig", role, name)
        return self.flow.refs[name]

    # ---- Expressions ----

    def _op(self, label: str, children: List[DExpr]) -> DExpr:
        return DExpr("op", label, None, children, next(self._uids))

    def _ref(self, name: str, scope: _Scope) -> DExpr:
        if name in scope.params:
            return DExpr("param", "Parameter", scope.prefix + name)
        # undeclared identifiers are implicit nets
        return self._add_signal(scope.prefix + name, "signal")

    def _lower(self, node: Node, scope: _Scope) -> DExpr:
        kind = node.kind
        if kind == "Identifier":
            return self._ref(node.name, scope)
        if kind in ("IntConst", "StringConst"):
            return DExpr("const", "IntConst", node.name, uid=next(self._uids))
        if kind == "Cond":
            return self._op("Branch", [self._lower(c, scope) for c in node.children])
        if kind in EXPRESSION_OPS:
            return self._op(kind, [self._lower(c, scope) for c in node.children])
        if kind == "SystemCall":
            # $signed(x) / $unsigned(x) are transparent
            if node.children:
                return self._lower(node.children[0], scope)
            return DExpr("const", "IntConst", node.name, uid=next(self._uids))
        raise UnsupportedConstruct(f"{kind} in expression", node.lineno)

    def _targets(self, node: Node, scope: _Scope, partial: bool = False) -> List[Tuple[str, bool]]:
        if node.kind == "Identifier":
            return [(self._ref(node.name, scope).name, partial)]
        if node.kind in ("Pointer", "Partselect"):
            return self._targets(node.children[0], scope, True)
        if node.kind in ("LConcat", "Concat"):
            return [t for c in node.children for t in self._targets(c, scope, partial)]
        raise UnsupportedConstruct(f"{node.kind} as assignment target", node.lineno)

    def _current(self, env: Dict[str, DExpr], target: str) -> DExpr:
        return env.get(target) or self.flow.refs[target]

    def _write(self, env: Dict[str, DExpr], target: str, partial: bool, value: DExpr):
        if partial:
            value = self._op("Concat", [value, self._current(env, target)])
        env[target] = value

    def _drive(self, target: str, partial: bool, value: DExpr):
        """Continuous driver. Partial selects concatenate the pieces written so far, never the signal itself."""
        drivers = self.flow.drivers
        if not partial:
            self._partials.pop(target, None)
            drivers[target] = value
            return
        if target not in self._partials:
            self._partials[target] = [drivers[target]] if target in drivers else []
        parts = self._partials[target]
        parts.insert(0, value)
        drivers[target] = parts[0] if len(parts) == 1 else self._op("Concat", list(parts))

    # ---- Module items ----

    def _continuous(self, item: Node, scope: _Scope):
        lhs = item.children[0].children[0]
        rhs = self._lower(item.children[1].children[0], scope)
        for target, partial in self._targets(lhs, scope):
            if not partial and target in self.flow.drivers:
                logger.debug("%s: '%s' has more than one driver; keeping the last", self.flow.design_name, target)
            self._drive(target, partial, rhs)

    def _always(self, item: Node, scope: _Scope):
        # the sensitivity list (clock, reset edges) is timing, not data
        env: Dict[str, DExpr] = {}
        self._exec(item.children[1], env, scope)
        for target in env:
            self._partials.pop(target, None)
        self.flow.drivers.update(env)

    def _gates(self, ilist: Node, scope: _Scope):
        gate = ilist.name
        for inst in ilist.children:
            terms = [arg.children[0] for arg in inst.children]
            if gate in ("not", "buf"):
                source = self._lower(terms[-1], scope)
                value = source if gate == "buf" else self._op("Unot", [source])
                outputs = terms[:-1]
            else:
                value = self._op(GATE_OPS[gate], [self._lower(t, scope) for t in terms[1:]])
                outputs = terms[:1]
            for out in outputs:
                for target, partial in self._targets(out, scope):
                    self._drive(target, partial, value)

    def _instances(self, ilist: Node, scope: _Scope, depth: int):
        for inst in ilist.children:
            if inst.kind != "Instance":
                continue  # ParamArg: parameters stay symbolic leaves
            module = self.tree.modules.get(ilist.name)
            if module is None:
                raise UnknownModule(ilist.name, scope.prefix + inst.name)
            path = scope.prefix + inst.name
            if depth + 1 > self.max_depth:
                raise ElaborationDepthExceeded(path, self.max_depth)
            sub = self._elaborate(module, path + ".", depth + 1, top=False)
            self._connect(inst, sub, scope)

    def _connect(self, inst: Node, sub: _Scope, scope: _Scope):
        args = inst.children
        if any(a.name for a in args):
            pairs = [(a.name, a) for a in args]
        else:
            pairs = list(zip(sub.ports, args))
        for port, arg in pairs:
            if not arg.children:
                continue  # unconnected
            if port not in sub.directions:
                raise UnknownSignal(sub.prefix + port)
            inner = sub.prefix + port
            if sub.directions[port] == "Output":
                for target, partial in self._targets(arg.children[0], scope):
                    self._drive(target, partial, self.flow.refs[inner])
            else:
                self.flow.drivers[inner] = self._lower(arg.children[0], scope)

    # ---- Procedural statements ----

    def _exec(self, stmt: Node, env: Dict[str, DExpr], scope: _Scope):
        kind = stmt.kind
        if kind == "Block":
            for child in stmt.children:
                self._exec(child, env, scope)
        elif kind in ("BlockingSubstitution", "NonblockingSubstitution"):
            rhs = self._lower(stmt.children[1].children[0], scope)
            for target, partial in self._targets(stmt.children[0].children[0], scope):
                self._write(env, target, partial, rhs)
        elif kind == "IfStatement":
            cond = self._lower(stmt.children[0], scope)
            true_env, false_env = dict(env), dict(env)
            self._exec(stmt.children[1], true_env, scope)
            if len(stmt.children) > 2:
                self._exec(stmt.children[2], false_env, scope)
            self._join(env, [(cond, true_env)], false_env)
        elif kind in ("CaseStatement", "CasexStatement", "CasezStatement"):
            self._case(stmt, env, scope)
        elif kind == "SystemCall":
            pass  # $display and friends
        else:
            raise UnsupportedConstruct(f"{kind} statement", stmt.lineno)

    def _case(self, stmt: Node, env: Dict[str, DExpr], scope: _Scope):
        comp = self._lower(stmt.children[0], scope)
        branches = []
        fallback = env
        for item in stmt.children[1:]:
            item_env = dict(env)
            self._exec(item.children[-1], item_env, scope)
            if item.attrs.get("default"):
                fallback = item_env
                continue
            conds = [self._op("Eq", [comp, self._lower(v, scope)]) for v in item.children[:-1]]
            cond = conds[0] if len(conds) == 1 else self._op("Lor", conds)
            branches.append((cond, item_env))
        self._join(env, branches, fallback)

    def _join(self, env: Dict[str, DExpr], branches: List[Tuple[DExpr, Dict[str, DExpr]]],
              fallback: Dict[str, DExpr]):
        """Fold branch environments into ``env`` as a chain of Branch nodes, first branch outermost."""
        targets: List[str] = []
        for e in [b for _, b in branches] + [fallback]:
            for t, v in e.items():
                if env.get(t) is not v and t not in targets:
                    targets.append(t)
        for t in targets:
            value = self._current(fallback, t)
            for cond, branch_env in reversed(branches):
                taken = self._current(branch_env, t)
                if taken is not value:
                    value = self._op("Branch", [cond, taken, value])
            env[t] = value


def fragment(flow: Dataflow, signal: str) -> HWGraph:
    """Dependency closure of one signal, rooted at that signal."""
    root = flow.ref(signal)
    labels: Dict[str, Tuple[str, Optional[str]]] = {}
    children: Dict[str, List[str]] = {}
    stack = [root]
    while stack:
        expr = stack.pop()
        if expr.key in labels:
            continue
        labels[expr.key] = (expr.label, expr.name)
        if expr.kind == "sig":
            deps = [flow.drivers[expr.name]] if expr.name in flow.drivers else []
        else:
            deps = expr.children
        keys: List[str] = []
        for d in deps:
            if d.key not in keys:
                keys.append(d.key)
        children[expr.key] = keys
        stack.extend(reversed(deps))
    return canonicalize(GraphKind.DFG, labels, children, [root.key], flow.design_name)


def dfg_for_signal(tree: ParseTree, signal: str) -> HWGraph:
    flow = tree.dataflow
    if signal not in flow.signals:
        raise UnknownSignal(signal)
    return fragment(flow, signal)


def merge_dfgs(fragments: List[HWGraph]) -> HWGraph:
    """Union of fragments with signals unified by hierarchical name.

    Fragments produced by :func:`fragment` also unify shared operator and constant nodes
    through their identity keys; fragments without keys (e.g. loaded from JSON) only share
    signal nodes.
    """
    if not fragments:
        raise EmptyGraph("no DFG fragments to merge")
    labels: Dict[str, Tuple[str, Optional[str]]] = {}
    children: Dict[str, List[str]] = {}
    roots: List[str] = []
    for i, frag in enumerate(fragments):
        keys = frag.keys or [
            f"sig:{n.name}" if n.label in SIGNAL_LABELS and n.name else f"frag{i}:{n.id}"
            for n in frag.nodes
        ]
        for n in frag.nodes:
            labels.setdefault(keys[n.id], (n.label, n.name))
            children.setdefault(keys[n.id], [])
        for s, d in frag.edges:
            if keys[d] not in children[keys[s]]:
                children[keys[s]].append(keys[d])
        if frag.nodes:
            roots.append(keys[0])
    return canonicalize(GraphKind.DFG, labels, children, roots, fragments[0].design_name)


def dataflow_graph(tree: ParseTree) -> HWGraph:
    """Merged DFG over every driven signal, roots in declaration order."""
    flow = tree.dataflow
    roots = flow.driven_signals()
    if not roots:
        raise EmptyGraph(f"{flow.design_name}: no assignments, always blocks or gates drive any signal")
    return merge_dfgs([fragment(flow, s) for s in roots])
