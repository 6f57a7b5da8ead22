"""
Synthetic corpora in the standard corpus layout.

* Trojan corpus: small random RTL designs from five circuit families; each clean design has
  a twin carrying an inserted comparator trigger (on an input, or on a free-running counter)
  that steers an internal value onto an output.
* IP corpus: random base circuits, each with variants whose signals are consistently
  renamed and whose independent statements are reordered.

Clean designs never compare for equality, so the trigger is the only Eq in the corpus.
"""
import logging
import os
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.data.corpus import write_manifest

logger = logging.getLogger(__name__)

HT_FAMILIES = ("alu", "crc", "fsm", "mix", "ctr")
BINARY = ("&", "|", "^", "+", "-")
INPUT_NAMES = ("a", "b", "c", "d", "e")

Expr = Tuple  # ("sig", n) | ("const", t) | ("not", x) | ("red", x) | ("bin", op, l, r) | ("cat", l, r) | ("eq", l, r) | ("mux", c, t, f)


@dataclass
class SynthDesign:
    inputs: List[str]
    wires: List[str]
    regs: List[str]
    assigns: List[Tuple[str, Expr]]
    seq: List[Tuple[str, Expr]]  # registered with synchronous reset
    outputs: List[Tuple[str, int]] = field(default_factory=lambda: [("y", 8), ("z", 1)])
    extra_wires: List[Tuple[str, int]] = field(default_factory=list)
    counter: Optional[str] = None


def _pick(rng: np.random.Generator, items):
    return items[int(rng.integers(len(items)))]


def _random_expr(rng: np.random.Generator, pool: List[str]) -> Expr:
    roll = rng.random()
    if roll < 0.7:
        return ("bin", _pick(rng, BINARY), ("sig", _pick(rng, pool)), ("sig", _pick(rng, pool)))
    if roll < 0.85:
        return ("not", ("sig", _pick(rng, pool)))
    return ("cat", ("sig", _pick(rng, pool)), ("sig", _pick(rng, pool)))


def generate_design(rng: np.random.Generator, n_inputs: int, n_wires: int, n_regs: int) -> SynthDesign:
    inputs = list(INPUT_NAMES[:n_inputs])
    pool = list(inputs)
    wires, regs, assigns, seq = [], [], [], []
    for i in range(n_wires):
        name = f"w{i}"
        assigns.append((name, _random_expr(rng, pool)))
        wires.append(name)
        pool.append(name)
    for i in range(n_regs):
        name = f"r{i}"
        seq.append((name, _random_expr(rng, pool)))
        regs.append(name)
        pool.append(name)
    tail = regs[-1] if regs else wires[-1]
    assigns.append(("y", ("bin", _pick(rng, ("|", "^", "+")), ("sig", tail), ("sig", wires[-1]))))
    assigns.append(("z", ("red", ("sig", _pick(rng, wires)))))
    return SynthDesign(inputs, wires, regs, assigns, seq)


def insert_trojan(design: SynthDesign, rng: np.random.Generator) -> SynthDesign:
    """Comparator trigger plus a leak that routes an internal value onto output y."""
    value = f"8'h{int(rng.integers(256)):02X}"
    counter = None
    if rng.random() < 0.5:
        trigger = ("eq", ("sig", _pick(rng, design.inputs)), ("const", value))
    else:
        counter = "tcnt"
        trigger = ("eq", ("sig", counter), ("const", value))
    secret = ("sig", _pick(rng, design.regs + design.wires))
    assigns = []
    for target, expr in design.assigns:
        if target == "y":
            expr = ("mux", ("sig", "trig"), secret, expr)
        assigns.append((target, expr))
    assigns.insert(len(design.wires), ("trig", trigger))
    return replace(design, assigns=assigns, extra_wires=[("trig", 1)], counter=counter)


def _expr_text(e: Expr, names: Dict[str, str]) -> str:
    kind = e[0]
    if kind == "sig":
        return names.get(e[1], e[1])
    if kind == "const":
        return e[1]
    if kind == "not":
        return f"~{_expr_text(e[1], names)}"
    if kind == "red":
        return f"^{_expr_text(e[1], names)}"
    if kind == "bin":
        return f"({_expr_text(e[2], names)} {e[1]} {_expr_text(e[3], names)})"
    if kind == "cat":
        return f"{{{_expr_text(e[1], names)}[3:0], {_expr_text(e[2], names)}[7:4]}}"
    if kind == "eq":
        return f"({_expr_text(e[1], names)} == {_expr_text(e[2], names)})"
    if kind == "mux":
        return f"({_expr_text(e[1], names)} ? {_expr_text(e[2], names)} : {_expr_text(e[3], names)})"
    raise ValueError(f"unknown expression kind {kind}")


def render(design: SynthDesign, module: str, names: Optional[Dict[str, str]] = None,
           rng: Optional[np.random.Generator] = None) -> str:
    """Verilog text; ``names`` renames signals, ``rng`` shuffles independent statements."""
    names = names or {}

    def n(signal: str) -> str:
        return names.get(signal, signal)

    ports = ["clk", "rst"] + design.inputs + [o for o, _ in design.outputs]
    lines = [f"module {module}({', '.join(n(p) for p in ports)});"]
    lines += [f"  input {n('clk')};", f"  input {n('rst')};"]
    lines += [f"  input [7:0] {n(i)};" for i in design.inputs]
    lines += [f"  output {'[%d:0] ' % (w - 1) if w > 1 else ''}{n(o)};" for o, w in design.outputs]
    decls = [f"  wire [7:0] {n(w)};" for w in design.wires]
    decls += [f"  wire {'[%d:0] ' % (w - 1) if w > 1 else ''}{n(x)};" for x, w in design.extra_wires]
    decls += [f"  reg [7:0] {n(r)};" for r in design.regs]
    if design.counter:
        decls.append(f"  reg [7:0] {n(design.counter)};")

    body = [f"  assign {n(t)} = {_expr_text(e, names)};" for t, e in design.assigns]
    for target, expr in design.seq:
        body.append(
            f"  always @(posedge {n('clk')}) begin\n"
            f"    if ({n('rst')}) {n(target)} <= 8'h00;\n"
            f"    else {n(target)} <= {_expr_text(expr, names)};\n"
            f"  end"
        )
    if design.counter:
        c = n(design.counter)
        body.append(f"  always @(posedge {n('clk')}) {c} <= {c} + 8'h01;")
    if rng is not None:
        decls = [decls[i] for i in rng.permutation(len(decls))]
        body = [body[i] for i in rng.permutation(len(body))]
    return "\n".join(lines + decls + body + ["endmodule", ""])


def write_design(root: str, name: str, text: str) -> str:
    path = os.path.join(root, name)
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, f"{name}.v"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def trojan_corpus(root: str, n_clean: int = 30, n_trojan: int = 30, seed: int = 0) -> Dict[str, dict]:
    """Clean designs and trojan-inserted twins, spread round-robin over HT_FAMILIES."""
    rng = np.random.default_rng(seed)
    os.makedirs(root, exist_ok=True)
    manifest: Dict[str, dict] = {}
    for i in range(max(n_clean, n_trojan)):
        family = HT_FAMILIES[i % len(HT_FAMILIES)]
        fam_idx = HT_FAMILIES.index(family)
        design = generate_design(rng, n_inputs=2 + fam_idx % 3, n_wires=3 + int(rng.integers(4)),
                                 n_regs=1 + fam_idx % 2)
        if i < n_clean:
            name = f"{family}-c{i:02d}"
            write_design(root, name, render(design, name.replace("-", "_")))
            manifest[name] = {"label": "Non_Trojan", "circuit": family}
        if i < n_trojan:
            name = f"{family}-t{i:02d}"
            write_design(root, name, render(insert_trojan(design, rng), name.replace("-", "_")))
            manifest[name] = {"label": "Trojan", "circuit": family}
    write_manifest(root, manifest)
    logger.info("Wrote Trojan corpus to %s: %d designs", root, len(manifest))
    return manifest


def _renaming(design: SynthDesign, rng: np.random.Generator) -> Dict[str, str]:
    signals = ["clk", "rst"] + design.inputs + [o for o, _ in design.outputs] + design.wires + design.regs
    signals += [x for x, _ in design.extra_wires] + ([design.counter] if design.counter else [])
    tags = rng.permutation(len(signals) * 7)[: len(signals)]
    return {s: f"n{int(t)}_{s[0]}x" for s, t in zip(signals, tags)}


def ip_corpus(root: str, n_base: int = 8, n_variants: int = 5, seed: int = 0) -> Dict[str, str]:
    """``n_base`` circuits x ``n_variants`` renamed/reordered copies; category = base circuit."""
    rng = np.random.default_rng(seed)
    os.makedirs(root, exist_ok=True)
    manifest: Dict[str, str] = {}
    for b in range(n_base):
        base = f"ip{b}"
        design = generate_design(rng, n_inputs=2 + b % 3, n_wires=3 + b, n_regs=1 + b % 3)
        for v in range(n_variants):
            name = f"{base}-v{v}"
            if v == 0:
                text = render(design, f"{base}_v{v}")
            else:
                text = render(design, f"m{int(rng.integers(10**6))}", _renaming(design, rng), rng)
            write_design(root, name, text)
            manifest[name] = base
    write_manifest(root, manifest)
    logger.info("Wrote IP corpus to %s: %d designs", root, len(manifest))
    return manifest
