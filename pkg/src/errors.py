from typing import Dict, Optional


class GateSightError(Exception):
    """Base class for every error raised by the library."""


# --- hwgraph -----------------------------------------------------------------

class DuplicateModule(GateSightError):
    def __init__(self, module: str, paths: list):
        super().__init__(f"module '{module}' declared more than once ({', '.join(paths)})")
        self.module = module
        self.paths = paths


class UnresolvedInclude(GateSightError):
    def __init__(self, target: str, source: str, reason: str = "not in the design's file set"):
        super().__init__(f"`include \"{target}\" in {source}: {reason}")
        self.target = target
        self.source = source


class UnbalancedModule(GateSightError):
    def __init__(self, path: str, opened: int, closed: int):
        super().__init__(f"{path}: {opened} 'module' vs {closed} 'endmodule' keywords")
        self.path = path


class EmptyDesign(GateSightError):
    pass


class NoTopModule(GateSightError):
    def __init__(self, counts: Dict[str, int], detail: str = "no module occurs exactly once"):
        super().__init__(f"{detail}; module counts: {dict(counts)}")
        self.counts = dict(counts)


class AmbiguousTopModule(GateSightError):
    def __init__(self, candidates: list, counts: Dict[str, int]):
        super().__init__(
            f"top module is ambiguous between {candidates}; module counts: {dict(counts)} "
            f"(use --top to choose)"
        )
        self.candidates = candidates
        self.counts = dict(counts)


class VerilogSyntaxError(GateSightError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


class UnsupportedConstruct(GateSightError):
    def __init__(self, construct: str, line: Optional[int] = None):
        where = f" (line {line})" if line else ""
        super().__init__(f"unsupported construct: {construct}{where}")
        self.construct = construct
        self.line = line


class UnknownSignal(GateSightError):
    def __init__(self, signal: str):
        super().__init__(f"'{signal}' is not declared in the elaborated top-module scope")
        self.signal = signal


class UnknownModule(GateSightError):
    def __init__(self, module: str, instance: str):
        super().__init__(f"instance '{instance}' refers to undeclared module '{module}'")
        self.module = module
        self.instance = instance


class ElaborationDepthExceeded(GateSightError):
    def __init__(self, path: str, limit: int):
        super().__init__(f"instantiation depth exceeds {limit} at '{path}'")
        self.path = path
        self.limit = limit


class EmptyGraph(GateSightError):
    pass


class SchemaViolation(GateSightError):
    def __init__(self, pointer: str, msg: str = "schema violation"):
        super().__init__(f"{pointer}: {msg}")
        self.pointer = pointer


# --- graphdata ---------------------------------------------------------------

class UnknownLabel(GateSightError):
    def __init__(self, label: str, context: str = ""):
        super().__init__(f"unknown node label '{label}'" + (f" ({context})" if context else ""))
        self.label = label


class EmptyCorpus(GateSightError):
    pass


class DegenerateSplit(GateSightError):
    pass


class UnknownCircuit(GateSightError):
    def __init__(self, circuit: str):
        super().__init__(f"no item belongs to circuit '{circuit}'")
        self.circuit = circuit


class SelfPair(GateSightError):
    def __init__(self, member: str):
        super().__init__(f"pair members must differ, got '{member}' twice")
        self.member = member


class CacheCorrupt(GateSightError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path


# --- nncore ------------------------------------------------------------------

class ShapeMismatch(GateSightError):
    def __init__(self, op: str, *shapes):
        super().__init__(f"{op}: incompatible shapes {' vs '.join(str(s) for s in shapes)}")
        self.op = op


class NonFinite(GateSightError):
    def __init__(self, op: str):
        super().__init__(f"{op} produced NaN or Inf")
        self.op = op


class ZeroVector(GateSightError):
    pass


# --- graph2vec ---------------------------------------------------------------

class EmptyPool(GateSightError):
    pass


class WrongHead(GateSightError):
    def __init__(self, expected: str, actual: str):
        super().__init__(f"operation needs a '{expected}' head, model has '{actual}'")


# --- learnpipe ---------------------------------------------------------------

class BadLabel(GateSightError):
    def __init__(self, label):
        super().__init__(f"pair label must be +1 or -1, got {label!r}")
        self.label = label


class Divergence(GateSightError):
    def __init__(self, step: int, last_finite_loss: Optional[float]):
        super().__init__(f"loss became non-finite at step {step} (last finite loss: {last_finite_loss})")
        self.step = step
        self.last_finite_loss = last_finite_loss


class VersionMismatch(GateSightError):
    pass


class VocabMismatch(GateSightError):
    def __init__(self, expected: str, actual: str, hint: str = ""):
        msg = f"vocabulary fingerprint {actual[:12]} does not match the model's {expected[:12]}"
        super().__init__(msg + (f"; {hint}" if hint else ""))
        self.expected = expected
        self.actual = actual


class CorruptFile(GateSightError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path


# --- cli ---------------------------------------------------------------------

class ConfigError(GateSightError):
    pass
