"""
Command-line entry point: ``python -m src <command> ...``.

Commands: graph, embed, train-ht, infer-ht, train-ip, infer-ip and synth. Every command reads an
optional YAML preset (``--config``) and applies the flags on top of it.
"""
import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from src.config import LOG_LEVEL, RunConfig, config_keys, load_run_config
from src.data.synthetic import ip_corpus, trojan_corpus
from src.errors import ConfigError, GateSightError
from src.learnpipe import tasks

logger = logging.getLogger("src")
console = Console()

EXIT_OK, EXIT_FAILURES, EXIT_USAGE = 0, 1, 2


def setup_logging(verbose: bool = False):
    level = logging.DEBUG if verbose else getattr(logging, LOG_LEVEL.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)],
        force=True,
    )


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML preset (see the configuration keys below)")
    common.add_argument("--kind", choices=["ast", "dfg"], type=str.lower, help="graph kind to extract")
    common.add_argument("--top", help="top-module override")
    common.add_argument("--leave-out", help="base circuit held out for testing ('*' cross-validates over all)")
    common.add_argument("--seed", type=int, help="seed for initialization, splits and batch order")
    common.add_argument("--cache", help="encoded-graph cache directory")
    common.add_argument("--out", help="output directory")
    common.add_argument("--corpus", help="corpus root (one directory per design plus labels.json)")
    common.add_argument("--labels", help="label manifest, when not <corpus>/labels.json")
    common.add_argument("--checkpoint", help="checkpoint file to write or read")
    common.add_argument("--epochs", type=int, help="training epochs")
    common.add_argument("--workers", type=int, help="extraction worker processes (0 = one per CPU)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="gatesight",
        description="Graph learning on Verilog designs: graph extraction, Trojan and IP-piracy detection.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="configuration keys:\n  " + "\n  ".join(config_keys()),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", parents=[common], help="extract one JSON graph per design directory")
    p.add_argument("designs", nargs="*", help="design directories")

    p = sub.add_parser("embed", parents=[common], help="write graph embeddings as TSV")
    p.add_argument("designs", nargs="*", help="design directories (default: the configured corpus)")
    p.add_argument("--projector", action="store_true", help="also write vectors.tsv / metadata.tsv")

    sub.add_parser("train-ht", parents=[common], help="train the hardware-Trojan classifier")
    p = sub.add_parser("infer-ht", parents=[common], help="classify designs as Trojan / Non_Trojan")
    p.add_argument("designs", nargs="*", help="design directories")

    sub.add_parser("train-ip", parents=[common], help="train the IP-piracy similarity model")
    p = sub.add_parser("infer-ip", parents=[common], help="judge whether two designs are pirated copies")
    p.add_argument("design_a")
    p.add_argument("design_b")

    p = sub.add_parser("synth", parents=[common], help="write a synthetic corpus")
    p.add_argument("which", choices=["ht", "ip"])
    p.add_argument("root", help="directory to create the corpus in")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict:
    ov: Dict = {"paths": {}, "train": {}}
    if args.kind:
        ov["graph_kind"] = args.kind.upper()
    if args.top:
        ov["top"] = args.top
    if args.leave_out:
        ov["leave_out"] = args.leave_out
    if args.workers is not None:
        ov["workers"] = args.workers
    if args.seed is not None:
        ov["train"]["seed"] = args.seed
    if args.epochs is not None:
        ov["train"]["epochs"] = args.epochs
    for flag, key in (("cache", "cache_dir"), ("out", "output_dir"), ("corpus", "corpus"),
                      ("labels", "labels"), ("checkpoint", "checkpoint")):
        if getattr(args, flag):
            ov["paths"][key] = getattr(args, flag)
    return {k: v for k, v in ov.items() if v != {}}


def _table(title: str, rows: Sequence[dict], columns: Optional[List[str]] = None) -> Table:
    table = Table(title=title)
    columns = columns or (list(rows[0]) if rows else [])
    for c in columns:
        table.add_column(c, justify="right" if c in ("nodes", "edges", "seconds", "score") else "left")
    for row in rows:
        cells = []
        for c in columns:
            v = row.get(c)
            cells.append(f"{v:.4f}" if isinstance(v, float) else ("" if v is None else str(v)))
        table.add_row(*cells)
    return table


def _render(args: argparse.Namespace, cfg: RunConfig, outcome: tasks.TaskOutcome):
    if args.command == "graph":
        console.print(_table(f"{cfg.graph_kind} graphs", outcome.rows,
                             ["design", "nodes", "edges", "seconds", "error"]))
    elif outcome.rows:
        console.print(_table(args.command, outcome.rows))
    if outcome.report is not None:
        r = outcome.report
        console.print(f"precision {r.precision:.4f}  recall {r.recall:.4f}  f1 {r.f1:.4f}  accuracy {r.accuracy:.4f}"
                      + ("  (degenerate)" if r.degenerate else ""))
    for name, path in outcome.artifacts.items():
        console.print(f"{name}: {path}")
    for failure in outcome.failures:
        console.print(f"[red]FAILED[/red] {failure}")


def run(args: argparse.Namespace) -> tasks.TaskOutcome:
    cfg = load_run_config(args.config, overrides_from_args(args))
    if args.command == "synth":
        entries = trojan_corpus(args.root, seed=cfg.train.seed) if args.which == "ht" \
            else ip_corpus(args.root, seed=cfg.train.seed)
        outcome = tasks.TaskOutcome(artifacts={"corpus": os.path.abspath(args.root)})
        outcome.rows = [{"design": k, "label": v if isinstance(v, str) else v["label"]} for k, v in entries.items()]
    elif args.command == "graph":
        outcome = tasks.extract_to_json(args.designs, cfg)
    elif args.command == "embed":
        outcome = tasks.embed_designs(cfg, args.designs, args.projector)
    elif args.command == "train-ht":
        outcome = tasks.train_ht(cfg)
    elif args.command == "infer-ht":
        outcome = tasks.infer_ht(cfg, args.designs)
    elif args.command == "train-ip":
        outcome = tasks.train_ip(cfg)
    else:
        outcome = tasks.infer_ip(cfg, args.design_a, args.design_b)
    _render(args, cfg, outcome)
    return outcome


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    if args.command in ("graph", "infer-ht") and not args.designs:
        parser.error(f"{args.command} needs at least one design directory")
    if args.command == "infer-ip" and not (args.design_a.strip() and args.design_b.strip()):
        parser.error("infer-ip needs two design directories")
    try:
        outcome = run(args)
    except ConfigError as e:
        console.print(f"[red]configuration error:[/red] {e}")
        return EXIT_USAGE
    except GateSightError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILURES
    return EXIT_FAILURES if outcome.failures else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
