#!/usr/bin/env python3
"""
Command-line front end: witness generation, automaton runs, formula
evaluation and compilation, machine export and experiment suites.

Exit codes: 0 accept/pass, 1 reject/fail, 2 usage or internal error.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from pebblekit.constructions import build_rplus_fma, build_savitch_pa, build_weak_rplus_pa
from pebblekit.datawords import WitnessParams, witness_word, witness_word_bar
from pebblekit.experiments import SUITES, run_experiment
from pebblekit.ltl import parse, sentence_holds, to_text
from pebblekit.ltl_compiler import compile_to_weak_pa
from pebblekit.pa_engine import NotDeterministic, leads_to_acceptance, run_deterministic
from pebblekit.utils.config_loader import (
    DEFAULT_CONFIG_NAME, load_config, suite_settings, validate_experiment_config,
)
from pebblekit.utils.file_io import (
    dumps_automaton, read_automaton, read_lines, read_word, write_automaton, write_word,
)

logger = logging.getLogger("pebblekit.cli")

EXIT_ACCEPT, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _formula_text(args: argparse.Namespace) -> str:
    if args.file:
        return " ".join(read_lines(args.file))
    return args.formula


def cmd_gen_witness(args: argparse.Namespace) -> int:
    p = WitnessParams(args.k, args.m)
    w = witness_word_bar(p) if args.bar else witness_word(p)
    logger.info(f"Witness k={args.k} m={args.m}{' (bar)' if args.bar else ''}: {len(w)} symbols")
    if args.out:
        write_word(w, args.out)
        logger.info(f"Wrote {args.out}")
    else:
        sys.stdout.write(w.to_text() + "\n")
    return EXIT_ACCEPT


def cmd_run_pa(args: argparse.Namespace) -> int:
    a = read_automaton(args.automaton)
    w = read_word(args.word)
    if args.mode == "det":
        try:
            verdict = run_deterministic(a, w, record_trace=args.trace)
        except NotDeterministic as e:
            logger.error(f"Automaton is not deterministic on this word: {e}")
            return EXIT_ERROR
    else:
        verdict = leads_to_acceptance(a, w)
    print(json.dumps(verdict.to_dict(), ensure_ascii=False))
    return EXIT_ACCEPT if verdict.accepted else EXIT_REJECT


def cmd_eval_ltl(args: argparse.Namespace) -> int:
    f = parse(_formula_text(args))
    w = read_word(args.word)
    accepted = sentence_holds(w, f)
    print(json.dumps({"formula": to_text(f), "word": w.to_text(), "accepted": accepted}, ensure_ascii=False))
    return EXIT_ACCEPT if accepted else EXIT_REJECT


def cmd_compile_ltl(args: argparse.Namespace) -> int:
    f = parse(_formula_text(args))
    a = compile_to_weak_pa(f)
    logger.info(f"Compiled {to_text(f)}: {a.k} pebbles, {len(a.states)} states")
    _emit(dumps_automaton(a), args.out)
    return EXIT_ACCEPT


def cmd_build(args: argparse.Namespace) -> int:
    if args.machine == "savitch":
        machine = build_savitch_pa(args.k)
    elif args.machine == "weak-rplus":
        machine = build_weak_rplus_pa(args.k)
    else:
        machine = build_rplus_fma()
    if args.out:
        write_automaton(machine, args.out)
    else:
        sys.stdout.write(dumps_automaton(machine))
    return EXIT_ACCEPT


def _experiment_config(args: argparse.Namespace) -> Dict[str, Any]:
    name = args.config or os.getenv("PEBBLE_CONFIG") or DEFAULT_CONFIG_NAME
    config = load_config(name)
    is_valid, messages = validate_experiment_config(config)
    for message in messages:
        (logger.debug if is_valid else logger.error)(message)
    if not is_valid:
        raise ValueError(f"Invalid experiment configuration {name}")
    return config


def cmd_experiment(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    settings = suite_settings(config, args.suite)
    for key in ("pool", "max_len", "samples", "k"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
            # flags apply to every k
            if key != "k":
                settings.pop("per_k", None)
    seed = args.seed
    if seed is None:
        seed = int(os.getenv("PEBBLE_SEED", settings.get("seed", 0)))
    workers = args.workers if args.workers is not None else settings.get("workers", 1)

    report = run_experiment(args.suite, settings, seed=seed, workers=workers)
    if args.out:
        report.write(args.out, timing=args.timing)
        print(report.summary_table().to_string(index=False))
    else:
        sys.stdout.write(report.to_jsonl(timing=args.timing))
        logger.info("\n" + report.summary_table().to_string(index=False))
    return EXIT_ACCEPT if report.passed else EXIT_REJECT


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pebblekit",
        description="Pebble automata, register automata and LTL with freeze over data words",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-witness", help="Write the witness word w(n_k, m) or its cut-down variant")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--bar", action="store_true", help="Drop the suffix that connects source and target")
    p.add_argument("--out", help="Output file (default: stdout)")
    p.set_defaults(func=cmd_gen_witness)

    p = sub.add_parser("run-pa", help="Run a pebble automaton JSON file on a word file")
    p.add_argument("--automaton", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--trace", action="store_true", help="Include the run trace (det mode)")
    p.add_argument("--mode", choices=["alt", "det"], default="alt")
    p.set_defaults(func=cmd_run_pa)

    for name, func, help_text in (
        ("eval-ltl", cmd_eval_ltl, "Evaluate a sentence on a word"),
        ("compile-ltl", cmd_compile_ltl, "Compile a sentence into a weak pebble automaton"),
    ):
        p = sub.add_parser(name, help=help_text)
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--formula", help="Formula text")
        source.add_argument("--file", help="File holding the formula")
        if name == "eval-ltl":
            p.add_argument("--word", required=True)
        else:
            p.add_argument("--out", help="Output file (default: stdout)")
        p.set_defaults(func=func)

    p = sub.add_parser("build", help="Export a constructed machine as JSON")
    p.add_argument("--machine", choices=["savitch", "weak-rplus", "rplus-fma"], required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--out", help="Output file (default: stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("experiment", help="Run an oracle or property suite")
    p.add_argument("--suite", required=True, help=f"One of: {', '.join(SUITES)}")
    p.add_argument("--seed", type=int, help="Seed (default: $PEBBLE_SEED, then the config file)")
    p.add_argument("--pool", type=int)
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--k", type=int, nargs="+")
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="Experiment configuration YAML (default: $PEBBLE_CONFIG)")
    p.add_argument("--timing", action="store_true", help="Add wall time to the aggregate line")
    p.add_argument("--out", help="Report file, JSON lines (default: stdout)")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    try:
        return args.func(args)
    except Exception as e:
        logger.error(f"{args.command} failed: {type(e).__name__}: {e}")
        logger.debug("Traceback", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
