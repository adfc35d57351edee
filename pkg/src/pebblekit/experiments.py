"""
Oracle-equivalence and property suites.

Every suite turns its settings and a seeded generator into a list of small,
picklable tasks and a module-level check function. Each check produces one
record ``{word, oracle, machine, agree, group, ...}``. Tasks run in input
order, either in-process or through a process pool, so the report depends
only on the settings and the seed.

Suites:

- ``savitch``: Savitch automaton vs. the BFS distance oracle
- ``rplus-fma``: two-register automaton vs. the R⁺ oracle
- ``rplus-weakpa``: weak pebble automaton vs. the R⁺_k oracle
- ``ltl-psi``: ψ_k evaluated directly vs. the R⁺_k oracle
- ``ltl-compile``: compiled automaton vs. the evaluator on random sentences
- ``periodicity``: pebble-1 state sequences over witness segments
- ``witness``: shape and reachability facts about the witness words
- ``engine``: semantic laws of the automaton engine on random automata
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from pebblekit.constructions import build_rplus_fma, build_savitch_pa, build_weak_rplus_pa
from pebblekit.datawords import (
    DataWord, WitnessParams, in_R_m, in_R_plus, in_R_plus_m, path_length_parameter,
    respects_convention, source_target_distance, witness_segments, witness_word,
    witness_word_bar, beta,
)
from pebblekit.ltl import build_psi, fqr, parse, sentence_holds, to_text
from pebblekit.ltl_compiler import compile_to_weak_pa
from pebblekit.pa_engine import (
    PebbleAutomaton, Placement, dualize, eventual_period, head_state_scans, intersect,
    leads_to_acceptance, run_deterministic, totalize, union,
)
from pebblekit.regauto import run_ra
from pebblekit.utils.enumeration import (
    canonical_words, random_automaton, random_convention_word, random_formula, random_word,
    random_words,
)

logger = logging.getLogger(__name__)


class ExperimentError(Exception):
    """Base exception for experiment errors"""
    pass

class UnknownSuite(ExperimentError):
    """Raised when a suite name is not registered"""
    pass


Record = Dict[str, Any]
Task = Tuple
Plan = Tuple[Callable[[Task], Record], List[Task]]


@dataclass
class ExperimentReport:
    """Per-word records of one suite run plus their aggregate.

    Example:
        >>> report = run_experiment("rplus-fma", {"pool": 2, "max_len": 3, "samples": 0}, seed=1)
        >>> report.passed
        True
    """
    suite: str
    seed: int
    config: Dict[str, Any]
    records: List[Record] = field(default_factory=list)
    wall_time: Optional[float] = None

    @property
    def total(self) -> int:
        return len(self.records)

    @property
    def agreeing(self) -> int:
        return sum(1 for r in self.records if r["agree"])

    @property
    def disagreeing(self) -> int:
        return self.total - self.agreeing

    @property
    def passed(self) -> bool:
        return self.disagreeing == 0

    def aggregate(self, timing: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "aggregate": True,
            "suite": self.suite,
            "seed": self.seed,
            "config": self.config,
            "total": self.total,
            "agree": self.agreeing,
            "disagree": self.disagreeing,
            "passed": self.passed,
        }
        if timing and self.wall_time is not None:
            data["wall_time"] = round(self.wall_time, 3)
        return data

    def to_jsonl(self, timing: bool = False) -> str:
        lines = [json.dumps(r, sort_keys=True, ensure_ascii=False) for r in self.records]
        lines.append(json.dumps(self.aggregate(timing), sort_keys=True, ensure_ascii=False))
        return "\n".join(lines) + "\n"

    def write(self, path: Union[str, Path], timing: bool = False) -> None:
        Path(path).write_text(self.to_jsonl(timing), encoding="utf-8")
        logger.info(f"Report with {self.total} records written to {path}")

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(self.records)

    def summary_table(self) -> pd.DataFrame:
        """Record counts per group."""
        df = self.to_dataframe()
        if df.empty:
            return pd.DataFrame(columns=["group", "total", "agree", "disagree"])
        table = (
            df.groupby("group", sort=True)
            .agg(total=("agree", "size"), agree=("agree", "sum"))
            .reset_index()
        )
        table["agree"] = table["agree"].astype(int)
        table["disagree"] = table["total"] - table["agree"]
        return table


def _record(word: str, oracle: Any, machine: Any, group: str, **extra: Any) -> Record:
    record = {"word": word, "oracle": oracle, "machine": machine, "agree": oracle == machine, "group": group}
    record.update(extra)
    return record


def _as_list(value: Union[int, Sequence[int]]) -> List[int]:
    return [int(v) for v in value] if isinstance(value, (list, tuple)) else [int(value)]


def _draw_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**31 - 1))


@lru_cache(maxsize=None)
def _savitch(k: int) -> PebbleAutomaton:
    return build_savitch_pa(k)


@lru_cache(maxsize=None)
def _weak_rplus(k: int) -> PebbleAutomaton:
    return build_weak_rplus_pa(k)


@lru_cache(maxsize=None)
def _compiled(text: str) -> PebbleAutomaton:
    return compile_to_weak_pa(parse(text))


@lru_cache(maxsize=1)
def _fma():
    return build_rplus_fma()


# savitch

def _plan_savitch(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
    per_k = settings.get("per_k") or {}
    tasks: List[Task] = []
    for k in _as_list(settings.get("k", 2)):
        chosen = {**settings, **per_k.get(k, {})}
        pool, max_len, samples = chosen.get("pool", 4), chosen.get("max_len", 10), chosen.get("samples", 0)
        if samples:
            lengths = 2 * rng.integers(1, max_len // 2 + 1, size=samples)
            words = [random_convention_word(rng, int(n), pool) for n in lengths]
        else:
            words = [w for w in canonical_words(max_len, pool, min_len=2) if respects_convention(w)]
        tasks += [(k, w.to_text()) for w in words]
    return _check_savitch, tasks


def _check_savitch(task: Task) -> Record:
    k, text = task
    w = DataWord.parse(text)
    oracle = in_R_m(w, 2**k - 1)
    machine = run_deterministic(_savitch(k), w, record_trace=False).accepted
    return _record(text, oracle, machine, f"k={k}", k=k)


# rplus-fma

def _plan_rplus_fma(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
    pool, max_len, samples = settings.get("pool", 4), settings.get("max_len", 12), settings.get("samples", 0)
    tasks: List[Task] = [(w.to_text(), "exhaustive") for w in canonical_words(max_len, pool)]
    tasks += [(w.to_text(), "random") for w in random_words(rng, samples, pool, 2 * max_len, min_len=max_len + 1)]
    return _check_rplus_fma, tasks


def _check_rplus_fma(task: Task) -> Record:
    text, group = task
    w = DataWord.parse(text)
    return _record(text, in_R_plus(w), run_ra(_fma(), w), group)


# rplus-weakpa and ltl-psi

def _plan_per_k(check: Callable[[Task], Record], default_len: int):
    def plan(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
        pool, max_len = settings.get("pool", 4), settings.get("max_len", default_len)
        words = [w.to_text() for w in canonical_words(max_len, pool)]
        return check, [(k, text) for k in _as_list(settings.get("k", [1, 2, 3])) for text in words]
    return plan


def _check_rplus_weakpa(task: Task) -> Record:
    k, text = task
    w = DataWord.parse(text)
    machine = leads_to_acceptance(_weak_rplus(k), w).accepted
    return _record(text, in_R_plus_m(w, k), machine, f"k={k}", k=k)


def _check_ltl_psi(task: Task) -> Record:
    k, text = task
    w = DataWord.parse(text)
    return _record(text, in_R_plus_m(w, k), sentence_holds(w, build_psi(k)), f"k={k}", k=k)


# ltl-compile

def _plan_ltl_compile(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
    samples = settings.get("samples", 300)
    per_sentence = settings.get("words_per_sentence", 50)
    pool, max_len = settings.get("pool", 4), settings.get("max_len", 10)
    tasks: List[Task] = []
    for _ in range(samples):
        f = random_formula(rng, settings.get("max_size", 12), settings.get("max_fqr", 2))
        text = to_text(f)
        # the empty word is left out: sentences are evaluated at position 1
        tasks += [(text, w.to_text()) for w in random_words(rng, per_sentence, pool, max_len, min_len=1)]
    return _check_ltl_compile, tasks


def _check_ltl_compile(task: Task) -> Record:
    text, word_text = task
    f = parse(text)
    w = DataWord.parse(word_text)
    a = _compiled(text)
    oracle = sentence_holds(w, f)
    machine = leads_to_acceptance(a, w).accepted
    pebbles_ok = a.k == fqr(f) + 1
    record = _record(word_text, oracle, machine, f"fqr={fqr(f)}", formula=text, pebbles=a.k)
    record["agree"] = record["agree"] and pebbles_ok
    return record


# periodicity

def _plan_periodicity(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
    k = _as_list(settings.get("k", 2))[0]
    return _check_periodicity, [(k, m) for m in _as_list(settings.get("m", [2, 3, 4]))]


def _check_periodicity(task: Task) -> Record:
    """Pebble-1 states over ladder segments that are fresh for the scan close a short cycle.

    A segment is fresh when none of its symbols sits under a higher pebble.
    There every step reads the same key, so the arrivals follow one state
    orbit: once a state repeats, the rest must stay on the cycle, whose
    period is at most |Q| and divides β(2, |Q|).
    """
    k, m = task
    a = _savitch(k)
    p = WitnessParams(k, m)
    w = witness_word(p)
    q = len(a.states)
    bound = beta(2, q)
    ladders = [seg for seg in witness_segments(p) if seg.name[0] in "CD"]
    sequences = cycles = worst = 0
    ok = True
    for scan in head_state_scans(a, w, 1):
        held = {w.symbol_at(pos) for pos in scan.frame.values()}
        for seg in ladders:
            if any(w.symbol_at(pos) in held for pos in range(seg.first, seg.last + 1)):
                continue
            seq = [state for pos, state in scan.arrivals if seg.first <= pos <= seg.last]
            if len(seq) < 2:
                continue
            sequences += 1
            if len(set(seq)) == len(seq):
                # no state repeats inside the segment yet
                continue
            found = eventual_period(seq, bound=q)
            if found is None or bound % found[1]:
                ok = False
                continue
            cycles += 1
            worst = max(worst, found[1])
    return _record(
        w.to_text(), True, ok, f"m={m}",
        k=k, m=m, sequences=sequences, cycles=cycles, max_period=worst, states=q,
    )


# witness

def _plan_witness(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
    max_run_len = settings.get("max_run_len", 256)
    tasks: List[Task] = []
    for k in _as_list(settings.get("k", [1, 2, 3])):
        for m in _as_list(settings.get("m", [1, 2, 3, 4])):
            checks = ["in-R", "bar-unreachable", "length"]
            if k >= 2 and len(witness_word(WitnessParams(k, m))) <= max_run_len:
                checks += ["savitch-rejects", "savitch-rejects-bar"]
            elif k >= 2:
                logger.warning(f"Skipping Savitch runs on witness k={k}, m={m}: longer than {max_run_len}")
            tasks += [(k, m, check) for check in checks]
    return _check_witness, tasks


def _check_witness(task: Task) -> Record:
    k, m, check = task
    p = WitnessParams(k, m)
    w, w_bar = witness_word(p), witness_word_bar(p)
    extra = {"k": k, "m": m, "check": check}
    if check == "in-R":
        return _record(w.to_text(), True, in_R_m(w, p.n_k), check, **extra)
    if check == "bar-unreachable":
        reachable = source_target_distance(w_bar) != float("inf")
        return _record(w_bar.to_text(), False, reachable, check, **extra)
    if check == "length":
        return _record(w.to_text(), 4 * m * (path_length_parameter(k) - 1) + 2, len(w), check, **extra)
    word = w if check == "savitch-rejects" else w_bar
    machine = run_deterministic(_savitch(k), word, record_trace=False).accepted
    return _record(word.to_text(), False, machine, check, **extra)


# engine

ENGINE_CHECKS = ("det-alt", "strong-weak", "dualize", "totalize", "union", "intersect")


def _plan_engine(settings: Dict[str, Any], rng: np.random.Generator) -> Plan:
    cases = settings.get("cases", 200)
    params = (
        settings.get("states", 6),
        settings.get("pool", 3),
        settings.get("max_len", 5),
    )
    ks = _as_list(settings.get("k", [1, 2]))
    tasks: List[Task] = []
    for check in ENGINE_CHECKS:
        for _ in range(cases):
            k = ks[int(rng.integers(0, len(ks)))]
            if check in ("union", "intersect"):
                k = max(k, 2)
            tasks.append((check, k) + params + (_draw_seed(rng),))
    return _check_engine, tasks


def _check_engine(task: Task) -> Record:
    check, k, states, pool, max_len, seed = task
    rng = np.random.default_rng(seed)
    rules = 4 * states * k
    w = random_word(rng, int(rng.integers(0, max_len + 1)), pool)
    text = w.to_text()
    accepts = lambda a: leads_to_acceptance(a, w).accepted
    if check == "det-alt":
        a = random_automaton(rng, k, states, rules, functional=True)
        return _record(text, accepts(a), run_deterministic(a, w, record_trace=False).accepted, check, seed=seed)
    if check == "strong-weak":
        a = random_automaton(rng, k, states, rules, universal_prob=0.3, place_at_left_end=True)
        weak = PebbleAutomaton(
            a.k, a.states, a.initial, a.finals, a.universals, a.transitions, Placement.WEAK, a.direction
        )
        return _record(text, accepts(a), accepts(weak), check, seed=seed)
    a = random_automaton(rng, k, states, rules, universal_prob=0.3)
    if check == "dualize":
        return _record(text, not accepts(a), accepts(dualize(totalize(a))), check, seed=seed)
    if check == "totalize":
        return _record(text, accepts(a), accepts(totalize(a)), check, seed=seed)
    b = random_automaton(rng, k, states, rules, universal_prob=0.3)
    if check == "union":
        return _record(text, accepts(a) or accepts(b), accepts(union(a, b)), check, seed=seed)
    return _record(text, accepts(a) and accepts(b), accepts(intersect(a, b)), check, seed=seed)


SUITES: Dict[str, Callable[[Dict[str, Any], np.random.Generator], Plan]] = {
    "savitch": _plan_savitch,
    "rplus-fma": _plan_rplus_fma,
    "rplus-weakpa": _plan_per_k(_check_rplus_weakpa, 10),
    "ltl-psi": _plan_per_k(_check_ltl_psi, 10),
    "ltl-compile": _plan_ltl_compile,
    "periodicity": _plan_periodicity,
    "witness": _plan_witness,
    "engine": _plan_engine,
}


def run_experiment(
    suite: str,
    settings: Optional[Dict[str, Any]] = None,
    seed: int = 0,
    workers: int = 1,
) -> ExperimentReport:
    """Run one suite deterministically from ``seed``.

    Args:
        suite: name of a registered suite
        settings: suite settings (pool, max_len, samples, k, ...)
        seed: seed for every random choice
        workers: number of worker processes; 1 runs in-process

    Returns:
        ExperimentReport: records in task order and their aggregate

    Raises:
        UnknownSuite: If the suite is not registered
    """
    planner = SUITES.get(suite)
    if planner is None:
        raise UnknownSuite(f"Unknown suite '{suite}'. Available: {', '.join(SUITES)}")
    settings = {key: value for key, value in (settings or {}).items() if key not in ("workers", "seed")}
    rng = np.random.default_rng(seed)
    check, tasks = planner(settings, rng)
    logger.info(f"Suite {suite}: {len(tasks)} tasks, seed {seed}, {workers} worker(s)")

    start = time.perf_counter()
    if workers > 1:
        chunksize = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(check, tasks, chunksize=chunksize))
    else:
        records = [check(task) for task in tasks]
    elapsed = time.perf_counter() - start

    report = ExperimentReport(suite=suite, seed=seed, config=settings, records=records, wall_time=elapsed)
    logger.info(
        f"Suite {suite}: {report.agreeing}/{report.total} agree "
        f"({report.disagreeing} disagreements) in {elapsed:.1f}s"
    )
    return report
