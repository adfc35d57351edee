"""
Input generators for oracle suites and tests.

Exhaustive enumeration works up to renaming of symbols: machines in this
package only compare symbols for equality, so one representative per
equality pattern (a restricted growth string) covers every word. Random
generation draws from a ``numpy.random.Generator`` so every run is fixed by
its seed.
"""

import logging
import string
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from pebblekit.datawords import DataWord
from pebblekit.ltl import (
    FALSE, TRUE, UP, And, Down, Formula, Next, Not, Or, Until,
)
from pebblekit.pa_engine import (
    Action, Direction, PebbleAutomaton, Placement, Reads, TransitionRule,
)

logger = logging.getLogger(__name__)

_LETTERS = string.ascii_lowercase


def symbol_name(index: int) -> str:
    return _LETTERS[index] if index < len(_LETTERS) else f"x{index}"


def equality_patterns(length: int, pool: int) -> Iterator[Tuple[int, ...]]:
    """Restricted growth strings of ``length`` using at most ``pool`` values."""
    if length == 0:
        yield ()
        return
    pattern = [0] * length

    def extend(i: int, used: int) -> Iterator[Tuple[int, ...]]:
        if i == length:
            yield tuple(pattern)
            return
        for value in range(min(used + 1, pool)):
            pattern[i] = value
            yield from extend(i + 1, max(used, value + 1))

    yield from extend(0, 0)


def canonical_words(max_len: int, pool: int, min_len: int = 0) -> Iterator[DataWord]:
    """One word per equality pattern, for every length in min_len..max_len."""
    for length in range(min_len, max_len + 1):
        for pattern in equality_patterns(length, pool):
            yield DataWord.from_names(symbol_name(v) for v in pattern)


def random_word(rng: np.random.Generator, length: int, pool: int) -> DataWord:
    values = rng.integers(0, pool, size=length)
    return DataWord.from_names(symbol_name(int(v)) for v in values)


def random_words(
    rng: np.random.Generator, count: int, pool: int, max_len: int, min_len: int = 0
) -> List[DataWord]:
    lengths = rng.integers(min_len, max_len + 1, size=count)
    return [random_word(rng, int(n), pool) for n in lengths]


def random_convention_word(rng: np.random.Generator, length: int, pool: int) -> DataWord:
    """Even-length word whose first and last symbols occur once (named s and t)."""
    if length < 2 or length % 2:
        raise ValueError(f"Convention words have even length >= 2, got {length}")
    inner = rng.integers(0, pool, size=length - 2)
    return DataWord.from_names(["s"] + [symbol_name(int(v)) for v in inner] + ["t"])


# Formulas

def random_formula(
    rng: np.random.Generator, max_size: int, max_fqr: int, sentence: bool = True
) -> Formula:
    """A formula with at most ``max_size`` nodes and rank at most ``max_fqr``.

    With ``sentence`` set, up only occurs below some down.
    """
    size = int(rng.integers(1, max_size + 1))
    return _formula(rng, size, max_fqr, bound=not sentence)


def _formula(rng: np.random.Generator, size: int, rank: int, bound: bool) -> Formula:
    if size <= 1:
        leaves = [TRUE, FALSE, UP] if bound else [TRUE, FALSE]
        return leaves[int(rng.integers(0, len(leaves)))]
    ops = ["not", "next"] + (["down"] if rank > 0 else [])
    if size >= 3:
        ops += ["and", "or", "until"]
    op = ops[int(rng.integers(0, len(ops)))]
    if op == "not":
        return Not(_formula(rng, size - 1, rank, bound))
    if op == "next":
        return Next(_formula(rng, size - 1, rank, bound))
    if op == "down":
        return Down(_formula(rng, size - 1, rank - 1, True))
    left_size = int(rng.integers(1, size - 1))
    left = _formula(rng, left_size, rank, bound)
    right = _formula(rng, size - 1 - left_size, rank, bound)
    return {"and": And, "or": Or, "until": Until}[op](left, right)


# Automata

def random_automaton(
    rng: np.random.Generator,
    k: int,
    states: int,
    rules: int,
    placement: Placement = Placement.STRONG,
    universal_prob: float = 0.0,
    final_prob: float = 0.2,
    functional: bool = False,
    place_at_left_end: bool = False,
) -> PebbleAutomaton:
    """A random one-way automaton whose configuration graphs are acyclic.

    Rules never lead to a lower-numbered state, and place/lift rules always
    lead to a higher-numbered one, so only right moves can keep the state.

    Args:
        rng: random generator
        k: number of pebbles
        states: number of states, at least 2
        rules: number of rules to draw (duplicates and clashes are dropped)
        placement: strong or weak placement
        universal_prob: chance that a non-final state is universal
        final_prob: chance that a state other than the initial one is final
        functional: keep at most one rule per (head, state, reads, P, V)
        place_at_left_end: guard every place-pebble rule with ◁
    """
    names = [f"q{i}" for i in range(states)]
    finals = {q for q in names[1:] if rng.random() < final_prob}
    universals = {q for q in names if q not in finals and rng.random() < universal_prob}
    reads_choices = list(Reads)
    table: List[TransitionRule] = []
    used = set()
    for _ in range(rules):
        a = int(rng.integers(0, states))
        head = int(rng.integers(1, k + 1))
        actions = [Action.RIGHT]
        if head > 1 and a < states - 1:
            actions.append(Action.PLACE)
        if head < k and a < states - 1:
            actions.append(Action.LIFT)
        action = actions[int(rng.integers(0, len(actions)))]
        reads = reads_choices[int(rng.integers(0, len(reads_choices)))]
        if action == Action.PLACE and place_at_left_end:
            reads = Reads.LEFT_END
        above = list(range(head + 1, k + 1))
        V = frozenset(j for j in above if rng.random() < 0.5)
        P = frozenset(j for j in V if rng.random() < 0.5)
        low = a if action == Action.RIGHT else a + 1
        target = int(rng.integers(low, states))
        key = (head, a, reads, P, V)
        if functional and key in used:
            continue
        used.add(key)
        table.append(TransitionRule(head, P, V, names[a], names[target], action, reads))
    return PebbleAutomaton(
        k=k,
        states=frozenset(names),
        initial=names[0],
        finals=frozenset(finals),
        universals=frozenset(universals),
        transitions=tuple(table),
        placement=placement,
        direction=Direction.ONE_WAY,
    )
