"""
Compile LTL↓ sentences into alternating weak one-way pebble automata.

The automaton has ``fqr(ψ) + 1`` pebbles. The head pebble walks the word;
``down`` places the next pebble at the current position (weak placement), so
the pebble just above the head always marks where the register was bound and
``up`` becomes the test "pebble head+1 sees the same symbol".

States are obligations: positive Boolean combinations, kept in disjunctive
normal form, of negation-normal-form formulas that must hold at the head's
position. Each formula carries a tag saying how it behaves past the last
position: ``S`` (strong next, false at ▷) or ``W`` (weak next, true at ▷).
At a data position the obligation unfolds into moves:

- ``R(D)``: move right with the obligation D,
- ``PL(D)``: place a pebble here with the obligation D,
- a conjunction of both, or a constant.

Disjunctions become existential choices and conjunctions universal splits.
Whether a state is universal is decided by its value at ▷ (it has no rules
there). When a data position needs the other kind of branching, the state
branches without moving through a place-then-lift detour, which is available
because such positions only occur at heads >= 2.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Set, Tuple, Union

from pebblekit.ltl import (
    And, Bottom, Down, Formula, Next, Not, NotASentence, Or, Top, Until, Up,
    LtlError, fqr, is_sentence, to_text,
)
from pebblekit.pa_engine import (
    Action, Direction, PebbleAutomaton, Placement, Reads, TransitionRule,
)

logger = logging.getLogger(__name__)

ACCEPT = "⊤"
REJECT = "⊥"
INITIAL = "init"


# Negation normal form: tuples tagged by operator name

Nnf = Tuple
NNF_TRUE: Nnf = ("tt",)
NNF_FALSE: Nnf = ("ff",)


def to_nnf(f: Formula, negate: bool = False) -> Nnf:
    """Push negations to the atoms; the dual of X is weak next, of U is release."""
    if isinstance(f, Top):
        return NNF_FALSE if negate else NNF_TRUE
    if isinstance(f, Bottom):
        return NNF_TRUE if negate else NNF_FALSE
    if isinstance(f, Up):
        return ("nup",) if negate else ("up",)
    if isinstance(f, Not):
        return to_nnf(f.child, not negate)
    if isinstance(f, And):
        return ("or" if negate else "and", to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Or):
        return ("and" if negate else "or", to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Next):
        return ("wx" if negate else "x", to_nnf(f.child, negate))
    if isinstance(f, Until):
        return ("r" if negate else "u", to_nnf(f.left, negate), to_nnf(f.right, negate))
    if isinstance(f, Down):
        return ("down", to_nnf(f.child, negate))
    raise LtlError(f"Not a formula: {f!r}")


def nnf_to_text(g: Nnf) -> str:
    op = g[0]
    if op == "tt":
        return "true"
    if op == "ff":
        return "false"
    if op == "up":
        return "up"
    if op == "nup":
        return "~up"
    if op in ("x", "wx", "down"):
        prefix = {"x": "X", "wx": "WX", "down": "down"}[op]
        return f"{prefix} {nnf_to_text(g[1])}"
    infix = {"and": "&", "or": "|", "u": "U", "r": "R"}[op]
    return f"({nnf_to_text(g[1])} {infix} {nnf_to_text(g[2])})"


# Obligations

Tagged = Tuple[str, Nnf]
Obligation = FrozenSet[FrozenSet[Tagged]]

# a clause of an unfolded obligation: right-moving leaves and placed leaves
Clause = Tuple[FrozenSet[Tagged], FrozenSet[Nnf]]
Dnf = FrozenSet[Clause]

DNF_TRUE: Dnf = frozenset({(frozenset(), frozenset())})
DNF_FALSE: Dnf = frozenset()


def _minimize(clauses) -> Dnf:
    """Drop clauses that contain another clause."""
    ordered = sorted(set(clauses), key=lambda c: len(c[0]) + len(c[1]))
    kept: List[Clause] = []
    for right, placed in ordered:
        if not any(r <= right and p <= placed for r, p in kept):
            kept.append((right, placed))
    return frozenset(kept)


def _dnf_or(a: Dnf, b: Dnf) -> Dnf:
    return _minimize(a | b)


def _dnf_and(a: Dnf, b: Dnf) -> Dnf:
    return _minimize((ra | rb, pa | pb) for ra, pa in a for rb, pb in b)


def _unfold(g: Nnf, head: int, V: FrozenSet[int]) -> Dnf:
    """One-position unfolding of g for a head pebble whose symbol matches V."""
    op = g[0]
    if op == "tt":
        return DNF_TRUE
    if op == "ff":
        return DNF_FALSE
    if op in ("up", "nup"):
        same = (head + 1) in V
        return DNF_TRUE if same == (op == "up") else DNF_FALSE
    if op == "and":
        return _dnf_and(_unfold(g[1], head, V), _unfold(g[2], head, V))
    if op == "or":
        return _dnf_or(_unfold(g[1], head, V), _unfold(g[2], head, V))
    if op == "x":
        return frozenset({(frozenset({("S", g[1])}), frozenset())})
    if op == "wx":
        return frozenset({(frozenset({("W", g[1])}), frozenset())})
    if op == "u":
        later = frozenset({(frozenset({("S", g)}), frozenset())})
        return _dnf_or(_unfold(g[2], head, V), _dnf_and(_unfold(g[1], head, V), later))
    if op == "r":
        later = frozenset({(frozenset({("W", g)}), frozenset())})
        return _dnf_and(_unfold(g[2], head, V), _dnf_or(_unfold(g[1], head, V), later))
    if op == "down":
        return frozenset({(frozenset(), frozenset({g[1]}))})
    raise LtlError(f"Unknown normal-form operator {op!r}")


def unfold_obligation(d: Obligation, head: int, V: FrozenSet[int]) -> Dnf:
    result = DNF_FALSE
    for clause in d:
        conj = DNF_TRUE
        for _, g in clause:
            conj = _dnf_and(conj, _unfold(g, head, V))
        result = _dnf_or(result, conj)
    return result


def value_at_end(d: Obligation) -> bool:
    """Truth of an obligation at ▷: weak leaves hold, strong leaves fail."""
    return any(all(tag == "W" for tag, _ in clause) for clause in d)


def obligation_name(d: Obligation) -> str:
    clauses = sorted(
        " & ".join(sorted(f"{tag}[{nnf_to_text(g)}]" for tag, g in clause)) for clause in d
    )
    return "{" + " | ".join(clauses) + "}"


@dataclass(frozen=True)
class Option:
    """One existential alternative: move right, place, or both universally."""
    right: Optional[Obligation] = None
    placed: Optional[Obligation] = None


def _options(unfolded: Dnf) -> Union[bool, List[Option]]:
    """Group the unfolded clauses into branching alternatives, or a constant."""
    if not unfolded:
        return False
    if any(not r and not p for r, p in unfolded):
        return True
    pure_right = frozenset(r for r, p in unfolded if not p)
    pure_placed = frozenset(frozenset(("S", g) for g in p) for r, p in unfolded if not r)
    options: List[Option] = []
    if pure_right:
        options.append(Option(right=pure_right))
    if pure_placed:
        options.append(Option(placed=pure_placed))
    mixed = sorted(
        (
            Option(right=frozenset({r}), placed=frozenset({frozenset(("S", g) for g in p)}))
            for r, p in unfolded if r and p
        ),
        key=lambda o: (obligation_name(o.right), obligation_name(o.placed)),
    )
    return options + mixed


@dataclass
class _Builder:
    k: int
    states: Set[str] = field(default_factory=set)
    universals: Set[str] = field(default_factory=set)
    rules: List[TransitionRule] = field(default_factory=list)
    done: Set[Tuple[str, int]] = field(default_factory=set)
    pending: List[Tuple[str, int, Obligation]] = field(default_factory=list)

    def keys(self, head: int, V: Optional[FrozenSet[int]] = None):
        above = list(range(head + 1, self.k + 1))
        for vsize in range(len(above) + 1):
            for vs in combinations(above, vsize):
                Vs = frozenset(vs)
                if V is not None and Vs != V:
                    continue
                for psize in range(len(vs) + 1):
                    for ps in combinations(vs, psize):
                        yield frozenset(ps), Vs

    def node(self, d: Obligation, head: int) -> str:
        name = "n:" + obligation_name(d)
        self.states.add(name)
        if value_at_end(d):
            self.universals.add(name)
        if (name, head) not in self.done:
            self.done.add((name, head))
            self.pending.append((name, head, d))
        return name

    def add(self, head, P, V, source, target, action):
        self.rules.append(TransitionRule(head, P, V, source, target, action, Reads.DATA))

    def emit_option(self, head: int, P, V, source: str, option: Option) -> None:
        if option.right is not None and option.placed is not None:
            self.branch(head, P, V, source, self.split(head, option), universal=True)
        elif option.right is not None:
            self.add(head, P, V, source, self.node(option.right, head), Action.RIGHT)
        else:
            self.add(head, P, V, source, self.node(option.placed, head - 1), Action.PLACE)

    def branch(self, head: int, P, V, source: str, target: str, universal: bool) -> None:
        """Reach ``target`` without moving when ``source`` has the wrong branching kind."""
        if (source in self.universals) == universal:
            raise LtlError(f"State {source} already branches the right way")
        if head < 2:
            raise LtlError(f"No pebble left to branch without moving at head {head}")
        gadget = f"g:{target}"
        self.states.add(gadget)
        self.add(head, P, V, source, gadget, Action.PLACE)
        for Pg, Vg in self.keys(head - 1):
            if head in Pg:
                self.add(head - 1, Pg, Vg, gadget, target, Action.LIFT)

    def split(self, head: int, option: Option) -> str:
        name = f"s:{head}:{obligation_name(option.right)}+{obligation_name(option.placed)}"
        if name in self.states:
            return name
        self.states.add(name)
        self.universals.add(name)
        right = self.node(option.right, head)
        placed = self.node(option.placed, head - 1)
        for P, V in self.keys(head):
            self.add(head, P, V, name, right, Action.RIGHT)
            self.add(head, P, V, name, placed, Action.PLACE)
        return name

    def choice(self, head: int, V: FrozenSet[int], source: str, options: List[Option]) -> str:
        name = f"c:{head}:{','.join(map(str, sorted(V)))}:{source}"
        if name in self.states:
            return name
        self.states.add(name)
        for P, _ in self.keys(head, V):
            for option in options:
                self.emit_option(head, P, V, name, option)
        return name

    def expand(self, name: str, head: int, d: Obligation) -> None:
        universal = name in self.universals
        for P, V in self.keys(head):
            outcome = _options(unfold_obligation(d, head, V))
            if isinstance(outcome, bool):
                self.add(head, P, V, name, ACCEPT if outcome else REJECT, Action.RIGHT)
            elif len(outcome) == 1:
                option = outcome[0]
                mixed = option.right is not None and option.placed is not None
                if mixed and not universal:
                    self.branch(head, P, V, name, self.split(head, option), universal=True)
                else:
                    if mixed:
                        self.add(head, P, V, name, self.node(option.right, head), Action.RIGHT)
                        self.add(head, P, V, name, self.node(option.placed, head - 1), Action.PLACE)
                    else:
                        self.emit_option(head, P, V, name, option)
            elif universal:
                self.branch(head, P, V, name, self.choice(head, V, name, outcome), universal=False)
            else:
                for option in outcome:
                    self.emit_option(head, P, V, name, option)


def compile_to_weak_pa(f: Formula) -> PebbleAutomaton:
    """Build a weak one-way alternating (fqr(f)+1)-pebble automaton accepting L(f).

    Raises:
        NotASentence: If f has a free up
    """
    if not is_sentence(f):
        raise NotASentence(f"{to_text(f)} has a free occurrence of up")
    k = fqr(f) + 1
    builder = _Builder(k)
    builder.states.update({INITIAL, ACCEPT, REJECT})
    start = frozenset({frozenset({("S", to_nnf(f))})})
    first = builder.node(start, k)
    builder.rules.append(
        TransitionRule(k, frozenset(), frozenset(), INITIAL, first, Action.RIGHT, Reads.LEFT_END)
    )
    while builder.pending:
        name, head, d = builder.pending.pop()
        builder.expand(name, head, d)

    automaton = PebbleAutomaton(
        k=k,
        states=frozenset(builder.states),
        initial=INITIAL,
        finals=frozenset({ACCEPT}),
        universals=frozenset(builder.universals),
        transitions=tuple(builder.rules),
        placement=Placement.WEAK,
        direction=Direction.ONE_WAY,
    )
    logger.debug(
        f"Compiled {to_text(f)} into {len(automaton.states)} states, "
        f"{len(automaton.transitions)} rules, {k} pebbles"
    )
    return automaton
