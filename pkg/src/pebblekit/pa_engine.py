"""
Strong and weak pebble automata: representation and execution.

A configuration ``[i, q, θ]`` records the head pebble ``i`` (the most recently
placed one), the state ``q`` and the positions of pebbles ``i..k``. A rule
``(i, P, V, q) -> (q', act)`` applies when the head is ``i``, the state is ``q``
and the pebbles above the head that share its position (P) and its symbol (V)
are exactly the given sets. Rules may additionally be guarded by the class of
the symbol under the head (left end marker, data symbol, right end marker).

Acceptance is the inductive "leads to acceptance" predicate, evaluated as a
least fixed point over the finite configuration graph: final states are true,
universal states need all successors true, other states need one. A stuck
universal configuration is vacuously true; runs that never reach a final
state are false.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from pebblekit.datawords import DataWord

logger = logging.getLogger(__name__)


class PebbleAutomatonError(Exception):
    """Base exception for pebble automaton errors"""
    pass

class MalformedAutomaton(PebbleAutomatonError):
    """Raised when an automaton description violates its structural invariants"""
    pass

class NotApplicable(PebbleAutomatonError):
    """Raised when a rule is stepped on a configuration it does not apply to"""
    pass

class IllegalAction(PebbleAutomatonError):
    """Raised for place-pebble at head 1 or lift-pebble at head k"""
    pass

class OutOfBounds(PebbleAutomatonError):
    """Raised when the head would move left of ◁ or right of ▷"""
    pass

class NotDeterministic(PebbleAutomatonError):
    """Raised when a deterministic run finds several applicable rules"""

    def __init__(self, configuration: "Configuration", rules: Sequence["TransitionRule"]):
        self.configuration = configuration
        self.rules = list(rules)
        listing = "; ".join(str(r) for r in self.rules)
        super().__init__(f"{len(self.rules)} rules apply at {configuration}: {listing}")

class NotTotal(PebbleAutomatonError):
    """Raised when dualize is given an automaton with missing rule keys"""
    pass

class IncompatibleAutomata(PebbleAutomatonError):
    """Raised when combining automata with different k, placement or direction"""
    pass

class ConfigurationSpaceExceeded(PebbleAutomatonError):
    """Raised when exploration grows beyond |Q|·k·(n+2)^k configurations"""
    pass


class Action(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    STAY = "stay"
    PLACE = "place-pebble"
    LIFT = "lift-pebble"


ONE_WAY_ACTIONS = frozenset({Action.RIGHT, Action.PLACE, Action.LIFT})


class Placement(str, Enum):
    STRONG = "strong"
    WEAK = "weak"


class Direction(str, Enum):
    ONE_WAY = "one-way"
    TWO_WAY = "two-way"


class Reads(str, Enum):
    """Class of the symbol under the head."""
    LEFT_END = "left-end"
    DATA = "data"
    RIGHT_END = "right-end"


def reads_class(w: DataWord, position: int) -> Reads:
    if position == 0:
        return Reads.LEFT_END
    if position == len(w) + 1:
        return Reads.RIGHT_END
    return Reads.DATA


@dataclass(frozen=True)
class TransitionRule:
    """``(head, P, V, source) -> (target, action)``, optionally guarded by ``reads``."""
    head: int
    P: FrozenSet[int]
    V: FrozenSet[int]
    source: str
    target: str
    action: Action
    reads: Optional[Reads] = None

    def __post_init__(self):
        object.__setattr__(self, "P", frozenset(self.P))
        object.__setattr__(self, "V", frozenset(self.V))
        object.__setattr__(self, "action", Action(self.action))
        if self.reads is not None:
            object.__setattr__(self, "reads", Reads(self.reads))

    def covers(self, reads: Reads) -> bool:
        return self.reads is None or self.reads == reads

    def sort_key(self) -> Tuple:
        return (
            self.source,
            self.head,
            self.reads.value if self.reads else "",
            sorted(self.P),
            sorted(self.V),
            self.action.value,
            self.target,
        )

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "head": self.head,
            "P": sorted(self.P),
            "V": sorted(self.V),
            "from": self.source,
            "to": self.target,
            "action": self.action.value,
        }
        if self.reads is not None:
            data["reads"] = self.reads.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TransitionRule":
        try:
            return cls(
                head=int(data["head"]),
                P=frozenset(int(j) for j in data.get("P", [])),
                V=frozenset(int(j) for j in data.get("V", [])),
                source=str(data["from"]),
                target=str(data["to"]),
                action=Action(data["action"]),
                reads=Reads(data["reads"]) if data.get("reads") else None,
            )
        except (KeyError, ValueError, TypeError) as e:
            raise MalformedAutomaton(f"Invalid transition {data!r}: {e}")

    def __str__(self) -> str:
        guard = f", {self.reads.value}" if self.reads else ""
        return (
            f"({self.head}, P={sorted(self.P)}, V={sorted(self.V)}, {self.source}{guard})"
            f" -> ({self.target}, {self.action.value})"
        )


@dataclass(frozen=True)
class Configuration:
    """``[head, state, θ]`` with θ stored densely; entries below the head are None."""
    head: int
    state: str
    theta: Tuple[Optional[int], ...]

    @classmethod
    def initial(cls, k: int, state: str) -> "Configuration":
        return cls(k, state, (None,) * (k - 1) + (0,))

    @property
    def k(self) -> int:
        return len(self.theta)

    def position(self, pebble: int) -> int:
        pos = self.theta[pebble - 1]
        if pos is None:
            raise IndexError(f"Pebble {pebble} is not placed in {self}")
        return pos

    def assignment(self) -> Dict[int, int]:
        return {j: self.theta[j - 1] for j in range(self.head, self.k + 1)}

    def with_head_position(self, position: int, state: Optional[str] = None) -> "Configuration":
        theta = list(self.theta)
        theta[self.head - 1] = position
        return Configuration(self.head, self.state if state is None else state, tuple(theta))

    def succ_assignment(self, n: Optional[int] = None) -> "Configuration":
        """Succ_i(θ): the head pebble one position further right.

        Raises:
            OutOfBounds: If n is given and the head already sits at n+1
        """
        pos = self.position(self.head)
        if n is not None and pos > n:
            raise OutOfBounds(f"Succ undefined: pebble {self.head} at position {pos} > {n}")
        return self.with_head_position(pos + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "head": self.head,
            "state": self.state,
            "theta": {str(j): p for j, p in self.assignment().items()},
        }

    def __str__(self) -> str:
        theta = ", ".join(f"{j}->{p}" for j, p in self.assignment().items())
        return f"[{self.head}, {self.state}, {{{theta}}}]"


@dataclass(frozen=True)
class PebbleAutomaton:
    """A k-pebble automaton ``<Q, q0, F, U, μ>`` with its placement mode and direction."""
    k: int
    states: FrozenSet[str]
    initial: str
    finals: FrozenSet[str]
    universals: FrozenSet[str]
    transitions: Tuple[TransitionRule, ...]
    placement: Placement = Placement.STRONG
    direction: Direction = Direction.TWO_WAY

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "universals", frozenset(self.universals))
        object.__setattr__(self, "placement", Placement(self.placement))
        object.__setattr__(self, "direction", Direction(self.direction))
        rules = tuple(sorted(set(self.transitions), key=TransitionRule.sort_key))
        object.__setattr__(self, "transitions", rules)
        self._validate()

    def _validate(self) -> None:
        if self.k < 1:
            raise MalformedAutomaton(f"Pebble count must be >= 1, got {self.k}")
        if self.initial not in self.states:
            raise MalformedAutomaton(f"Initial state {self.initial!r} is not a state")
        for name, subset in (("finals", self.finals), ("universals", self.universals)):
            extra = subset - self.states
            if extra:
                raise MalformedAutomaton(f"{name} contain unknown states: {sorted(extra)}")
        if self.finals & self.universals:
            raise MalformedAutomaton(
                f"Universal states must be non-final: {sorted(self.finals & self.universals)}"
            )
        if self.placement == Placement.WEAK and self.direction != Direction.ONE_WAY:
            raise MalformedAutomaton("Weak automata are one-way")
        for rule in self.transitions:
            if not 1 <= rule.head <= self.k:
                raise MalformedAutomaton(f"Head index out of 1..{self.k} in {rule}")
            above = set(range(rule.head + 1, self.k + 1))
            if not (rule.P <= above and rule.V <= above):
                raise MalformedAutomaton(f"P and V must lie above the head in {rule}")
            if rule.source not in self.states or rule.target not in self.states:
                raise MalformedAutomaton(f"Unknown state in {rule}")
            if self.direction == Direction.ONE_WAY and rule.action not in ONE_WAY_ACTIONS:
                raise MalformedAutomaton(f"One-way automaton uses {rule.action.value} in {rule}")

    @cached_property
    def rule_index(self) -> Dict[Tuple[int, str], List[TransitionRule]]:
        index: Dict[Tuple[int, str], List[TransitionRule]] = {}
        for rule in self.transitions:
            index.setdefault((rule.head, rule.source), []).append(rule)
        return index

    @cached_property
    def rejecting_states(self) -> FrozenSet[str]:
        """Non-final existential states without any rule: they reject wherever they occur."""
        with_rules = {rule.source for rule in self.transitions}
        return frozenset(self.states - self.finals - self.universals - with_rules)

    def rules_from(self, head: int, state: str) -> List[TransitionRule]:
        return self.rule_index.get((head, state), [])

    def configuration_bound(self, n: int) -> int:
        return len(self.states) * self.k * (n + 2) ** self.k


@dataclass
class RunStats:
    configurations: int = 0
    iterations: int = 0
    steps: int = 0


@dataclass
class RunVerdict:
    accepted: bool
    trace: Optional[Tuple[Configuration, ...]] = None
    stats: RunStats = field(default_factory=RunStats)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "accepted": self.accepted,
            "stats": {
                "configurations": self.stats.configurations,
                "iterations": self.stats.iterations,
                "steps": self.stats.steps,
            },
        }
        if self.trace is not None:
            data["trace"] = [c.to_dict() for c in self.trace]
        return data


# Single steps

def compute_PV(w: DataWord, c: Configuration) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Pebbles above the head sharing its position (P) and its symbol (V)."""
    pos = c.position(c.head)
    sym = w.symbol_at(pos)
    P = set()
    V = set()
    for j in range(c.head + 1, c.k + 1):
        other = c.position(j)
        if other == pos:
            P.add(j)
        if w.symbol_at(other) == sym:
            V.add(j)
    return frozenset(P), frozenset(V)


def applicable_rules(a: PebbleAutomaton, w: DataWord, c: Configuration) -> List[TransitionRule]:
    P, V = compute_PV(w, c)
    cls = reads_class(w, c.position(c.head))
    return [r for r in a.rules_from(c.head, c.state) if r.P == P and r.V == V and r.covers(cls)]


def _apply(a: PebbleAutomaton, w: DataWord, c: Configuration, r: TransitionRule) -> Configuration:
    i = c.head
    pos = c.position(i)
    theta = list(c.theta)
    if r.action == Action.LEFT:
        if pos == 0:
            raise OutOfBounds(f"left at position 0 in {c}")
        theta[i - 1] = pos - 1
        nxt = Configuration(i, r.target, tuple(theta))
    elif r.action == Action.RIGHT:
        if pos == len(w) + 1:
            raise OutOfBounds(f"right at position {pos} in {c}")
        theta[i - 1] = pos + 1
        nxt = Configuration(i, r.target, tuple(theta))
    elif r.action == Action.STAY:
        nxt = Configuration(i, r.target, c.theta)
    elif r.action == Action.PLACE:
        if i == 1:
            raise IllegalAction(f"place-pebble with head 1 in {c}")
        theta[i - 2] = 0 if a.placement == Placement.STRONG else pos
        nxt = Configuration(i - 1, r.target, tuple(theta))
    else:
        if i == a.k:
            raise IllegalAction(f"lift-pebble with head {a.k} in {c}")
        theta[i - 1] = None
        nxt = Configuration(i + 1, r.target, tuple(theta))
    _check_frame(c, nxt)
    return nxt


def _check_frame(before: Configuration, after: Configuration) -> None:
    # pebbles above the old head never move
    for j in range(before.head + 1, before.k + 1):
        if before.theta[j - 1] != after.theta[j - 1]:
            raise PebbleAutomatonError(f"Pebble {j} moved from {before} to {after}")


def step(a: PebbleAutomaton, w: DataWord, c: Configuration, r: TransitionRule) -> Configuration:
    """Apply rule r to configuration c.

    Raises:
        NotApplicable: If r does not match c
        IllegalAction: For place-pebble at head 1 or lift-pebble at head k
        OutOfBounds: For left at 0 or right at n+1
    """
    if r.head != c.head or r.source != c.state:
        raise NotApplicable(f"{r} does not apply to {c}")
    P, V = compute_PV(w, c)
    if r.P != P or r.V != V or not r.covers(reads_class(w, c.position(c.head))):
        raise NotApplicable(f"{r} does not apply to {c} (P={sorted(P)}, V={sorted(V)})")
    return _apply(a, w, c, r)


def successors(a: PebbleAutomaton, w: DataWord, c: Configuration) -> List[Configuration]:
    """Distinct successor configurations, in rule order; impossible moves yield none."""
    out: List[Configuration] = []
    seen = set()
    for rule in applicable_rules(a, w, c):
        try:
            nxt = _apply(a, w, c, rule)
        except (OutOfBounds, IllegalAction):
            continue
        if nxt not in seen:
            seen.add(nxt)
            out.append(nxt)
    return out


# Acceptance

def leads_to_acceptance(
    a: PebbleAutomaton, w: DataWord, max_configurations: Optional[int] = None
) -> RunVerdict:
    """Evaluate acceptance as the least fixed point over reachable configurations.

    Args:
        a: The automaton
        w: The input word
        max_configurations: Exploration budget. Defaults to the |Q|·k·(n+2)^k bound,
            which a well-formed automaton never passes.

    Raises:
        ConfigurationSpaceExceeded: If exploration passes the budget
    """
    start = Configuration.initial(a.k, a.initial)
    bound = max_configurations if max_configurations is not None else a.configuration_bound(len(w))
    index: Dict[Configuration, int] = {start: 0}
    configs: List[Configuration] = [start]
    succ_ids: List[List[int]] = [[]]
    queue = deque([0])
    edges = 0
    while queue:
        u = queue.popleft()
        c = configs[u]
        if c.state in a.finals:
            continue
        for nxt in successors(a, w, c):
            v = index.get(nxt)
            if v is None:
                v = len(configs)
                index[nxt] = v
                configs.append(nxt)
                succ_ids.append([])
                queue.append(v)
                if len(configs) > bound:
                    raise ConfigurationSpaceExceeded(
                        f"{len(configs)} configurations exceed the bound {bound}"
                    )
            succ_ids[u].append(v)
            edges += 1

    preds: List[List[int]] = [[] for _ in configs]
    for u, vs in enumerate(succ_ids):
        for v in vs:
            preds[v].append(u)

    universal = [c.state in a.universals for c in configs]
    remaining = [len(vs) for vs in succ_ids]
    value = [False] * len(configs)
    frontier = [
        u for u, c in enumerate(configs)
        if c.state in a.finals or (universal[u] and remaining[u] == 0)
    ]
    for u in frontier:
        value[u] = True
    iterations = 0
    while frontier:
        iterations += 1
        nxt_frontier = []
        for v in frontier:
            for u in preds[v]:
                if value[u]:
                    continue
                if universal[u]:
                    remaining[u] -= 1
                    if remaining[u]:
                        continue
                value[u] = True
                nxt_frontier.append(u)
        frontier = nxt_frontier

    stats = RunStats(configurations=len(configs), iterations=iterations, steps=edges)
    logger.debug(
        f"Explored {stats.configurations} configurations, {edges} edges, "
        f"{iterations} fixpoint rounds on a word of length {len(w)}"
    )
    return RunVerdict(accepted=value[0], stats=stats)


def run_deterministic(a: PebbleAutomaton, w: DataWord, record_trace: bool = True) -> RunVerdict:
    """Follow the unique applicable rule from the initial configuration.

    A revisited configuration is a loop and rejects. A stuck configuration
    rejects unless its state is universal.

    Raises:
        NotDeterministic: If two or more rules apply at a reached configuration
    """
    c = Configuration.initial(a.k, a.initial)
    trace = [c]
    seen = set()
    while True:
        if c.state in a.finals:
            accepted = True
            break
        if c in seen:
            accepted = False
            break
        seen.add(c)
        rules = applicable_rules(a, w, c)
        if len(rules) > 1:
            raise NotDeterministic(c, rules)
        try:
            if not rules:
                raise IllegalAction(f"no rule applies at {c}")
            c = _apply(a, w, c, rules[0])
        except (OutOfBounds, IllegalAction):
            accepted = c.state in a.universals
            break
        trace.append(c)
    stats = RunStats(configurations=len(seen), steps=len(trace) - 1)
    return RunVerdict(accepted=accepted, trace=tuple(trace) if record_trace else None, stats=stats)


# Transition-table checks and combinators

def rule_keys(k: int, head: int) -> Iterator[Tuple[Reads, FrozenSet[int], FrozenSet[int]]]:
    """All (reads, P, V) guards with P ⊆ V ⊆ {head+1..k}."""
    above = list(range(head + 1, k + 1))
    for reads in Reads:
        for size in range(len(above) + 1):
            for V in combinations(above, size):
                for psize in range(len(V) + 1):
                    for P in combinations(V, psize):
                        yield reads, frozenset(P), frozenset(V)


def _covered(a: PebbleAutomaton, head: int, state: str, reads: Reads, P: FrozenSet[int], V: FrozenSet[int]) -> bool:
    return any(r.P == P and r.V == V and r.covers(reads) for r in a.rules_from(head, state))


def _states_needing_rules(a: PebbleAutomaton) -> List[str]:
    return sorted(a.states - a.finals - a.rejecting_states)


def missing_keys(a: PebbleAutomaton) -> List[Tuple[str, int, Reads, FrozenSet[int], FrozenSet[int]]]:
    missing = []
    for state in _states_needing_rules(a):
        for head in range(1, a.k + 1):
            for reads, P, V in rule_keys(a.k, head):
                if not _covered(a, head, state, reads, P, V):
                    missing.append((state, head, reads, P, V))
    return missing


def is_total(a: PebbleAutomaton) -> bool:
    return not missing_keys(a)


def is_functional(a: PebbleAutomaton) -> bool:
    """At most one rule per (head, state, reads, P, V) key."""
    groups: Dict[Tuple, List[TransitionRule]] = {}
    for rule in a.transitions:
        groups.setdefault((rule.head, rule.source, rule.P, rule.V), []).append(rule)
    for rules in groups.values():
        for reads in Reads:
            if sum(1 for r in rules if r.covers(reads)) > 1:
                return False
    return True


def check_functional(a: PebbleAutomaton) -> None:
    if not is_functional(a):
        raise MalformedAutomaton("Transition table has two rules for the same key")


def _fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name


def _sink_action(a: PebbleAutomaton, head: int, reads: Reads) -> Action:
    if a.direction == Direction.TWO_WAY:
        return Action.STAY
    if reads != Reads.RIGHT_END:
        return Action.RIGHT
    if head < a.k:
        return Action.LIFT
    if head > 1:
        return Action.PLACE
    # no legal move; the configuration stays stuck, which keeps its verdict
    return Action.RIGHT


def totalize(a: PebbleAutomaton) -> PebbleAutomaton:
    """Give every missing key a rule into a sink that preserves the verdict.

    Existential states fall into a rejecting sink, universal ones into an
    accepting sink, so the language is unchanged.
    """
    reject = _fresh_name("sink:reject", a.states)
    accept = _fresh_name("sink:accept", a.states | {reject})
    added = []
    for state, head, reads, P, V in missing_keys(a):
        target = accept if state in a.universals else reject
        added.append(TransitionRule(head, P, V, state, target, _sink_action(a, head, reads), reads))
    logger.debug(f"totalize added {len(added)} rules")
    return PebbleAutomaton(
        k=a.k,
        states=a.states | {reject, accept},
        initial=a.initial,
        finals=a.finals | {accept},
        universals=a.universals,
        transitions=a.transitions + tuple(added),
        placement=a.placement,
        direction=a.direction,
    )


def dualize(a: PebbleAutomaton) -> PebbleAutomaton:
    """Complement a total automaton whose configuration graphs are acyclic.

    Final states become rejecting (their rules are dropped), rejecting states
    become final, and the remaining states swap universal and existential.

    Raises:
        NotTotal: If some state lacks a rule for some key
    """
    gaps = missing_keys(a)
    if gaps:
        state, head, reads, P, V = gaps[0]
        raise NotTotal(
            f"{len(gaps)} missing keys, e.g. state {state!r} head {head} "
            f"{reads.value} P={sorted(P)} V={sorted(V)}"
        )
    rejecting = a.rejecting_states
    return PebbleAutomaton(
        k=a.k,
        states=a.states,
        initial=a.initial,
        finals=rejecting,
        universals=a.states - a.finals - a.universals - rejecting,
        transitions=tuple(r for r in a.transitions if r.source not in a.finals),
        placement=a.placement,
        direction=a.direction,
    )


def _renamed(a: PebbleAutomaton, prefix: str) -> Tuple[FrozenSet[str], FrozenSet[str], FrozenSet[str], List[TransitionRule]]:
    name = lambda q: f"{prefix}{q}"
    rules = [
        TransitionRule(r.head, r.P, r.V, name(r.source), name(r.target), r.action, r.reads)
        for r in a.transitions
    ]
    return (
        frozenset(map(name, a.states)),
        frozenset(map(name, a.finals)),
        frozenset(map(name, a.universals)),
        rules,
    )


def _combine(a: PebbleAutomaton, b: PebbleAutomaton, universal: bool) -> PebbleAutomaton:
    if (a.k, a.placement, a.direction) != (b.k, b.placement, b.direction):
        raise IncompatibleAutomata(
            f"Cannot combine k={a.k}/{a.placement.value}/{a.direction.value} "
            f"with k={b.k}/{b.placement.value}/{b.direction.value}"
        )
    states_a, finals_a, univ_a, rules_a = _renamed(a, "1.")
    states_b, finals_b, univ_b, rules_b = _renamed(b, "2.")
    states = set(states_a | states_b)
    finals = set(finals_a | finals_b)
    universals = set(univ_a | univ_b)
    rules = rules_a + rules_b
    start = "start"
    states.add(start)
    k = a.k
    entries = [("1." + a.initial, "1"), ("2." + b.initial, "2")]

    if a.direction == Direction.TWO_WAY:
        for target, _ in entries:
            rules.append(TransitionRule(k, frozenset(), frozenset(), start, target, Action.STAY, Reads.LEFT_END))
    elif k >= 2:
        # place pebble k-1 on ◁ and lift it again: a one-way detour back to the initial configuration
        for target, tag in entries:
            gadget = f"start.{tag}"
            states.add(gadget)
            rules.append(TransitionRule(k, frozenset(), frozenset(), start, gadget, Action.PLACE, Reads.LEFT_END))
            rules.append(TransitionRule(k - 1, {k}, {k}, gadget, target, Action.LIFT, Reads.LEFT_END))
    else:
        return _merge_initial(a, b, universal, states, finals, universals, rules)

    if universal:
        universals.add(start)
    return PebbleAutomaton(k, states, start, finals, universals, tuple(rules), a.placement, a.direction)


def _merge_initial(a, b, universal, states, finals, universals, rules) -> PebbleAutomaton:
    """One-way 1-pebble case: copy both initial rule sets onto the new start state."""
    kinds = []
    for aut, prefix in ((a, "1."), (b, "2.")):
        if aut.initial in aut.finals:
            kinds.append("accept")
        elif aut.initial in aut.rejecting_states:
            kinds.append("reject")
        elif aut.initial in aut.universals:
            kinds.append("universal")
        else:
            kinds.append("existential")
    absorbing, neutral, wanted = ("accept", "reject", "existential")
    if universal:
        absorbing, neutral, wanted = ("reject", "accept", "universal")
    start = "start"
    merged = [r for r in rules]
    if absorbing in kinds:
        if absorbing == "accept":
            finals.add(start)
        return PebbleAutomaton(a.k, states, start, finals, universals, tuple(merged), a.placement, a.direction)
    sources = [
        (aut, prefix) for (aut, prefix), kind in zip(((a, "1."), (b, "2.")), kinds) if kind != neutral
    ]
    if any(kind not in (neutral, wanted) for kind in kinds):
        raise IncompatibleAutomata(
            "A one-way 1-pebble automaton cannot branch at its initial configuration "
            f"over initial states of kinds {kinds}"
        )
    if not sources:
        if neutral == "accept":
            finals.add(start)
        return PebbleAutomaton(a.k, states, start, finals, universals, tuple(merged), a.placement, a.direction)
    for aut, prefix in sources:
        for r in aut.transitions:
            if r.source == aut.initial:
                merged.append(TransitionRule(r.head, r.P, r.V, start, prefix + r.target, r.action, r.reads))
    if universal:
        universals.add(start)
    return PebbleAutomaton(a.k, states, start, finals, universals, tuple(merged), a.placement, a.direction)


def union(a: PebbleAutomaton, b: PebbleAutomaton) -> PebbleAutomaton:
    """Existential choice between disjoint copies of a and b."""
    return _combine(a, b, universal=False)


def intersect(a: PebbleAutomaton, b: PebbleAutomaton) -> PebbleAutomaton:
    """Universal split into disjoint copies of a and b."""
    return _combine(a, b, universal=True)


# Instrumentation

class PebbleScan(NamedTuple):
    """One scan of a pebble: the fixed positions of the pebbles above it and its arrivals."""
    frame: Dict[int, int]
    arrivals: List[Tuple[int, str]]


def head_state_scans(a: PebbleAutomaton, w: DataWord, pebble: int) -> List[PebbleScan]:
    """Every scan of ``pebble`` (placement to lift) in the deterministic run.

    An arrival (position, state) is recorded each time the pebble is the head
    at a position it has not yet visited in the current scan.
    """
    verdict = run_deterministic(a, w)
    scans: List[PebbleScan] = []
    current: Optional[PebbleScan] = None
    for c in verdict.trace or ():
        if c.head == pebble:
            pos = c.position(pebble)
            if current is None:
                frame = {j: c.position(j) for j in range(pebble + 1, c.k + 1)}
                current = PebbleScan(frame, [(pos, c.state)])
            elif pos != current.arrivals[-1][0]:
                current.arrivals.append((pos, c.state))
        elif c.head > pebble and current is not None:
            scans.append(current)
            current = None
    if current is not None:
        scans.append(current)
    return scans


def head_state_sequence(a: PebbleAutomaton, w: DataWord, pebble: int, scan: int = 0) -> List[str]:
    scans = head_state_scans(a, w, pebble)
    if not scans:
        return []
    return [state for _, state in scans[scan].arrivals]


def eventual_period(seq: Sequence[Any], bound: Optional[int] = None) -> Optional[Tuple[int, int]]:
    """(offset, period) of the first repeated element, when the rest of seq stays on that cycle.

    Returns None if no element repeats, if a later element leaves the cycle,
    or if the offset or the period exceeds ``bound``.
    """
    first_seen: Dict[Any, int] = {}
    for j, item in enumerate(seq):
        if item in first_seen:
            offset, period = first_seen[item], j - first_seen[item]
            break
        first_seen[item] = j
    else:
        return None
    if any(seq[h] != seq[h + period] for h in range(offset, len(seq) - period)):
        return None
    if bound is not None and (offset > bound or period > bound):
        return None
    return offset, period


# JSON layout

def automaton_to_dict(a: PebbleAutomaton) -> Dict[str, Any]:
    return {
        "k": a.k,
        "placement": a.placement.value,
        "direction": a.direction.value,
        "states": sorted(a.states),
        "initial": a.initial,
        "finals": sorted(a.finals),
        "universals": sorted(a.universals),
        "transitions": [r.to_dict() for r in a.transitions],
    }


def automaton_from_dict(data: Dict[str, Any]) -> PebbleAutomaton:
    """Build an automaton from its JSON object.

    Raises:
        MalformedAutomaton: If fields are missing or invalid
    """
    if not isinstance(data, dict):
        raise MalformedAutomaton(f"Expected a JSON object, got {type(data).__name__}")
    try:
        return PebbleAutomaton(
            k=int(data["k"]),
            states=frozenset(data["states"]),
            initial=data["initial"],
            finals=frozenset(data.get("finals", [])),
            universals=frozenset(data.get("universals", [])),
            transitions=tuple(TransitionRule.from_dict(t) for t in data.get("transitions", [])),
            placement=Placement(data.get("placement", "strong")),
            direction=Direction(data.get("direction", "two-way")),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise MalformedAutomaton(f"Invalid automaton description: {e}")
