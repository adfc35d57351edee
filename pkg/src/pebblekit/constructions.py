"""
Concrete machines for the reachability and chain languages.

- :func:`build_savitch_pa` is the strong one-way deterministic k-pebble
  automaton accepting R_{2^k - 1}, the words whose graph has a path of length
  at most 2^k - 1 from the first to the last symbol. It follows the
  divide-and-conquer scheme: a path of length <= 2^i - 1 between X and Y is
  either empty or has a middle edge (a_l, a_{l+1}) at an odd position l with
  short paths X -> a_l and a_{l+1} -> Y.
- :func:`build_weak_rplus_pa` is the weak one-way nondeterministic automaton
  for R⁺_k.
- :func:`build_rplus_fma` is the two-register automaton for R⁺.

Subautomata are invoked by placing the next pebble and return by lifting it
into a continuation state of the caller. The continuation is part of the state
name, so the recursion needs no stack.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Set, Tuple, FrozenSet

from pebblekit.pa_engine import (
    Action, Direction, PebbleAutomaton, Placement, Reads, TransitionRule,
    check_functional, rule_keys,
)
from pebblekit.regauto import RaTransition, RegisterAutomaton

logger = logging.getLogger(__name__)


class ConstructionError(Exception):
    """Base exception for machine construction errors"""
    pass

class UnsupportedParameter(ConstructionError):
    """Raised when a construction is asked for a parameter it does not support"""
    pass


@dataclass(frozen=True)
class SubautomatonId:
    """A_level^{source,target}; None stands for the first (source) or last (target) symbol.

    Attributes:
        level: pebble driving this subautomaton, 1..k-1
        source: pebble whose symbol starts the path, or None for the first symbol
        target: pebble whose symbol ends the path, or None for the last symbol
        caller: state-name prefix of the invoking frame
    """
    level: int
    source: Optional[int]
    target: Optional[int]
    caller: str = ""

    def __post_init__(self):
        for pebble in (self.source, self.target):
            if pebble is not None and pebble <= self.level:
                raise ConstructionError(f"Endpoint pebble {pebble} must lie above level {self.level}")
        if self.source is None and self.target is None:
            raise ConstructionError("A subautomaton needs at least one pebble endpoint")

    @property
    def name(self) -> str:
        x = "*" if self.source is None else str(self.source)
        y = "*" if self.target is None else str(self.target)
        return f"{self.caller}A{self.level}[{x},{y}]"


class _TableBuilder:
    """Collects states and rules keyed by (head, state, reads, P, V)."""

    def __init__(self, k: int):
        self.k = k
        self.states: Set[str] = set()
        self.rules: List[TransitionRule] = []

    def keys(self, head: int, reads: Reads) -> Iterator[Tuple[FrozenSet[int], FrozenSet[int]]]:
        for r, P, V in rule_keys(self.k, head):
            if r == reads:
                yield P, V

    def add(self, head: int, P, V, source: str, target: str, action: Action, reads: Reads) -> None:
        self.states.update((source, target))
        self.rules.append(TransitionRule(head, P, V, source, target, action, reads))

    def every(self, head: int, reads: Reads, source: str, target: str, action: Action) -> None:
        for P, V in self.keys(head, reads):
            self.add(head, P, V, source, target, action, reads)


# Savitch reachability automaton

class _SavitchBuilder(_TableBuilder):

    def frame(self, sub: SubautomatonId, yes: str, no: str) -> str:
        """Emit the rules of one invocation of ``sub``; return its entry state."""
        if sub.level == 1:
            return self._base(sub, yes, no)
        return self._recursive(sub, yes, no)

    def _zero_length(self, sub: SubautomatonId, V: FrozenSet[int], first: bool) -> bool:
        if sub.source is not None and sub.target is not None:
            return {sub.source, sub.target} <= V
        if sub.source is None:
            return first and sub.target in V
        return False

    def _recursive(self, sub: SubautomatonId, yes: str, no: str) -> str:
        i = sub.level
        base = sub.name
        to_end = sub.target is None
        enter = f"{base}.enter"
        ret1_yes, ret1_no = f"{base}.r1+", f"{base}.r1-"
        even_via, even_skip = f"{base}.even+", f"{base}.even-"
        ret2_yes = f"{base}.r2+"

        def odd(first: bool, bit: bool) -> str:
            return f"{base}.odd" + (".first" if first else "") + (".t" if bit else "")

        def ret2_no(bit: bool) -> str:
            return f"{base}.r2-" + (".t" if bit else "")

        self.every(i, Reads.LEFT_END, enter, odd(True, False), Action.RIGHT)

        first_call = self.frame(SubautomatonId(i - 1, sub.source, i, base + "/1:"), ret1_yes, ret1_no)
        for first, bit in ((True, False), (False, False), (False, True)):
            if bit and not to_end:
                continue
            state = odd(first, bit)
            self.every(i, Reads.RIGHT_END, state, yes if (to_end and bit) else no, Action.LIFT)
            for P, V in self.keys(i, Reads.DATA):
                if self._zero_length(sub, V, first):
                    self.add(i, P, V, state, yes, Action.LIFT, Reads.DATA)
                else:
                    self.add(i, P, V, state, first_call, Action.PLACE, Reads.DATA)

        self.every(i, Reads.DATA, ret1_yes, even_via, Action.RIGHT)
        self.every(i, Reads.DATA, ret1_no, even_skip, Action.RIGHT)
        self.every(i, Reads.DATA, ret2_yes, yes, Action.LIFT)

        second_calls = {}
        for bit in (False, True):
            if bit and not to_end:
                continue
            second_calls[bit] = self.frame(
                SubautomatonId(i - 1, i, sub.target, f"{base}/2{'t' if bit else ''}:"), ret2_yes, ret2_no(bit)
            )
            self.every(i, Reads.DATA, ret2_no(bit), odd(False, bit), Action.RIGHT)

        for state in (even_via, even_skip):
            self.every(i, Reads.RIGHT_END, state, no, Action.LIFT)
            for P, V in self.keys(i, Reads.DATA):
                bit = to_end and sub.source in V
                if sub.source is not None and sub.target is not None and {sub.source, sub.target} <= V:
                    self.add(i, P, V, state, yes, Action.LIFT, Reads.DATA)
                elif state == even_via:
                    self.add(i, P, V, state, second_calls[bit], Action.PLACE, Reads.DATA)
                else:
                    self.add(i, P, V, state, odd(False, bit), Action.RIGHT, Reads.DATA)
        return enter

    def _base(self, sub: SubautomatonId, yes: str, no: str) -> str:
        base = sub.name
        enter = f"{base}.enter"
        j, jj = sub.source, sub.target
        if j is not None and jj is not None:
            odd, even, pending = f"{base}.odd", f"{base}.even", f"{base}.even+"
            self.every(1, Reads.LEFT_END, enter, odd, Action.RIGHT)
            for state in (odd, even, pending):
                self.every(1, Reads.RIGHT_END, state, no, Action.LIFT)
            for P, V in self.keys(1, Reads.DATA):
                same = {j, jj} <= V
                self.add(1, P, V, odd, yes if same else (pending if j in V else even),
                         Action.LIFT if same else Action.RIGHT, Reads.DATA)
                self.add(1, P, V, even, yes if same else odd,
                         Action.LIFT if same else Action.RIGHT, Reads.DATA)
                hit = same or jj in V
                self.add(1, P, V, pending, yes if hit else odd,
                         Action.LIFT if hit else Action.RIGHT, Reads.DATA)
        elif j is None:
            # the first symbol occurs once, so its only edge is (a_1, a_2)
            p1, p2 = f"{base}.p1", f"{base}.p2"
            self.every(1, Reads.LEFT_END, enter, p1, Action.RIGHT)
            for state in (p1, p2):
                self.every(1, Reads.RIGHT_END, state, no, Action.LIFT)
            for P, V in self.keys(1, Reads.DATA):
                if jj in V:
                    self.add(1, P, V, p1, yes, Action.LIFT, Reads.DATA)
                    self.add(1, P, V, p2, yes, Action.LIFT, Reads.DATA)
                else:
                    self.add(1, P, V, p1, p2, Action.RIGHT, Reads.DATA)
                    self.add(1, P, V, p2, no, Action.LIFT, Reads.DATA)
        else:
            # the last symbol occurs once: remember whether a_n or a_{n-1} matched
            def scan(b1: bool, b2: bool) -> str:
                return f"{base}.scan{int(b1)}{int(b2)}"

            self.every(1, Reads.LEFT_END, enter, scan(False, False), Action.RIGHT)
            for b1 in (False, True):
                for b2 in (False, True):
                    self.every(1, Reads.RIGHT_END, scan(b1, b2), yes if (b1 or b2) else no, Action.LIFT)
                    for P, V in self.keys(1, Reads.DATA):
                        self.add(1, P, V, scan(b1, b2), scan(j in V, b1), Action.RIGHT, Reads.DATA)
        return enter


def build_savitch_pa(k: int) -> PebbleAutomaton:
    """Strong one-way deterministic k-PA for R_{2^k - 1}.

    Pebble k sweeps the odd positions l. At each it asks A_{k-1}^{*,k}
    (a short path from the first symbol to a_l); on success it steps to
    a_{l+1} and asks A_{k-1}^{k,*}. Acceptance is deferred to ▷ so words of
    odd length are rejected.

    Args:
        k: number of pebbles, at least 2

    Raises:
        UnsupportedParameter: If k < 2
    """
    if k < 2:
        raise UnsupportedParameter(f"The Savitch automaton needs k >= 2, got {k}")
    b = _SavitchBuilder(k)
    init, odd, acc, rej = "init", "top.odd", "acc", "rej"
    r1_yes, r1_no, even_via, even_skip = "top.r1+", "top.r1-", "top.even+", "top.even-"
    r2_yes, r2_no, found_odd, found_even = "top.r2+", "top.r2-", "found.odd", "found.even"
    b.states.update({init, acc, rej})

    first_call = b.frame(SubautomatonId(k - 1, None, k, "top/1:"), r1_yes, r1_no)
    second_call = b.frame(SubautomatonId(k - 1, k, None, "top/2:"), r2_yes, r2_no)

    b.every(k, Reads.LEFT_END, init, odd, Action.RIGHT)
    b.every(k, Reads.DATA, odd, first_call, Action.PLACE)
    b.every(k, Reads.DATA, r1_yes, even_via, Action.RIGHT)
    b.every(k, Reads.DATA, r1_no, even_skip, Action.RIGHT)
    b.every(k, Reads.DATA, even_via, second_call, Action.PLACE)
    b.every(k, Reads.DATA, even_skip, odd, Action.RIGHT)
    b.every(k, Reads.DATA, r2_yes, found_odd, Action.RIGHT)
    b.every(k, Reads.DATA, r2_no, odd, Action.RIGHT)
    b.every(k, Reads.DATA, found_odd, found_even, Action.RIGHT)
    b.every(k, Reads.DATA, found_even, found_odd, Action.RIGHT)
    b.every(k, Reads.RIGHT_END, found_odd, acc, Action.PLACE)
    for state in (odd, even_via, even_skip, found_even):
        b.every(k, Reads.RIGHT_END, state, rej, Action.PLACE)

    automaton = PebbleAutomaton(
        k=k,
        states=frozenset(b.states),
        initial=init,
        finals=frozenset({acc}),
        universals=frozenset(),
        transitions=tuple(b.rules),
        placement=Placement.STRONG,
        direction=Direction.ONE_WAY,
    )
    check_functional(automaton)
    logger.debug(f"Savitch automaton for k={k}: {len(automaton.states)} states, {len(automaton.transitions)} rules")
    return automaton


# Weak automaton for R⁺_k

def build_weak_rplus_pa(k: int) -> PebbleAutomaton:
    """Weak one-way nondeterministic automaton for R⁺_k.

    Pebble K sits on c_0, a second pebble checks c_1 != c_0, then pebble K
    holds c_1 at position 2. Each holder places the next pebble on itself and
    scans right for the first later occurrence of the held symbol, guessing
    when to commit; the symbol after the occurrence must differ and becomes
    the next held symbol. After k holders the last one must sit on a_n.

    One pebble cannot compare c_0 with c_1, so k = 1 uses two pebbles.

    Raises:
        UnsupportedParameter: If k < 1
    """
    if k < 1:
        raise UnsupportedParameter(f"R⁺_k needs k >= 1, got {k}")
    K = max(k, 2)
    last_holder = 1 if k >= 2 else 2
    b = _TableBuilder(K)
    acc = "acc"

    b.every(K, Reads.LEFT_END, "start", "s1", Action.RIGHT)
    b.every(K, Reads.DATA, "s1", "d0", Action.PLACE)
    b.every(K - 1, Reads.DATA, "d0", "d1", Action.RIGHT)
    for P, V in b.keys(K - 1, Reads.DATA):
        if K not in V:
            b.add(K - 1, P, V, "d1", "s1b", Action.LIFT, Reads.DATA)
    b.every(K, Reads.DATA, "s1b", f"hold{K}", Action.RIGHT)

    for i in range(K, last_holder - 1, -1):
        for state in [f"hold{i}"] if i == K else [f"check{i}"]:
            for P, V in b.keys(i, Reads.DATA):
                # a committed occurrence must be followed by a different symbol
                if state.startswith("check") and (i + 1) in V:
                    continue
                if i == last_holder:
                    b.add(i, P, V, state, f"end{i}", Action.RIGHT, Reads.DATA)
                else:
                    b.add(i, P, V, state, f"place{i - 1}", Action.PLACE, Reads.DATA)
        if i == last_holder:
            end_action = Action.LIFT if i < K else Action.PLACE
            b.every(i, Reads.RIGHT_END, f"end{i}", acc, end_action)
            continue
        seek, dirty = f"seek{i - 1}", f"seek{i - 1}.dirty"
        b.every(i - 1, Reads.DATA, f"place{i - 1}", seek, Action.RIGHT)
        b.every(i - 1, Reads.DATA, dirty, dirty, Action.RIGHT)
        for P, V in b.keys(i - 1, Reads.DATA):
            if i in V:
                b.add(i - 1, P, V, seek, f"check{i - 1}", Action.RIGHT, Reads.DATA)
                b.add(i - 1, P, V, seek, dirty, Action.RIGHT, Reads.DATA)
            else:
                b.add(i - 1, P, V, seek, seek, Action.RIGHT, Reads.DATA)

    automaton = PebbleAutomaton(
        k=K,
        states=frozenset(b.states | {"start", acc}),
        initial="start",
        finals=frozenset({acc}),
        universals=frozenset(),
        transitions=tuple(b.rules),
        placement=Placement.WEAK,
        direction=Direction.ONE_WAY,
    )
    logger.debug(f"Weak R⁺_{k} automaton: {K} pebbles, {len(automaton.states)} states")
    return automaton


# Register automaton for R⁺

def build_rplus_fma() -> RegisterAutomaton:
    """Two-register deterministic automaton for R⁺.

    Register 1 holds the current chain symbol. While seeking its next
    occurrence, symbols matching no register are parked in register 2.
    """
    transitions = [
        RaTransition("q0", frozenset(), "q1", store=1),
        RaTransition("q1", frozenset(), "held", store=1),
    ]
    for state in ("held", "seek"):
        transitions += [
            RaTransition(state, frozenset(), "seek", store=2),
            RaTransition(state, frozenset({2}), "seek"),
            RaTransition(state, frozenset({1}), "found"),
            RaTransition(state, frozenset({1, 2}), "found"),
        ]
    transitions += [
        RaTransition("found", frozenset(), "held", store=1),
        RaTransition("found", frozenset({2}), "held", store=1),
    ]
    return RegisterAutomaton(
        registers=2,
        states=frozenset({"q0", "q1", "held", "seek", "found"}),
        initial="q0",
        finals=frozenset({"held"}),
        transitions=tuple(transitions),
    )
