"""
One-way deterministic register automata over data words.

This is a reduced finite-memory automaton model. At each position the
machine computes the equality profile (the set of registers currently
holding the symbol under the head) and follows the unique transition for
``(state, profile)``, optionally storing the symbol into one register.
Registers start empty and match nothing. A missing transition rejects.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from pebblekit.datawords import DataWord, Symbol

logger = logging.getLogger(__name__)


class RegisterAutomatonError(Exception):
    """Base exception for register automaton errors"""
    pass

class MalformedRegisterAutomaton(RegisterAutomatonError):
    """Raised when a register automaton description is inconsistent"""
    pass


@dataclass(frozen=True)
class RaTransition:
    source: str
    profile: FrozenSet[int]
    target: str
    store: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "profile", frozenset(self.profile))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "from": self.source,
            "profile": sorted(self.profile),
            "to": self.target,
            "store": self.store,
        }


@dataclass(frozen=True)
class RegisterAutomaton:
    registers: int
    states: FrozenSet[str]
    initial: str
    finals: FrozenSet[str]
    transitions: Tuple[RaTransition, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        rules = tuple(sorted(set(self.transitions), key=lambda t: (t.source, sorted(t.profile), t.target)))
        object.__setattr__(self, "transitions", rules)
        if self.registers < 1:
            raise MalformedRegisterAutomaton(f"Need at least one register, got {self.registers}")
        if self.initial not in self.states or not self.finals <= self.states:
            raise MalformedRegisterAutomaton("Initial and final states must be states")
        keys = set()
        for t in rules:
            if t.source not in self.states or t.target not in self.states:
                raise MalformedRegisterAutomaton(f"Unknown state in transition {t}")
            if not t.profile <= set(range(1, self.registers + 1)):
                raise MalformedRegisterAutomaton(f"Profile {sorted(t.profile)} names unknown registers")
            if t.store is not None and not 1 <= t.store <= self.registers:
                raise MalformedRegisterAutomaton(f"Store target {t.store} outside 1..{self.registers}")
            key = (t.source, t.profile)
            if key in keys:
                raise MalformedRegisterAutomaton(f"Two transitions for state {t.source!r} and profile {sorted(t.profile)}")
            keys.add(key)

    @cached_property
    def table(self) -> Dict[Tuple[str, FrozenSet[int]], RaTransition]:
        return {(t.source, t.profile): t for t in self.transitions}


@dataclass
class RaStep:
    position: int
    symbol: Symbol
    profile: FrozenSet[int]
    state: str
    registers: Tuple[Optional[Symbol], ...]


@dataclass
class RaTrace:
    accepted: bool
    steps: List[RaStep] = field(default_factory=list)


def equality_profile(registers: Iterable[Optional[Symbol]], sym: Symbol) -> FrozenSet[int]:
    return frozenset(j for j, content in enumerate(registers, start=1) if content == sym)


def trace_ra(a: RegisterAutomaton, w: DataWord) -> RaTrace:
    """Run ``a`` on ``w`` and keep the register bank after every position."""
    registers: List[Optional[Symbol]] = [None] * a.registers
    state = a.initial
    seen = set()
    trace = RaTrace(accepted=False)
    for pos, sym in enumerate(w, start=1):
        profile = equality_profile(registers, sym)
        t = a.table.get((state, profile))
        if t is None:
            logger.debug(f"No transition for {state!r} with profile {sorted(profile)} at position {pos}")
            return trace
        if t.store is not None:
            registers[t.store - 1] = sym
        seen.add(sym)
        if any(content is not None and content not in seen for content in registers):
            raise RegisterAutomatonError(f"Register holds a symbol that was never read at position {pos}")
        state = t.target
        trace.steps.append(RaStep(pos, sym, profile, state, tuple(registers)))
    trace.accepted = state in a.finals
    return trace


def run_ra(a: RegisterAutomaton, w: DataWord) -> bool:
    return trace_ra(a, w).accepted


def ra_to_dict(a: RegisterAutomaton) -> Dict[str, Any]:
    return {
        "registers": a.registers,
        "states": sorted(a.states),
        "initial": a.initial,
        "finals": sorted(a.finals),
        "transitions": [t.to_dict() for t in a.transitions],
    }


def ra_from_dict(data: Dict[str, Any]) -> RegisterAutomaton:
    """Build a register automaton from its JSON object.

    Raises:
        MalformedRegisterAutomaton: If fields are missing or invalid
    """
    try:
        transitions = tuple(
            RaTransition(
                source=str(t["from"]),
                profile=frozenset(int(j) for j in t.get("profile", [])),
                target=str(t["to"]),
                store=None if t.get("store") is None else int(t["store"]),
            )
            for t in data["transitions"]
        )
        return RegisterAutomaton(
            registers=int(data["registers"]),
            states=frozenset(data["states"]),
            initial=data["initial"],
            finals=frozenset(data.get("finals", [])),
            transitions=transitions,
        )
    except (KeyError, ValueError, TypeError, AttributeError) as e:
        raise MalformedRegisterAutomaton(f"Invalid register automaton description: {e}")
