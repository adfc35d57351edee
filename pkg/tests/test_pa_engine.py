import json

import numpy as np
import pytest
from hypothesis import given, settings

from pebblekit.datawords import DataWord
from pebblekit.pa_engine import (
    Action, Configuration, ConfigurationSpaceExceeded, Direction, IllegalAction, IncompatibleAutomata,
    MalformedAutomaton, NotApplicable, NotDeterministic, NotTotal, OutOfBounds, PebbleAutomaton,
    Placement, Reads, TransitionRule, applicable_rules, automaton_from_dict, automaton_to_dict,
    compute_PV, dualize, eventual_period, head_state_scans, head_state_sequence, intersect,
    is_functional, is_total, leads_to_acceptance, missing_keys, rule_keys, run_deterministic, step,
    successors, totalize, union,
)
from pebblekit.utils.enumeration import random_automaton
from pebblekit.utils.file_io import dumps_automaton
from strategies import at_least, every_key, seeds

WORDS = ["", "a", "a b", "a b c", "a a b"]


def accepts(a, text):
    return leads_to_acceptance(a, DataWord.parse(text)).accepted


def fork(universal):
    """k=1 one-way: from ◁ branch into "length >= 1" and "length >= 2"."""
    rules = [
        TransitionRule(1, set(), set(), "u", "x", Action.RIGHT, Reads.LEFT_END),
        TransitionRule(1, set(), set(), "u", "y", Action.RIGHT, Reads.LEFT_END),
        TransitionRule(1, set(), set(), "x", "acc", Action.RIGHT, Reads.DATA),
        TransitionRule(1, set(), set(), "y", "y1", Action.RIGHT, Reads.DATA),
        TransitionRule(1, set(), set(), "y1", "acc", Action.RIGHT, Reads.DATA),
    ]
    return PebbleAutomaton(
        k=1,
        states={"u", "x", "y", "y1", "acc"},
        initial="u",
        finals={"acc"},
        universals={"u"} if universal else set(),
        transitions=tuple(rules),
        direction=Direction.ONE_WAY,
    )


def alternating_scan():
    """k=2: pebble 1 walks the word alternating even/odd, then is lifted at ▷."""
    rules = [TransitionRule(2, set(), set(), "init", "even", Action.PLACE, Reads.LEFT_END)]
    for reads in (Reads.LEFT_END, Reads.DATA):
        for P, V in every_key(2, 1, reads):
            rules.append(TransitionRule(1, P, V, "even", "odd", Action.RIGHT, reads))
            rules.append(TransitionRule(1, P, V, "odd", "even", Action.RIGHT, reads))
    for state in ("even", "odd"):
        for P, V in every_key(2, 1, Reads.RIGHT_END):
            rules.append(TransitionRule(1, P, V, state, "done", Action.LIFT, Reads.RIGHT_END))
    return PebbleAutomaton(
        k=2,
        states={"init", "even", "odd", "done"},
        initial="init",
        finals={"done"},
        universals=set(),
        transitions=tuple(rules),
        direction=Direction.ONE_WAY,
    )


class TestRulesAndConfigurations:
    def test_rule_json_layout(self):
        rule = TransitionRule(1, {3}, {2, 3}, "p", "q", "place-pebble", "data")
        assert rule.action is Action.PLACE
        assert rule.to_dict() == {
            "head": 1, "P": [3], "V": [2, 3], "from": "p", "to": "q",
            "action": "place-pebble", "reads": "data",
        }
        assert TransitionRule.from_dict(rule.to_dict()) == rule
        assert "reads" not in TransitionRule(1, set(), set(), "p", "q", Action.RIGHT).to_dict()

    def test_invalid_rule_json(self):
        with pytest.raises(MalformedAutomaton):
            TransitionRule.from_dict({"head": 1, "from": "p", "to": "q", "action": "jump"})

    def test_initial_configuration(self):
        c = Configuration.initial(3, "q0")
        assert c.head == 3
        assert c.assignment() == {3: 0}
        assert str(c) == "[3, q0, {3->0}]"

    def test_succ_assignment(self):
        c = Configuration(1, "q", (2, 0))
        assert c.succ_assignment(3).assignment() == {1: 3, 2: 0}
        with pytest.raises(OutOfBounds):
            Configuration(1, "q", (4, 0)).succ_assignment(3)

    def test_compute_PV(self):
        w = DataWord.parse("a b a")
        assert compute_PV(w, Configuration(1, "q", (3, 1))) == (frozenset(), frozenset({2}))
        assert compute_PV(w, Configuration(1, "q", (1, 1))) == (frozenset({2}), frozenset({2}))
        assert compute_PV(w, Configuration(1, "q", (2, 1))) == (frozenset(), frozenset())
        # both end markers differ from every data symbol
        assert compute_PV(w, Configuration(1, "q", (4, 0))) == (frozenset(), frozenset())

    def test_rule_keys(self):
        assert len(list(rule_keys(2, 1))) == 9
        assert len(list(rule_keys(2, 2))) == 3
        assert len(list(rule_keys(3, 1))) == 3 * 9
        assert all(P <= V for _, P, V in rule_keys(3, 1))


class TestValidation:
    def _build(self, **overrides):
        fields = dict(
            k=2, states={"p", "q"}, initial="p", finals={"q"}, universals=set(),
            transitions=(TransitionRule(2, set(), set(), "p", "q", Action.RIGHT),),
        )
        fields.update(overrides)
        return PebbleAutomaton(**fields)

    def test_valid(self):
        a = self._build()
        assert a.placement is Placement.STRONG and a.direction is Direction.TWO_WAY

    @pytest.mark.parametrize("overrides", [
        {"k": 0, "transitions": ()},
        {"initial": "zz"},
        {"finals": {"zz"}},
        {"universals": {"q"}},
        {"placement": Placement.WEAK},
        {"transitions": (TransitionRule(3, set(), set(), "p", "q", Action.RIGHT),)},
        {"transitions": (TransitionRule(2, {1}, {1}, "p", "q", Action.RIGHT),)},
        {"transitions": (TransitionRule(2, set(), set(), "p", "zz", Action.RIGHT),)},
        {"transitions": (TransitionRule(2, set(), set(), "p", "q", Action.LEFT),),
         "direction": Direction.ONE_WAY},
    ])
    def test_malformed(self, overrides):
        with pytest.raises(MalformedAutomaton):
            self._build(**overrides)

    def test_rules_are_sorted_and_deduplicated(self):
        r1 = TransitionRule(2, set(), set(), "q", "p", Action.RIGHT)
        r2 = TransitionRule(2, set(), set(), "p", "q", Action.RIGHT)
        a = self._build(transitions=(r1, r2, r1), finals=set())
        assert a.transitions == (r2, r1)

    def test_rejecting_states(self):
        a = fork(universal=False)
        assert a.rejecting_states == frozenset()
        b = PebbleAutomaton(1, {"p", "r"}, "p", set(), set(), (TransitionRule(1, set(), set(), "p", "r", Action.RIGHT),))
        assert b.rejecting_states == {"r"}


class TestStep:
    def test_step_errors(self):
        a = PebbleAutomaton(
            k=2,
            states={"p", "q"},
            initial="p",
            finals=set(),
            universals=set(),
            transitions=(
                TransitionRule(2, set(), set(), "p", "q", Action.LEFT),
                TransitionRule(1, {2}, {2}, "q", "p", Action.PLACE),
                TransitionRule(2, set(), set(), "q", "p", Action.LIFT),
            ),
        )
        w = DataWord.parse("a")
        start = Configuration.initial(2, "p")
        with pytest.raises(OutOfBounds):
            step(a, w, start, a.transitions[0])
        with pytest.raises(NotApplicable):
            step(a, w, start, a.transitions[2])
        with pytest.raises(IllegalAction):
            step(a, w, Configuration(1, "q", (0, 0)), a.transitions[1])
        with pytest.raises(IllegalAction):
            step(a, w, Configuration(2, "q", (None, 1)), a.transitions[2])
        assert successors(a, w, start) == []

    def test_strong_and_weak_placement(self):
        rule = TransitionRule(2, set(), set(), "p", "q", Action.PLACE)
        w = DataWord.parse("a b")
        c = Configuration(2, "p", (None, 2))
        strong = PebbleAutomaton(2, {"p", "q"}, "p", set(), set(), (rule,), direction=Direction.ONE_WAY)
        weak = PebbleAutomaton(2, {"p", "q"}, "p", set(), set(), (rule,), Placement.WEAK, Direction.ONE_WAY)
        assert step(strong, w, c, rule) == Configuration(1, "q", (0, 2))
        assert step(weak, w, c, rule) == Configuration(1, "q", (2, 2))

    def test_lift_and_reads_guard(self):
        a = alternating_scan()
        w = DataWord.parse("a")
        c = Configuration(1, "odd", (2, 0))
        rules = applicable_rules(a, w, c)
        assert len(rules) == 1 and rules[0].action is Action.LIFT
        assert step(a, w, c, rules[0]) == Configuration(2, "done", (None, 0))


class TestAcceptance:
    @pytest.mark.parametrize("text,existential,universal", [
        ("", False, False),
        ("a", True, False),
        ("a b", True, True),
        ("a b c", True, True),
    ])
    def test_alternation(self, text, existential, universal):
        assert accepts(fork(universal=False), text) == existential
        assert accepts(fork(universal=True), text) == universal

    def test_stuck_configurations(self):
        universal = PebbleAutomaton(1, {"p"}, "p", set(), {"p"}, ())
        existential = PebbleAutomaton(1, {"p"}, "p", set(), set(), ())
        for text in WORDS:
            assert accepts(universal, text)
            assert not accepts(existential, text)
            assert run_deterministic(universal, DataWord.parse(text)).accepted
            assert not run_deterministic(existential, DataWord.parse(text)).accepted

    def test_stats(self):
        verdict = leads_to_acceptance(fork(universal=True), DataWord.parse("a b"))
        assert verdict.stats.configurations >= 4
        assert verdict.to_dict()["accepted"] is True
        assert "trace" not in verdict.to_dict()

    def test_configuration_budget(self):
        w = DataWord.parse("a b c")
        with pytest.raises(ConfigurationSpaceExceeded, match="exceed the bound 2"):
            leads_to_acceptance(fork(universal=True), w, max_configurations=2)
        assert leads_to_acceptance(fork(universal=True), w, max_configurations=100).accepted

    def test_deterministic_run_and_trace(self):
        a = at_least(2)
        verdict = run_deterministic(a, DataWord.parse("a b c"))
        assert verdict.accepted
        assert [c.state for c in verdict.trace] == ["start", "c0", "c1", "c2"]
        assert verdict.trace[-1].position(1) == 3
        assert run_deterministic(a, DataWord.parse("a"), record_trace=False).trace is None
        assert not run_deterministic(a, DataWord.parse("a")).accepted

    def test_nondeterminism_is_reported(self):
        with pytest.raises(NotDeterministic) as excinfo:
            run_deterministic(fork(universal=False), DataWord.parse("a"))
        assert len(excinfo.value.rules) == 2
        assert excinfo.value.configuration == Configuration.initial(1, "u")

    def test_loops_reject(self):
        a = PebbleAutomaton(1, {"p"}, "p", set(), set(), (TransitionRule(1, set(), set(), "p", "p", Action.STAY),))
        assert not run_deterministic(a, DataWord.parse("a")).accepted
        assert not accepts(a, "a")

    def test_two_way_walk(self):
        # go to ▷, come back to the first position, accept if it exists
        rules = [
            TransitionRule(1, set(), set(), "go", "go", Action.RIGHT, Reads.LEFT_END),
            TransitionRule(1, set(), set(), "go", "go", Action.RIGHT, Reads.DATA),
            TransitionRule(1, set(), set(), "go", "back", Action.LEFT, Reads.RIGHT_END),
            TransitionRule(1, set(), set(), "back", "back", Action.LEFT, Reads.DATA),
            TransitionRule(1, set(), set(), "back", "acc", Action.STAY, Reads.LEFT_END),
        ]
        a = PebbleAutomaton(1, {"go", "back", "acc"}, "go", {"acc"}, set(), tuple(rules))
        assert accepts(a, "a b")
        assert accepts(a, "")
        assert run_deterministic(a, DataWord.parse("a b c")).stats.steps == 9


class TestCombinators:
    def test_totalize_preserves_and_dualize_flips(self):
        a = at_least(1)
        assert not is_total(a)
        assert missing_keys(a)
        with pytest.raises(NotTotal):
            dualize(a)
        total = totalize(a)
        assert is_total(total)
        dual = dualize(total)
        assert is_total(dual)
        for text in WORDS:
            assert accepts(total, text) == accepts(a, text)
            assert accepts(dual, text) != accepts(a, text)
            assert accepts(dualize(dual), text) == accepts(a, text)

    def test_totalize_universal_states_go_to_the_accept_sink(self):
        a = fork(universal=True)
        total = totalize(a)
        sink_rules = [r for r in total.transitions if r.source == "u" and r.target.startswith("sink")]
        assert sink_rules and all(r.target == "sink:accept" for r in sink_rules)

    def test_union_and_intersection_one_way(self):
        for k in (2, 3):
            short, long_ = at_least(1, k), at_least(2, k)
            u, i = union(short, long_), intersect(short, long_)
            for text in WORDS:
                n = len(DataWord.parse(text))
                assert accepts(u, text) == (n >= 1)
                assert accepts(i, text) == (n >= 2)

    def test_union_merges_one_pebble_initial_rules(self):
        u = union(at_least(1), at_least(2))
        assert u.k == 1
        for text in WORDS:
            assert accepts(u, text) == (len(DataWord.parse(text)) >= 1)

    def test_one_pebble_intersection_of_existential_starts_is_refused(self):
        with pytest.raises(IncompatibleAutomata):
            intersect(at_least(1), at_least(2))

    def test_two_way_combination_stays(self):
        a = PebbleAutomaton(1, {"p", "f"}, "p", {"f"}, set(),
                            (TransitionRule(1, set(), set(), "p", "f", Action.RIGHT, Reads.LEFT_END),))
        b = PebbleAutomaton(1, {"p"}, "p", set(), set(), ())
        assert accepts(union(a, b), "a")
        assert not accepts(intersect(a, b), "a")
        assert all(r.action is Action.STAY for r in union(a, b).transitions if r.source == "start")

    def test_incompatible(self):
        with pytest.raises(IncompatibleAutomata):
            union(at_least(1, 1), at_least(1, 2))

    @settings(max_examples=40, deadline=None)
    @given(seeds)
    def test_random_engine_laws(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(1, 3))
        a = random_automaton(rng, k, 5, 20, universal_prob=0.3)
        det = random_automaton(rng, k, 5, 20, functional=True)
        assert is_functional(det)
        for text in WORDS:
            w = DataWord.parse(text)
            verdict = leads_to_acceptance(a, w).accepted
            assert leads_to_acceptance(totalize(a), w).accepted == verdict
            assert leads_to_acceptance(dualize(totalize(a)), w).accepted != verdict
            assert run_deterministic(det, w).accepted == leads_to_acceptance(det, w).accepted

    @settings(max_examples=30, deadline=None)
    @given(seeds)
    def test_strong_and_weak_agree_when_placing_at_the_left_end(self, seed):
        rng = np.random.default_rng(seed)
        a = random_automaton(rng, 2, 5, 20, universal_prob=0.3, place_at_left_end=True)
        weak = PebbleAutomaton(a.k, a.states, a.initial, a.finals, a.universals, a.transitions,
                               Placement.WEAK, a.direction)
        for text in WORDS:
            assert accepts(a, text) == accepts(weak, text)


class TestInstrumentation:
    def test_head_state_scans(self):
        a = alternating_scan()
        w = DataWord.parse("a b c")
        scans = head_state_scans(a, w, 1)
        assert len(scans) == 1
        assert scans[0].frame == {2: 0}
        assert scans[0].arrivals == [(0, "even"), (1, "odd"), (2, "even"), (3, "odd"), (4, "even")]
        assert head_state_sequence(a, w, 1) == ["even", "odd", "even", "odd", "even"]
        assert head_state_sequence(a, w, 2) == ["init"]

    @pytest.mark.parametrize("seq,bound,expected", [
        ([1, 2, 1, 2, 1, 2], None, (0, 2)),
        ([0, 1, 2, 1, 2], None, (1, 2)),
        ([5, 5, 5], None, (0, 1)),
        ([1, 2, 3], None, None),
        ([1, 2, 1, 3], None, None),
        ([1, 2, 3, 1, 2], 2, None),
        (["s"] * 6, 3, (0, 1)),
    ])
    def test_eventual_period(self, seq, bound, expected):
        assert eventual_period(seq, bound) == expected


class TestJson:
    def test_round_trip_is_byte_stable(self):
        a = alternating_scan()
        text = dumps_automaton(a)
        again = automaton_from_dict(json.loads(text))
        assert again == a
        assert dumps_automaton(again) == text
        assert automaton_to_dict(a)["transitions"][0] == a.transitions[0].to_dict()

    @pytest.mark.parametrize("data", [[], {"k": 1}, {"k": "x", "states": [], "initial": "p"}])
    def test_malformed_json(self, data):
        with pytest.raises(MalformedAutomaton):
            automaton_from_dict(data)
