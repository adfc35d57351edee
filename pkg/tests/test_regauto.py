import pytest
from hypothesis import given, settings

from pebblekit.datawords import DataWord, Symbol, in_R_plus
from pebblekit.regauto import (
    MalformedRegisterAutomaton, RaTransition, RegisterAutomaton, equality_profile,
    ra_from_dict, ra_to_dict, run_ra, trace_ra,
)
from pebblekit.utils.enumeration import canonical_words
from strategies import rplus_instances, words


def distinct_pair():
    """Accepts exactly the words "x y" with x != y."""
    return RegisterAutomaton(
        registers=1,
        states={"q0", "q1", "q2"},
        initial="q0",
        finals={"q2"},
        transitions=(
            RaTransition("q0", set(), "q1", store=1),
            RaTransition("q1", set(), "q2"),
        ),
    )


def test_equality_profile():
    a, b = Symbol.of("a"), Symbol.of("b")
    assert equality_profile([a, None, a], a) == {1, 3}
    assert equality_profile([a, None], b) == frozenset()
    assert equality_profile([None, None], a) == frozenset()


@pytest.mark.parametrize("text,expected", [
    ("a b", True),
    ("a a", False),
    ("a", False),
    ("a b c", False),
    ("", False),
])
def test_missing_transition_rejects(text, expected):
    assert run_ra(distinct_pair(), DataWord.parse(text)) == expected


def test_trace_keeps_register_bank():
    trace = trace_ra(distinct_pair(), DataWord.parse("a b"))
    assert trace.accepted
    assert [s.state for s in trace.steps] == ["q1", "q2"]
    assert trace.steps[0].registers == (Symbol.of("a"),)
    assert trace.steps[1].profile == frozenset()


@pytest.mark.parametrize("transitions", [
    (RaTransition("q0", set(), "q1"), RaTransition("q0", set(), "q2")),
    (RaTransition("q0", set(), "q1", store=2),),
    (RaTransition("q0", {2}, "q1"),),
    (RaTransition("q0", set(), "zz"),),
])
def test_malformed(transitions):
    with pytest.raises(MalformedRegisterAutomaton):
        RegisterAutomaton(1, {"q0", "q1", "q2"}, "q0", {"q2"}, transitions)


def test_needs_a_register():
    with pytest.raises(MalformedRegisterAutomaton):
        RegisterAutomaton(0, {"q0"}, "q0", set(), ())


def test_json_round_trip(fma):
    data = ra_to_dict(fma)
    assert data["registers"] == 2
    assert {"from": "q0", "profile": [], "to": "q1", "store": 1} in data["transitions"]
    assert ra_from_dict(data) == fma


def test_malformed_json():
    with pytest.raises(MalformedRegisterAutomaton):
        ra_from_dict({"registers": 1, "states": ["q"]})


class TestChainAutomaton:
    @pytest.mark.parametrize("text,expected", [
        ("a b", True),
        ("a a", False),
        ("a b c b d", True),
        ("a b c b b", False),
        ("a b b", False),
        ("a b x b c y c d", True),
        ("a b c", False),
    ])
    def test_examples(self, fma, text, expected):
        assert run_ra(fma, DataWord.parse(text)) == expected

    def test_registers_follow_the_chain(self, fma):
        trace = trace_ra(fma, DataWord.parse("a b c b d"))
        a, b, c, d = (Symbol.of(x) for x in "abcd")
        assert [s.registers for s in trace.steps] == [
            (a, None), (b, None), (b, c), (b, c), (d, c),
        ]
        assert trace.accepted

    def test_exhaustive(self, fma):
        for w in canonical_words(8, 4):
            assert run_ra(fma, w) == in_R_plus(w), w.to_text()

    @settings(max_examples=200)
    @given(words(pool=4, max_len=14))
    def test_random_words(self, fma, w):
        assert run_ra(fma, w) == in_R_plus(w)

    @given(rplus_instances(max_m=6))
    def test_chain_words(self, fma, instance):
        w, _ = instance
        assert run_ra(fma, w)
