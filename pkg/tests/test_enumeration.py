import numpy as np
import pytest

from pebblekit.ltl import fqr, is_sentence
from pebblekit.pa_engine import Action, Direction, Placement, Reads, is_functional
from pebblekit.utils.enumeration import (
    canonical_words, equality_patterns, random_automaton, random_convention_word, random_formula,
    random_word, random_words, symbol_name,
)


def test_symbol_names():
    assert [symbol_name(i) for i in (0, 1, 25)] == ["a", "b", "z"]
    assert symbol_name(26) == "x26"


@pytest.mark.parametrize("length,pool,count", [(0, 3, 1), (1, 3, 1), (3, 3, 5), (4, 2, 8), (4, 4, 15), (5, 5, 52)])
def test_pattern_counts(length, pool, count):
    assert len(list(equality_patterns(length, pool))) == count


def test_patterns_are_restricted_growth_strings():
    for pattern in equality_patterns(5, 3):
        seen = 0
        for value in pattern:
            assert value <= seen
            seen = max(seen, value + 1)


def test_canonical_words():
    texts = [w.to_text() for w in canonical_words(2, 2)]
    assert texts == ["", "a", "a a", "a b"]
    assert all(len(w) >= 3 for w in canonical_words(4, 2, min_len=3))


def test_random_words_are_seeded(rng):
    first = [w.to_text() for w in random_words(np.random.default_rng(4), 5, 3, 6)]
    second = [w.to_text() for w in random_words(np.random.default_rng(4), 5, 3, 6)]
    assert first == second
    assert len(random_word(rng, 7, 2)) == 7


def test_convention_words(rng):
    w = random_convention_word(rng, 8, 3)
    assert len(w) == 8
    assert w.names()[0] == "s" and w.names()[-1] == "t"
    with pytest.raises(ValueError):
        random_convention_word(rng, 5, 3)


def test_random_formulas(rng):
    for _ in range(50):
        f = random_formula(rng, 10, 2)
        assert is_sentence(f)
        assert fqr(f) <= 2


def test_random_automaton(rng):
    a = random_automaton(rng, 3, 6, 60, placement=Placement.WEAK, functional=True, place_at_left_end=True)
    assert a.k == 3 and a.placement is Placement.WEAK and a.direction is Direction.ONE_WAY
    assert is_functional(a)
    order = {q: i for i, q in enumerate(sorted(a.states, key=lambda q: int(q[1:])))}
    for rule in a.transitions:
        assert order[rule.target] >= order[rule.source]
        if rule.action in (Action.PLACE, Action.LIFT):
            assert order[rule.target] > order[rule.source]
        if rule.action is Action.PLACE:
            assert rule.reads is Reads.LEFT_END


def test_random_acyclic_fixture(random_acyclic):
    assert random_acyclic.k == 2
    assert len(random_acyclic.states) == 5
