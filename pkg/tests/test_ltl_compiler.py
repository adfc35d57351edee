import pytest
from hypothesis import given, settings

from pebblekit.datawords import DataWord, in_R_plus_m
from pebblekit.ltl import TRUE, UP, And, Next, Not, NotASentence, Until, build_psi, parse, sentence_holds
from pebblekit.ltl_compiler import (
    ACCEPT, INITIAL, NNF_FALSE, NNF_TRUE, compile_to_weak_pa, nnf_to_text, to_nnf,
    unfold_obligation, value_at_end,
)
from pebblekit.pa_engine import Direction, Placement, dualize, leads_to_acceptance, totalize
from pebblekit.utils.enumeration import canonical_words
from strategies import sentences, words

PSI_1 = "down (X ~up & ~(X X true))"


def accepts(a, w):
    return leads_to_acceptance(a, w).accepted


class TestNormalForm:
    def test_negated_until_is_release(self):
        assert to_nnf(Not(Until(TRUE, UP))) == ("r", NNF_FALSE, ("nup",))

    def test_negated_next_is_weak(self):
        assert to_nnf(Not(Next(UP))) == ("wx", ("nup",))
        assert to_nnf(Not(Not(Next(UP)))) == ("x", ("up",))

    def test_de_morgan(self):
        assert to_nnf(Not(And(TRUE, UP))) == ("or", NNF_FALSE, ("nup",))

    def test_printing(self):
        assert nnf_to_text(to_nnf(parse("~(X up U false)"))) == "(WX ~up R true)"
        assert nnf_to_text(to_nnf(parse(PSI_1))) == "down (X ~up & WX WX false)"


class TestObligations:
    def test_value_at_end(self):
        assert value_at_end(frozenset({frozenset({("W", NNF_TRUE)})}))
        assert value_at_end(frozenset({frozenset()}))
        assert not value_at_end(frozenset())
        assert not value_at_end(frozenset({frozenset({("W", NNF_TRUE), ("S", NNF_TRUE)})}))

    def test_up_compares_with_the_pebble_above(self):
        d = frozenset({frozenset({("S", ("up",))})})
        assert unfold_obligation(d, 1, frozenset({2})) == frozenset({(frozenset(), frozenset())})
        assert unfold_obligation(d, 1, frozenset()) == frozenset()

    def test_until_unfolds_into_a_right_move(self):
        d = frozenset({frozenset({("S", to_nnf(parse("true U false")))})})
        assert unfold_obligation(d, 1, frozenset()) == frozenset({
            (frozenset({("S", ("u", NNF_TRUE, NNF_FALSE))}), frozenset()),
        })


class TestCompiler:
    def test_shape(self):
        a = compile_to_weak_pa(parse(PSI_1))
        assert a.k == 2
        assert a.placement is Placement.WEAK
        assert a.direction is Direction.ONE_WAY
        assert a.initial == INITIAL
        assert a.finals == {ACCEPT}

    def test_rank_zero_uses_one_pebble(self):
        assert compile_to_weak_pa(parse("X true")).k == 1

    def test_free_up_is_rejected(self):
        with pytest.raises(NotASentence):
            compile_to_weak_pa(UP)
        with pytest.raises(NotASentence):
            compile_to_weak_pa(parse("X up"))

    @pytest.mark.parametrize("text,expected", [
        ("a b", True), ("a a", False), ("a b c", False), ("a", False), ("", False),
    ])
    def test_psi_1_examples(self, text, expected):
        assert accepts(compile_to_weak_pa(parse(PSI_1)), DataWord.parse(text)) == expected

    @pytest.mark.parametrize("k", [1, 2])
    def test_psi_exhaustive(self, k):
        a = compile_to_weak_pa(build_psi(k))
        for w in canonical_words(6, 3):
            assert accepts(a, w) == in_R_plus_m(w, k), w.to_text()

    @pytest.mark.slow
    def test_psi_3(self):
        a = compile_to_weak_pa(build_psi(3))
        for w in canonical_words(6, 3, min_len=4):
            assert accepts(a, w) == in_R_plus_m(w, 3), w.to_text()

    @pytest.mark.parametrize("text", [
        "true U down X (~up U up)",
        "~(true U down X (~up U up))",
        "down (X X true & ~X up)",
        "~X X true | down true",
    ])
    def test_agrees_with_the_evaluator(self, text):
        f = parse(text)
        a = compile_to_weak_pa(f)
        for w in canonical_words(5, 3):
            assert accepts(a, w) == sentence_holds(w, f), w.to_text()

    @settings(max_examples=60, deadline=None)
    @given(sentences(max_fqr=1, max_leaves=4), words(pool=3, max_len=4))
    def test_random_sentences(self, f, w):
        assert accepts(compile_to_weak_pa(f), w) == sentence_holds(w, f)

    @settings(max_examples=40, deadline=None)
    @given(sentences(max_fqr=1, max_leaves=4), words(pool=3, min_len=1, max_len=4))
    def test_dual_is_the_complement(self, f, w):
        dual = dualize(totalize(compile_to_weak_pa(f)))
        assert accepts(dual, w) != sentence_holds(w, f)

    def test_compilation_is_reproducible(self):
        f = build_psi(2)
        a, b = compile_to_weak_pa(f), compile_to_weak_pa(f)
        assert a.states == b.states
        assert a.transitions == b.transitions
