import pytest
from hypothesis import given, settings, strategies as st

from pebblekit.datawords import DataWord, Symbol, in_R_plus_m
from pebblekit.ltl import (
    FALSE, TRUE, UP, And, Down, FormulaSyntaxError, FreeRegisterRead, InvalidPosition, Next, Not,
    NotASentence, Or, Until, build_phi, build_psi, evaluate, formula_size, fqr, is_sentence,
    parse, sentence_holds, to_text,
)
from pebblekit.utils.enumeration import canonical_words
from strategies import formulas, rplus_instances, sentences, words

PSI_1 = "down (X ~up & ~(X X true))"


class TestParser:
    def test_psi_1(self):
        f = parse(PSI_1)
        assert f == Down(And(Next(Not(UP)), Not(Next(Next(TRUE)))))
        assert to_text(f) == "down (X ~up & ~X X true)"
        assert parse(to_text(f)) == f

    @pytest.mark.parametrize("text,expected", [
        ("true | false & up", Or(TRUE, And(FALSE, UP))),
        ("true & false | up", Or(And(TRUE, FALSE), UP)),
        ("true U false U up", Until(TRUE, Until(FALSE, UP))),
        ("true | false U up", Until(Or(TRUE, FALSE), UP)),
        ("true | false | up", Or(Or(TRUE, FALSE), UP)),
        ("~X down up", Not(Next(Down(UP)))),
        ("(true U false) U up", Until(Until(TRUE, FALSE), UP)),
        ("  X\n  true ", Next(TRUE)),
    ])
    def test_precedence(self, text, expected):
        assert parse(text) == expected

    @pytest.mark.parametrize("f,text", [
        (Until(Until(TRUE, FALSE), UP), "(true U false) U up"),
        (And(TRUE, Or(FALSE, UP)), "true & (false | up)"),
        (Or(TRUE, Or(FALSE, UP)), "true | (false | up)"),
        (Not(And(TRUE, UP)), "~(true & up)"),
    ])
    def test_printing_adds_needed_parentheses(self, f, text):
        assert to_text(f) == text

    def test_syntax_error_position(self):
        with pytest.raises(FormulaSyntaxError) as excinfo:
            parse("true & & false")
        assert excinfo.value.line == 1
        assert excinfo.value.column == 8

    @pytest.mark.parametrize("text", ["", "foo", "true false", "(true", "X"])
    def test_syntax_errors(self, text):
        with pytest.raises(FormulaSyntaxError):
            parse(text)

    @given(formulas(max_fqr=2, bound=True))
    def test_print_parse_round_trip(self, f):
        assert parse(to_text(f)) == f


class TestMeasures:
    def test_fqr_and_size(self):
        assert fqr(parse(PSI_1)) == 1
        assert fqr(parse("down X down up | down true")) == 2
        assert formula_size(parse("~up & true")) == 4
        assert formula_size(TRUE) == 1

    def test_psi_ranks(self):
        assert fqr(build_psi(1)) == 1
        for k in range(2, 6):
            assert fqr(build_psi(k)) == k - 1

    def test_families_are_sentences(self):
        for k in range(1, 6):
            assert is_sentence(build_psi(k))
            assert not is_sentence(build_phi(k))
        assert not is_sentence(UP)
        assert is_sentence(Down(UP))

    def test_family_parameters(self):
        with pytest.raises(Exception):
            build_phi(0)
        with pytest.raises(Exception):
            build_psi(0)


class TestSemantics:
    def test_next_fails_at_the_last_position(self):
        w = DataWord.parse("a b")
        assert evaluate(w, 1, None, Next(TRUE))
        assert not evaluate(w, 2, None, Next(TRUE))

    def test_until_is_non_strict(self):
        w = DataWord.parse("a")
        assert evaluate(w, 1, None, Until(FALSE, TRUE))
        assert not evaluate(w, 1, None, Until(TRUE, FALSE))

    def test_freeze(self):
        w = DataWord.parse("a b a")
        # the symbol at position 1 occurs again later
        f = Down(Next(Until(Not(UP), UP)))
        assert evaluate(w, 1, None, f)
        assert not evaluate(w, 2, None, f)
        assert evaluate(w, 3, Symbol.of("a"), UP)
        assert not evaluate(w, 2, Symbol.of("a"), UP)

    def test_errors(self):
        w = DataWord.parse("a")
        with pytest.raises(FreeRegisterRead):
            evaluate(w, 1, None, UP)
        with pytest.raises(InvalidPosition):
            evaluate(w, 0, None, TRUE)
        with pytest.raises(InvalidPosition):
            evaluate(w, 2, None, TRUE)
        with pytest.raises(NotASentence):
            sentence_holds(w, And(TRUE, UP))

    def test_empty_word_satisfies_nothing(self):
        assert not sentence_holds(DataWord(), TRUE)
        assert not sentence_holds(DataWord(), Not(FALSE))

    @pytest.mark.parametrize("text,expected", [("a b", True), ("a a", False), ("a b c", False), ("a", False)])
    def test_psi_1(self, text, expected):
        assert sentence_holds(DataWord.parse(text), parse(PSI_1)) == expected
        assert sentence_holds(DataWord.parse(text), build_psi(1)) == expected

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_psi_defines_chains_exhaustively(self, k):
        psi = build_psi(k)
        for w in canonical_words(8, 4):
            assert sentence_holds(w, psi) == in_R_plus_m(w, k), w.to_text()

    @given(rplus_instances(max_m=5))
    def test_psi_accepts_generated_chains(self, instance):
        w, m = instance
        assert sentence_holds(w, build_psi(m))
        assert not sentence_holds(w, build_psi(m + 1))

    @settings(max_examples=150)
    @given(sentences(), sentences(), words(min_len=1))
    def test_de_morgan(self, f, g, w):
        assert sentence_holds(w, Not(And(f, g))) == sentence_holds(w, Or(Not(f), Not(g)))
        assert sentence_holds(w, Not(Or(f, g))) == sentence_holds(w, And(Not(f), Not(g)))

    @settings(max_examples=150)
    @given(sentences(), sentences(), words(min_len=1), st.integers(1, 8))
    def test_until_unfolding(self, f, g, w, l):
        l = min(l, len(w))
        u = Until(f, g)
        unfolded = Or(g, And(f, Next(u)))
        assert evaluate(w, l, None, u) == evaluate(w, l, None, unfolded)
