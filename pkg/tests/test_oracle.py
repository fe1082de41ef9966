import math

import pytest

from conftest import make_ab_language, make_rwr
from langcons.language import Automaton, RestrictedGrammar, SequenceDomains
from langcons import oracle
from langcons.oracle import (OracleGuardError, cyclic_accepts, cyclic_pairs_ok, enumerate_language,
                             gac_oracle, hamming, levenshtein, min_distance_oracle)


def test_rwr_language_length_three():
    a = make_rwr()
    sample = enumerate_language(a, SequenceDomains.full(a.alphabet, 3))
    assert len(sample) == 7
    assert ("w", "r", "w") not in sample
    assert list(sample.strings) == sorted(sample.strings)


def test_empty_finals_give_empty_sample():
    a = Automaton.dfa(["q"], ["a"], [("q", "a", "q")], "q", [])
    assert len(enumerate_language(a, SequenceDomains.full(a.alphabet, 3))) == 0


def test_zero_length():
    assert enumerate_language(make_rwr(), SequenceDomains.full("rw", 0)).strings == ((),)
    ab = make_ab_language()
    assert enumerate_language(ab, SequenceDomains.full(ab.alphabet, 0)).strings == ()


def test_grammar_sample():
    g = RestrictedGrammar.from_rules("S", [("S", ["a", "S", "b"]), ("S", ["a", "b"])])
    sample = enumerate_language(g, SequenceDomains.full(g.terminals, 4))
    assert sample.strings == (("a", "a", "b", "b"),)


def test_gac_oracle_single_support():
    d = SequenceDomains(make_rwr().alphabet, ({"r", "w"}, {"r"}, {"w"}))
    sample = oracle.LanguageSample(3, (("r", "r", "w"),))
    assert str(gac_oracle(sample, d)) == "{r} {r} {w}"


def test_gac_oracle_full_language():
    a = Automaton.dfa(["q"], ["a", "b"], [("q", "a", "q"), ("q", "b", "q")], "q", ["q"])
    d = SequenceDomains.full(a.alphabet, 3)
    assert gac_oracle(enumerate_language(a, d), d) == d
    assert gac_oracle(oracle.LanguageSample(3, ()), d).failed


def test_distances():
    assert hamming("abc", "abd") == 1
    assert levenshtein("kitten", "sitting") == 3
    assert levenshtein("", "ab") == 2
    a = make_rwr()
    assert min_distance_oracle(a, "wrw", "hamming") == 1
    assert min_distance_oracle(a, "rwr", "hamming") == 0
    assert min_distance_oracle(a, "rwr", "edit") == 0
    assert min_distance_oracle(make_ab_language(), "b", "edit") == 1
    assert min_distance_oracle(make_ab_language(), "bbb", "hamming") == math.inf
    with pytest.raises(ValueError):
        min_distance_oracle(a, "r", "jaro")


def test_cyclic_checks_agree_on_adjacency():
    allowed = {("a", "b"), ("b", "a"), ("a", "a")}
    trans = {(u, v, v) for u, v in allowed}
    a = Automaton.nfa(["a", "b"], ["a", "b"], trans, ["a", "b"], ["a", "b"])
    for s in ["ab", "aab", "abb", "a", "b", "abab"]:
        assert cyclic_accepts(a, s) == cyclic_pairs_ok(allowed, s), s


def test_box_guard(monkeypatch):
    monkeypatch.setattr(oracle, "MAX_BOX", 10)
    a = make_rwr()
    with pytest.raises(OracleGuardError):
        enumerate_language(a, SequenceDomains.full(a.alphabet, 4))
