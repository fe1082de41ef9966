import itertools
import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_models, decode
from langcons.cnf import unit_propagate
from langcons.grammar import (build_andor_dag, encode_grammar_sat, propagate_grammar_cyk,
                              propagate_grammar_earley)
from langcons.language import (EmptyLanguageWarning, InputError, RestrictedGrammar, SequenceDomains,
                               SpanPredicate, cyk_recognize, to_cnf)
from langcons.oracle import enumerate_language, gac_oracle
from langcons.randgen import random_cnf_grammar, random_domains, random_grammar
from langcons.regular import domain_assumptions, project_domains
from langcons.scheduling import build_shift_grammar

WITNESS = ["r"] + ["a1"] * 6 + ["b"] + ["a1"] * 6 + ["r"]
SHORT = ["r"] + ["a1"] * 3 + ["b"] + ["a1"] * 3 + ["r"]


def quiet_cnf(g):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyLanguageWarning)
        return to_cnf(g)


def test_dag_for_unique_parse(ab_grammar):
    cg = to_cnf(ab_grammar)
    dag = build_andor_dag(cg, SequenceDomains.full(cg.terminals, 2))
    assert dag.keys[dag.root] == ("or", "S", 0, 2)
    assert dag.count("and") == 3  # S -> A B plus the two terminal rules
    assert sorted(dag.leaves()) == [(0, "a"), (1, "b")]


def test_dag_dump_lists_nodes_and_edges(ab_grammar):
    cg = to_cnf(ab_grammar)
    text = build_andor_dag(cg, SequenceDomains.full(cg.terminals, 2)).dump()
    lines = text.splitlines()
    assert lines[0] == "# start S n 2"
    assert "or S 0 2" in lines
    assert "leaf 0 a" in lines
    assert any(line.startswith("edge ") for line in lines)


def test_shift_grammar_dag_emptiness():
    g15 = to_cnf(build_shift_grammar(1, 15, (True,) * 15))
    dag = build_andor_dag(g15, SequenceDomains.fixed(g15.terminals, WITNESS))
    assert not dag.empty
    g9 = to_cnf(build_shift_grammar(1, 9, (True,) * 9))
    assert build_andor_dag(g9, SequenceDomains.fixed(g9.terminals, SHORT)).empty


def test_right_linear_dag_is_linear():
    g = to_cnf(RestrictedGrammar.from_rules("S", [
        ("S", ["r", "S"]), ("S", ["w", "T"]), ("S", ["r"]), ("S", ["w"]),
        ("T", ["w", "T"]), ("T", ["r", "U"]), ("T", ["w"]), ("T", ["r"]),
        ("U", ["r", "U"]), ("U", ["r"]),
    ]))
    size = {n: len(build_andor_dag(g, SequenceDomains.full(g.terminals, n))) for n in (8, 16)}
    assert 1.8 <= size[16] / size[8] <= 2.2


def test_dag_alphabet_mismatch(ab_grammar):
    cg = to_cnf(ab_grammar)
    with pytest.raises(InputError):
        build_andor_dag(cg, SequenceDomains.full("xy", 2))


def test_sat_single_model(ab_grammar):
    cg = to_cnf(ab_grammar)
    dag = build_andor_dag(cg, SequenceDomains.full(cg.terminals, 2))
    cnf = encode_grammar_sat(dag)
    models = all_models(cnf, frozenset)
    assert len(models) == 1
    (model,) = models
    assert decode(cnf, 2, cg.terminals, model) == ("a", "b")


def test_sat_ambiguous_grammar_language():
    g = RestrictedGrammar.from_rules("S", [("S", ["S", "S"]), ("S", ["a"]), ("S", ["b"])])
    cg = to_cnf(g)
    n = 4
    cnf = encode_grammar_sat(build_andor_dag(cg, SequenceDomains.full(cg.terminals, n)))
    models = all_models(cnf, frozenset)
    strings = {decode(cnf, n, cg.terminals, m) for m in models}
    assert len(models) > len(strings)  # several parse trees per string
    assert strings == {w for w in itertools.product("ab", repeat=n) if cyk_recognize(cg, w)}


def test_sat_parse_tree_semantics():
    # S -> A A, A -> a | B B, B -> a: "aaa" has a parse, "aaaaa" does not
    g = RestrictedGrammar.from_rules("S", [("S", ["A", "A"]), ("A", ["a"]), ("A", ["B", "B"]),
                                           ("B", ["a"])])
    cg = to_cnf(g)
    for n in range(1, 7):
        cnf = encode_grammar_sat(build_andor_dag(cg, SequenceDomains.full(cg.terminals, n)))
        models = all_models(cnf, lambda m: decode(cnf, n, cg.terminals, m))
        assert bool(models) == cyk_recognize(cg, "a" * n), n


def test_unit_propagation_forces_common_leaf():
    # language {ab, bb}: position 1 must be b
    g = RestrictedGrammar.from_rules("S", [("S", ["X", "B"]), ("X", ["a"]), ("X", ["b"]),
                                           ("B", ["b"])])
    cg = to_cnf(g)
    cnf = encode_grammar_sat(build_andor_dag(cg, SequenceDomains.full(cg.terminals, 2)))
    out = unit_propagate(cnf)
    assert out[cnf.varmap[("x", 1, "b")]] is True


def test_cyk_propagator_examples():
    g = RestrictedGrammar.from_rules("S", [("S", ["a", "b"]), ("S", ["b", "a"])])
    cg = to_cnf(g)
    d = SequenceDomains.full(cg.terminals, 2)
    assert propagate_grammar_cyk(cg, d) == d
    assert str(propagate_grammar_cyk(cg, d.restrict(0, ["a"]))) == "{a} {b}"
    empty = quiet_cnf(RestrictedGrammar.from_rules("S", [("S", ["S", "S"])], terminals=["a"]))
    assert propagate_grammar_cyk(empty, SequenceDomains.full("a", 3)).failed


def test_shift_grammar_first_slot_already_rest():
    g = build_shift_grammar(1, 15, (True,) * 15)
    cg = to_cnf(g)
    d = SequenceDomains.full(cg.terminals, 15)
    free = propagate_grammar_cyk(cg, d)
    fixed = propagate_grammar_cyk(cg, d.restrict(0, ["r"]))
    assert free == fixed
    assert free.ordered(0) == ["r"]


def test_earley_handles_non_cnf_grammar():
    g = RestrictedGrammar.from_rules("S", [("S", ["a", "S", "a"]), ("S", ["b"])])
    d = SequenceDomains.full(g.terminals, 5)
    assert str(propagate_grammar_earley(g, d)) == "{a} {a} {b} {a} {a}"
    assert propagate_grammar_earley(g, SequenceDomains.full(g.terminals, 4)).failed


def test_earley_fixed_accepted_string_is_stable():
    g = build_shift_grammar(1, 15, (True,) * 15)
    d = SequenceDomains.fixed(g.terminals, WITNESS)
    assert propagate_grammar_earley(g, d) == d


def test_earley_nullable_start():
    g = RestrictedGrammar.from_rules("S", [("S", []), ("S", ["a"])])
    assert not propagate_grammar_earley(g, SequenceDomains.full(g.terminals, 0)).failed


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_propagators_agree_with_oracle(seed):
    rng = random.Random(seed)
    g = random_cnf_grammar(rng) if rng.random() < 0.5 else random_grammar(rng)
    d = random_domains(rng, g.terminals, rng.randint(1, 6))
    cg = quiet_cnf(g)
    expect = gac_oracle(enumerate_language(g, d), d)
    assert propagate_grammar_cyk(cg, d) == expect
    assert propagate_grammar_earley(g, d) == expect
    cnf = encode_grammar_sat(build_andor_dag(cg, SequenceDomains.full(g.terminals, d.n)))
    assert project_domains(cnf, unit_propagate(cnf, domain_assumptions(cnf, d)), d) == expect


def test_open_hours_restriction_prunes_activity():
    mask = (False, False, True, True, True, True, False, False)
    hours = SpanPredicate.open_hours(mask)
    g = RestrictedGrammar.from_rules("S", [("S", ["R", "W", "R"]), ("R", ["r", "R"]), ("R", ["r"]),
                                           ("W", ["w", "W"], hours), ("W", ["w"], hours)])
    cg = to_cnf(g)
    out = propagate_grammar_cyk(cg, SequenceDomains.full(cg.terminals, 8))
    assert [out.ordered(t) for t in (0, 1, 6, 7)] == [["r"]] * 4
    assert out.ordered(3) == ["r", "w"]

