import itertools
import random
import warnings

import pytest

from conftest import make_rwr
from helpers import all_models, decode
from langcons.grammar import build_andor_dag, encode_grammar_sat
from langcons.language import EmptyLanguageWarning, RestrictedGrammar, SequenceDomains, to_cnf
from langcons.mip import (LpModel, ModelError, encode_grammar_mip, encode_regular_flow, feasible_01,
                          read_lp, safe_name, solutions_01, write_lp)
from langcons.oracle import enumerate_language
from langcons.randgen import random_automaton, random_cnf_grammar, random_domains
from langcons.regular import encode_regular_sat, unfold


def x_vector(sol, n, alphabet):
    return tuple(v for t in range(n) for v in alphabet.symbols if sol[safe_name("x", t, v)] == 1)


def test_flow_count_equals_language_size():
    a = make_rwr()
    d = SequenceDomains.full(a.alphabet, 3)
    sols = list(solutions_01(encode_regular_flow(unfold(a, d))))
    assert len(sols) == 7
    assert {x_vector(s, 3, a.alphabet) for s in sols} == set(enumerate_language(a, d).strings)


def test_flow_infeasible_graph():
    a = make_rwr()
    d = SequenceDomains.fixed(a.alphabet, "wrw")
    m = encode_regular_flow(unfold(a, d))
    assert m.failed
    assert not feasible_01(m)


def test_grammar_mip_bijection_on_unambiguous_grammar(ab_grammar):
    cg = to_cnf(ab_grammar)
    m = encode_grammar_mip(build_andor_dag(cg, SequenceDomains.full(cg.terminals, 2)))
    sols = list(solutions_01(m))
    assert len(sols) == 1
    assert x_vector(sols[0], 2, cg.terminals) == ("a", "b")


def test_grammar_mip_unambiguous_random():
    # right-linear grammars built from DFAs are unambiguous
    rng = random.Random(8)
    checked = 0
    while checked < 20:
        a = random_automaton(rng, deterministic=True)
        rules = []
        for q, v, q2 in a.transitions:
            rules.append((q.upper(), [v, q2.upper()]))
            if q2 in a.finals:
                rules.append((q.upper(), [v]))
        if not any(lhs == a.initial_state.upper() for lhs, _ in rules):
            continue
        g = RestrictedGrammar.from_rules(a.initial_state.upper(), rules, terminals=a.alphabet)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyLanguageWarning)
            cg = to_cnf(g)
        n = rng.randint(1, 4)
        d = SequenceDomains.full(a.alphabet, n)
        sols = list(solutions_01(encode_grammar_mip(build_andor_dag(cg, d))))
        strings = [x_vector(s, n, a.alphabet) for s in sols]
        assert sorted(strings) == sorted(enumerate_language(a, d).strings)
        checked += 1


def test_grammar_mip_ambiguous_string_selects_one_child():
    g = RestrictedGrammar.from_rules("S", [("S", ["S", "S"]), ("S", ["a"])])
    cg = to_cnf(g)
    dag = build_andor_dag(cg, SequenceDomains.full(cg.terminals, 4))
    m = encode_grammar_mip(dag)
    sols = list(solutions_01(m))
    assert len(sols) == 5  # Catalan(3) parse trees of "aaaa"
    for sol in sols:
        for idx, key in enumerate(dag.keys):
            if key[0] == "or" and sol[f"n_{idx}"] == 1:
                assert sum(sol[f"n_{c}"] for c in dag.children[idx]) == 1


def test_mip_and_sat_projection_random():
    rng = random.Random(21)
    for _ in range(25):
        a = random_automaton(rng)
        d = random_domains(rng, a.alphabet, rng.randint(1, 3))
        g = unfold(a, d)
        cnf = encode_regular_sat(g)
        sat = all_models(cnf, lambda m: decode(cnf, d.n, a.alphabet, m))
        mip = {x_vector(s, d.n, a.alphabet) for s in solutions_01(encode_regular_flow(g))}
        assert sat == mip
    for _ in range(25):
        gr = random_cnf_grammar(rng)
        d = random_domains(rng, gr.terminals, rng.randint(1, 3))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyLanguageWarning)
            dag = build_andor_dag(to_cnf(gr), d)
        cnf = encode_grammar_sat(dag)
        sat = all_models(cnf, lambda m: decode(cnf, d.n, gr.terminals, m))
        mip = {x_vector(s, d.n, gr.terminals) for s in solutions_01(encode_grammar_mip(dag))}
        assert sat == mip


def test_lp_round_trip():
    a = make_rwr()
    m = encode_regular_flow(unfold(a, SequenceDomains.full(a.alphabet, 3)))
    text = write_lp(m)
    back = read_lp(text)
    assert back.structure() == m.structure()
    assert write_lp(back) == text


def test_lp_round_trip_infeasible_and_grammar(ab_grammar):
    m = LpModel()
    m.mark_infeasible()
    back = read_lp(write_lp(m))
    assert back.failed and back.structure() == m.structure()
    cg = to_cnf(ab_grammar)
    g = encode_grammar_mip(build_andor_dag(cg, SequenceDomains.full(cg.terminals, 2)))
    assert read_lp(write_lp(g)).structure() == g.structure()


def test_lp_sections_and_mapping():
    a = make_rwr()
    text = write_lp(encode_regular_flow(unfold(a, SequenceDomains.full(a.alphabet, 2))))
    lines = text.splitlines()
    order = [lines.index(h) for h in ("Minimize", "Subject To", "Bounds", "Binaries", "End")]
    assert order == sorted(order)
    assert "\\ map x_0_r x 0 r" in lines
    assert lines[-1] == "End"


def test_lp_write_to_file(tmp_path):
    a = make_rwr()
    m = encode_regular_flow(unfold(a, SequenceDomains.full(a.alphabet, 2)))
    path = tmp_path / "m.lp"
    assert write_lp(m, path) == path.read_text()


def test_model_rejects_bad_input():
    m = LpModel()
    m.add_var("v")
    with pytest.raises(ModelError):
        m.add_var("v")
    with pytest.raises(ModelError):
        m.add_constraint([(1, "w")], "=", 1)
    with pytest.raises(ModelError):
        m.add_constraint([(1, "v")], "<", 1)


def test_checker_handles_inequalities():
    m = LpModel()
    for name in "abc":
        m.add_var(name)
    m.add_constraint([(1, "a"), (1, "b"), (1, "c")], ">=", 2)
    m.add_constraint([(1, "a"), (-1, "b")], "<=", 0)
    got = {tuple(s[v] for v in "abc") for s in solutions_01(m)}
    expect = {bits for bits in itertools.product([0, 1], repeat=3)
              if sum(bits) >= 2 and bits[0] <= bits[1]}
    assert got == expect
