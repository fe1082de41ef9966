"""Propagator-versus-oracle comparisons over seeded random instances."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

from .cnf import unit_propagate
from .grammar import (build_andor_dag, encode_grammar_sat, propagate_grammar_cyk,
                      propagate_grammar_earley)
from .language import Automaton, EmptyLanguageWarning, RestrictedGrammar, SequenceDomains, to_cnf
from .oracle import enumerate_language, gac_oracle
from .randgen import random_automaton, random_cnf_grammar, random_domains
from .regular import domain_assumptions, encode_regular_sat, project_domains, propagate_regular, unfold


@dataclass
class Mismatch:
    kind: str
    index: int
    results: dict

    def __str__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.results.items())
        return f"{self.kind} instance {self.index}: {inner}"


def _same(results: dict) -> bool:
    vals = list(results.values())
    return all(v.candidates == vals[0].candidates and v.failed == vals[0].failed for v in vals)


def regular_results(a: Automaton, d: SequenceDomains) -> dict:
    full = unfold(a, SequenceDomains.full(a.alphabet, d.n))
    cnf = encode_regular_sat(full)
    return {
        "propagator": propagate_regular(full, d),
        "unit-propagation": project_domains(cnf, unit_propagate(cnf, domain_assumptions(cnf, d)), d),
        "oracle": gac_oracle(enumerate_language(a, d), d),
    }


def grammar_results(g: RestrictedGrammar, d: SequenceDomains) -> dict:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyLanguageWarning)
        cg = to_cnf(g)
    cnf = encode_grammar_sat(build_andor_dag(cg, SequenceDomains.full(g.terminals, d.n)))
    return {
        "cyk": propagate_grammar_cyk(cg, d),
        "earley": propagate_grammar_earley(g, d),
        "unit-propagation": project_domains(cnf, unit_propagate(cnf, domain_assumptions(cnf, d)), d),
        "oracle": gac_oracle(enumerate_language(g, d), d),
    }


def regular_suite(count: int, seed: int, max_n: int = 8) -> tuple[list[Mismatch], int]:
    rng = random.Random(seed)
    bad = []
    for k in range(count):
        a = random_automaton(rng)
        d = random_domains(rng, a.alphabet, rng.randint(1, max_n))
        res = regular_results(a, d)
        if not _same(res):
            bad.append(Mismatch("regular", k, res))
    return bad, count


def grammar_suite(count: int, seed: int, max_n: int = 8) -> tuple[list[Mismatch], int]:
    rng = random.Random(seed)
    bad = []
    for k in range(count):
        g = random_cnf_grammar(rng)
        d = random_domains(rng, g.terminals, rng.randint(1, max_n))
        res = grammar_results(g, d)
        if not _same(res):
            bad.append(Mismatch("grammar", k, res))
    return bad, count
