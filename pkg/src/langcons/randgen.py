"""Seeded random automata, grammars and domains for cross-checking."""

from __future__ import annotations

import random

from .language import (Alphabet, Automaton, Occurrence, Production, RestrictedGrammar,
                       SequenceDomains, SpanPredicate)

SYMBOLS = ("a", "b", "c", "d")
NONTERMINALS = ("S", "A", "B", "C", "D")


def random_alphabet(rng: random.Random, max_symbols: int = 4) -> Alphabet:
    return Alphabet(SYMBOLS[:rng.randint(1, max_symbols)])


def random_automaton(rng: random.Random, max_states: int = 5, max_symbols: int = 4,
                     deterministic: bool | None = None, alphabet: Alphabet | None = None) -> Automaton:
    alphabet = alphabet or random_alphabet(rng, max_symbols)
    states = [f"q{k}" for k in range(rng.randint(1, max_states))]
    if deterministic is None:
        deterministic = rng.random() < 0.5
    density = rng.uniform(0.3, 0.9)
    trans = set()
    for q in states:
        for v in alphabet.symbols:
            if deterministic:
                if rng.random() < density:
                    trans.add((q, v, rng.choice(states)))
            else:
                for q2 in states:
                    if rng.random() < density / len(states) * 1.5:
                        trans.add((q, v, q2))
    finals = {q for q in states if rng.random() < 0.5}
    if deterministic:
        return Automaton.dfa(states, alphabet, trans, states[0], finals)
    initial = {q for q in states if rng.random() < 0.4} or {states[0]}
    return Automaton.nfa(states, alphabet, trans, initial, finals)


def random_domains(rng: random.Random, alphabet: Alphabet, n: int, keep: float = 0.6) -> SequenceDomains:
    cands = []
    for _ in range(n):
        vals = [v for v in alphabet.symbols if rng.random() < keep]
        cands.append(frozenset(vals or [rng.choice(alphabet.symbols)]))
    return SequenceDomains(alphabet, tuple(cands))


def _maybe_length(rng: random.Random, p: float, max_len: int) -> SpanPredicate:
    if rng.random() >= p:
        return SpanPredicate.always()
    lo = rng.randint(1, max_len)
    return SpanPredicate.length(lo, rng.randint(lo, max_len))


def random_cnf_grammar(rng: random.Random, max_nonterminals: int = 5, max_productions: int = 8,
                       alphabet: Alphabet | None = None, predicates: float = 0.15,
                       max_len: int = 8) -> RestrictedGrammar:
    """A grammar already in Chomsky normal form (as a plain restricted grammar)."""
    alphabet = alphabet or random_alphabet(rng, 3)
    nts = list(NONTERMINALS[:rng.randint(1, max_nonterminals)])
    count = rng.randint(2, max_productions)
    prods = []
    # terminal rules for the start symbol and one other, so the language is rarely empty
    for lhs in {"S", rng.choice(nts)}:
        prods.append(Production(lhs, (Occurrence(rng.choice(alphabet.symbols), True),)))
    while len(prods) < count:
        lhs = "S" if rng.random() < 0.3 else rng.choice(nts)
        if rng.random() < 0.3:
            rhs = (Occurrence(rng.choice(alphabet.symbols), True),)
        else:
            rhs = tuple(Occurrence(rng.choice(nts), False, _maybe_length(rng, predicates, max_len))
                        for _ in range(2))
        prods.append(Production(lhs, rhs, _maybe_length(rng, predicates, max_len)))
    return RestrictedGrammar(tuple(nts), alphabet, "S", tuple(prods))


def random_grammar(rng: random.Random, max_nonterminals: int = 4, max_productions: int = 8,
                   alphabet: Alphabet | None = None, max_len: int = 6,
                   predicates: float = 0.2) -> RestrictedGrammar:
    """A general ε-free grammar with unit rules, long rules and predicates."""
    alphabet = alphabet or random_alphabet(rng, 3)
    nts = list(NONTERMINALS[:rng.randint(1, max_nonterminals)])
    mask = tuple(rng.random() < 0.8 for _ in range(max_len))

    def pred():
        r = rng.random()
        if r < predicates * 0.3:
            return SpanPredicate.open_hours(mask)
        return _maybe_length(rng, predicates * 0.7, max_len)

    prods = [Production(rng.choice(nts), (Occurrence(rng.choice(alphabet.symbols), True),))]
    for _ in range(rng.randint(1, max_productions - 1)):
        rhs = []
        for _ in range(rng.choice((1, 1, 2, 2, 3))):
            if rng.random() < 0.4:
                rhs.append(Occurrence(rng.choice(alphabet.symbols), True, pred()))
            else:
                rhs.append(Occurrence(rng.choice(nts), False, pred()))
        prods.append(Production(rng.choice(nts), tuple(rhs), pred()))
    return RestrictedGrammar(tuple(nts), alphabet, "S", tuple(prods))


def random_adjacency_automaton(rng: random.Random, max_symbols: int = 4,
                               density: float | None = None):
    """Automaton whose state is the last symbol read; returns it with the allowed pairs."""
    alphabet = random_alphabet(rng, max_symbols)
    density = rng.uniform(0.3, 0.9) if density is None else density
    allowed = {(u, v) for u in alphabet.symbols for v in alphabet.symbols if rng.random() < density}
    trans = {(u, v, v) for u, v in allowed}
    states = alphabet.symbols
    a = Automaton.nfa(states, alphabet, trans, states, states)
    return a, allowed
