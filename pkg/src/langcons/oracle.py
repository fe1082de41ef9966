"""Brute-force ground truth by enumerating the domain box."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .language import (Automaton, RestrictedGrammar, SequenceDomains, accepts, earley_recognize,
                       nfa_accepts)

MAX_BOX = 10 ** 6


class OracleGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class LanguageSample:
    n: int
    strings: tuple[tuple[str, ...], ...]

    def __len__(self):
        return len(self.strings)

    def __contains__(self, s) -> bool:
        return tuple(s) in set(self.strings)


def _member(spec, s) -> bool:
    if isinstance(spec, Automaton):
        return accepts(spec, s)
    if isinstance(spec, RestrictedGrammar):
        return earley_recognize(spec, s)
    raise TypeError(f"cannot enumerate the language of {type(spec).__name__}")


def _box(d: SequenceDomains):
    size = d.box_size()
    if size > MAX_BOX:
        raise OracleGuardError(f"domain box has {size} strings (limit {MAX_BOX})")
    return itertools.product(*(d.ordered(t) for t in range(d.n)))


def enumerate_language(spec, d: SequenceDomains) -> LanguageSample:
    """Every string of the box accepted by ``spec``, in lexicographic order."""
    return LanguageSample(d.n, tuple(s for s in _box(d) if _member(spec, s)))


def gac_oracle(sample: LanguageSample, d: SequenceDomains) -> SequenceDomains:
    if not sample.strings:
        return SequenceDomains.failure(d.alphabet, d.n)
    support = [set() for _ in range(d.n)]
    for s in sample.strings:
        for t, v in enumerate(s):
            support[t].add(v)
    return SequenceDomains(d.alphabet, tuple(frozenset(x) for x in support))


def hamming(a: Sequence, b: Sequence) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def levenshtein(a: Sequence, b: Sequence) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def min_distance_oracle(spec, s: Sequence[str], metric: str, max_slack: int = 2) -> float:
    """Distance from ``s`` to the language; ``math.inf`` when none is in range.

    Edit distance only looks at accepted strings whose length is within
    ``max_slack`` of ``len(s)``.
    """
    s = tuple(s)
    alphabet = spec.alphabet if isinstance(spec, Automaton) else spec.terminals
    if metric == "hamming":
        lengths = [len(s)]
        dist = hamming
    elif metric == "edit":
        lengths = range(max(0, len(s) - max_slack), len(s) + max_slack + 1)
        dist = levenshtein
    else:
        raise ValueError(f"unknown metric {metric!r}")
    best = math.inf
    for length in lengths:
        for w in enumerate_language(spec, SequenceDomains.full(alphabet, length)).strings:
            best = min(best, dist(s, w))
            if best == 0:
                return 0
    return best


def cyclic_accepts(a: Automaton, s: Sequence[str]) -> bool:
    """Some state ``k`` has a run over ``s`` from ``k`` back to ``k``."""
    for k in a.states:
        ring = Automaton.nfa(a.states, a.alphabet, a.transitions, [k], [k])
        if nfa_accepts(ring, s):
            return True
    return False


def cyclic_pairs_ok(allowed: set, s: Sequence[str]) -> bool:
    """Pairwise check of every adjacent pair, the wrap-around pair included."""
    n = len(s)
    return all((s[t], s[(t + 1) % n]) in allowed for t in range(n))
