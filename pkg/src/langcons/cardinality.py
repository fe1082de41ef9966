"""Sequential-counter cardinality constraints (Sinz 2005 register encoding)."""

from __future__ import annotations

from typing import Sequence

from .cnf import CnfFormula


def _group(cnf: CnfFormula, tag: tuple) -> tuple:
    # the current variable count makes an unused, deterministic group name
    return tag if tag else ("ctr", cnf.num_vars)


def encode_cardinality_leq(cnf: CnfFormula, lits: Sequence[int], k: int, tag: tuple = ()) -> None:
    """At most ``k`` of ``lits`` are true."""
    if k < 0:
        raise ValueError(f"cardinality bound must be non-negative, got {k}")
    n = len(lits)
    if k >= n:
        return
    if k == 0:
        for x in lits:
            cnf.add([-x])
        return
    group = _group(cnf, tag)
    r = [[cnf.var(group + ("r", i, j)) for j in range(k)] for i in range(n - 1)]
    cnf.add([-lits[0], r[0][0]])
    for j in range(1, k):
        cnf.add([-r[0][j]])
    for i in range(1, n - 1):
        x = lits[i]
        cnf.add([-x, r[i][0]])
        cnf.add([-r[i - 1][0], r[i][0]])
        for j in range(1, k):
            cnf.add([-x, -r[i - 1][j - 1], r[i][j]])
            cnf.add([-r[i - 1][j], r[i][j]])
        cnf.add([-x, -r[i - 1][k - 1]])
    cnf.add([-lits[n - 1], -r[n - 2][k - 1]])


def encode_cardinality_geq(cnf: CnfFormula, lits: Sequence[int], k: int, tag: tuple = ()) -> None:
    """At least ``k`` of ``lits`` are true; ``k > len(lits)`` fails the formula."""
    n = len(lits)
    if k <= 0:
        return
    if k > n:
        cnf.fail()
        return
    encode_cardinality_leq(cnf, [-x for x in lits], n - k, tag)
