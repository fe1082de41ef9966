"""CNF container shared by all SAT encoders, DIMACS I/O and unit propagation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

Atom = tuple


def format_atom(atom: Atom) -> str:
    return " ".join(str(part) for part in atom)


@dataclass
class CnfFormula:
    """Clauses over integer variables plus the meaning of every variable.

    Variables are created on demand through :meth:`var`, which keeps the
    variable numbering in creation order.  Encoders append to a formula they
    are handed, so several constraints over the same sequence share literals.
    """

    clauses: list[list[int]] = field(default_factory=list)
    varmap: dict[Hashable, int] = field(default_factory=dict)
    failed: bool = False
    atoms: list = field(default_factory=list, repr=False)
    # scopes whose exactly-one-value clauses were already emitted
    positioned: set = field(default_factory=set, repr=False)

    @property
    def num_vars(self) -> int:
        return len(self.atoms)

    def var(self, atom: Atom) -> int:
        v = self.varmap.get(atom)
        if v is None:
            self.atoms.append(atom)
            v = self.varmap[atom] = len(self.atoms)
        return v

    def lookup(self, atom: Atom) -> int | None:
        return self.varmap.get(atom)

    def add(self, clause: Iterable[int]) -> None:
        if self.failed:
            return
        clause = list(clause)
        if not clause:
            self.fail()
            return
        self.clauses.append(clause)

    def fail(self) -> None:
        """Mark the formula as proved unsatisfiable: one empty clause remains."""
        self.failed = True
        self.clauses = [[]]

    def to_dimacs(self) -> str:
        lines = [f"c map {idx} {format_atom(atom)}" for idx, atom in enumerate(self.atoms, 1)]
        if self.failed:
            lines.append("c failed")
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, c + [0])) for c in self.clauses)
        return "\n".join(lines) + "\n"

    def true_atoms(self, model: Iterable[int]) -> set:
        return {self.atoms[lit - 1] for lit in model if lit > 0 and lit <= len(self.atoms)}


def read_dimacs(text: str) -> tuple[int, list[list[int]]]:
    num_vars = 0
    clauses: list[list[int]] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            num_vars = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        clauses.append(current)
    return num_vars, clauses


# -- small clause helpers ------------------------------------------------------


def at_most_one(cnf: CnfFormula, lits: Sequence[int], scheme: str = "pairwise", tag=()) -> None:
    if scheme == "pairwise":
        for a in range(len(lits)):
            for b in range(a + 1, len(lits)):
                cnf.add([-lits[a], -lits[b]])
    elif scheme == "sequential":
        from .cardinality import encode_cardinality_leq
        encode_cardinality_leq(cnf, lits, 1, tag=tag)
    else:
        raise ValueError(f"unknown at-most-one scheme {scheme!r}")


def exactly_one(cnf: CnfFormula, lits: Sequence[int], scheme: str = "pairwise", tag=()) -> None:
    cnf.add(lits)
    at_most_one(cnf, lits, scheme, tag)


def position_vars(cnf: CnfFormula, n: int, alphabet, scope: tuple = (),
                  amo: str = "pairwise") -> list[list[int]]:
    """Value literals ``x(t, v)``; exactly-one clauses are emitted once per scope."""
    x = [[cnf.var(scope + ("x", t, v)) for v in alphabet.symbols] for t in range(n)]
    if scope not in cnf.positioned:
        cnf.positioned.add(scope)
        for t in range(n):
            exactly_one(cnf, x[t], amo, tag=scope + ("amo-x", t))
    return x


# -- unit propagation ----------------------------------------------------------


class UnitPropagator:
    """Watched-literal unit propagation over a fixed clause set.

    Not a solver: :meth:`propagate` only computes the unit-propagation
    fixpoint under a set of assumptions and reports a conflict.
    """

    def __init__(self, clauses: Sequence[Sequence[int]], num_vars: int = 0):
        self.num_vars = max([num_vars] + [abs(l) for c in clauses for l in c])
        self.clauses = [list(dict.fromkeys(c)) for c in clauses]
        self.units: list[int] = []
        self.empty = False
        self.watches: dict[int, list[int]] = {}
        for idx, c in enumerate(self.clauses):
            if not c:
                self.empty = True
            elif len(c) == 1:
                self.units.append(c[0])
            else:
                self.watches.setdefault(c[0], []).append(idx)
                self.watches.setdefault(c[1], []).append(idx)

    def propagate(self, assumptions: Iterable[int] = ()) -> dict[int, bool] | None:
        """Return the implied assignment ``var -> value``, or None on conflict."""
        if self.empty:
            return None
        value: dict[int, bool] = {}
        trail: list[int] = []

        def assign(lit: int) -> bool:
            v = abs(lit)
            want = lit > 0
            have = value.get(v)
            if have is None:
                value[v] = want
                trail.append(lit)
                return True
            return have == want

        for lit in list(assumptions) + self.units:
            if not assign(lit):
                return None
        # watch lists are copied per call so the propagator stays reusable
        watches = {lit: list(idxs) for lit, idxs in self.watches.items()}
        clauses = [list(c) for c in self.clauses]
        head = 0
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches.get(false_lit)
            if not watching:
                continue
            keep = []
            i = 0
            conflict = False
            while i < len(watching):
                idx = watching[i]
                i += 1
                c = clauses[idx]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                other = c[0]
                ov = value.get(abs(other))
                if ov is not None and ov == (other > 0):
                    keep.append(idx)
                    continue
                for k in range(2, len(c)):
                    lit = c[k]
                    lv = value.get(abs(lit))
                    if lv is None or lv == (lit > 0):
                        c[1], c[k] = c[k], c[1]
                        watches.setdefault(c[1], []).append(idx)
                        break
                else:
                    keep.append(idx)
                    if not assign(other):
                        conflict = True
                        keep.extend(watching[i:])
                        break
            watches[false_lit] = keep
            if conflict:
                return None
        return value


def unit_propagate(cnf: CnfFormula, assumptions: Iterable[int] = ()) -> dict[int, bool] | None:
    return UnitPropagator(cnf.clauses, cnf.num_vars).propagate(assumptions)
