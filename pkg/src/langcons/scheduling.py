"""Shift scheduling with one restricted-grammar constraint per employee.

Each day has ``slots`` periods of 15 minutes.  An employee's row spells a
string over the activities ``a1..am``, break ``b``, lunch ``l`` and rest ``r``.
Demand ``d(t, a)`` asks for at least that many employees on activity ``a`` in
slot ``t``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .cardinality import encode_cardinality_geq, encode_cardinality_leq
from .cnf import CnfFormula, position_vars
from .grammar import build_andor_dag, encode_grammar_sat
from .language import (Alphabet, InputError, RestrictedGrammar, SequenceDomains, SpanPredicate,
                       earley_recognize, to_cnf)

SLOT_MINUTES = 15

# span bounds in slots
WORK_MIN = 4
LUNCH = 4
PART_TIME = (13, 24)
FULL_TIME = (30, 38)


class ScheduleError(ValueError):
    """A decoded schedule violates the grammar or the demand."""


def activity_names(m: int) -> list[str]:
    return [f"a{k}" for k in range(1, m + 1)]


def shift_alphabet(m: int) -> Alphabet:
    return Alphabet(tuple(activity_names(m)) + ("b", "l", "r"))


def build_shift_grammar(m: int, n: int, open_mask: Sequence) -> RestrictedGrammar:
    if m < 1:
        raise InputError("at least one activity is needed")
    if len(open_mask) != n:
        raise InputError(f"open mask has length {len(open_mask)}, expected {n}")
    part = SpanPredicate.length(*PART_TIME)
    full = SpanPredicate.length(*FULL_TIME)
    lunch = SpanPredicate.length(LUNCH, LUNCH)
    work = SpanPredicate.at_least(WORK_MIN, n)
    is_open = SpanPredicate.open_hours(open_mask)
    rules = [
        ("S", ["R", ("P", part), "R"]),
        ("S", ["R", ("F", full), "R"]),
        ("R", ["r", "R"]),
        ("R", ["r"]),
        ("L", ["l", "L"]),
        ("L", ["l"]),
    ]
    for a in activity_names(m):
        nt = a.upper()
        rules.append((nt, [a, nt], is_open))
        rules.append((nt, [a], is_open))
    for a in activity_names(m):
        rules.append(("W", [a.upper()], work))
    rules.append(("P", ["W", "b", "W"]))
    rules.append(("F", ["P", ("L", lunch), "P"]))
    return RestrictedGrammar.from_rules("S", rules, terminals=shift_alphabet(m))


@dataclass(frozen=True)
class ShiftInstance:
    slots: int
    activities: int
    employees: int
    demand: tuple[tuple[int, ...], ...]  # demand[t][k] for activity a(k+1)
    open: tuple[bool, ...]
    slot_minutes: int = SLOT_MINUTES

    def __post_init__(self):
        object.__setattr__(self, "demand", tuple(tuple(int(x) for x in row) for row in self.demand))
        object.__setattr__(self, "open", tuple(bool(b) for b in self.open))
        if len(self.demand) != self.slots or any(len(row) != self.activities for row in self.demand):
            raise InputError("demand must be a slots x activities matrix")
        if any(x < 0 for row in self.demand for x in row):
            raise InputError("demand must be non-negative")
        if len(self.open) != self.slots:
            raise InputError("open mask length must equal the number of slots")
        if self.slot_minutes != SLOT_MINUTES:
            raise InputError("slots are 15 minutes long")

    @property
    def alphabet(self) -> Alphabet:
        return shift_alphabet(self.activities)

    def grammar(self) -> RestrictedGrammar:
        return build_shift_grammar(self.activities, self.slots, self.open)


def employee_scope(j: int) -> tuple:
    return ("emp", j)


def _lex_leq(cnf: CnfFormula, a: list[int], b: list[int], tag: tuple) -> None:
    # eq[i]: the first i bits agree
    eq = [cnf.var(tag + ("eq", i)) for i in range(len(a) + 1)]
    cnf.add([eq[0]])
    for i, (ai, bi) in enumerate(zip(a, b)):
        cnf.add([-eq[i], -ai, bi])
        cnf.add([-eq[i], -ai, -bi, eq[i + 1]])
        cnf.add([-eq[i], ai, bi, eq[i + 1]])


def build_instance(inst: ShiftInstance, symmetry_breaking: bool = False,
                   max_staff: Sequence[Sequence[int]] | None = None) -> CnfFormula:
    """One grammar constraint per employee plus the per-slot demand counters."""
    cnf = CnfFormula()
    alphabet = inst.alphabet
    n = inst.slots
    rows = [position_vars(cnf, n, alphabet, employee_scope(j)) for j in range(inst.employees)]
    if any(x > inst.employees for row in inst.demand for x in row):
        cnf.fail()
        return cnf
    grammar = to_cnf(inst.grammar())
    dag = build_andor_dag(grammar, SequenceDomains.full(alphabet, n))
    for j in range(inst.employees):
        encode_grammar_sat(dag, cnf, employee_scope(j))
    for t in range(n):
        for k in range(inst.activities):
            lits = [rows[j][t][k] for j in range(inst.employees)]
            encode_cardinality_geq(cnf, lits, inst.demand[t][k], ("demand", t, k))
            if max_staff is not None:
                encode_cardinality_leq(cnf, lits, max_staff[t][k], ("cap", t, k))
    if symmetry_breaking:
        flat = [[lit for ts in row for lit in ts] for row in rows]
        for j in range(inst.employees - 1):
            _lex_leq(cnf, flat[j], flat[j + 1], ("lex", j))
    return cnf


@dataclass(frozen=True)
class ScheduleTable:
    rows: tuple[tuple[str, ...], ...]

    def format(self) -> str:
        if not self.rows:
            return ""
        width = max(len(v) for row in self.rows for v in row)
        label = len(f"e{len(self.rows) - 1}")
        lines = []
        for j, row in enumerate(self.rows):
            lines.append(f"e{j}".ljust(label) + " | " + " ".join(v.ljust(width) for v in row).rstrip())
        return "\n".join(lines)


def _truth(assignment) -> set[int]:
    if isinstance(assignment, dict):
        return {v for v, val in assignment.items() if val}
    return {lit for lit in assignment if lit > 0}


def validate_schedule(table: ScheduleTable, inst: ShiftInstance) -> None:
    grammar = inst.grammar()
    for j, row in enumerate(table.rows):
        if len(row) != inst.slots:
            raise ScheduleError(f"row {j} has length {len(row)}")
        if not earley_recognize(grammar, row):
            raise ScheduleError(f"row {j} is not a valid shift: {' '.join(row)}")
    names = activity_names(inst.activities)
    for t in range(inst.slots):
        for k, a in enumerate(names):
            staffed = sum(1 for row in table.rows if row[t] == a)
            if staffed < inst.demand[t][k]:
                raise ScheduleError(f"slot {t}: {staffed} on {a}, demand {inst.demand[t][k]}")


def decode_solution(cnf: CnfFormula, assignment, inst: ShiftInstance) -> ScheduleTable:
    """Read rows off the true value literals and re-verify them."""
    true = _truth(assignment)
    rows = []
    for j in range(inst.employees):
        row = []
        for t in range(inst.slots):
            vals = [v for v in inst.alphabet.symbols
                    if cnf.varmap[employee_scope(j) + ("x", t, v)] in true]
            if len(vals) != 1:
                raise ScheduleError(f"employee {j}, slot {t}: {len(vals)} values set")
            row.append(vals[0])
        rows.append(tuple(row))
    table = ScheduleTable(tuple(rows))
    validate_schedule(table, inst)
    return table


def schedule_from_strings(rows: Iterable[Sequence[str]]) -> ScheduleTable:
    return ScheduleTable(tuple(tuple(r) for r in rows))
