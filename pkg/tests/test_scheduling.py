import pytest

from helpers import all_models, decode
from langcons.language import InputError, earley_recognize
from langcons.satsolver import solve_clauses
from langcons.scheduling import (ScheduleError, ShiftInstance, build_instance, build_shift_grammar,
                                 decode_solution, employee_scope, schedule_from_strings,
                                 validate_schedule)


def desk_instance():
    n = 24
    demand = [[1 if 8 <= t <= 15 else 0] for t in range(n)]
    return ShiftInstance(n, 1, 2, demand, [4 <= t <= 19 for t in range(n)])


def solve(cnf):
    assert not cnf.failed
    result = solve_clauses(cnf.clauses)
    assert result.sat
    return result.model


def test_grammar_size_for_one_activity():
    g = build_shift_grammar(1, 24, (True,) * 24)
    # S: 2, R: 2, L: 2, A1: 2, W: 1, P: 1, F: 1
    assert len(g.productions) == 11
    assert len(build_shift_grammar(3, 24, (True,) * 24).productions) == 11 + 2 * 2 + 2


def test_full_and_part_time_bounds():
    g = build_shift_grammar(1, 48, (True,) * 48)
    s_rules = [p for p in g.productions if p.lhs == "S"]
    f_pred = next(o.pred for p in s_rules for o in p.rhs if o.symbol == "F")
    p_pred = next(o.pred for p in s_rules for o in p.rhs if o.symbol == "P")
    assert not f_pred(0, 29) and f_pred(0, 30)
    assert p_pred(0, 24) and not p_pred(0, 25)


def test_shift_strings():
    g = build_shift_grammar(1, 15, (True,) * 15)
    assert earley_recognize(g, ["r"] + ["a1"] * 6 + ["b"] + ["a1"] * 6 + ["r"])
    g9 = build_shift_grammar(1, 9, (True,) * 9)
    assert not earley_recognize(g9, ["r"] + ["a1"] * 3 + ["b"] + ["a1"] * 3 + ["r"])


def test_full_time_shift_shape():
    n = 40
    g = build_shift_grammar(1, n, (True,) * n)
    part = ["a1"] * 6 + ["b"] + ["a1"] * 6
    row = ["r"] + part + ["l"] * 4 + part + ["a1"] + ["r"] * 8
    assert len(row) == n
    assert earley_recognize(g, row)
    assert not earley_recognize(g, row[:14] + ["l"] * 3 + ["a1"] + row[18:])


def test_open_hours_forbid_work_outside():
    n = 16
    mask = [2 <= t <= 14 for t in range(n)]
    g = build_shift_grammar(1, n, mask)
    inside = ["r", "r"] + ["a1"] * 6 + ["b"] + ["a1"] * 6 + ["r"]
    outside = ["r"] + ["a1"] * 6 + ["b"] + ["a1"] * 6 + ["r", "r"]
    assert earley_recognize(g, inside)
    assert not earley_recognize(g, outside)


def test_hand_witness_for_desk_instance():
    inst = desk_instance()
    emp1 = ["r"] * 4 + ["a1"] * 6 + ["b"] + ["a1"] * 6 + ["r"] * 7
    emp2 = ["r"] * 6 + ["a1"] * 6 + ["b"] + ["a1"] * 6 + ["r"] * 5
    validate_schedule(schedule_from_strings([emp1, emp2]), inst)


def test_desk_instance_solves_and_decodes():
    inst = desk_instance()
    cnf = build_instance(inst)
    table = decode_solution(cnf, solve(cnf), inst)
    assert len(table.rows) == 2
    for t in range(8, 16):
        assert any(row[t] == "a1" for row in table.rows)


def test_symmetry_breaking_keeps_instance_feasible():
    inst = desk_instance()
    cnf = build_instance(inst, symmetry_breaking=True)
    model = solve(cnf)
    table = decode_solution(cnf, model, inst)
    true = {lit for lit in model if lit > 0}
    bits = [tuple(cnf.varmap[employee_scope(j) + ("x", t, v)] in true
                  for t in range(24) for v in inst.alphabet.symbols) for j in range(2)]
    assert bits[0] <= bits[1]
    validate_schedule(table, inst)


def test_demand_above_staff_is_screened():
    inst = ShiftInstance(24, 1, 2, [[3 if t == 10 else 0] for t in range(24)], [True] * 24)
    assert build_instance(inst).failed


def test_zero_demand_needs_a_part_time_block():
    inst = ShiftInstance(24, 1, 1, [[0]] * 24, [True] * 24)
    cnf = build_instance(inst)
    row = decode_solution(cnf, solve(cnf), inst).rows[0]
    assert row != ("r",) * 24
    # too short for any shift
    short = ShiftInstance(12, 1, 1, [[0]] * 12, [True] * 12)
    assert not solve_clauses(build_instance(short).clauses).sat


def test_unique_instance_round_trips_to_witness():
    n = 15
    witness = ("r",) + ("a1",) * 6 + ("b",) + ("a1",) * 6 + ("r",)
    demand = [[1 if v == "a1" else 0] for v in witness]
    inst = ShiftInstance(n, 1, 1, demand, [1 <= t <= 13 for t in range(n)])
    cnf = build_instance(inst)
    rows = all_models(cnf, lambda m: decode(cnf, n, inst.alphabet, m, employee_scope(0)))
    assert rows == {witness}
    assert decode_solution(cnf, solve(cnf), inst).rows == (witness,)


def test_tampered_assignment_is_rejected():
    inst = desk_instance()
    cnf = build_instance(inst)
    model = list(solve(cnf))
    lit = cnf.varmap[employee_scope(0) + ("x", 0, "a1")]
    model[lit - 1] = lit  # r and a1 both set at slot 0
    with pytest.raises(ScheduleError):
        decode_solution(cnf, model, inst)


def test_validation_catches_short_staffing():
    inst = desk_instance()
    rest = ["r"] * 24
    with pytest.raises(ScheduleError):
        validate_schedule(schedule_from_strings([rest, rest]), inst)


def test_empty_employee_set():
    inst = ShiftInstance(24, 1, 0, [[0]] * 24, [True] * 24)
    cnf = build_instance(inst)
    table = decode_solution(cnf, [], inst)
    assert table.rows == ()
    assert table.format() == ""


def test_instance_validation():
    with pytest.raises(InputError):
        ShiftInstance(3, 1, 1, [[0]] * 2, [True] * 3)
    with pytest.raises(InputError):
        ShiftInstance(2, 1, 1, [[-1], [0]], [True] * 2)
    with pytest.raises(InputError):
        build_shift_grammar(0, 4, [True] * 4)


def test_max_staff_caps_coverage():
    inst = desk_instance()
    # both employees work at least 12 activity slots inside 16 open slots, so they must overlap
    cnf = build_instance(inst, max_staff=[[1]] * 24)
    assert not solve_clauses(cnf.clauses).sat
    cnf = build_instance(inst, max_staff=[[2]] * 24)
    validate_schedule(decode_solution(cnf, solve(cnf), inst), inst)
