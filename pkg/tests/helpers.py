from pysat.solvers import Solver

from langcons.satsolver import solve_clauses


def all_models(cnf, project):
    """Distinct projections of every model, enumerated with blocking clauses."""
    seen = set()
    if cnf.failed:
        return seen
    with Solver(name="cadical153", bootstrap_with=cnf.clauses) as s:
        while s.solve():
            model = set(lit for lit in s.get_model() if lit > 0)
            seen.add(project(model))
            s.add_clause([-v if v in model else v for v in range(1, cnf.num_vars + 1)])
    return seen


def decode(cnf, n, alphabet, model, scope=()):
    return tuple(v for t in range(n) for v in alphabet.symbols
                 if cnf.varmap[scope + ("x", t, v)] in model)


def satisfiable(cnf):
    return not cnf.failed and solve_clauses(cnf.clauses).sat
