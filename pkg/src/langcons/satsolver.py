"""External SAT solver invocation.

``run_solver`` runs any DIMACS solver as a subprocess and parses the
competition output (``s`` and ``v`` lines).  ``python -m langcons.satsolver
FILE`` is a ready-made solver of that kind, backed by PySAT.
"""

from __future__ import annotations

import shlex
import subprocess
import sys
from dataclasses import dataclass

from .cnf import read_dimacs

SAT = "SATISFIABLE"
UNSAT = "UNSATISFIABLE"
UNKNOWN = "UNKNOWN"


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverResult:
    status: str
    model: tuple[int, ...] = ()

    @property
    def sat(self) -> bool:
        return self.status == SAT


def default_solver_command() -> str:
    return f"{shlex.quote(sys.executable)} -m langcons.satsolver {{file}}"


def solver_argv(template: str, path: str) -> list[str]:
    """Split the template and substitute the file path into argv elements only."""
    argv = shlex.split(template)
    if not argv:
        raise SolverError("empty solver command")
    if any("{file}" in tok for tok in argv):
        return [tok.replace("{file}", path) for tok in argv]
    return argv + [path]


def parse_solver_output(text: str, returncode: int | None = None) -> SolverResult:
    status = None
    model: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip().upper()
            status = SAT if word == SAT else UNSAT if word == UNSAT else UNKNOWN
        elif line.startswith("v "):
            model.extend(int(tok) for tok in line[2:].split() if tok != "0")
    if status is None:
        status = {10: SAT, 20: UNSAT}.get(returncode, UNKNOWN)
    return SolverResult(status, tuple(model))


def run_solver(template: str, path: str, timeout: float | None = None) -> SolverResult:
    argv = solver_argv(template, path)
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError as exc:
        raise SolverError(f"solver not found: {argv[0]}") from exc
    except subprocess.TimeoutExpired as exc:
        raise SolverError("solver timed out") from exc
    result = parse_solver_output(proc.stdout, proc.returncode)
    if result.status == UNKNOWN:
        raise SolverError(f"solver gave no verdict (exit {proc.returncode}): {proc.stderr.strip()}")
    return result


def solve_clauses(clauses, assumptions=()) -> SolverResult:
    from pysat.solvers import Solver

    if any(len(c) == 0 for c in clauses):
        return SolverResult(UNSAT)
    with Solver(name="cadical153", bootstrap_with=clauses) as solver:
        if solver.solve(assumptions=list(assumptions)):
            return SolverResult(SAT, tuple(solver.get_model()))
        return SolverResult(UNSAT)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: python -m langcons.satsolver FILE.cnf", file=sys.stderr)
        return 2
    with open(argv[0]) as fh:
        _, clauses = read_dimacs(fh.read())
    result = solve_clauses(clauses)
    print(f"s {result.status}")
    if result.sat:
        print("v " + " ".join(map(str, result.model)) + " 0")
        return 10
    return 20


if __name__ == "__main__":
    sys.exit(main())
