"""Command-line entry point.

Exit codes: 0 success or satisfiable, 1 unsatisfiable or pruned to failure,
2 usage or input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
import warnings

from . import formats
from .cnf import CnfFormula, unit_propagate
from .crosscheck import grammar_results, grammar_suite, regular_results, regular_suite
from .grammar import build_andor_dag, encode_grammar_sat, propagate_grammar_cyk, propagate_grammar_earley
from .language import EmptyLanguageWarning, InputError, to_cnf
from .mip import encode_grammar_mip, encode_regular_flow, write_lp
from .oracle import OracleGuardError, enumerate_language, gac_oracle
from .regular import (GEQ, LEQ, encode_cyclic, encode_regular_sat,
                      encode_soft_edit, encode_soft_hamming, encode_state_count, project_domains,
                      propagate_regular, unfold)
from .satsolver import SolverError, run_solver
from .scheduling import ScheduleError, build_instance, decode_solution

log = logging.getLogger("langcons")

OK, UNSAT, USAGE, INTERNAL = 0, 1, 2, 3


class InvariantViolation(RuntimeError):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _spec(args):
    if bool(args.automaton) == bool(args.grammar):
        raise InputError("give exactly one of --automaton or --grammar")
    if args.automaton:
        a = formats.parse_automaton(_read(args.automaton), args.automaton)
        return a, a.alphabet
    g = formats.parse_grammar(_read(args.grammar), args.grammar)
    return g, g.terminals


def _domains(args, alphabet):
    return formats.parse_domains(args.domains, alphabet, args.n)


def _cnf_status(cnf: CnfFormula) -> int:
    return UNSAT if cnf.failed else OK


def cmd_compile_regular(args) -> int:
    a = formats.parse_automaton(_read(args.file), args.file)
    d = _domains(args, a.alphabet)
    if args.soft and args.cyclic:
        raise InputError("--soft and --cyclic cannot be combined")
    if args.soft == "hamming":
        cnf = encode_soft_hamming(a, d, args.budget)
    elif args.soft == "edit":
        cnf = encode_soft_edit(a, d, args.budget)
    elif args.cyclic:
        cnf = encode_cyclic(a, d)
    else:
        g = unfold(a, d)
        cnf = encode_regular_sat(g, amo=args.amo)
        for spec in args.visits or ():
            q, op, bound = _visit_spec(spec)
            encode_state_count(cnf, g, q, bound, op)
    _emit(cnf.to_dimacs(), args.out)
    return _cnf_status(cnf)


def _visit_spec(spec: str):
    for op in (LEQ, GEQ):
        if op in spec:
            q, bound = spec.split(op, 1)
            if not bound.strip().isdigit():
                break
            return q.strip(), op, int(bound)
    raise InputError(f"--visits expects STATE<=K or STATE>=K, got {spec!r}")


def cmd_compile_grammar(args) -> int:
    g = formats.parse_grammar(_read(args.file), args.file)
    d = _domains(args, g.terminals)
    dag = build_andor_dag(to_cnf(g), d)
    if args.dag:
        with open(args.dag, "w") as fh:
            fh.write(dag.dump())
    cnf = encode_grammar_sat(dag, amo=args.amo)
    _emit(cnf.to_dimacs(), args.out)
    return _cnf_status(cnf)


def cmd_propagate(args) -> int:
    spec, alphabet = _spec(args)
    d = _domains(args, alphabet)
    if args.automaton:
        g = unfold(spec, d)
        if args.method == "sat":
            cnf = encode_regular_sat(g)
            out = project_domains(cnf, unit_propagate(cnf), d)
        else:
            out = propagate_regular(g, d)
    else:
        if args.method == "earley":
            out = propagate_grammar_earley(spec, d)
        elif args.method == "sat":
            cnf = encode_grammar_sat(build_andor_dag(to_cnf(spec), d))
            out = project_domains(cnf, unit_propagate(cnf), d)
        else:
            out = propagate_grammar_cyk(to_cnf(spec), d)
    print(f"input:  {d}")
    print(f"pruned: {out}")
    return UNSAT if out.failed else OK


def cmd_check_gac(args) -> int:
    if args.automaton or args.grammar:
        spec, alphabet = _spec(args)
        d = _domains(args, alphabet)
        res = regular_results(spec, d) if args.automaton else grammar_results(spec, d)
        for name, dom in res.items():
            print(f"{name:>16}: {dom}")
        vals = list(res.values())
        if any(v.candidates != vals[0].candidates for v in vals):
            print("MISMATCH")
            return INTERNAL
        print("agree")
        return OK
    bad = []
    total = 0
    for suite in (regular_suite, grammar_suite):
        mism, count = suite(args.count, args.seed)
        bad.extend(mism)
        total += count
    for m in bad:
        print(m)
    print(f"{total - len(bad)}/{total} instances agree")
    return INTERNAL if bad else OK


def cmd_schedule(args) -> int:
    inst = formats.parse_instance(_read(args.file), args.file)
    cnf = build_instance(inst, symmetry_breaking=args.symmetry_break)
    text = cnf.to_dimacs()
    if args.out:
        _emit(text, args.out)
    if not args.solver:
        if not args.out:
            _emit(text, None)
        return _cnf_status(cnf)
    if cnf.failed:
        print("UNSATISFIABLE (screened before solving)")
        return UNSAT
    path = args.out
    tmp = None
    if not path:
        fd, tmp = tempfile.mkstemp(suffix=".cnf")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        path = tmp
    try:
        result = run_solver(args.solver, path)
    finally:
        if tmp:
            os.unlink(tmp)
    if not result.sat:
        print("UNSATISFIABLE")
        return UNSAT
    try:
        table = decode_solution(cnf, result.model, inst)
    except ScheduleError as exc:
        raise InvariantViolation(f"decoded schedule is invalid: {exc}") from exc
    print(table.format())
    return OK


def cmd_emit_mip(args) -> int:
    spec, alphabet = _spec(args)
    d = _domains(args, alphabet)
    if args.automaton:
        model = encode_regular_flow(unfold(spec, d))
    else:
        model = encode_grammar_mip(build_andor_dag(to_cnf(spec), d))
    _emit(write_lp(model), args.out)
    return UNSAT if model.failed else OK


def cmd_oracle(args) -> int:
    spec, alphabet = _spec(args)
    d = _domains(args, alphabet)
    sample = enumerate_language(spec, d)
    for s in sample.strings:
        print(" ".join(s) if s else "(empty string)")
    print(f"# {len(sample)} strings")
    gac = gac_oracle(sample, d)
    print(f"# gac: {gac}")
    return UNSAT if not sample.strings else OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="langcons", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def domain_flags(p):
        p.add_argument("--n", type=int, help="sequence length (full domains)")
        p.add_argument("--domains", help="per-position values, e.g. 'r,w;r;*'")

    def spec_flags(p):
        p.add_argument("--automaton", help="automaton file")
        p.add_argument("--grammar", help="grammar file")

    p = sub.add_parser("compile-regular", help="automaton + domains -> DIMACS")
    p.add_argument("file")
    domain_flags(p)
    p.add_argument("--soft", choices=("hamming", "edit"))
    p.add_argument("--budget", type=int, default=0, help="distance budget N for --soft")
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--visits", action="append", help="bound state visits, e.g. 'q3<=1'")
    p.add_argument("--amo", choices=("pairwise", "sequential"), default="pairwise")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile_regular)

    p = sub.add_parser("compile-grammar", help="grammar + domains -> DIMACS")
    p.add_argument("file")
    domain_flags(p)
    p.add_argument("--amo", choices=("pairwise", "sequential"), default="pairwise")
    p.add_argument("--dag", help="also write the AND/OR DAG dump here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile_grammar)

    p = sub.add_parser("propagate", help="print GAC-pruned domains")
    spec_flags(p)
    domain_flags(p)
    p.add_argument("--method", choices=("dp", "cyk", "earley", "sat"), default="dp",
                   help="dp/cyk: dynamic programming; earley: grammar only; sat: unit propagation")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("check-gac", help="propagators versus the brute-force oracle")
    spec_flags(p)
    domain_flags(p)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check_gac)

    p = sub.add_parser("schedule", help="shift instance -> DIMACS, optionally solve and decode")
    p.add_argument("file")
    p.add_argument("--solver", help="solver command template, e.g. 'cadical {file}'")
    p.add_argument("--symmetry-break", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("emit-mip", help="automaton/grammar + domains -> LP file")
    spec_flags(p)
    domain_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_emit_mip)

    p = sub.add_parser("oracle", help="enumerate the language inside the domains")
    spec_flags(p)
    domain_flags(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always", EmptyLanguageWarning)
            return args.func(args)
    except (InputError, OracleGuardError, SolverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
