"""Regular constraint: layered unfolding, ternary decomposition, SAT encodings.

The automaton is unrolled over the ``n`` positions of the sequence.  Layer
``t`` holds the automaton states that can be occupied after ``t`` symbols on
some accepting path that stays inside the domains, and every arc
``(t, q, v, q2)`` is one surviving transition instance.  The state literals of
the SAT encoding are exposed explicitly so that other constraints (for example
a cardinality bound on the visits to one state) can be posted on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cardinality import encode_cardinality_geq, encode_cardinality_leq
from .cnf import CnfFormula, exactly_one, position_vars
from .language import Automaton, InputError, SequenceDomains

LEQ = "<="
GEQ = ">="


class Infeasible(Exception):
    """The constraint has no solution within the domains."""


@dataclass(frozen=True)
class Arc:
    t: int
    src: str
    symbol: str
    dst: str


@dataclass(frozen=True)
class LayeredGraph:
    automaton: Automaton
    n: int
    layers: tuple[tuple[str, ...], ...]
    arcs: tuple[Arc, ...]

    @property
    def feasible(self) -> bool:
        return bool(self.layers[self.n])

    def arcs_at(self, t: int) -> list[Arc]:
        return [arc for arc in self.arcs if arc.t == t]

    @property
    def alphabet(self):
        return self.automaton.alphabet


def _check_alphabet(a: Automaton, d: SequenceDomains) -> None:
    if tuple(a.alphabet.symbols) != tuple(d.alphabet.symbols):
        raise InputError("domain alphabet differs from automaton alphabet")


def _prune(a: Automaton, n: int, start: Iterable[str], end: Iterable[str], arcs: list[Arc]):
    """Forward/backward reachability; keeps arcs on some start-to-end path."""
    reach = [set() for _ in range(n + 1)]
    reach[0] = set(start)
    by_layer: list[list[Arc]] = [[] for _ in range(n)]
    for arc in arcs:
        by_layer[arc.t].append(arc)
    fwd: list[list[Arc]] = [[] for _ in range(n)]
    for t in range(n):
        for arc in by_layer[t]:
            if arc.src in reach[t]:
                fwd[t].append(arc)
                reach[t + 1].add(arc.dst)
    alive = [set() for _ in range(n + 1)]
    alive[n] = reach[n] & set(end)
    kept: list[Arc] = []
    for t in range(n - 1, -1, -1):
        for arc in fwd[t]:
            if arc.dst in alive[t + 1]:
                alive[t].add(arc.src)
                kept.append(arc)
    if n == 0:
        alive[0] = reach[0] & set(end)
    if not alive[n]:
        return tuple(() for _ in range(n + 1)), ()
    order = {q: k for k, q in enumerate(a.states)}
    sym = a.alphabet.index
    kept.sort(key=lambda arc: (arc.t, order[arc.src], sym(arc.symbol), order[arc.dst]))
    layers = tuple(tuple(a.sorted_states(layer)) for layer in alive)
    return layers, tuple(kept)


def unfold(a: Automaton, d: SequenceDomains, initial=None, finals=None) -> LayeredGraph:
    """Unroll ``a`` over the domains and prune to accepting paths.

    ``initial``/``finals`` override the automaton's own state sets (used by
    the cyclic encoding).  An infeasible graph has every layer empty.
    """
    _check_alphabet(a, d)
    n = d.n
    start = a.initial if initial is None else frozenset(initial)
    end = a.finals if finals is None else frozenset(finals)
    arcs = []
    frontier = set(start)
    for t in range(n):
        nxt = set()
        for q in frontier:
            for v in d.candidates[t]:
                for q2 in a.successors(q, v):
                    arcs.append(Arc(t, q, v, q2))
                    nxt.add(q2)
        frontier = nxt
    layers, kept = _prune(a, n, start, end, arcs)
    return LayeredGraph(a, n, layers, kept)


def decompose_ternary(g: LayeredGraph) -> list[frozenset]:
    """Allowed ``(state, value, next_state)`` tuples for each position."""
    if not g.feasible:
        raise Infeasible("no accepting path in the layered graph")
    return [frozenset((arc.src, arc.symbol, arc.dst) for arc in g.arcs_at(t)) for t in range(g.n)]


def propagate_regular(g: LayeredGraph, d: SequenceDomains) -> SequenceDomains:
    """GAC domains by forward/backward reachability over the arcs inside ``d``."""
    if d.n != g.n:
        raise InputError(f"domains have length {d.n}, graph has {g.n}")
    if d.failed or not g.feasible:
        return SequenceDomains.failure(d.alphabet, d.n)
    arcs = [arc for arc in g.arcs if arc.symbol in d.candidates[arc.t]]
    layers, kept = _prune(g.automaton, g.n, g.layers[0], g.layers[g.n], arcs)
    if not layers[g.n]:
        return SequenceDomains.failure(d.alphabet, d.n)
    support = [set() for _ in range(g.n)]
    for arc in kept:
        support[arc.t].add(arc.symbol)
    return SequenceDomains(d.alphabet, tuple(frozenset(s) for s in support))


def encode_regular_sat(g: LayeredGraph, cnf: CnfFormula | None = None, scope: tuple = (),
                       amo: str = "pairwise") -> CnfFormula:
    """Transition-support CNF over value, state and arc literals.

    Every arc literal implies its two states and its value; every state with
    incoming (outgoing) arcs implies one of them; every value implies one of
    the arcs labelled with it.  Unit propagation on these clauses reproduces
    the forward/backward pruning of :func:`propagate_regular`.
    """
    cnf = CnfFormula() if cnf is None else cnf
    n = g.n
    x = position_vars(cnf, n, g.alphabet, scope, amo)
    if not g.feasible:
        cnf.fail()
        return cnf
    sym = g.alphabet.index
    s = [{q: cnf.var(scope + ("s", t, q)) for q in g.layers[t]} for t in range(n + 1)]
    y = {arc: cnf.var(scope + ("arc", arc.t, arc.src, arc.symbol, arc.dst)) for arc in g.arcs}
    for t in range(n + 1):
        exactly_one(cnf, list(s[t].values()), amo, tag=scope + ("amo-s", t))
    out = {}
    inc = {}
    lab = {}
    for arc, lit in y.items():
        cnf.add([-lit, s[arc.t][arc.src]])
        cnf.add([-lit, x[arc.t][sym(arc.symbol)]])
        cnf.add([-lit, s[arc.t + 1][arc.dst]])
        out.setdefault((arc.t, arc.src), []).append(lit)
        inc.setdefault((arc.t + 1, arc.dst), []).append(lit)
        lab.setdefault((arc.t, arc.symbol), []).append(lit)
    for t in range(n + 1):
        for q, lit in s[t].items():
            if t < n:
                cnf.add([-lit] + out.get((t, q), []))
            if t > 0:
                cnf.add([-lit] + inc.get((t, q), []))
    for t in range(n):
        for v in g.alphabet.symbols:
            cnf.add([-x[t][sym(v)]] + lab.get((t, v), []))
    return cnf


def domain_assumptions(cnf: CnfFormula, d: SequenceDomains, scope: tuple = ()) -> list[int]:
    """Negative value literals for everything outside ``d``."""
    lits = []
    for t in range(d.n):
        for v in d.alphabet.symbols:
            if v not in d.candidates[t]:
                lits.append(-cnf.varmap[scope + ("x", t, v)])
    return lits


def restrict_to_domains(cnf: CnfFormula, d: SequenceDomains, scope: tuple = ()) -> None:
    for lit in domain_assumptions(cnf, d, scope):
        cnf.add([lit])


def project_domains(cnf: CnfFormula, assignment: dict[int, bool] | None, d: SequenceDomains,
                    scope: tuple = ()) -> SequenceDomains:
    """Values whose literal is not false after propagation (None = conflict)."""
    if assignment is None:
        return SequenceDomains.failure(d.alphabet, d.n)
    cands = []
    for t in range(d.n):
        cands.append(frozenset(v for v in d.alphabet.symbols
                               if assignment.get(cnf.varmap[scope + ("x", t, v)]) is not False))
    out = SequenceDomains(d.alphabet, tuple(cands))
    return SequenceDomains.failure(d.alphabet, d.n) if out.failed else out


def encode_state_count(cnf: CnfFormula, g: LayeredGraph, q: str, bound: int, sense: str = LEQ,
                       scope: tuple = ()) -> CnfFormula:
    """Bound the number of layers in which the automaton sits in state ``q``.

    ``cnf`` must already hold :func:`encode_regular_sat` for ``g`` in the same
    scope; the bound is posted on its state literals.
    """
    if q not in g.automaton.states:
        raise InputError(f"unknown state {q!r}")
    if bound < 0:
        raise InputError("state-count bound must be non-negative")
    lits = [cnf.varmap[scope + ("s", t, q)] for t in range(g.n + 1) if q in g.layers[t]]
    tag = scope + ("count", q, sense, bound)
    if sense == LEQ:
        encode_cardinality_leq(cnf, lits, bound, tag)
    elif sense == GEQ:
        encode_cardinality_geq(cnf, lits, bound, tag)
    else:
        raise InputError(f"unknown sense {sense!r}")
    return cnf


def encode_soft_hamming(a: Automaton, d: SequenceDomains, budget: int,
                        cnf: CnfFormula | None = None, scope: tuple = ()) -> CnfFormula:
    """Some string in ``d`` lies within Hamming distance ``budget`` of L(a).

    A second, automaton-side string is constrained by the ordinary encoding;
    a mismatch literal per position is forced whenever the two strings differ
    there, and at most ``budget`` mismatch literals may be true.
    """
    if budget < 0:
        raise InputError("distance budget must be non-negative")
    _check_alphabet(a, d)
    cnf = CnfFormula() if cnf is None else cnf
    n = d.n
    x = position_vars(cnf, n, a.alphabet, scope)
    restrict_to_domains(cnf, d, scope)
    inner = scope + ("z",)
    z = position_vars(cnf, n, a.alphabet, inner)
    encode_regular_sat(unfold(a, SequenceDomains.full(a.alphabet, n)), cnf, inner)
    miss = [cnf.var(scope + ("miss", t)) for t in range(n)]
    for t in range(n):
        for k in range(len(a.alphabet)):
            cnf.add([-x[t][k], z[t][k], miss[t]])
    encode_cardinality_leq(cnf, miss, budget, scope + ("hamming",))
    return cnf


def encode_soft_edit(a: Automaton, d: SequenceDomains, budget: int,
                     cnf: CnfFormula | None = None, scope: tuple = ()) -> CnfFormula:
    """Some string in ``d`` lies within edit distance ``budget`` of L(a).

    Between consecutive positions the automaton may take up to ``budget``
    extra steps (insertions, one cost literal each); each position step is a
    match (free), a substitution or a deletion (one cost literal).  State
    literals ``e(p, r, q)`` give the automaton state after ``r`` insertion
    sub-steps at boundary ``p``.
    """
    if budget < 0:
        raise InputError("distance budget must be non-negative")
    _check_alphabet(a, d)
    cnf = CnfFormula() if cnf is None else cnf
    n = d.n
    x = position_vars(cnf, n, a.alphabet, scope)
    restrict_to_domains(cnf, d, scope)
    states = a.states
    sub = budget + 1
    e = [[{q: cnf.var(scope + ("e", p, r, q)) for q in states} for r in range(sub)]
         for p in range(n + 1)]
    for p in range(n + 1):
        for r in range(sub):
            exactly_one(cnf, list(e[p][r].values()))
    for q in states:
        if q not in a.initial:
            cnf.add([-e[0][0][q]])
        if q not in a.finals:
            cnf.add([-e[n][budget][q]])
    labels: dict[tuple[str, str], set] = {}
    for q, v, q2 in a.transitions:
        labels.setdefault((q, q2), set()).add(v)
    costs = []
    for p in range(n + 1):
        for r in range(budget):
            ins = cnf.var(scope + ("ins", p, r))
            costs.append(ins)
            for q in states:
                for q2 in states:
                    if q == q2:
                        continue
                    pair = [-e[p][r][q], -e[p][r + 1][q2]]
                    cnf.add(pair + [ins] if (q, q2) in labels else pair)
        if p == n:
            break
        step = cnf.var(scope + ("edit", p))
        costs.append(step)
        for q in states:
            for q2 in states:
                pair = [-e[p][budget][q], -e[p + 1][0][q2]]
                direct = labels.get((q, q2), set())
                if not direct and q != q2:
                    cnf.add(pair)
                    continue
                for k, v in enumerate(a.alphabet.symbols):
                    if v not in direct:
                        cnf.add(pair + [-x[p][k], step])
    encode_cardinality_leq(cnf, costs, budget, scope + ("edit-budget",))
    return cnf


def encode_cyclic(a: Automaton, d: SequenceDomains, cnf: CnfFormula | None = None,
                  scope: tuple = ()) -> CnfFormula:
    """The sequence read as a ring: the state after the last position equals
    the state before the first one, which is chosen by a selector literal.

    Initial and final designations of ``a`` play no role in the cyclic reading.
    """
    _check_alphabet(a, d)
    cnf = CnfFormula() if cnf is None else cnf
    g = unfold(a, d, initial=a.states, finals=a.states)
    encode_regular_sat(g, cnf, scope)
    if cnf.failed:
        return cnf
    n = d.n
    sel = {k: cnf.var(scope + ("cycle", k)) for k in a.states}
    exactly_one(cnf, list(sel.values()))
    for k, lit in sel.items():
        for t in (0, n):
            sk = cnf.lookup(scope + ("s", t, k))
            if sk is None:
                cnf.add([-lit])
            else:
                cnf.add([-sk, lit])
                cnf.add([-lit, sk])
    return cnf
