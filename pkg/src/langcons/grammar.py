"""Grammar constraint: CYK AND/OR decomposition, SAT encoding, propagators.

OR-nodes ``(N, i, j)`` say nonterminal ``N`` covers span ``(i, j)``; AND-nodes
``(p, i, k, j)`` apply CNF production ``p`` over ``(i, j)`` with the left child
covering the first ``k`` positions (terminal productions use ``k = j = 1``);
leaves ``(t, v)`` are the value literals of the sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cnf import CnfFormula, position_vars
from .language import (CnfGrammar, InputError, RestrictedGrammar, SequenceDomains, cyk_table)


@dataclass
class AndOrDag:
    grammar: CnfGrammar
    n: int
    keys: list[tuple] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    parents: list[list[int]] = field(default_factory=list)
    root: int | None = None
    nullable: bool = False
    index: dict = field(default_factory=dict, repr=False)

    @property
    def satisfiable(self) -> bool:
        return self.root is not None or (self.n == 0 and self.nullable)

    @property
    def empty(self) -> bool:
        return self.root is None

    def __len__(self) -> int:
        return len(self.keys)

    def node(self, key: tuple) -> int:
        idx = self.index.get(key)
        if idx is None:
            idx = self.index[key] = len(self.keys)
            self.keys.append(key)
            self.children.append([])
            self.parents.append([])
        return idx

    def link(self, parent: int, child: int) -> None:
        self.children[parent].append(child)
        self.parents[child].append(parent)

    def leaves(self) -> list[tuple[int, str]]:
        return [(k[1], k[2]) for k in self.keys if k[0] == "leaf"]

    def count(self, kind: str) -> int:
        return sum(1 for k in self.keys if k[0] == kind)

    def dump(self) -> str:
        """Text form: one node per line in id order, then ``edge`` lines."""
        g = self.grammar
        lines = []
        for key in self.keys:
            if key[0] == "or":
                lines.append(f"or {key[1]} {key[2]} {key[3]}")
            elif key[0] == "and":
                lines.append(f"and {key[1]} {key[2]} {key[3]} {key[4]}")
            else:
                lines.append(f"leaf {key[1]} {key[2]}")
        for parent, kids in enumerate(self.children):
            lines.extend(f"edge {parent} {child}" for child in kids)
        header = [f"# start {g.start} n {self.n}"]
        return "\n".join(header + lines) + "\n"


def build_andor_dag(g: CnfGrammar, d: SequenceDomains) -> AndOrDag:
    """Bottom-up CYK over the domain box, then top-down pruning from the root."""
    if tuple(g.terminals.symbols) != tuple(d.alphabet.symbols):
        raise InputError("domain alphabet differs from grammar terminals")
    n = d.n
    dag = AndOrDag(g, n, nullable=g.nullable_start)
    if n == 0 or d.failed:
        return dag
    table = cyk_table(g, d.candidates)
    if g.start not in table[0][n]:
        return dag
    by_lhs: dict[str, list[int]] = {}
    for idx, p in enumerate(g.productions):
        by_lhs.setdefault(p.lhs, []).append(idx)
    dag.root = dag.node(("or", g.start, 0, n))
    order = {a: k for k, a in enumerate(g.nonterminals)}
    marked: dict[int, set] = {n: {(g.start, 0)}}
    for j in range(n, 0, -1):
        for nt, i in sorted(marked.get(j, ()), key=lambda e: (e[1], order[e[0]])):
            parent = dag.index[("or", nt, i, j)]
            for pidx in by_lhs.get(nt, ()):
                p = g.productions[pidx]
                if not p.pred(i, j):
                    continue
                if p.rhs[0].terminal:
                    occ = p.rhs[0]
                    if j == 1 and occ.symbol in d.candidates[i] and occ.pred(i, 1):
                        a = dag.node(("and", pidx, i, 1, 1))
                        dag.link(parent, a)
                        dag.link(a, dag.node(("leaf", i, occ.symbol)))
                    continue
                left, right = p.rhs
                for k in range(1, j):
                    if (left.symbol in table[i][k] and right.symbol in table[i + k][j - k]
                            and left.pred(i, k) and right.pred(i + k, j - k)):
                        a = dag.node(("and", pidx, i, k, j))
                        dag.link(parent, a)
                        for sym, ci, cj in ((left.symbol, i, k), (right.symbol, i + k, j - k)):
                            dag.link(a, dag.node(("or", sym, ci, cj)))
                            marked.setdefault(cj, set()).add((sym, ci))
    return dag


def _supported(dag: AndOrDag, d: SequenceDomains) -> SequenceDomains:
    if not dag.satisfiable:
        return SequenceDomains.failure(d.alphabet, d.n)
    support = [set() for _ in range(d.n)]
    for t, v in dag.leaves():
        support[t].add(v)
    return SequenceDomains(d.alphabet, tuple(frozenset(s) for s in support))


def propagate_grammar_cyk(g: CnfGrammar, d: SequenceDomains) -> SequenceDomains:
    return _supported(build_andor_dag(g, d), d)


def encode_grammar_sat(dag: AndOrDag, cnf: CnfFormula | None = None, scope: tuple = (),
                       amo: str = "pairwise") -> CnfFormula:
    """One literal per DAG node with support clauses in both directions.

    Downwards: an OR-node needs one of its AND-children and an AND-node needs
    all of its children.  Upwards: every non-root node (leaves included)
    needs one of its parents.  Each model is a parse tree of the string read
    off the value literals.
    """
    cnf = CnfFormula() if cnf is None else cnf
    g = dag.grammar
    x = position_vars(cnf, dag.n, g.terminals, scope, amo)
    if not dag.satisfiable:
        cnf.fail()
        return cnf
    if dag.root is None:
        return cnf
    sym = g.terminals.index
    lit = []
    for key in dag.keys:
        if key[0] == "leaf":
            lit.append(x[key[1]][sym(key[2])])
        else:
            lit.append(cnf.var(scope + key))
    cnf.add([lit[dag.root]])
    for idx, key in enumerate(dag.keys):
        kids = [lit[c] for c in dag.children[idx]]
        if key[0] == "or":
            cnf.add([-lit[idx]] + kids)
        elif key[0] == "and":
            for c in kids:
                cnf.add([-lit[idx], c])
        if idx != dag.root:
            cnf.add([-lit[idx]] + [lit[p] for p in dag.parents[idx]])
    in_dag = set(dag.leaves())
    for t in range(dag.n):
        for k, v in enumerate(g.terminals.symbols):
            if (t, v) not in in_dag:
                cnf.add([-x[t][k]])
    return cnf


# -- Earley-based propagator ----------------------------------------------------


def propagate_grammar_earley(g: RestrictedGrammar, d: SequenceDomains) -> SequenceDomains:
    """GAC by an Earley chart over the domain box plus a backward marking pass.

    Works on the grammar as written.  Items ``(p, dot, origin)`` live in the
    set of the position where the recognized prefix ends; completed items are
    only stored when the production's span predicate holds.
    """
    if tuple(g.terminals.symbols) != tuple(d.alphabet.symbols):
        raise InputError("domain alphabet differs from grammar terminals")
    n = d.n
    if d.failed:
        return SequenceDomains.failure(d.alphabet, n)
    if n == 0:
        return d if g.nullable_start else SequenceDomains.failure(d.alphabet, 0)
    prods = g.productions
    by_lhs: dict[str, list[int]] = {}
    for idx, p in enumerate(prods):
        if p.rhs:
            by_lhs.setdefault(p.lhs, []).append(idx)
    chart: list[set] = [set() for _ in range(n + 1)]
    waiting: list[dict] = [dict() for _ in range(n + 1)]
    # done[k][(lhs, origin)] -> completed items ending at k
    done: list[dict] = [dict() for _ in range(n + 1)]

    def add(k, item, agenda):
        p, dot, origin = item
        prod = prods[p]
        complete = dot == len(prod.rhs)
        if complete and not prod.pred(origin, k - origin):
            return
        if item in chart[k]:
            return
        chart[k].add(item)
        if complete:
            done[k].setdefault((prod.lhs, origin), []).append(item)
        else:
            waiting[k].setdefault(prod.rhs[dot].symbol, []).append(item)
        if agenda is not None:
            agenda.append(item)

    for p in by_lhs.get(g.start, ()):
        add(0, (p, 0, 0), None)
    for k in range(n + 1):
        agenda = list(chart[k])
        while agenda:
            p, dot, origin = agenda.pop()
            prod = prods[p]
            if dot == len(prod.rhs):
                for p2, d2, o2 in list(waiting[origin].get(prod.lhs, ())):
                    occ = prods[p2].rhs[d2]
                    if not occ.terminal and occ.pred(origin, k - origin):
                        add(k, (p2, d2 + 1, o2), agenda)
                continue
            occ = prod.rhs[dot]
            if occ.terminal:
                if k < n and occ.symbol in d.candidates[k] and occ.pred(k, 1):
                    add(k + 1, (p, dot + 1, origin), None)
            else:
                for q in by_lhs.get(occ.symbol, ()):
                    add(k, (q, 0, k), agenda)

    goals = done[n].get((g.start, 0), [])
    if not goals:
        return SequenceDomains.failure(d.alphabet, n)
    marked = set()
    stack = []
    for item in goals:
        marked.add((item, n))
        stack.append((item, n))
    support = [set() for _ in range(n)]
    while stack:
        (p, dot, origin), k = stack.pop()
        if dot == 0:
            continue
        prev = (p, dot - 1, origin)
        occ = prods[p].rhs[dot - 1]
        if occ.terminal:
            # the item could only have been produced by scanning position k-1
            support[k - 1].add(occ.symbol)
            entry = (prev, k - 1)
            if entry not in marked:
                marked.add(entry)
                stack.append(entry)
            continue
        lo = origin if dot - 1 == 0 else origin + 1
        hi = origin if dot - 1 == 0 else k - 1
        for mid in range(lo, hi + 1):
            if prev not in chart[mid] or not occ.pred(mid, k - mid):
                continue
            kids = done[k].get((occ.symbol, mid))
            if not kids:
                continue
            for entry in [(prev, mid)] + [(kid, k) for kid in kids]:
                if entry not in marked:
                    marked.add(entry)
                    stack.append(entry)
    return SequenceDomains(d.alphabet, tuple(frozenset(s) for s in support))
