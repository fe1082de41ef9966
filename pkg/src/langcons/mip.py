"""0/1 linear models for Regular (layered flow) and Grammar (AND/OR selection).

No MIP solver is bundled.  :func:`write_lp` targets external solvers and
:func:`solutions_01` enumerates feasible 0/1 points of desk-scale models by
depth-first search with bound propagation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .cnf import format_atom
from .grammar import AndOrDag
from .regular import LayeredGraph

BINARY = "binary"
CONTINUOUS = "continuous"
_RELATIONS = ("<=", "=", ">=")


class ModelError(RuntimeError):
    """The model violates its own invariants (duplicate or unknown names)."""


def safe_name(*parts) -> str:
    name = "_".join(str(p) for p in parts)
    return re.sub(r"[^A-Za-z0-9_]", "_", name)


@dataclass(frozen=True)
class LpVar:
    name: str
    kind: str = BINARY
    lb: float = 0
    ub: float = 1


@dataclass(frozen=True)
class LpConstraint:
    name: str
    terms: tuple[tuple[float, str], ...]
    rel: str
    rhs: float


@dataclass
class LpModel:
    variables: list[LpVar] = field(default_factory=list)
    constraints: list[LpConstraint] = field(default_factory=list)
    objective: tuple[tuple[float, str], ...] = ()
    sense: str = "minimize"
    varmap: dict = field(default_factory=dict)
    failed: bool = False
    _names: dict = field(default_factory=dict, repr=False)

    def add_var(self, name: str, atom=None, kind: str = BINARY, lb: float = 0, ub: float = 1) -> str:
        if name in self._names:
            raise ModelError(f"duplicate variable name {name!r}")
        self._names[name] = len(self.variables)
        self.variables.append(LpVar(name, kind, lb, ub))
        if atom is not None:
            self.varmap[atom] = name
        return name

    def add_constraint(self, terms, rel: str, rhs: float, name: str | None = None) -> None:
        if rel not in _RELATIONS:
            raise ModelError(f"unknown relation {rel!r}")
        terms = tuple((c, v) for c, v in terms)
        for _, v in terms:
            if v not in self._names:
                raise ModelError(f"constraint uses undeclared variable {v!r}")
        name = name or f"c{len(self.constraints)}"
        self.constraints.append(LpConstraint(name, terms, rel, rhs))

    def mark_infeasible(self) -> None:
        self.failed = True
        if "infeasible" not in self._names:
            self.add_var("infeasible")
        self.add_constraint([(0, "infeasible")], "=", 1, "infeasible")

    def structure(self):
        """Comparable view used for round-trip checks."""
        return (tuple(self.variables), tuple(self.constraints), self.objective, self.sense,
                tuple(sorted((v, format_atom(a) if isinstance(a, tuple) else str(a))
                             for a, v in self.varmap.items())))


# -- encoders ------------------------------------------------------------------


def _value_vars(m: LpModel, n: int, alphabet) -> dict:
    return {(t, v): m.add_var(safe_name("x", t, v), ("x", t, v))
            for t in range(n) for v in alphabet.symbols}


def encode_regular_flow(g: LayeredGraph) -> LpModel:
    """One unit of flow through the layered graph; arcs carry the symbols."""
    m = LpModel()
    n = g.n
    x = _value_vars(m, n, g.alphabet)
    if not g.feasible:
        m.mark_infeasible()
        return m
    s = {(t, q): m.add_var(safe_name("s", t, q), ("s", t, q))
         for t in range(n + 1) for q in g.layers[t]}
    f = {arc: m.add_var(safe_name("f", arc.t, arc.src, arc.symbol, arc.dst),
                        ("arc", arc.t, arc.src, arc.symbol, arc.dst)) for arc in g.arcs}
    m.add_constraint([(1, s[0, q]) for q in g.layers[0]], "=", 1, "source")
    for t in range(n + 1):
        for q in g.layers[t]:
            if t < n:
                out = [(-1, f[a]) for a in g.arcs if a.t == t and a.src == q]
                m.add_constraint([(1, s[t, q])] + out, "=", 0, safe_name("out", t, q))
            if t > 0:
                inc = [(-1, f[a]) for a in g.arcs if a.t == t - 1 and a.dst == q]
                m.add_constraint([(1, s[t, q])] + inc, "=", 0, safe_name("in", t, q))
    m.add_constraint([(1, s[n, q]) for q in g.layers[n]], "=", 1, "sink")
    for t in range(n):
        for v in g.alphabet.symbols:
            lab = [(-1, f[a]) for a in g.arcs if a.t == t and a.symbol == v]
            m.add_constraint([(1, x[t, v])] + lab, "=", 0, safe_name("chan", t, v))
    return m


def encode_grammar_mip(dag: AndOrDag) -> LpModel:
    """Select a single parse tree of the AND/OR DAG.

    A selected OR-node picks exactly one AND-child; every non-root OR-node is
    selected exactly when one of its AND-parents is; a value literal equals
    the sum of the terminal AND-nodes above its leaf.
    """
    m = LpModel()
    g = dag.grammar
    n = dag.n
    x = _value_vars(m, n, g.terminals)
    if not dag.satisfiable:
        m.mark_infeasible()
        return m
    if dag.root is None:
        return m
    name = {}
    for idx, key in enumerate(dag.keys):
        if key[0] == "leaf":
            name[idx] = x[key[1], key[2]]
        else:
            name[idx] = m.add_var(f"n_{idx}", key)
    m.add_constraint([(1, name[dag.root])], "=", 1, "root")
    for idx, key in enumerate(dag.keys):
        if key[0] == "or":
            m.add_constraint([(1, name[c]) for c in dag.children[idx]] + [(-1, name[idx])],
                             "=", 0, f"pick_{idx}")
        if idx != dag.root and key[0] != "and":
            m.add_constraint([(1, name[p]) for p in dag.parents[idx]] + [(-1, name[idx])],
                             "=", 0, f"use_{idx}")
    in_dag = set(dag.leaves())
    for t in range(n):
        for v in g.terminals.symbols:
            if (t, v) not in in_dag:
                m.add_constraint([(1, x[t, v])], "=", 0, safe_name("off", t, v))
        m.add_constraint([(1, x[t, v]) for v in g.terminals.symbols], "=", 1, f"one_{t}")
    return m


# -- LP text format ------------------------------------------------------------


def _fmt_num(c: float) -> str:
    return str(int(c)) if float(c).is_integer() else repr(float(c))


def _fmt_terms(terms) -> str:
    if not terms:
        return "0"
    out = []
    for k, (c, v) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = v if mag == 1 else f"{_fmt_num(mag)} {v}"
        out.append((f"- {body}" if sign == "-" else body) if k == 0 else f"{sign} {body}")
    return " ".join(out)


def write_lp(m: LpModel, destination=None) -> str:
    """CPLEX LP text for ``m``; also written to ``destination`` when given."""
    names = [v.name for v in m.variables]
    if len(set(names)) != len(names):
        raise ModelError("duplicate variable names")
    lines = []
    for atom, name in m.varmap.items():
        lines.append(f"\\ map {name} {format_atom(atom) if isinstance(atom, tuple) else atom}")
    lines.append("Minimize" if m.sense == "minimize" else "Maximize")
    lines.append(f" obj: {_fmt_terms(m.objective)}")
    lines.append("Subject To")
    for c in m.constraints:
        lines.append(f" {c.name}: {_fmt_terms(c.terms)} {c.rel} {_fmt_num(c.rhs)}")
    lines.append("Bounds")
    for v in m.variables:
        lines.append(f" {_fmt_num(v.lb)} <= {v.name} <= {_fmt_num(v.ub)}")
    lines.append("Binaries")
    binaries = [v.name for v in m.variables if v.kind == BINARY]
    for k in range(0, len(binaries), 8):
        lines.append(" " + " ".join(binaries[k:k + 8]))
    lines.append("End")
    text = "\n".join(lines) + "\n"
    if destination is not None:
        with open(destination, "w") as fh:
            fh.write(text)
    return text


def _parse_terms(text: str) -> tuple[tuple[float, str], ...]:
    tokens = text.split()
    terms = []
    sign = 1
    coef = None
    for tok in tokens:
        if tok in "+-":
            sign = -1 if tok == "-" else 1
            continue
        try:
            coef = float(tok)
            continue
        except ValueError:
            pass
        c = sign * (1 if coef is None else coef)
        terms.append((int(c) if float(c).is_integer() else c, tok))
        sign, coef = 1, None
    return tuple(terms)


def _num(tok: str):
    val = float(tok)
    return int(val) if val.is_integer() else val


def read_lp(text: str) -> LpModel:
    """Reader for the subset of LP format produced by :func:`write_lp`."""
    m = LpModel()
    section = None
    bounds = {}
    binaries: set = set()
    cons = []
    atoms = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("\\"):
            parts = line[1:].split()
            if len(parts) >= 3 and parts[0] == "map":
                atoms[parts[1]] = " ".join(parts[2:])
            continue
        if not line:
            continue
        low = line.lower()
        if low in ("minimize", "maximize"):
            section = "obj"
            m.sense = low
            continue
        if low == "subject to":
            section = "st"
            continue
        if low in ("bounds", "binaries", "end"):
            section = low
            continue
        if section == "obj":
            _, expr = line.split(":", 1)
            m.objective = _parse_terms(expr) if expr.strip() != "0" else ()
        elif section == "st":
            name, rest = line.split(":", 1)
            match = re.match(r"(.*?)\s*(<=|>=|=)\s*(\S+)$", rest.strip())
            if not match:
                raise ModelError(f"cannot parse constraint line {line!r}")
            expr, rel, rhs = match.groups()
            terms = _parse_terms(expr) if expr.strip() != "0" else ()
            cons.append(LpConstraint(name.strip(), terms, rel, _num(rhs)))
        elif section == "bounds":
            lo, _, name, _, hi = line.split()
            bounds[name] = (_num(lo), _num(hi))
        elif section == "binaries":
            binaries.update(line.split())
    for name, (lo, hi) in bounds.items():
        m.add_var(name, kind=BINARY if name in binaries else CONTINUOUS, lb=lo, ub=hi)
        if name in atoms:
            m.varmap[atoms[name]] = name
    m.constraints = cons
    if any(c.name == "infeasible" for c in cons):
        m.failed = True
    return m


# -- exhaustive 0/1 checker ------------------------------------------------------


def solutions_01(m: LpModel, fixed: dict | None = None, limit: int | None = None) -> Iterator[dict]:
    """Yield every feasible 0/1 assignment (name -> 0/1) of a binary model."""
    for v in m.variables:
        if v.kind != BINARY:
            raise ModelError("solutions_01 handles binary variables only")
    names = [v.name for v in m.variables]
    index = {n: k for k, n in enumerate(names)}
    cons = [([(c, index[v]) for c, v in con.terms], con.rel, con.rhs) for con in m.constraints]
    occurs: list[list[int]] = [[] for _ in names]
    for ci, (terms, _, _) in enumerate(cons):
        for _, vi in terms:
            occurs[vi].append(ci)
    start = [None] * len(names)
    for k, v in enumerate(m.variables):
        if v.lb == v.ub:
            start[k] = int(v.lb)
    for name, val in (fixed or {}).items():
        start[index[name]] = int(val)

    def ok(lo, hi, rel, rhs):
        if rel == "=":
            return lo <= rhs <= hi
        if rel == "<=":
            return lo <= rhs
        return hi >= rhs

    def propagate(val) -> bool:
        queue = list(range(len(cons)))
        queued = set(queue)
        while queue:
            ci = queue.pop()
            queued.discard(ci)
            terms, rel, rhs = cons[ci]
            lo = hi = 0
            free = []
            for c, vi in terms:
                if val[vi] is None:
                    lo += min(0, c)
                    hi += max(0, c)
                    free.append((c, vi))
                else:
                    lo += c * val[vi]
                    hi += c * val[vi]
            if not ok(lo, hi, rel, rhs):
                return False
            for c, vi in free:
                base_lo, base_hi = lo - min(0, c), hi - max(0, c)
                zero = ok(base_lo, base_hi, rel, rhs)
                one = ok(base_lo + c, base_hi + c, rel, rhs)
                if zero and one:
                    continue
                if not zero and not one:
                    return False
                val[vi] = 1 if one else 0
                lo, hi = base_lo + c * val[vi], base_hi + c * val[vi]
                for cj in occurs[vi]:
                    if cj not in queued:
                        queued.add(cj)
                        queue.append(cj)
        return True

    count = 0
    stack = [start]
    while stack:
        val = stack.pop()
        if not propagate(val):
            continue
        try:
            k = val.index(None)
        except ValueError:
            yield {names[i]: val[i] for i in range(len(names))}
            count += 1
            if limit is not None and count >= limit:
                return
            continue
        for choice in (0, 1):
            child = list(val)
            child[k] = choice
            stack.append(child)


def feasible_01(m: LpModel, fixed: dict | None = None) -> bool:
    return next(solutions_01(m, fixed, limit=1), None) is not None
