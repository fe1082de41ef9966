"""Automata, restricted context-free grammars, sequence domains and recognizers.

Everything here is immutable once built.  Positions are 0-indexed and spans
are written ``(i, j)`` with ``i`` the start position and ``j`` the length, so
the span ``(i, j)`` covers positions ``i .. i+j-1``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

DETERMINISTIC = "deterministic"
NONDETERMINISTIC = "nondeterministic"


class InputError(ValueError):
    """Malformed or inconsistent user input."""


class EmptyLanguageWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise InputError("alphabet must not be empty")
        if len(set(symbols)) != len(symbols):
            raise InputError(f"duplicate symbols in alphabet {symbols}")
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(symbols)})

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise InputError(f"symbol {symbol!r} is not in the alphabet") from None

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def check(self, string: Sequence[str]) -> None:
        for s in string:
            if s not in self._index:
                raise InputError(f"symbol {s!r} is not in the alphabet")


def as_alphabet(symbols) -> Alphabet:
    return symbols if isinstance(symbols, Alphabet) else Alphabet(tuple(symbols))


# -- automata ----------------------------------------------------------------


@dataclass(frozen=True)
class Automaton:
    """Finite automaton; ``transitions`` holds ``(from, symbol, to)`` triples.

    A deterministic automaton has exactly one initial state and at most one
    transition per ``(from, symbol)``.  Missing transitions reject.
    """

    states: tuple[str, ...]
    alphabet: Alphabet
    transitions: frozenset
    initial: frozenset
    finals: frozenset
    kind: str = NONDETERMINISTIC
    _delta: dict = field(init=False, repr=False, compare=False, hash=False)
    _state_index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", as_alphabet(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "finals", frozenset(self.finals))
        if len(set(self.states)) != len(self.states):
            raise InputError("duplicate state names")
        index = {q: k for k, q in enumerate(self.states)}
        for q in itertools.chain(self.initial, self.finals):
            if q not in index:
                raise InputError(f"undeclared state {q!r}")
        delta: dict[tuple[str, str], list[str]] = {}
        for q, v, q2 in self.transitions:
            if q not in index or q2 not in index:
                raise InputError(f"transition ({q}, {v}, {q2}) uses an undeclared state")
            if v not in self.alphabet:
                raise InputError(f"transition ({q}, {v}, {q2}) uses symbol outside the alphabet")
            delta.setdefault((q, v), []).append(q2)
        for key in delta:
            delta[key] = tuple(sorted(delta[key], key=index.__getitem__))
        if self.kind == DETERMINISTIC:
            if len(self.initial) != 1:
                raise InputError("a deterministic automaton needs exactly one initial state")
            for (q, v), targets in delta.items():
                if len(targets) > 1:
                    raise InputError(f"nondeterministic transition from {q!r} on {v!r}")
        elif self.kind != NONDETERMINISTIC:
            raise InputError(f"unknown automaton kind {self.kind!r}")
        object.__setattr__(self, "_delta", delta)
        object.__setattr__(self, "_state_index", index)

    @classmethod
    def dfa(cls, states, alphabet, transitions, initial: str, finals) -> "Automaton":
        return cls(tuple(states), as_alphabet(alphabet), frozenset(transitions),
                   frozenset([initial]), frozenset(finals), DETERMINISTIC)

    @classmethod
    def nfa(cls, states, alphabet, transitions, initial, finals) -> "Automaton":
        return cls(tuple(states), as_alphabet(alphabet), frozenset(transitions),
                   frozenset(initial), frozenset(finals), NONDETERMINISTIC)

    @property
    def deterministic(self) -> bool:
        return self.kind == DETERMINISTIC

    @property
    def initial_state(self) -> str:
        if not self.deterministic:
            raise InputError("initial_state is only defined for deterministic automata")
        (q0,) = self.initial
        return q0

    def state_index(self, q: str) -> int:
        return self._state_index[q]

    def successors(self, q: str, v: str) -> tuple[str, ...]:
        return self._delta.get((q, v), ())

    def sorted_states(self, states: Iterable[str]) -> list[str]:
        return sorted(states, key=self._state_index.__getitem__)

    def as_nfa(self) -> "Automaton":
        return replace(self, kind=NONDETERMINISTIC)


def dfa_accepts(a: Automaton, s: Sequence[str]) -> bool:
    if not a.deterministic:
        raise InputError("dfa_accepts needs a deterministic automaton")
    a.alphabet.check(s)
    q = a.initial_state
    for v in s:
        nxt = a.successors(q, v)
        if not nxt:
            return False
        q = nxt[0]
    return q in a.finals


def nfa_accepts(a: Automaton, s: Sequence[str]) -> bool:
    a.alphabet.check(s)
    current = set(a.initial)
    for v in s:
        current = {q2 for q in current for q2 in a.successors(q, v)}
        if not current:
            return False
    return not current.isdisjoint(a.finals)


def accepts(a: Automaton, s: Sequence[str]) -> bool:
    return dfa_accepts(a, s) if a.deterministic else nfa_accepts(a, s)


# -- span predicates -----------------------------------------------------------


@dataclass(frozen=True)
class SpanPredicate:
    """Restriction ``f(i, j)`` on the span of a nonterminal occurrence.

    ``form`` is ``always``, ``length`` (``lo <= j <= hi``), ``open`` (every
    covered position is open in ``mask``) or ``all`` (conjunction of ``parts``,
    produced when unit rules are inlined).
    """

    form: str = "always"
    lo: int = 1
    hi: int = 1
    mask: tuple[bool, ...] = ()
    parts: tuple["SpanPredicate", ...] = ()

    def __post_init__(self):
        if self.form == "length":
            if self.lo < 1 or self.hi < 1:
                raise InputError("length bounds must be positive")
            if self.lo > self.hi:
                raise InputError(f"empty length range [{self.lo}, {self.hi}]")
        elif self.form == "open":
            object.__setattr__(self, "mask", tuple(bool(b) for b in self.mask))
        elif self.form not in ("always", "all"):
            raise InputError(f"unknown predicate form {self.form!r}")

    @classmethod
    def always(cls) -> "SpanPredicate":
        return ALWAYS

    @classmethod
    def length(cls, lo: int, hi: int) -> "SpanPredicate":
        return cls("length", lo, hi)

    @classmethod
    def at_least(cls, lo: int, n: int) -> "SpanPredicate":
        # one-sided bounds are capped at the sequence length
        return cls("length", lo, max(lo, n))

    @classmethod
    def open_hours(cls, mask: Sequence) -> "SpanPredicate":
        return cls("open", mask=tuple(bool(int(b)) for b in mask))

    @property
    def trivial(self) -> bool:
        return self.form == "always"

    def __call__(self, i: int, j: int) -> bool:
        return eval_predicate(self, i, j)

    def __and__(self, other: "SpanPredicate") -> "SpanPredicate":
        return conjoin(self, other)

    def annotation(self) -> str:
        if self.form == "always":
            return ""
        if self.form == "length":
            return f"{{len {self.lo} {self.hi}}}"
        if self.form == "open":
            return "{open}"
        return "".join(p.annotation() for p in self.parts)


ALWAYS = SpanPredicate()


def conjoin(*preds: SpanPredicate) -> SpanPredicate:
    flat: list[SpanPredicate] = []
    for p in preds:
        for q in (p.parts if p.form == "all" else (p,)):
            if not q.trivial and q not in flat:
                flat.append(q)
    if not flat:
        return ALWAYS
    if len(flat) == 1:
        return flat[0]
    return SpanPredicate("all", parts=tuple(flat))


def eval_predicate(p: SpanPredicate, i: int, j: int, n: int | None = None) -> bool:
    if i < 0 or j < 1:
        raise InputError(f"invalid span ({i}, {j})")
    form = p.form
    if form == "always":
        return True
    if form == "length":
        return p.lo <= j <= p.hi
    if form == "open":
        if n is not None and len(p.mask) != n:
            raise InputError(f"open-hours mask has length {len(p.mask)}, expected {n}")
        if i + j > len(p.mask):
            raise InputError(f"span ({i}, {j}) exceeds open-hours mask of length {len(p.mask)}")
        return all(p.mask[i:i + j])
    return all(eval_predicate(q, i, j, n) for q in p.parts)


# -- grammars ------------------------------------------------------------------


@dataclass(frozen=True)
class Occurrence:
    symbol: str
    terminal: bool
    pred: SpanPredicate = ALWAYS

    def __str__(self):
        return self.symbol + self.pred.annotation()


@dataclass(frozen=True)
class Production:
    """``lhs -> rhs``; ``pred`` restricts the span covered by the whole rule."""

    lhs: str
    rhs: tuple[Occurrence, ...]
    pred: SpanPredicate = ALWAYS

    def __str__(self):
        body = " ".join(str(o) for o in self.rhs) or "_"
        return f"{self.lhs}{self.pred.annotation()} -> {body}"


def is_nonterminal_name(name: str) -> bool:
    return name[:1].isupper()


@dataclass(frozen=True)
class RestrictedGrammar:
    nonterminals: tuple[str, ...]
    terminals: Alphabet
    start: str
    productions: tuple[Production, ...]

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "terminals", as_alphabet(self.terminals))
        object.__setattr__(self, "productions", tuple(self.productions))
        nts = set(self.nonterminals)
        if len(nts) != len(self.nonterminals):
            raise InputError("duplicate nonterminal names")
        if not nts.isdisjoint(self.terminals.symbols):
            raise InputError("terminal and nonterminal names overlap")
        if self.start not in nts:
            raise InputError(f"start symbol {self.start!r} is not a declared nonterminal")
        for p in self.productions:
            if p.lhs not in nts:
                raise InputError(f"undeclared nonterminal {p.lhs!r} in {p}")
            for o in p.rhs:
                if o.terminal and o.symbol not in self.terminals:
                    raise InputError(f"undeclared terminal {o.symbol!r} in {p}")
                if not o.terminal and o.symbol not in nts:
                    raise InputError(f"undeclared nonterminal {o.symbol!r} in {p}")
            if not p.rhs:
                if p.lhs != self.start:
                    raise InputError(f"empty production only allowed for the start symbol: {p}")
                if any(o.symbol == self.start and not o.terminal
                       for q in self.productions for o in q.rhs):
                    raise InputError("a nullable start symbol must not occur on a right-hand side")

    @classmethod
    def from_rules(cls, start: str, rules, terminals=None) -> "RestrictedGrammar":
        """Build from ``(lhs, rhs_items[, lhs_pred])`` tuples.

        An rhs item is a name or a ``(name, pred)`` pair; names starting with an
        uppercase letter are nonterminals.
        """
        nts = [start]
        seen_t: list[str] = []
        prods = []
        for rule in rules:
            lhs, items = rule[0], rule[1]
            pred = rule[2] if len(rule) > 2 else ALWAYS
            if lhs not in nts:
                nts.append(lhs)
            rhs = []
            for item in items:
                name, ipred = (item, ALWAYS) if isinstance(item, str) else item
                term = not is_nonterminal_name(name)
                if term:
                    if name not in seen_t:
                        seen_t.append(name)
                elif name not in nts:
                    nts.append(name)
                rhs.append(Occurrence(name, term, ipred))
            prods.append(Production(lhs, tuple(rhs), pred))
        alphabet = as_alphabet(terminals) if terminals is not None else Alphabet(tuple(seen_t))
        return cls(tuple(nts), alphabet, start, tuple(prods))

    def productions_of(self, nt: str) -> list[Production]:
        return [p for p in self.productions if p.lhs == nt]

    @property
    def nullable_start(self) -> bool:
        return any(p.lhs == self.start and not p.rhs for p in self.productions)

    def __str__(self):
        return "\n".join([f"start: {self.start}"] + [str(p) for p in self.productions])


@dataclass(frozen=True)
class CnfGrammar(RestrictedGrammar):
    """Grammar whose rules are ``A -> a`` or ``A -> B C``.

    The empty string is represented only by ``nullable`` (never by a rule).
    """

    nullable: bool = False

    def __post_init__(self):
        super().__post_init__()
        for p in self.productions:
            shape = tuple(o.terminal for o in p.rhs)
            if shape not in ((True,), (False, False)):
                raise InputError(f"production is not in Chomsky normal form: {p}")

    @property
    def nullable_start(self) -> bool:
        return self.nullable


# -- sequence domains ----------------------------------------------------------


@dataclass(frozen=True)
class SequenceDomains:
    alphabet: Alphabet
    candidates: tuple[frozenset, ...]
    wiped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alphabet", as_alphabet(self.alphabet))
        object.__setattr__(self, "candidates", tuple(frozenset(c) for c in self.candidates))
        for c in self.candidates:
            for v in c:
                if v not in self.alphabet:
                    raise InputError(f"domain value {v!r} is not in the alphabet")

    @classmethod
    def full(cls, alphabet, n: int) -> "SequenceDomains":
        alphabet = as_alphabet(alphabet)
        return cls(alphabet, tuple(frozenset(alphabet.symbols) for _ in range(n)))

    @classmethod
    def fixed(cls, alphabet, string: Sequence[str]) -> "SequenceDomains":
        return cls(as_alphabet(alphabet), tuple(frozenset([v]) for v in string))

    @classmethod
    def failure(cls, alphabet, n: int) -> "SequenceDomains":
        return cls(as_alphabet(alphabet), tuple(frozenset() for _ in range(n)), wiped=True)

    @property
    def n(self) -> int:
        return len(self.candidates)

    @property
    def failed(self) -> bool:
        return self.wiped or any(not c for c in self.candidates)

    def ordered(self, t: int) -> list[str]:
        """Candidates at ``t`` in alphabet order."""
        return [v for v in self.alphabet.symbols if v in self.candidates[t]]

    def box_size(self) -> int:
        size = 1
        for c in self.candidates:
            size *= len(c)
        return size

    def restrict(self, t: int, values) -> "SequenceDomains":
        cands = list(self.candidates)
        cands[t] = cands[t] & frozenset(values)
        return replace(self, candidates=tuple(cands))

    def __str__(self):
        if self.failed:
            return "failed"
        return " ".join("{" + ",".join(self.ordered(t)) + "}" for t in range(self.n))


# -- recognizers ---------------------------------------------------------------


def cyk_table(g: CnfGrammar, candidates: Sequence[Iterable[str]]):
    """Bottom-up CYK over a box of candidate sets.

    Returns ``table`` with ``table[i][j]`` the set of nonterminals deriving
    some string in the box over span ``(i, j)``, honoring every predicate.
    """
    n = len(candidates)
    table = [[set() for _ in range(n + 1)] for _ in range(n + 1)]
    terminal_rules = [p for p in g.productions if p.rhs[0].terminal]
    binary_rules = [p for p in g.productions if not p.rhs[0].terminal]
    for i in range(n):
        cell = table[i][1]
        cands = candidates[i]
        for p in terminal_rules:
            occ = p.rhs[0]
            if occ.symbol in cands and occ.pred(i, 1) and p.pred(i, 1):
                cell.add(p.lhs)
    for j in range(2, n + 1):
        for i in range(n - j + 1):
            cell = table[i][j]
            for p in binary_rules:
                if p.lhs in cell or not p.pred(i, j):
                    continue
                left, right = p.rhs
                for k in range(1, j):
                    if (left.symbol in table[i][k] and right.symbol in table[i + k][j - k]
                            and left.pred(i, k) and right.pred(i + k, j - k)):
                        cell.add(p.lhs)
                        break
    return table


def cyk_recognize(g: CnfGrammar, s: Sequence[str]) -> bool:
    g.terminals.check(s)
    if not s:
        return g.nullable_start
    table = cyk_table(g, [(v,) for v in s])
    return g.start in table[0][len(s)]


def earley_recognize(g: RestrictedGrammar, s: Sequence[str]) -> bool:
    """Earley recognizer working on the grammar as written (no conversion)."""
    g.terminals.check(s)
    n = len(s)
    if n == 0:
        return g.nullable_start
    by_lhs: dict[str, list[int]] = {}
    for idx, p in enumerate(g.productions):
        if p.rhs:
            by_lhs.setdefault(p.lhs, []).append(idx)
    prods = g.productions
    # item = (production index, dot, origin)
    chart: list[set] = [set() for _ in range(n + 1)]
    waiting: list[dict] = [dict() for _ in range(n + 1)]

    def add(k, item, agenda):
        p, dot, origin = item
        prod = prods[p]
        if dot == len(prod.rhs) and not prod.pred(origin, k - origin):
            return
        if item not in chart[k]:
            chart[k].add(item)
            if dot < len(prod.rhs):
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
                if k < n and s[k] == occ.symbol and occ.pred(k, 1):
                    add(k + 1, (p, dot + 1, origin), None)
            else:
                for q in by_lhs.get(occ.symbol, ()):
                    add(k, (q, 0, k), agenda)
    return any(prods[p].lhs == g.start and dot == len(prods[p].rhs) and origin == 0
               for p, dot, origin in chart[n])


# -- Chomsky normal form ------------------------------------------------------


def _fresh(base: str, taken: set) -> str:
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    name = f"{base}_{k}"
    taken.add(name)
    return name


def to_cnf(g: RestrictedGrammar) -> CnfGrammar:
    """Convert to Chomsky normal form, keeping every span predicate in place.

    Predicates on original occurrences stay on those occurrences; glue
    nonterminals introduced by binarization carry no predicate; unit rules are
    inlined with the predicates along the unit chain conjoined onto the
    inlined rule.
    """
    taken = set(g.nonterminals) | set(g.terminals.symbols)
    nonterminals = list(g.nonterminals)
    lifted: dict[str, str] = {}
    rules: list[Production] = []

    def lift(t: str) -> str:
        if t not in lifted:
            base = "T_" + "".join(ch if ch.isalnum() else "_" for ch in t)
            name = base if base not in taken else _fresh(base, taken)
            taken.add(name)
            lifted[t] = name
            nonterminals.append(name)
            rules.append(Production(name, (Occurrence(t, True),)))
        return lifted[t]

    nullable = False
    for p in g.productions:
        if not p.rhs:
            nullable = True
            continue
        rhs = list(p.rhs)
        if len(rhs) >= 2:
            rhs = [Occurrence(lift(o.symbol), False, o.pred) if o.terminal else o for o in rhs]
        lhs, pred = p.lhs, p.pred
        while len(rhs) > 2:
            glue = _fresh(p.lhs, taken)
            nonterminals.append(glue)
            rules.append(Production(lhs, (rhs[0], Occurrence(glue, False)), pred))
            lhs, pred, rhs = glue, ALWAYS, rhs[1:]
        rules.append(Production(lhs, tuple(rhs), pred))

    # unit-rule elimination
    units: dict[str, list[Production]] = {}
    proper: dict[str, list[Production]] = {}
    for p in rules:
        if len(p.rhs) == 1 and not p.rhs[0].terminal:
            units.setdefault(p.lhs, []).append(p)
        else:
            proper.setdefault(p.lhs, []).append(p)
    out: list[Production] = []
    seen: set = set()
    for a in nonterminals:
        reached = [(a, ALWAYS)]
        visited = {(a, ALWAYS)}
        idx = 0
        while idx < len(reached):
            b, pb = reached[idx]
            idx += 1
            for u in units.get(b, ()):
                nxt = (u.rhs[0].symbol, conjoin(pb, u.pred, u.rhs[0].pred))
                if nxt not in visited:
                    visited.add(nxt)
                    reached.append(nxt)
        for b, pb in reached:
            for p in proper.get(b, ()):
                q = Production(a, p.rhs, conjoin(pb, p.pred))
                if q not in seen:
                    seen.add(q)
                    out.append(q)

    # drop unproductive, then unreachable nonterminals
    productive: set = set()
    changed = True
    while changed:
        changed = False
        for p in out:
            if p.lhs not in productive and all(o.terminal or o.symbol in productive for o in p.rhs):
                productive.add(p.lhs)
                changed = True
    if g.start not in productive and not nullable:
        warnings.warn(f"grammar with start {g.start!r} has an empty language", EmptyLanguageWarning,
                      stacklevel=2)
    out = [p for p in out if p.lhs in productive
           and all(o.terminal or o.symbol in productive for o in p.rhs)]
    reachable = {g.start}
    frontier = [g.start]
    while frontier:
        a = frontier.pop()
        for p in out:
            if p.lhs == a:
                for o in p.rhs:
                    if not o.terminal and o.symbol not in reachable:
                        reachable.add(o.symbol)
                        frontier.append(o.symbol)
    out = [p for p in out if p.lhs in reachable]
    keep = [a for a in nonterminals if a in reachable]
    return CnfGrammar(tuple(keep), g.terminals, g.start, tuple(out), nullable)
