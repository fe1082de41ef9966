"""Line-based text formats for automata, grammars, domains and shift instances.

Automaton::

    alphabet: r w
    states: qr qw qr2
    initial: qr
    final: qr qw qr2
    trans: qr r qr

Grammar (nonterminals start uppercase, terminals do not; ``_`` is the empty
right-hand side; annotations follow a symbol, or the lhs for a rule-wide
restriction)::

    start: S
    open: 000011111111111111110000
    S -> R P{len 13 24} R | R F{len 30 38} R
    W{len 4 *} -> A1
"""

from __future__ import annotations

import re

from .language import (ALWAYS, Automaton, InputError, Occurrence, Production, RestrictedGrammar,
                       SequenceDomains, SpanPredicate, as_alphabet, conjoin, is_nonterminal_name)
from .scheduling import ShiftInstance, activity_names


class FormatError(InputError):
    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _header(line: str):
    key, sep, rest = line.partition(":")
    if not sep or " " in key.strip():
        return None, None
    return key.strip().lower(), rest.split()


def parse_automaton(text: str, source: str = "<automaton>") -> Automaton:
    fields: dict[str, list[str]] = {}
    trans = []
    kind = None
    for no, line in _lines(text):
        key, vals = _header(line)
        if key is None:
            raise FormatError(f"expected 'key: values', got {line!r}", no, source)
        if key == "trans":
            if len(vals) != 3:
                raise FormatError("a transition is 'trans: from symbol to'", no, source)
            trans.append(tuple(vals))
        elif key == "kind":
            if vals not in (["dfa"], ["nfa"]):
                raise FormatError("kind must be dfa or nfa", no, source)
            kind = vals[0]
        elif key in ("alphabet", "states", "initial", "final"):
            fields.setdefault(key, []).extend(vals)
        else:
            raise FormatError(f"unknown key {key!r}", no, source)
    for key in ("alphabet", "states", "initial"):
        if key not in fields:
            raise FormatError(f"missing '{key}:' line", None, source)
    finals = fields.get("final", [])
    try:
        if kind == "nfa" or (kind is None and len(fields["initial"]) != 1):
            return Automaton.nfa(fields["states"], fields["alphabet"], trans, fields["initial"], finals)
        if kind is None:
            seen = set()
            for q, v, _ in trans:
                if (q, v) in seen:
                    return Automaton.nfa(fields["states"], fields["alphabet"], trans,
                                         fields["initial"], finals)
                seen.add((q, v))
        if len(fields["initial"]) != 1:
            raise InputError("a dfa needs exactly one initial state")
        return Automaton.dfa(fields["states"], fields["alphabet"], trans, fields["initial"][0], finals)
    except FormatError:
        raise
    except InputError as exc:
        raise FormatError(str(exc), None, source) from None


def format_automaton(a: Automaton) -> str:
    lines = [f"alphabet: {' '.join(a.alphabet.symbols)}", f"states: {' '.join(a.states)}",
             f"initial: {' '.join(a.sorted_states(a.initial))}",
             f"final: {' '.join(a.sorted_states(a.finals))}"]
    if not a.deterministic:
        lines.insert(0, "kind: nfa")
    order = {q: k for k, q in enumerate(a.states)}
    for q, v, q2 in sorted(a.transitions, key=lambda e: (order[e[0]], a.alphabet.index(e[1]), order[e[2]])):
        lines.append(f"trans: {q} {v} {q2}")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(r"->|\||[^\s{|]+(?:\{[^}]*\})*")
_ANNOT = re.compile(r"\{([^}]*)\}")


def _annotation(body: str, n: int | None, mask, no: int, source: str) -> SpanPredicate:
    parts = body.split()
    if not parts:
        raise FormatError("empty annotation", no, source)
    if parts[0] == "open" and len(parts) == 1:
        if mask is None:
            raise FormatError("{open} needs an 'open:' header", no, source)
        return SpanPredicate.open_hours(mask)
    if parts[0] == "len" and len(parts) == 3:
        try:
            lo = int(parts[1])
            if parts[2] in ("*", "n"):
                if n is None:
                    raise FormatError("an open-ended length needs 'length:' or 'open:'", no, source)
                return SpanPredicate.at_least(lo, n)
            return SpanPredicate.length(lo, int(parts[2]))
        except ValueError:
            raise FormatError(f"bad length annotation {{{body}}}", no, source) from None
    raise FormatError(f"unknown annotation {{{body}}}", no, source)


def _symbol(token: str, n, mask, no, source):
    name = token.split("{", 1)[0]
    preds = [_annotation(m.group(1), n, mask, no, source) for m in _ANNOT.finditer(token)]
    return name, conjoin(*preds) if preds else ALWAYS


def parse_grammar(text: str, source: str = "<grammar>") -> RestrictedGrammar:
    lines = list(_lines(text))
    start = None
    mask = None
    n = None
    terminals = None
    rules = []
    for no, line in lines:
        key, vals = _header(line)
        if key is None or "->" in line:
            rules.append((no, line))
            continue
        if key == "start" and len(vals) == 1:
            start = vals[0]
        elif key == "open" and len(vals) == 1 and set(vals[0]) <= {"0", "1"}:
            mask = tuple(ch == "1" for ch in vals[0])
        elif key == "length" and len(vals) == 1 and vals[0].isdigit():
            n = int(vals[0])
        elif key == "terminals":
            terminals = vals
        else:
            raise FormatError(f"bad header line {line!r}", no, source)
    if n is None and mask is not None:
        n = len(mask)
    if mask is not None and len(mask) != n:
        raise FormatError("open mask length differs from 'length:'", None, source)
    productions = []
    nts: list[str] = []
    seen_t: list[str] = []
    for no, line in rules:
        tokens = _TOKEN.findall(line)
        if len(tokens) < 2 or tokens[1] != "->":
            raise FormatError(f"expected 'Lhs -> rhs', got {line!r}", no, source)
        lhs, lhs_pred = _symbol(tokens[0], n, mask, no, source)
        if not is_nonterminal_name(lhs):
            raise FormatError(f"left-hand side {lhs!r} must start uppercase", no, source)
        if lhs not in nts:
            nts.append(lhs)
        alts: list[list[str]] = [[]]
        for tok in tokens[2:]:
            if tok == "->":
                raise FormatError("one '->' per line", no, source)
            if tok == "|":
                alts.append([])
            else:
                alts[-1].append(tok)
        for alt in alts:
            if alt == ["_"]:
                alt = []
            elif not alt:
                raise FormatError("empty alternative (write '_' for the empty string)", no, source)
            rhs = []
            for tok in alt:
                name, pred = _symbol(tok, n, mask, no, source)
                term = not is_nonterminal_name(name)
                if term:
                    if name not in seen_t:
                        seen_t.append(name)
                elif name not in nts:
                    nts.append(name)
                rhs.append(Occurrence(name, term, pred))
            productions.append(Production(lhs, tuple(rhs), lhs_pred))
    if start is None:
        if not productions:
            raise FormatError("no productions", None, source)
        start = productions[0].lhs
    if start in nts:
        nts.remove(start)
    nts.insert(0, start)
    try:
        alphabet = as_alphabet(terminals if terminals is not None else seen_t)
        return RestrictedGrammar(tuple(nts), alphabet, start, tuple(productions))
    except InputError as exc:
        raise FormatError(str(exc), None, source) from None


def format_grammar(g: RestrictedGrammar) -> str:
    lines = [f"start: {g.start}", f"terminals: {' '.join(g.terminals.symbols)}"]
    masks = {p.mask for prod in g.productions
             for pred in [prod.pred] + [o.pred for o in prod.rhs]
             for p in (pred.parts if pred.form == "all" else (pred,)) if p.form == "open"}
    if len(masks) > 1:
        raise InputError("the text format holds a single open-hours mask")
    if masks:
        lines.append("open: " + "".join("1" if b else "0" for b in masks.pop()))
    lines.extend(str(p) for p in g.productions)
    return "\n".join(lines) + "\n"


def parse_domains(text: str, alphabet, n: int | None = None) -> SequenceDomains:
    """``r,w;r;w`` with ``*`` for the whole alphabet; empty text means ``n`` full positions."""
    alphabet = as_alphabet(alphabet)
    if text is None or not text.strip():
        if n is None:
            raise InputError("give --n or --domains")
        return SequenceDomains.full(alphabet, n)
    cands = []
    for part in text.strip().split(";"):
        part = part.strip()
        if part == "*":
            cands.append(frozenset(alphabet.symbols))
        else:
            vals = [v.strip() for v in part.split(",") if v.strip()]
            for v in vals:
                if v not in alphabet:
                    raise InputError(f"domain value {v!r} is not in the alphabet")
            cands.append(frozenset(vals))
    if n is not None and len(cands) != n:
        raise InputError(f"--domains gives {len(cands)} positions but --n is {n}")
    return SequenceDomains(alphabet, tuple(cands))


def format_domains(d: SequenceDomains) -> str:
    return ";".join(",".join(d.ordered(t)) for t in range(d.n))


def parse_instance(text: str, source: str = "<instance>") -> ShiftInstance:
    head: dict[str, int] = {}
    mask = None
    demand_lines = []
    for no, line in _lines(text):
        key, vals = _header(line)
        if key in ("slots", "activities", "employees") and len(vals) == 1 and vals[0].isdigit():
            head[key] = int(vals[0])
        elif key == "open" and len(vals) == 1 and set(vals[0]) <= {"0", "1"}:
            mask = tuple(ch == "1" for ch in vals[0])
        elif key == "demand" and vals:
            demand_lines.append((no, vals))
        else:
            raise FormatError(f"bad instance line {line!r}", no, source)
    for key in ("slots", "activities", "employees"):
        if key not in head:
            raise FormatError(f"missing '{key}:' line", None, source)
    n, m = head["slots"], head["activities"]
    if mask is None:
        mask = (True,) * n
    names = activity_names(m)
    demand = [[0] * m for _ in range(n)]
    for no, vals in demand_lines:
        if vals[0] not in names:
            raise FormatError(f"unknown activity {vals[0]!r}", no, source)
        if len(vals) != n + 1 or not all(v.isdigit() for v in vals[1:]):
            raise FormatError(f"demand line needs {n} non-negative integers", no, source)
        k = names.index(vals[0])
        for t in range(n):
            demand[t][k] = int(vals[t + 1])
    try:
        return ShiftInstance(n, m, head["employees"], tuple(map(tuple, demand)), mask)
    except InputError as exc:
        raise FormatError(str(exc), None, source) from None


def format_instance(inst: ShiftInstance) -> str:
    lines = [f"slots: {inst.slots}", f"activities: {inst.activities}",
             f"employees: {inst.employees}",
             "open: " + "".join("1" if b else "0" for b in inst.open)]
    for k, a in enumerate(activity_names(inst.activities)):
        lines.append(f"demand: {a} " + " ".join(str(inst.demand[t][k]) for t in range(inst.slots)))
    return "\n".join(lines) + "\n"
