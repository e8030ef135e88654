"""A small timed process language: AST, parser, printer and built-in corpus.

Text format, one directive per line, ``#`` starts a comment::

    alphabet a, b
    order a < b, a < tock
    process T = (a ->t SKIP [+] b ->t SKIP) |~| (WAIT 1 ; T)
    main T

``->`` and ``[]`` are the untimed prefix and external choice; ``->t`` and
``[+]`` are their timed readings, which let time pass while offering.
Precedence from tightest: prefix, ``;``, ``[]``/``[+]``, ``|~|``.  Binary
operators associate to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .core import RESERVED, TICK, TOCK, PriorityOrder, mk_priority_order


class ParseError(Exception):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class SpecSyntaxError(ParseError):
    pass


class UnknownEvent(ParseError):
    pass


class UnboundProcessName(ParseError):
    pass


class UnguardedRecursion(ParseError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("unguarded recursion through " + " -> ".join(self.cycle))


# ---------------------------------------------------------------------------
# AST


class Proc:
    """Base class of process expressions."""

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Stop(Proc):
    pass


@dataclass(frozen=True)
class Skip(Proc):
    pass


@dataclass(frozen=True)
class Div(Proc):
    pass


@dataclass(frozen=True)
class Chaos(Proc):
    pass


@dataclass(frozen=True)
class Prefix(Proc):
    event: str
    body: Proc


@dataclass(frozen=True)
class TPrefix(Proc):
    event: str
    body: Proc


@dataclass(frozen=True)
class ExtChoice(Proc):
    left: Proc
    right: Proc


@dataclass(frozen=True)
class TExtChoice(Proc):
    left: Proc
    right: Proc


@dataclass(frozen=True)
class IntChoice(Proc):
    left: Proc
    right: Proc


@dataclass(frozen=True)
class Seq(Proc):
    left: Proc
    right: Proc


@dataclass(frozen=True)
class Wait(Proc):
    n: int


@dataclass(frozen=True)
class ProcRef(Proc):
    name: str


STOP, SKIP, DIV, CHAOS = Stop(), Skip(), Div(), Chaos()

_BINARY = {IntChoice: "|~|", ExtChoice: "[]", TExtChoice: "[+]", Seq: ";"}
_LEVEL = {IntChoice: 0, ExtChoice: 1, TExtChoice: 1, Seq: 2}
_ATOMS = {Stop: "STOP", Skip: "SKIP", Div: "DIV", Chaos: "CHAOS"}


def pretty(e: Proc, level: int = 0) -> str:
    """Render ``e`` so that :func:`parse_expr` gives the same tree back."""
    kind = type(e)
    if kind in _ATOMS:
        return _ATOMS[kind]
    if kind is Wait:
        return f"WAIT {e.n}"
    if kind is ProcRef:
        return e.name
    if kind in (Prefix, TPrefix):
        arrow = "->" if kind is Prefix else "->t"
        return f"{e.event} {arrow} {pretty(e.body, 3)}"
    mine = _LEVEL[kind]
    # right associative: the left operand needs brackets at equal level
    text = f"{pretty(e.left, mine + 1)} {_BINARY[kind]} {pretty(e.right, mine)}"
    return f"({text})" if mine < level else text


def events_of(e: Proc) -> set:
    if isinstance(e, (Prefix, TPrefix)):
        return {e.event} | events_of(e.body)
    if type(e) in _BINARY:
        return events_of(e.left) | events_of(e.right)
    return set()


def names_of(e: Proc) -> set:
    if isinstance(e, ProcRef):
        return {e.name}
    if isinstance(e, (Prefix, TPrefix)):
        return names_of(e.body)
    if type(e) in _BINARY:
        return names_of(e.left) | names_of(e.right)
    return set()


@dataclass(frozen=True)
class SpecFile:
    alphabet: frozenset
    order: PriorityOrder
    defs: dict = field(hash=False)
    main: str

    def main_expr(self) -> Proc:
        return self.defs[self.main]

    def with_main(self, name: str) -> "SpecFile":
        if name not in self.defs:
            raise UnboundProcessName(f"no process named {name!r}")
        return SpecFile(self.alphabet, self.order, self.defs, name)


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)"
    r"|(?P<op>->t|->|\|~\||\[\+\]|\[\]|;|\(|\)|=|<|,))"
)
_KEYWORDS = {"STOP", "SKIP", "DIV", "CHAOS", "WAIT"}


def _tokenize(text, line):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise SpecSyntaxError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start + 1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, line, end_col):
        self.tokens = tokens
        self.i = 0
        self.line = line
        self.end_col = end_col

    def peek(self, offset=0):
        j = self.i + offset
        return self.tokens[j] if j < len(self.tokens) else (None, None, self.end_col)

    def error(self, message):
        raise SpecSyntaxError(message, self.line, self.peek()[2])

    def take(self, value=None, kind=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value) or (kind and tok[0] != kind):
            want = repr(value) if value else (kind or "token")
            got = "end of line" if tok[0] is None else repr(tok[1])
            self.error(f"expected {want}, found {got}")
        self.i += 1
        return tok

    def at_end(self):
        return self.i >= len(self.tokens)

    def expr(self):
        return self.int_choice()

    def int_choice(self):
        left = self.ext_choice()
        if self.peek()[1] == "|~|":
            self.take()
            return IntChoice(left, self.int_choice())
        return left

    def ext_choice(self):
        left = self.seq()
        op = self.peek()[1]
        if op in ("[]", "[+]"):
            self.take()
            right = self.ext_choice()
            return ExtChoice(left, right) if op == "[]" else TExtChoice(left, right)
        return left

    def seq(self):
        left = self.prefix()
        if self.peek()[1] == ";":
            self.take()
            return Seq(left, self.seq())
        return left

    def prefix(self):
        kind, value, col = self.peek()
        nxt = self.peek(1)[1]
        if kind == "ident" and value not in _KEYWORDS and nxt in ("->", "->t"):
            self.take()
            self.take()
            body = self.prefix()
            if value in RESERVED:
                raise UnknownEvent(f"{value} cannot be used as a prefix", self.line, col)
            return Prefix(value, body) if nxt == "->" else TPrefix(value, body)
        return self.atom()

    def atom(self):
        kind, value, col = self.peek()
        if kind is None:
            self.error("expected a process expression, found end of line")
        if value == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        if kind == "ident":
            self.take()
            if value == "WAIT":
                n = self.take(kind="num")
                return Wait(int(n[1]))
            if value in _KEYWORDS:
                return {"STOP": STOP, "SKIP": SKIP, "DIV": DIV, "CHAOS": CHAOS}[value]
            return ProcRef(value)
        self.error(f"unexpected {value!r}")


def parse_expr(text: str, line: int = 1) -> Proc:
    tokens = _tokenize(text, line)
    p = _Parser(tokens, line, len(text) + 1)
    e = p.expr()
    if not p.at_end():
        p.error(f"unexpected {p.peek()[1]!r}")
    return e


def _parse_list(text, line, offset):
    items = []
    for chunk in text.split(","):
        name = chunk.strip()
        if not name:
            continue
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
            raise SpecSyntaxError(f"bad event name {name!r}", line, offset)
        items.append(name)
    return items


def parse(text: str) -> SpecFile:
    alphabet = None
    order_pairs = []
    order_lines = []
    defs = {}
    def_lines = {}
    main = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        stripped = content.strip()
        if not stripped:
            continue
        col = len(content) - len(content.lstrip()) + 1
        keyword, _, rest = stripped.partition(" ")
        rest_col = col + len(keyword) + 1
        if keyword == "alphabet":
            names = _parse_list(rest, lineno, rest_col)
            clash = [n for n in names if n in RESERVED]
            if clash:
                raise SpecSyntaxError(f"{clash[0]} is reserved", lineno, rest_col)
            alphabet = set(alphabet or ()) | set(names)
        elif keyword == "order":
            for chunk in rest.split(","):
                chain = [c.strip() for c in chunk.split("<")]
                if len(chain) < 2 or not all(chain):
                    raise SpecSyntaxError(f"bad order entry {chunk.strip()!r}", lineno, rest_col)
                order_pairs.extend(zip(chain, chain[1:]))
                order_lines.extend([lineno] * (len(chain) - 1))
        elif keyword == "process":
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not eq or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
                raise SpecSyntaxError("expected 'process NAME = EXPR'", lineno, rest_col)
            if name in defs:
                raise SpecSyntaxError(f"process {name} defined twice", lineno, rest_col)
            body_col = rest_col + len(rest) - len(body)
            try:
                defs[name] = parse_expr(body, lineno)
            except SpecSyntaxError as exc:
                raise SpecSyntaxError(
                    str(exc).split(": ", 1)[-1], lineno, (exc.column or 1) + body_col - 1
                ) from None
            def_lines[name] = lineno
        elif keyword == "main":
            main = rest.strip()
        else:
            raise SpecSyntaxError(f"unknown directive {keyword!r}", lineno, col)
    if not defs:
        raise SpecSyntaxError("no process definitions")
    used = set()
    for e in defs.values():
        used |= events_of(e)
    if alphabet is None:
        alphabet = used | {x for pair in order_pairs for x in pair if x not in RESERVED}
    for name, e in defs.items():
        unknown = sorted(events_of(e) - set(alphabet))
        if unknown:
            raise UnknownEvent(f"event {unknown[0]} not in alphabet", def_lines[name])
        unbound = sorted(names_of(e) - set(defs))
        if unbound:
            raise UnboundProcessName(f"process {unbound[0]} is not defined", def_lines[name])
    known = set(alphabet) | RESERVED
    for (x, y), lineno in zip(order_pairs, order_lines):
        for ev in (x, y):
            if ev not in known:
                raise UnknownEvent(f"event {ev} in order is not in alphabet", lineno)
    order = mk_priority_order(order_pairs)
    if main is None:
        main = next(iter(defs))
    elif main not in defs:
        raise UnboundProcessName(f"main process {main} is not defined")
    validate_guarded(defs)
    return SpecFile(frozenset(alphabet), order, defs, main)


def render(spec: SpecFile) -> str:
    lines = [f"alphabet {', '.join(sorted(spec.alphabet))}"]
    if spec.order.pairs:
        lines.append("order " + ", ".join(f"{x} < {y}" for x, y in sorted(spec.order.pairs)))
    for name, e in spec.defs.items():
        lines.append(f"process {name} = {pretty(e)}")
    lines.append(f"main {spec.main}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# guardedness


def _nullable(e, defs, assumed):
    """Can ``e`` terminate before performing any non-tick event?"""
    if isinstance(e, (Skip, Chaos)):
        return True
    if isinstance(e, Wait):
        return e.n == 0
    if isinstance(e, (Stop, Div, Prefix, TPrefix)):
        return False
    if isinstance(e, ProcRef):
        return assumed.get(e.name, False)
    if isinstance(e, Seq):
        return _nullable(e.left, defs, assumed) and _nullable(e.right, defs, assumed)
    return _nullable(e.left, defs, assumed) or _nullable(e.right, defs, assumed)


def nullable_names(defs) -> dict:
    """Least fixpoint of nullability over the named definitions."""
    assumed = {name: False for name in defs}
    changed = True
    while changed:
        changed = False
        for name, e in defs.items():
            if not assumed[name] and _nullable(e, defs, assumed):
                assumed[name] = True
                changed = True
    return assumed


def _unguarded_refs(e, nullable):
    if isinstance(e, ProcRef):
        return {e.name}
    if isinstance(e, (Prefix, TPrefix)) or type(e) in _ATOMS or isinstance(e, Wait):
        return set()
    if isinstance(e, Seq):
        out = _unguarded_refs(e.left, nullable)
        if _nullable(e.left, None, nullable):
            out |= _unguarded_refs(e.right, nullable)
        return out
    return _unguarded_refs(e.left, nullable) | _unguarded_refs(e.right, nullable)


def validate_guarded(defs) -> None:
    """Raise :class:`UnguardedRecursion` if a definition can reach itself
    without an event being performed on the way.

    A reference is guarded under a prefix, and on the right of ``;`` when the
    left operand cannot terminate immediately (so ``WAIT 1 ; P`` is guarded).
    """
    nullable = nullable_names(defs)
    graph = {name: sorted(_unguarded_refs(e, nullable) & set(defs)) for name, e in defs.items()}
    state = {}

    def visit(name, path):
        state[name] = "open"
        for nxt in graph[name]:
            if state.get(nxt) == "open":
                start = path.index(nxt)
                raise UnguardedRecursion(path[start:] + [nxt])
            if nxt not in state:
                visit(nxt, path + [nxt])
        state[name] = "done"

    for name in defs:
        if name not in state:
            visit(name, [name])


# ---------------------------------------------------------------------------
# built-in corpus

_CORPUS_TEXT = {
    "R": """
        alphabet a, b
        order a < b
        process R = a -> SKIP [] b -> SKIP
    """,
    "S": """
        alphabet a, b
        order a < b
        process S = a ->t SKIP |~| b ->t SKIP |~| (WAIT 1 ; S)
    """,
    "T": """
        alphabet a, b
        order a < b
        process T = (a ->t SKIP [+] b ->t SKIP) |~| (WAIT 1 ; T)
    """,
    "priT": """
        alphabet a, b
        order a < b
        process priT = b ->t SKIP |~| (WAIT 1 ; priT)
    """,
    # untimed counterpart of T, the one R refines in tick-tock
    "Tu": """
        alphabet a, b
        order a < b
        process Tu = (a -> SKIP [] b -> SKIP) |~| (WAIT 1 ; Tu)
    """,
    "K": """
        alphabet f
        order f < tick
        process K = SKIP |~| f -> SKIP
    """,
}


def builtin_corpus() -> dict:
    """Named example processes with their alphabets and priority orders."""
    return {name: parse(text) for name, text in _CORPUS_TEXT.items()}


def corpus_source(name: str) -> str:
    lines = [ln.strip() for ln in _CORPUS_TEXT[name].strip().splitlines()]
    return "\n".join(lines) + "\n"


__all__ = [
    "Proc", "Stop", "Skip", "Div", "Chaos", "Prefix", "TPrefix", "ExtChoice",
    "TExtChoice", "IntChoice", "Seq", "Wait", "ProcRef", "STOP", "SKIP", "DIV",
    "CHAOS", "SpecFile", "parse", "parse_expr", "pretty", "render",
    "validate_guarded", "builtin_corpus", "ParseError", "SpecSyntaxError",
    "UnknownEvent", "UnboundProcessName", "UnguardedRecursion", "TICK", "TOCK",
]
