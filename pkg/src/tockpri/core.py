"""Events, acceptances, finite-linear and tick-tock traces, priority orders.

Representation choices:

* events are plain strings; ``"tick"`` and ``"tock"`` are reserved;
* an acceptance is ``None`` (the null, unstable acceptance) or a ``frozenset``;
* an FL trace is a tuple of ``(acceptance, event)`` cells plus a final
  acceptance;
* a TT trace is a tuple of :class:`Evt` / :class:`Ref` observations.

Every value is immutable and hashable so trace sets are plain frozensets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Union

TICK = "tick"
TOCK = "tock"
RESERVED = frozenset({TICK, TOCK})

Acceptance = Optional[frozenset]


class CycleError(ValueError):
    """A declared priority order is not a strict partial order."""


class ConcatError(ValueError):
    """Left operand of an FL concatenation does not end in the null acceptance."""


def universe(sigma: Iterable[str]) -> frozenset:
    """The full event set: the alphabet plus tick and tock."""
    sigma = frozenset(sigma)
    clash = sigma & RESERVED
    if clash:
        raise ValueError(f"reserved events in alphabet: {sorted(clash)}")
    return sigma | RESERVED


def subsets(events: Iterable[str]):
    """All subsets of ``events`` as frozensets, smallest first."""
    items = sorted(events)
    for n in range(len(items) + 1):
        for combo in combinations(items, n):
            yield frozenset(combo)


# ---------------------------------------------------------------------------
# FL traces


class Cell(NamedTuple):
    acc: Acceptance
    evt: str


class FlTrace(NamedTuple):
    cells: tuple
    final: Acceptance

    def __str__(self):
        return format_fl(self)


def _acc(value) -> Acceptance:
    if value is None:
        return None
    return frozenset(value)


def flt(*parts) -> FlTrace:
    """Build an FL trace: every argument but the last is an ``(acc, event)``
    pair, the last is the final acceptance.  Acceptances may be any iterable
    or ``None``.

    >>> flt((None, "a"), {"b"})
    FlTrace(cells=(Cell(acc=None, evt='a'),), final=frozenset({'b'}))
    """
    if not parts:
        raise ValueError("an FL trace needs at least a final acceptance")
    *cells, final = parts
    built = tuple(Cell(_acc(a), e) for a, e in cells)
    for cell in built:
        if cell.acc is not None and cell.evt not in cell.acc:
            raise ValueError(f"event {cell.evt!r} not in its acceptance {sorted(cell.acc)}")
    return FlTrace(built, _acc(final))


NULL_TRACE = FlTrace((), None)


def fl_size(rho: FlTrace) -> int:
    """Number of cells, not counting a terminating tick cell.

    This is the depth measure used for bounded denotations.
    """
    n = len(rho.cells)
    if n and rho.cells[-1].evt == TICK:
        n -= 1
    return n


def acc_leq(a: Acceptance, b: Acceptance) -> bool:
    """Prefix order on acceptances: null is least, sets only relate to themselves."""
    return a is None or a == b


def fl_prefix_leq(rho: FlTrace, sigma: FlTrace) -> bool:
    n = len(rho.cells)
    if n > len(sigma.cells):
        return False
    for mine, theirs in zip(rho.cells, sigma.cells):
        if mine.evt != theirs.evt or not acc_leq(mine.acc, theirs.acc):
            return False
    limit = sigma.final if n == len(sigma.cells) else sigma.cells[n].acc
    return acc_leq(rho.final, limit)


def fl_prefixes(sigma: FlTrace):
    """Every FL trace below ``sigma`` in the prefix order (including itself)."""
    out = set()

    def walk(i, cells):
        limit = sigma.final if i == len(sigma.cells) else sigma.cells[i].acc
        base = tuple(cells)
        out.add(FlTrace(base, None))
        if limit is not None:
            out.add(FlTrace(base, limit))
        if i == len(sigma.cells):
            return
        cell = sigma.cells[i]
        walk(i + 1, cells + [Cell(None, cell.evt)])
        if cell.acc is not None:
            walk(i + 1, cells + [cell])

    walk(0, [])
    return out


def fl_concat_final(rho: FlTrace, sigma: FlTrace) -> FlTrace:
    if rho.final is not None:
        raise ConcatError("left operand must end in the null acceptance")
    return FlTrace(rho.cells + sigma.cells, sigma.final)


def fl_events(rho: FlTrace) -> tuple:
    return tuple(c.evt for c in rho.cells)


def is_fl_tick(rho: FlTrace) -> bool:
    accs = [c.acc for c in rho.cells] + [rho.final]
    if any(a is not None and TICK in a for a in accs):
        return False
    for i, cell in enumerate(rho.cells):
        if cell.evt == TICK and (i != len(rho.cells) - 1 or rho.final is not None):
            return False
    return True


# ---------------------------------------------------------------------------
# TT traces


@dataclass(frozen=True, slots=True)
class Evt:
    event: str

    def __str__(self):
        return self.event


@dataclass(frozen=True, slots=True)
class Ref:
    events: frozenset

    def __str__(self):
        return "ref" + _fmt_set(self.events)


TtObs = Union[Evt, Ref]


def ref(*events) -> Ref:
    return Ref(frozenset(events))


def tt(*obs) -> tuple:
    """Build a TT trace; plain strings become :class:`Evt`, sets become :class:`Ref`."""
    out = []
    for o in obs:
        if isinstance(o, (Evt, Ref)):
            out.append(o)
        elif isinstance(o, str):
            out.append(Evt(o))
        else:
            out.append(Ref(frozenset(o)))
    return tuple(out)


def tt_size(t: tuple) -> int:
    """Number of event observations other than tick."""
    return sum(1 for o in t if isinstance(o, Evt) and o.event != TICK)


def ends_open(t: tuple) -> bool:
    """True when the trace ends in a refusal (it may still be extended by tock)."""
    return bool(t) and isinstance(t[-1], Ref)


def is_valid_tt(t: tuple) -> bool:
    last = len(t) - 1
    for i, o in enumerate(t):
        if isinstance(o, Evt):
            if o.event == TICK and i != last:
                return False
            if o.event == TOCK and (i == 0 or not isinstance(t[i - 1], Ref)):
                return False
        elif i != last and t[i + 1] != Evt(TOCK):
            return False
    return True


def tt_prefix_leq(rho: tuple, sigma: tuple) -> bool:
    """The tick-tock prefix order: truncation plus refusal subsets."""
    i = 0
    while True:
        if i == len(rho):
            return True
        if i == len(sigma):
            return False
        a, b = rho[i], sigma[i]
        if isinstance(a, Evt):
            if a != b:
                return False
            i += 1
            continue
        if not isinstance(b, Ref) or not a.events <= b.events:
            return False
        if i + 1 == len(rho):
            return True
        # a refusal mid-trace is followed by tock on both sides
        if i + 1 >= len(sigma) or rho[i + 1] != sigma[i + 1]:
            return False
        i += 2


def tt_below(sigma: tuple):
    """All traces ``rho`` with ``rho <~ sigma``."""
    out = {()}
    if not sigma:
        return out
    head = sigma[0]
    if isinstance(head, Evt):
        out.update((head,) + r for r in tt_below(sigma[1:]))
        return out
    shrunk = [Ref(x) for x in subsets(head.events)]
    out.update((r,) for r in shrunk)
    if len(sigma) > 1:
        rests = tt_below(sigma[2:])
        out.update((r, sigma[1]) + rest for r in shrunk for rest in rests)
    return out


# ---------------------------------------------------------------------------
# priority orders


@dataclass(frozen=True)
class PriorityOrder:
    """A strict partial order on events; ``(x, y)`` in ``pairs`` means x < y."""

    pairs: frozenset = frozenset()

    @classmethod
    def of(cls, *pairs) -> "PriorityOrder":
        return mk_priority_order(pairs)

    def lt(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs

    def is_maximal(self, e: str) -> bool:
        return not any(x == e for x, _ in self.pairs)

    def below(self, e: str) -> frozenset:
        return frozenset(x for x, y in self.pairs if y == e)

    def events(self) -> frozenset:
        return frozenset(x for pair in self.pairs for x in pair)

    def __str__(self):
        return ", ".join(f"{x} < {y}" for x, y in sorted(self.pairs)) or "(empty)"


def mk_priority_order(declared) -> PriorityOrder:
    closure = set(declared)
    while True:
        extra = {(x, w) for x, y in closure for z, w in closure if y == z} - closure
        if not extra:
            break
        closure |= extra
    loops = sorted(x for x, y in closure if x == y)
    if loops:
        raise CycleError(f"priority order has a cycle through {', '.join(loops)}")
    return PriorityOrder(frozenset(closure))


def all_orders(events: Iterable[str]):
    """Every strict partial order on ``events`` (small sets only)."""
    events = sorted(events)
    pairs = [(x, y) for x in events for y in events if x != y]
    seen = set()
    for n in range(len(pairs) + 1):
        for chosen in combinations(pairs, n):
            try:
                order = mk_priority_order(chosen)
            except CycleError:
                continue
            if order.pairs == frozenset(chosen) and order.pairs not in seen:
                seen.add(order.pairs)
                yield order


# ---------------------------------------------------------------------------
# canonical text and JSON


def _fmt_set(s) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def format_acc(a: Acceptance) -> str:
    return "•" if a is None else _fmt_set(a)


def format_fl(rho: FlTrace) -> str:
    parts = [f"({format_acc(c.acc)},{c.evt})" for c in rho.cells]
    parts.append(format_acc(rho.final))
    return "⟨" + ", ".join(parts) + "⟩"


def format_tt(t: tuple) -> str:
    return "⟨" + ", ".join(str(o) for o in t) + "⟩"


def acc_to_json(a: Acceptance):
    return None if a is None else sorted(a)


def fl_to_json(rho: FlTrace) -> dict:
    return {
        "cells": [{"acc": acc_to_json(c.acc), "evt": c.evt} for c in rho.cells],
        "final": acc_to_json(rho.final),
    }


def fl_from_json(data: dict) -> FlTrace:
    cells = [(c["acc"], c["evt"]) for c in data["cells"]]
    return flt(*cells, data["final"])


def tt_to_json(t: tuple) -> list:
    return [{"evt": o.event} if isinstance(o, Evt) else {"ref": sorted(o.events)} for o in t]


def tt_from_json(data: list) -> tuple:
    out = []
    for o in data:
        if "evt" in o:
            out.append(Evt(o["evt"]))
        else:
            out.append(Ref(frozenset(o["ref"])))
    return tuple(out)


def _canon(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def fl_sort_key(rho: FlTrace):
    return (len(rho.cells), _canon(fl_to_json(rho)))


def tt_sort_key(t: tuple):
    return (len(t), _canon(tt_to_json(t)))


def sorted_fl(traces) -> list:
    return sorted(traces, key=fl_sort_key)


def sorted_tt(traces) -> list:
    return sorted(traces, key=tt_sort_key)
