"""Prioritisation in the tick-tock model, and the cross-check against the FL route."""

from __future__ import annotations

from collections import defaultdict

from .core import TICK, TOCK, Evt, PriorityOrder, Ref, subsets
from .flpri import pri_fl
from .galois import fl2tt, tt2fl
from .tt import FULL, TtDenotation, tt_decided


def _traces(q):
    return q.traces if isinstance(q, TtDenotation) else q


def priref(p: PriorityOrder, sigma: tuple, q, s) -> frozenset:
    """Events that may be refused after ``sigma`` by a prioritised process
    whose unprioritised counterpart refuses ``s`` there."""
    traces = _traces(q)
    s = frozenset(s)
    out = set(s)
    if sigma + (Ref(s), Evt(TOCK)) in traces:
        out |= p.below(TOCK)
    for t in traces:
        if len(t) == len(sigma) + 1 and t[:-1] == sigma and isinstance(t[-1], Evt):
            b = t[-1].event
            if b not in s and b not in (TOCK, TICK):
                out |= p.below(b)
    return frozenset(out)


def pri_tt_rel(p: PriorityOrder, sigma: tuple, q, rho0: tuple, rho1: tuple) -> bool:
    """Is ``rho0`` a prioritisation of ``rho1`` after the history ``sigma`` in ``q``?"""
    traces = _traces(q)
    if not rho0 and not rho1:
        return True
    if not rho0 or not rho1:
        return False
    a, b = rho0[0], rho1[0]
    if isinstance(a, Ref):
        if not isinstance(b, Ref):
            return False
        allowed = priref(p, sigma, traces, b.events)
        if not a.events <= allowed:
            return False
        if len(rho0) == 1 and len(rho1) == 1:
            return True
        if rho0[1:2] != (Evt(TOCK),) or rho1[1:2] != (Evt(TOCK),) or TOCK in allowed:
            return False
        return pri_tt_rel(p, sigma + (b, Evt(TOCK)), traces, rho0[2:], rho1[2:])
    if a != b:
        return False
    e = a.event
    if not p.is_maximal(e):
        if e == TICK:
            return False
        refusals = [t[-1].events for t in traces
                    if len(t) == len(sigma) + 1 and t[:-1] == sigma and isinstance(t[-1], Ref)]
        if not any(e not in priref(p, sigma, traces, z) for z in refusals):
            return False
    return pri_tt_rel(p, sigma + (a,), traces, rho0[1:], rho1[1:])


class _Trie:
    def __init__(self, traces):
        self.traces = traces
        self.next = defaultdict(set)
        for t in traces:
            for i in range(len(t)):
                self.next[t[:i]].add(t[i])

    def events_after(self, pre):
        return [o.event for o in self.next[pre] if isinstance(o, Evt)]

    def refusals_after(self, pre):
        return [o.events for o in self.next[pre] if isinstance(o, Ref)]


def _priref_fast(p, trie, sigma, s):
    out = set(s)
    if Evt(TOCK) in trie.next.get(sigma + (Ref(s),), ()):
        out |= p.below(TOCK)
    for b in trie.events_after(sigma):
        if b not in s and b not in (TOCK, TICK):
            out |= p.below(b)
    return frozenset(out)


def pri_tt_traces(p: PriorityOrder, traces) -> frozenset:
    """Every ``rho`` related to some member of ``traces`` (a TT1-closed set)."""
    trie = _Trie(frozenset(traces))
    memo = {}

    def gen(pre):
        hit = memo.get(pre)
        if hit is not None:
            return hit
        out = set()
        if pre in trie.traces:
            out.add(())
        refusals = trie.refusals_after(pre)
        for s in refusals:
            allowed = _priref_fast(p, trie, pre, s)
            smaller = [Ref(r) for r in subsets(allowed)]
            out.update((r,) for r in smaller)
            after = pre + (Ref(s), Evt(TOCK))
            if TOCK not in allowed and Evt(TOCK) in trie.next.get(pre + (Ref(s),), ()):
                tails = gen(after)
                out.update((r, Evt(TOCK)) + tail for r in smaller for tail in tails)
        for e in trie.events_after(pre):
            if not p.is_maximal(e):
                if e == TICK:
                    continue
                if not any(e not in _priref_fast(p, trie, pre, z) for z in refusals):
                    continue
            out.update((Evt(e),) + tail for tail in gen(pre + (Evt(e),)))
        memo[pre] = frozenset(out)
        return memo[pre]

    return gen(())


def pri_tt(p: PriorityOrder, d: TtDenotation) -> TtDenotation:
    """Prioritise a full tick-tock set.

    Traces at the bound that end in a refusal are left out: whether tock may
    follow them depends on traces beyond the bound.
    """
    keep = frozenset(t for t in pri_tt_traces(p, d.traces) if tt_decided(t, d.bound, False))
    return TtDenotation(keep, d.bound, d.universe, FULL, complete=False)


def correspondence_sides(p: PriorityOrder, d: TtDenotation):
    """Both sides of the correspondence: direct TT prioritisation, and the
    route through the FL model."""
    lhs = pri_tt(p, d)
    rhs = fl2tt(pri_fl(p, tt2fl(d)), check=False)
    return lhs, rhs


def correspondence_check(p: PriorityOrder, d: TtDenotation) -> bool:
    lhs, rhs = correspondence_sides(p, d)
    return lhs.traces == rhs.traces
