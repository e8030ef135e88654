"""Maps between finite-linear sets and (maximal and full) tick-tock sets.

``fl2ttm``/``ttm2fl`` form the first connection, ``mk_tt1``/``un_tt1`` the
second, and ``fl2tt``/``tt2fl`` their composite.  The right adjoints are
computed trace by trace: a trace belongs when the least healthy set that
contains it maps inside the argument.  This works because healthy sets are
closed under union and the left adjoints distribute over union.
"""

from __future__ import annotations

from .core import TICK, TOCK, Cell, Evt, FlTrace, Ref, fl_size, is_fl_tick
from .fl import FlDenotation, acceptances, fl_healthy, fl_healthy_closure
from .tt import MAXIMAL, TtDenotation, mk_tt1, mk_tt1_traces, un_tt1


class UnhealthyInput(ValueError):
    pass


def fl2ttobs(rho: FlTrace, universe) -> tuple:
    """Observations of a single FL trace.

    An unstable tock cell truncates the trace: nothing after it is observed.
    """
    out = []
    for cell in rho.cells:
        if cell.evt == TOCK:
            if cell.acc is None:
                return tuple(out)
            out.append(Ref(frozenset(universe) - cell.acc))
        out.append(Evt(cell.evt))
    if rho.final is not None:
        out.append(Ref(frozenset(universe) - rho.final))
    return tuple(out)


def fl2ttm(p: FlDenotation, check: bool = True) -> TtDenotation:
    if check and not fl_healthy(p):
        raise UnhealthyInput("fl2ttm needs an FL-healthy set")
    image = frozenset(fl2ttobs(r, p.universe) for r in p.traces)
    return TtDenotation(image, p.bound, p.universe, MAXIMAL, p.complete)


def fl2tt(p: FlDenotation, check: bool = True) -> TtDenotation:
    return mk_tt1(fl2ttm(p, check))


def _candidates(universe, bound, accept):
    """FL traces accepted by ``accept``, grown one cell at a time.

    A trace is only tried when its immediate prefix was accepted, which is
    sound because every right adjoint computed here is prefix closed.
    """
    accs = acceptances(universe)
    found = set()
    frontier = []
    for a in accs:
        r = FlTrace((), a)
        if accept(r):
            found.add(r)
            frontier.append(r)
    while frontier:
        nxt = []
        for r in frontier:
            if r.cells and r.cells[-1].evt == TICK:
                continue
            events = sorted(universe) if r.final is None else sorted(r.final)
            for e in events:
                if e != TICK and fl_size(r) >= bound:
                    continue
                cells = r.cells + (Cell(r.final, e),)
                for a in [None] if e == TICK else accs:
                    t = FlTrace(cells, a)
                    if t not in found and accept(t):
                        found.add(t)
                        nxt.append(t)
        frontier = nxt
    return frozenset(found)


def _settled_result(traces, bound, universe):
    return FlDenotation(frozenset(traces), bound, universe).settled()


def ttm2fl(p: TtDenotation) -> FlDenotation:
    """Largest FL set whose image lies inside ``p``.

    Exact on traces shorter than the bound and on traces at the bound with a
    null final acceptance; the rest are dropped.
    """

    def accept(r):
        if not is_fl_tick(r):
            return False
        return all(p.member(fl2ttobs(x, p.universe)) for x in fl_healthy_closure(r))

    return _settled_result(_candidates(p.universe, p.bound, accept), p.bound, p.universe)


def tt2fl(p: TtDenotation) -> FlDenotation:
    """The composite right adjoint, going through the maximal model."""
    return ttm2fl(un_tt1(p))


def tt2fl_direct(p: TtDenotation) -> FlDenotation:
    """Same as :func:`tt2fl`, without the intermediate maximal set."""

    def accept(r):
        if not is_fl_tick(r):
            return False
        image = {fl2ttobs(x, p.universe) for x in fl_healthy_closure(r)}
        return all(p.member(t) for t in mk_tt1_traces(image))

    return _settled_result(_candidates(p.universe, p.bound, accept), p.bound, p.universe)
