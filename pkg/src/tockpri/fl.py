"""Bounded finite-linear denotations and the FL healthiness conditions.

A denotation at bound ``k`` holds exactly the traces of the process with at
most ``k`` cells, where a terminating tick cell is not counted (see
:func:`tockpri.core.fl_size`).  Final acceptances are free.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from . import lang
from .core import (
    NULL_TRACE,
    TICK,
    TOCK,
    Cell,
    FlTrace,
    fl_prefixes,
    fl_size,
    is_fl_tick,
    subsets,
)


class BoundError(ValueError):
    pass


class BoundMismatch(ValueError):
    pass


class NotFlTick(ValueError):
    pass


@dataclass(frozen=True)
class FlDenotation:
    """Traces up to ``bound`` cells.

    ``complete`` is False for sets computed by right adjoints: those leave out
    the traces at the bound with a non-null final acceptance, since deciding
    them needs inputs one level deeper.
    """

    traces: frozenset
    bound: int
    universe: frozenset
    complete: bool = True

    def __len__(self):
        return len(self.traces)

    def __contains__(self, rho):
        return rho in self.traces

    def decides(self, rho) -> bool:
        return self.complete and fl_size(rho) <= self.bound or settled_fl(rho, self.bound)

    def restrict(self, k: int) -> "FlDenotation":
        complete = k < self.bound or self.complete
        keep = frozenset(r for r in self.traces if fl_size(r) <= k and (complete or settled_fl(r, k)))
        return FlDenotation(keep, k, self.universe, complete)

    def settled(self) -> "FlDenotation":
        """Drop the traces at the bound with a non-null final acceptance."""
        keep = frozenset(r for r in self.traces if settled_fl(r, self.bound))
        return FlDenotation(keep, self.bound, self.universe, False)


def restrict(traces, k):
    return frozenset(r for r in traces if fl_size(r) <= k)


def settled_fl(rho: FlTrace, bound: int) -> bool:
    """Traces whose membership in a derived set is decided by inputs at ``bound``.

    Anything shorter than the bound qualifies, and so does a trace at the
    bound whose final acceptance is null (it has no pending completions).
    """
    n = fl_size(rho)
    return n < bound or (n == bound and rho.final is None)


def acceptances(universe) -> list:
    """Every acceptance over ``universe`` that respects the tick rules."""
    return [None] + list(subsets(universe - {TICK}))


# ---------------------------------------------------------------------------
# set-level operators


def _cons(cell, rho):
    return FlTrace((cell,) + rho.cells, rho.final)


def prefix_with(event, acc, rest):
    """``event`` offered with acceptance ``acc``; continue as the set ``rest``."""
    out = {NULL_TRACE, FlTrace((), acc)}
    for a in (None, acc):
        cell = Cell(a, event)
        out.update(_cons(cell, r) for r in rest)
    return frozenset(out)


def prefix(event, rest):
    return prefix_with(event, frozenset({event}), rest)


def int_choice(p, q):
    return frozenset(p) | frozenset(q)


def _merge(a, b):
    if a is None or b is None:
        return None
    return a | b


def _merge_timed(a, b):
    if a is None or b is None:
        return None
    both = a & b & {TOCK}
    return ((a | b) - {TOCK}) | both


def ext_choice(p, q, timed=False):
    """External choice of two trace sets.

    The untimed form resolves on any first event.  The timed form only lets
    tock happen when both sides perform it, and the choice stays open across
    the tock.
    """
    merge = _merge_timed if timed else _merge
    init_p = [r.final for r in p if not r.cells]
    init_q = [r.final for r in q if not r.cells]
    out = {FlTrace((), merge(a, b)) for a in init_p for b in init_q}
    for mine, other_init in ((p, init_q), (q, init_p)):
        for r in mine:
            if not r.cells:
                continue
            first = r.cells[0]
            if timed and first.evt == TOCK:
                continue
            for b in other_init:
                out.add(FlTrace((Cell(merge(first.acc, b), first.evt),) + r.cells[1:], r.final))
    if timed:
        tails_p, tails_q = defaultdict(set), defaultdict(set)
        for src, tails in ((p, tails_p), (q, tails_q)):
            for r in src:
                if r.cells and r.cells[0].evt == TOCK:
                    tails[r.cells[0].acc].add(FlTrace(r.cells[1:], r.final))
        for x, tp in tails_p.items():
            for y, tq in tails_q.items():
                cell = Cell(merge(x, y), TOCK)
                out.update(_cons(cell, r) for r in ext_choice(tp, tq, timed=True))
    return frozenset(out)


def seq(p, q_at, k):
    """Sequential composition at bound ``k``.

    ``q_at(m)`` must return the second operand at bound ``m``; it is only
    called for the depths that are actually needed.
    """
    out = set()
    cache = {}
    for r in p:
        if not r.cells or r.cells[-1].evt != TICK:
            out.add(r)
            continue
        m = len(r.cells) - 1
        if m > k:
            continue
        if k - m not in cache:
            cache[k - m] = q_at(k - m)
        head = r.cells[:-1]
        out.update(FlTrace(head + s.cells, s.final) for s in cache[k - m])
    return frozenset(restrict(out, k))


def chaos(universe, k):
    """Every tick-respecting FL trace of size at most ``k``."""
    accs = acceptances(universe)
    steps = [Cell(a, e) for a in accs for e in sorted(universe) if a is None or e in a]
    plain = [c for c in steps if c.evt != TICK]
    out = set()
    frontier = [()]
    for depth in range(k + 1):
        for cells in frontier:
            out.update(FlTrace(cells, a) for a in accs)
            out.add(FlTrace(cells + (Cell(None, TICK),), None))
        if depth < k:
            frontier = [cells + (c,) for cells in frontier for c in plain]
    return frozenset(out)


SKIP_TRACES = frozenset({NULL_TRACE, FlTrace((Cell(None, TICK),), None)})
STOP_TRACES = frozenset({NULL_TRACE, FlTrace((), frozenset())})
DIV_TRACES = frozenset({NULL_TRACE})


# ---------------------------------------------------------------------------
# denotations


class _Denoter:
    def __init__(self, env, universe):
        self.env = env
        self.universe = universe
        self.memo = {}

    def __call__(self, e, k):
        key = (e, k)
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self._denote(e, k)
        return hit

    def _denote(self, e, k):
        if isinstance(e, lang.Div):
            return DIV_TRACES
        if isinstance(e, lang.Stop):
            return STOP_TRACES
        if isinstance(e, lang.Skip):
            return SKIP_TRACES
        if isinstance(e, lang.Chaos):
            return chaos(self.universe, k)
        if isinstance(e, lang.Prefix):
            rest = self(e.body, k - 1) if k > 0 else ()
            return prefix(e.event, rest)
        if isinstance(e, lang.TPrefix):
            acc = frozenset({e.event, TOCK})
            out = {NULL_TRACE, FlTrace((), acc)}
            if k > 0:
                for a in (None, acc):
                    out.update(_cons(Cell(a, e.event), r) for r in self(e.body, k - 1))
                    out.update(_cons(Cell(a, TOCK), r) for r in self(e, k - 1))
            return frozenset(out)
        if isinstance(e, lang.Wait):
            if e.n <= 0:
                return SKIP_TRACES
            rest = self(lang.Wait(e.n - 1), k - 1) if k > 0 else ()
            return prefix_with(TOCK, frozenset({TOCK}), rest)
        if isinstance(e, lang.IntChoice):
            return int_choice(self(e.left, k), self(e.right, k))
        if isinstance(e, lang.ExtChoice):
            return ext_choice(self(e.left, k), self(e.right, k))
        if isinstance(e, lang.TExtChoice):
            return ext_choice(self(e.left, k), self(e.right, k), timed=True)
        if isinstance(e, lang.Seq):
            return seq(self(e.left, k), lambda m: self(e.right, m), k)
        if isinstance(e, lang.ProcRef):
            return self(self.env[e.name], k)
        raise TypeError(f"not a process expression: {e!r}")


def denote_fl(e, env, k, universe) -> FlDenotation:
    """Traces of ``e`` with at most ``k`` cells.

    ``env`` maps process names to expressions and must be guarded.
    """
    if k < 0:
        raise BoundError(f"bound must be non-negative, got {k}")
    return FlDenotation(_Denoter(env, frozenset(universe))(e, k), k, frozenset(universe))


def denote_spec(spec, k, name=None) -> FlDenotation:
    from .core import universe as mk_universe

    e = spec.defs[name] if name else spec.main_expr()
    return denote_fl(e, spec.defs, k, mk_universe(spec.alphabet))


# ---------------------------------------------------------------------------
# healthiness


def fl_completions(rho):
    """FL2 completions of a single trace (one per event in its final acceptance)."""
    if rho.final is None:
        return []
    return [FlTrace(rho.cells + (Cell(rho.final, e),), None) for e in sorted(rho.final)]


def check_fl0(p) -> bool:
    return bool(_traces(p))


def check_fl1(p) -> bool:
    traces = _traces(p)
    return all(q in traces for r in traces for q in fl_prefixes(r))


def check_fl2(p, bound=None) -> bool:
    """FL2; traces already at ``bound`` are exempt, their completions lie beyond it."""
    traces = _traces(p)
    bound = _bound(p, bound)
    for r in traces:
        if bound is not None and fl_size(r) >= bound:
            continue
        if any(c not in traces for c in fl_completions(r)):
            return False
    return True


def check_fl3(p) -> bool:
    return all(is_fl_tick(r) for r in _traces(p))


def fl_healthy(p, bound=None) -> bool:
    return check_fl0(p) and check_fl1(p) and check_fl2(p, bound) and check_fl3(p)


def fl_health_report(p, bound=None) -> dict:
    return {
        "FL0": check_fl0(p),
        "FL1": check_fl1(p),
        "FL2": check_fl2(p, bound),
        "FL3": check_fl3(p),
    }


def fl_healthy_closure(rho: FlTrace) -> frozenset:
    """The least FL-healthy set containing ``rho``."""
    if not is_fl_tick(rho):
        raise NotFlTick(f"{rho} violates the tick rules")
    out = set()
    todo = [rho]
    while todo:
        r = todo.pop()
        if r in out:
            continue
        out.add(r)
        todo.extend(q for q in fl_prefixes(r) if q not in out)
        todo.extend(c for c in fl_completions(r) if c not in out)
    return frozenset(out)


def refines_fl(spec: FlDenotation, impl: FlDenotation) -> bool:
    """``impl`` refines ``spec`` when its traces are among the spec's."""
    if spec.bound != impl.bound or spec.universe != impl.universe:
        raise BoundMismatch("denotations differ in bound or universe")
    return impl.traces <= spec.traces


def _traces(p):
    return p.traces if isinstance(p, FlDenotation) else p


def _bound(p, bound):
    if bound is not None:
        return bound
    return p.bound if isinstance(p, FlDenotation) else None
