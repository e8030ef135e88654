"""Tick-tock trace sets: healthiness checks, subset closure and its adjoint.

Bounds count non-tick events (``tt_size``), matching the FL cell count, so a
TT set at bound ``k`` is exactly the image of an FL set at bound ``k``.  A
set is *complete* when it holds every trace up to the bound; sets produced by
right adjoints and by prioritisation are not, because traces at the bound that
end in a refusal would need one more level of input to decide.  Membership
queries that fall outside what a set decides are answered optimistically; this
is the headroom rule that exempts completions beyond the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import (
    TICK,
    TOCK,
    Evt,
    Ref,
    ends_open,
    is_valid_tt,
    tt_below,
    tt_size,
)

MAXIMAL = "maximal"
FULL = "full"


class InvalidTrace(ValueError):
    pass


@dataclass(frozen=True)
class TtDenotation:
    traces: frozenset
    bound: int
    universe: frozenset
    flavour: str = FULL
    complete: bool = True

    def __len__(self):
        return len(self.traces)

    def __contains__(self, t):
        return t in self.traces

    def decides(self, t) -> bool:
        return tt_decided(t, self.bound, self.complete)

    def member(self, t) -> bool:
        """Membership with the headroom rule: undecided traces count as present."""
        return t in self.traces or not self.decides(t)

    def restrict(self, k: int) -> "TtDenotation":
        complete = k < self.bound or self.complete
        keep = frozenset(t for t in self.traces if tt_decided(t, k, complete))
        return TtDenotation(keep, k, self.universe, self.flavour, complete)

    def settled(self) -> "TtDenotation":
        """Drop the traces at the bound that end in a refusal."""
        keep = frozenset(t for t in self.traces if tt_decided(t, self.bound, False))
        return TtDenotation(keep, self.bound, self.universe, self.flavour, False)


def tt_decided(t, bound, complete=True) -> bool:
    n = tt_size(t)
    return n < bound or (n == bound and (complete or not ends_open(t)))


def prefixes(t):
    return [t[:i] for i in range(len(t) + 1)]


@lru_cache(maxsize=200_000)
def _below(t):
    return frozenset(tt_below(t))


# ---------------------------------------------------------------------------
# subset closure


def mk_tt1_traces(traces) -> frozenset:
    out = set(traces)
    for s in traces:
        out |= _below(s)
    return frozenset(out)


def mk_tt1(p: TtDenotation) -> TtDenotation:
    return TtDenotation(mk_tt1_traces(p.traces), p.bound, p.universe, FULL, p.complete)


# ---------------------------------------------------------------------------
# healthiness conditions


def _view(p, bound=None, universe=None):
    if isinstance(p, TtDenotation):
        return p
    return TtDenotation(frozenset(p), bound if bound is not None else 10**9, frozenset(universe or ()))


def check_tt0(p) -> bool:
    return () in _view(p).traces


def check_tt1w(p) -> bool:
    traces = _view(p).traces
    return all(t[:-1] in traces for t in traces if t)


def check_tt1(p) -> bool:
    """Closure under the prefix order, one generating step at a time."""
    traces = _view(p).traces
    for t in traces:
        if t and t[:-1] not in traces:
            return False
        for i, o in enumerate(t):
            if isinstance(o, Ref):
                for x in o.events:
                    if t[:i] + (Ref(o.events - {x}),) + t[i + 1:] not in traces:
                        return False
    return True


def tock_consistent(t) -> bool:
    """No tock directly after a refusal that contains tock."""
    return not any(
        isinstance(o, Ref) and TOCK in o.events and t[i + 1:i + 2] == (Evt(TOCK),)
        for i, o in enumerate(t)
    )


def check_tt3(p) -> bool:
    """Well-formed traces that never refuse a tock they then perform."""
    return all(is_valid_tt(t) and tock_consistent(t) for t in _view(p).traces)


def _available(d, rho, x):
    """Events that can follow ``rho`` when it is about to refuse ``x``."""
    out = {e for e in d.universe if e != TOCK and d.member(rho + (Evt(e),))}
    if d.member(rho + (Ref(x), Evt(TOCK))):
        out.add(TOCK)
    return out


def check_tt2(p, bound=None, universe=None) -> bool:
    """Best-effort TT2: a refusal may grow by anything that cannot happen next.

    Checked at every refusal in a trace with the continuation kept.
    """
    d = _view(p, bound, universe)
    for t in d.traces:
        for i, o in enumerate(t):
            if not isinstance(o, Ref):
                continue
            rho, rest = t[:i], t[i + 1:]
            extra = d.universe - o.events - _available(d, rho, o.events)
            if extra and not d.member(rho + (Ref(o.events | extra),) + rest):
                return False
    return True


def check_tt2w(p, bound=None, universe=None) -> bool:
    """TT2 restricted to refusals at the end of a trace."""
    d = _view(p, bound, universe)
    for t in d.traces:
        if ends_open(t):
            rho, x = t[:-1], t[-1].events
            extra = d.universe - x - _available(d, rho, x)
            if extra and not d.member(rho + (Ref(x | extra),)):
                return False
    return True


def check_tt4(p, bound=None, universe=None) -> bool:
    """Best-effort TT4: tick can be added to any refusal."""
    d = _view(p, bound, universe)
    for t in d.traces:
        for i, o in enumerate(t):
            if isinstance(o, Ref) and TICK not in o.events:
                if not d.member(t[:i] + (Ref(o.events | {TICK}),) + t[i + 1:]):
                    return False
    return True


def check_ttm1(p, bound=None, universe=None) -> bool:
    d = _view(p, bound, universe)
    for t in d.traces:
        if ends_open(t):
            rho, x = t[:-1], t[-1].events
            for e in d.universe - x - {TOCK}:
                if not d.member(rho + (Evt(e),)):
                    return False
    return True


def check_ttm2(p, bound=None, universe=None) -> bool:
    d = _view(p, bound, universe)
    for t in d.traces:
        if ends_open(t) and TOCK not in t[-1].events:
            if not d.member(t + (Evt(TOCK),)):
                return False
    return True


def check_ttm3(p) -> bool:
    return all(TICK in o.events for t in _view(p).traces for o in t if isinstance(o, Ref))


def ttm_healthy(p, bound=None, universe=None) -> bool:
    return (
        check_ttm1(p, bound, universe)
        and check_ttm2(p, bound, universe)
        and check_ttm3(p)
        and check_tt1w(p)
        and check_tt3(p)
    )


def tt_healthy(p, bound=None, universe=None) -> bool:
    """The implemented TT suite: TT0, TT1, TT2 and TT4 (best-effort), TT3."""
    return (
        check_tt0(p)
        and check_tt1(p)
        and check_tt2(p, bound, universe)
        and check_tt3(p)
        and check_tt4(p, bound, universe)
    )


def tt_health_report(p, bound=None, universe=None) -> dict:
    """Every implemented condition; ``TT2`` and ``TT4`` are sketched forms."""
    return {
        "TT0": check_tt0(p),
        "TT1": check_tt1(p),
        "TT1w": check_tt1w(p),
        "TT2*": check_tt2(p, bound, universe),
        "TT2w*": check_tt2w(p, bound, universe),
        "TT3": check_tt3(p),
        "TT4*": check_tt4(p, bound, universe),
        "TTM1": check_ttm1(p, bound, universe),
        "TTM2": check_ttm2(p, bound, universe),
        "TTM3": check_ttm3(p),
    }


SKETCHED = frozenset({"TT2*", "TT2w*", "TT4*"})


# ---------------------------------------------------------------------------
# least maximal-healthy closure and the right adjoint of mk_tt1


def tt_healthy_closure(rho, universe, bound=None) -> frozenset:
    """Least set containing ``rho`` closed under prefixes and TTM1/TTM2 completions.

    Completions larger than ``bound`` are left out.
    """
    if not is_valid_tt(rho):
        raise InvalidTrace(f"not a valid tick-tock trace: {rho}")
    if any(isinstance(o, Ref) and TICK not in o.events for o in rho):
        raise InvalidTrace("every refusal must contain tick")
    out = set(prefixes(rho))
    for t in list(out):
        if not ends_open(t):
            continue
        if bound is not None and tt_size(t) + 1 > bound:
            continue
        head, x = t[:-1], t[-1].events
        out.update(head + (Evt(e),) for e in universe - x - {TOCK})
        if TOCK not in x:
            out.add(t + (Evt(TOCK),))
    return frozenset(out)


def un_tt1(p: TtDenotation) -> TtDenotation:
    """Largest maximal-refusal set whose subset closure fits inside ``p``."""
    closed = check_tt1(p)
    keep = set()
    for t in p.traces:
        if not tt_decided(t, p.bound, False):
            continue
        if any(isinstance(o, Ref) and TICK not in o.events for o in t):
            continue
        cl = tt_healthy_closure(t, p.universe, p.bound)
        wanted = cl if closed else mk_tt1_traces(cl)
        if all(p.member(x) for x in wanted):
            keep.add(t)
    return TtDenotation(frozenset(keep), p.bound, p.universe, MAXIMAL, complete=False)
