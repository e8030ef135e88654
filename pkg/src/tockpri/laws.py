"""Generators and executable law suites.

Each suite returns a list of :class:`LawResult`.  Generated inputs come from a
seeded ``random.Random`` so reports are reproducible.  The exhaustive checks
use a tiny universe: alphabet ``{a}`` and every healthy set decided at bound 1
(the settled region), which is small enough to enumerate completely.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

from . import lang
from .core import (
    TICK,
    TOCK,
    Cell,
    Evt,
    FlTrace,
    PriorityOrder,
    Ref,
    all_orders,
    format_fl,
    format_tt,
    fl_size,
    subsets,
    universe as mk_universe,
)
from .fl import (
    FlDenotation,
    acceptances,
    denote_fl,
    denote_spec,
    ext_choice,
    fl_healthy,
    fl_healthy_closure,
    prefix,
    seq,
    settled_fl,
)
from .flpri import pri_fl, pri_fl_traces
from .galois import fl2tt, fl2ttm, tt2fl, tt2fl_direct, ttm2fl
from .tt import (
    TtDenotation,
    check_tt0,
    check_tt1,
    check_tt1w,
    check_tt2,
    check_tt3,
    check_tt4,
    check_ttm1,
    check_ttm2,
    check_ttm3,
    mk_tt1,
    mk_tt1_traces,
    prefixes,
    tt_healthy,
    tt_healthy_closure,
    ttm_healthy,
    un_tt1,
)
from .ttpri import pri_tt, priref, correspondence_sides

SUITES = ("lemma1", "lemma2", "lemma3", "closure", "galois", "theorem1", "examples")


@dataclass
class LawResult:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, holds: bool, witness=None):
        self.instances += 1
        if not holds and len(self.failures) < 5:
            self.failures.append(witness() if callable(witness) else witness)


# ---------------------------------------------------------------------------
# generators


def gen_expr(rng: random.Random, sigma, depth: int):
    """A random closed process term over ``sigma``."""
    events = sorted(sigma)
    if depth <= 0:
        return rng.choice([lang.STOP, lang.SKIP, lang.DIV, lang.Wait(rng.randint(0, 1))])
    kind = rng.choice(["prefix", "prefix", "tprefix", "ext", "text", "int", "seq", "wait", "leaf"])
    sub = lambda: gen_expr(rng, sigma, depth - 1)
    if kind == "prefix":
        return lang.Prefix(rng.choice(events), sub())
    if kind == "tprefix":
        return lang.TPrefix(rng.choice(events), sub())
    if kind == "ext":
        return lang.ExtChoice(sub(), sub())
    if kind == "text":
        return lang.TExtChoice(sub(), sub())
    if kind == "int":
        return lang.IntChoice(sub(), sub())
    if kind == "seq":
        return lang.Seq(sub(), sub())
    if kind == "wait":
        return lang.Seq(lang.Wait(rng.randint(1, 2)), sub())
    return gen_expr(rng, sigma, 0)


def gen_fl_trace(rng: random.Random, universe, k: int) -> FlTrace:
    """A random tick-respecting FL trace with at most ``k`` counted cells."""
    plain = sorted(universe - {TICK})
    cells = []
    for _ in range(rng.randint(0, k)):
        e = rng.choice(plain)
        if rng.random() < 0.4:
            acc = None
        else:
            acc = frozenset({e} | {x for x in plain if rng.random() < 0.5})
        cells.append(Cell(acc, e))
    if rng.random() < 0.2:
        return FlTrace(tuple(cells) + (Cell(None, TICK),), None)
    if rng.random() < 0.3:
        return FlTrace(tuple(cells), None)
    return FlTrace(tuple(cells), frozenset(x for x in plain if rng.random() < 0.5))


def gen_closure_set(rng: random.Random, universe, k: int, n: int = 3) -> FlDenotation:
    """Union of the least healthy sets around a few random traces, cut at ``k``."""
    out = set()
    for _ in range(n):
        out |= fl_healthy_closure(gen_fl_trace(rng, universe, k))
    return FlDenotation(frozenset(r for r in out if fl_size(r) <= k), k, frozenset(universe))


def gen_fl_set(rng: random.Random, sigma, k: int) -> FlDenotation:
    """A healthy FL set: half from random terms, half from trace closures."""
    u = mk_universe(sigma)
    if rng.random() < 0.5:
        return denote_fl(gen_expr(rng, sigma, 3), {}, k, u)
    return gen_closure_set(rng, u, k, rng.randint(1, 4))


def gen_fl_family(seed: int, sigma, k: int, count: int):
    rng = random.Random(seed)
    return [gen_fl_set(rng, sigma, k) for _ in range(count)]


@lru_cache(maxsize=None)
def _orders(u):
    return list(all_orders(u))


def gen_order(rng: random.Random, u) -> PriorityOrder:
    return rng.choice(_orders(frozenset(u)))


# ---------------------------------------------------------------------------
# the tiny universe: alphabet {a}, everything decided at bound 1

TINY_SIGMA = frozenset({"a"})
TINY_BOUND = 1


def _unions(generators):
    family = {frozenset()}
    for g in set(generators):
        family |= {f | g for f in family}
    return family


@lru_cache(maxsize=None)
def tiny_fl_sets():
    """Every FL-healthy set of settled traces at bound 1 over ``{a}``."""
    u = mk_universe(TINY_SIGMA)
    traces = {FlTrace((), a) for a in acceptances(u)} | {FlTrace((Cell(None, TICK),), None)}
    for a in acceptances(u):
        for e in sorted(u - {TICK}):
            if a is None or e in a:
                traces.add(FlTrace((Cell(a, e),), None))
                traces.add(FlTrace((Cell(a, e), Cell(None, TICK)), None))
    gens = (frozenset(x for x in fl_healthy_closure(r) if settled_fl(x, TINY_BOUND)) for r in traces)
    out = [FlDenotation(f, TINY_BOUND, u, False) for f in _unions(gens) if f]
    return [d for d in out if fl_healthy(d)]


def _tiny_tt_universe():
    u = mk_universe(TINY_SIGMA)
    refs = [Ref(x) for x in subsets(u)]
    out = [(), (Evt(TICK),), (Evt("a"),), (Evt("a"), Evt(TICK))]
    out += [(r,) for r in refs]
    out += [(r, Evt(TOCK)) for r in refs]
    out += [(r, Evt(TOCK), Evt(TICK)) for r in refs]
    return u, out


@lru_cache(maxsize=None)
def tiny_ttm_sets():
    """Every TTM-healthy (maximal) set decided at bound 1 over ``{a}``."""
    u, traces = _tiny_tt_universe()
    maximal = [t for t in traces if all(TICK in o.events for o in t if isinstance(o, Ref))]
    gens = (tt_healthy_closure(t, u, TINY_BOUND) for t in maximal)
    out = [TtDenotation(f, TINY_BOUND, u, "maximal", False) for f in _unions(gens) if f]
    return [d for d in out if ttm_healthy(d)]


@lru_cache(maxsize=None)
def tiny_tt_sets():
    """Every TT-healthy (subset-closed) set decided at bound 1 over ``{a}``."""
    u, traces = _tiny_tt_universe()
    gens = (mk_tt1_traces(prefixes(t)) for t in traces)
    out = [TtDenotation(f, TINY_BOUND, u, "full", False) for f in _unions(gens) if f]
    return [d for d in out if tt_healthy(d) and check_tt3(d)]


# ---------------------------------------------------------------------------
# suites


def _diff(a, b, fmt):
    return "only left: " + ", ".join(sorted(fmt(x) for x in a - b)) + "; only right: " + ", ".join(
        sorted(fmt(x) for x in b - a)
    )


def suite_lemma1(seed=0, depth=2, count=100):
    rng = random.Random(seed)
    sigma = {"a", "b"}
    u = mk_universe(sigma)
    idem = LawResult("priFL idempotent")
    dist = LawResult("priFL distributes over internal choice")
    pref = LawResult("priFL distributes over prefix (maximal prefix event)")
    for _ in range(count):
        p = gen_fl_set(rng, sigma, depth)
        q = gen_fl_set(rng, sigma, depth)
        order = gen_order(rng, u)
        once = pri_fl_traces(order, p.traces)
        twice = pri_fl_traces(order, once)
        idem.check(once == twice, lambda: f"{order}: " + _diff(once, twice, format_fl))
        left = pri_fl_traces(order, p.traces | q.traces)
        right = once | pri_fl_traces(order, q.traces)
        dist.check(left == right, lambda: f"{order}: " + _diff(left, right, format_fl))
        a = rng.choice([e for e in sorted(u - {TICK}) if order.is_maximal(e)] or [TOCK])
        if order.is_maximal(a):
            lhs = pri_fl_traces(order, prefix(a, p.traces))
            rhs = prefix(a, once)
            pref.check(lhs == rhs, lambda: f"{order}, {a}: " + _diff(lhs, rhs, format_fl))
    return [idem, dist, pref]


def suite_lemma2(seed=0, depth=2, count=100):
    rng = random.Random(seed)
    sigma = {"a", "b"}
    u = mk_universe(sigma)
    law = LawResult("priFL distributes over sequence (tick maximal)")
    orders = [o for o in _orders(u) if o.is_maximal(TICK)]
    for _ in range(count):
        p = gen_fl_set(rng, sigma, depth)
        q = gen_fl_set(rng, sigma, depth)
        order = rng.choice(orders)
        lhs = pri_fl_traces(order, seq(p.traces, lambda m: q.restrict(m).traces, depth))
        rhs = seq(
            pri_fl_traces(order, p.traces),
            lambda m: pri_fl_traces(order, q.restrict(m).traces),
            depth,
        )
        law.check(lhs == rhs, lambda: f"{order}: " + _diff(lhs, rhs, format_fl))
    return [law]


def suite_lemma3(seed=0, depth=2, count=100):
    rng = random.Random(seed)
    sigma = {"a", "b"}
    u = mk_universe(sigma)
    law = LawResult("priFL prunes the lower branch of a prefix choice")
    orders = [o for o in _orders(u) if o.lt("a", "b")]
    for _ in range(count):
        p = gen_fl_set(rng, sigma, depth)
        q = gen_fl_set(rng, sigma, depth)
        order = rng.choice(orders)
        lhs = pri_fl_traces(order, ext_choice(prefix("b", p.traces), prefix("a", q.traces)))
        rhs = pri_fl_traces(order, prefix("b", p.traces))
        law.check(lhs == rhs, lambda: f"{order}: " + _diff(lhs, rhs, format_fl))
    return [law]


def _corpus_denotations(k):
    return {name: denote_spec(spec, k) for name, spec in lang.builtin_corpus().items()}


def suite_closure(seed=0, depth=2, count=50):
    fl_sets = list(_corpus_denotations(depth).values()) + gen_fl_family(seed, {"a", "b"}, depth, count)
    image = LawResult("fl2ttm images satisfy TT0, TT1w, TTM1-3")
    full = LawResult("mkTT1 images satisfy TT0-TT4 (TT2, TT4 best-effort)")
    back = LawResult("ttm2fl images satisfy FL0-FL3")
    for d in fl_sets:
        m = fl2ttm(d)
        image.check(
            check_tt0(m) and check_tt1w(m) and check_ttm1(m) and check_ttm2(m) and check_ttm3(m),
            lambda: f"image of {len(d)} traces",
        )
        t = mk_tt1(m)
        full.check(tt_healthy(t) and check_tt3(t), lambda: f"closure of {len(d)} traces")
        g = ttm2fl(m)
        back.check(fl_healthy(g), lambda: f"adjoint of {len(d)} traces")
    return [image, full, back]


def _galois_tiny(results):
    step1, step2, comp, unit, counit, direct = results
    fls, ttms, tts = tiny_fl_sets(), tiny_ttm_sets(), tiny_tt_sets()
    f1 = {q.traces: fl2ttm(q, check=False).traces for q in fls}
    g1 = {p.traces: ttm2fl(p).traces for p in ttms}
    for q in fls:
        for p in ttms:
            step1.check((f1[q.traces] <= p.traces) == (q.traces <= g1[p.traces]),
                        lambda: f"tiny Q={len(q)} P={len(p)}")
    f2 = {q.traces: mk_tt1_traces(q.traces) for q in ttms}
    g2 = {p.traces: un_tt1(p).traces for p in tts}
    for q in ttms:
        for p in tts:
            step2.check((f2[q.traces] <= p.traces) == (q.traces <= g2[p.traces]),
                        lambda: f"tiny Q={len(q)} P={len(p)}")
    f3 = {q.traces: mk_tt1_traces(f1[q.traces]) for q in fls}
    g3 = {p.traces: tt2fl(p) for p in tts}
    for q in fls:
        for p in tts:
            comp.check((f3[q.traces] <= p.traces) == (q.traces <= g3[p.traces].traces),
                       lambda: f"tiny Q={len(q)} P={len(p)}")
    for q in fls:
        unit.check(q.traces <= tt2fl(mk_tt1(fl2ttm(q, check=False))).traces, "tiny unit")
    for p in tts:
        back = mk_tt1(fl2ttm(g3[p.traces], check=False))
        counit.check(back.traces <= p.traces, "tiny counit")
        direct.check(tt2fl_direct(p).traces == g3[p.traces].traces, "tiny direct")


def _galois_random(results, seed, depth, count):
    step1, step2, comp, unit, counit, direct = results
    mono = LawResult("adjoints are monotone")
    rng = random.Random(seed)
    sigma = {"a", "b"}
    for _ in range(count):
        q = gen_fl_set(rng, sigma, depth)
        r = gen_fl_set(rng, sigma, depth)
        both = FlDenotation(q.traces | r.traces, depth, q.universe)
        qs = q.settled()
        for p_fl in (r, both):
            pm = fl2ttm(p_fl)
            step1.check((fl2ttm(qs, check=False).traces <= pm.traces) == (qs.traces <= ttm2fl(pm).traces),
                        "random step 1")
            pt = mk_tt1(pm)
            qm = fl2ttm(qs, check=False)
            step2.check((mk_tt1_traces(qm.traces) <= pt.traces) == (qm.traces <= un_tt1(pt).traces),
                        "random step 2")
            back = tt2fl(pt)
            comp.check((fl2tt(qs, check=False).traces <= pt.traces) == (qs.traces <= back.traces),
                       "random composite")
            counit.check(fl2tt(back, check=False).traces <= pt.traces, "random counit")
            direct.check(tt2fl_direct(pt).traces == back.traces, "random direct")
        unit.check(qs.traces <= tt2fl(fl2tt(q)).traces, "random unit")
        small, big = fl2tt(q), fl2tt(both)
        mono.check(fl2ttm(q).traces <= fl2ttm(both).traces and small.traces <= big.traces, "left")
        mono.check(ttm2fl(fl2ttm(q)).traces <= ttm2fl(fl2ttm(both)).traces, "ttm2fl")
        mono.check(un_tt1(small).traces <= un_tt1(big).traces, "unTT1")
        mono.check(tt2fl(small).traces <= tt2fl(big).traces, "tt2fl")
    return mono


def suite_galois(seed=0, depth=2, count=30, exhaustive=True):
    results = [
        LawResult("fl2ttm/ttm2fl adjunction"),
        LawResult("mkTT1/unTT1 adjunction"),
        LawResult("fl2tt/tt2fl adjunction"),
        LawResult("unit: Q within tt2fl(fl2tt(Q))"),
        LawResult("counit: fl2tt(tt2fl(P)) within P"),
        LawResult("tt2fl agrees with its direct form"),
    ]
    if exhaustive:
        _galois_tiny(results)
    mono = _galois_random(results, seed, depth, count)
    return results + [mono]


CORPUS_ORDERS = [
    (),
    (("a", "b"),),
    (("b", "a"),),
    ((TOCK, "a"),),
    (("a", TOCK),),
    (("a", "b"), ("b", TOCK)),
    (("a", TICK),),
    ((TICK, "a"), (TOCK, "b")),
]


def _theorem_check(res, order, p):
    lhs, rhs = correspondence_sides(order, p)
    res.check(lhs.traces == rhs.traces, lambda: f"{order}: " + _diff(lhs.traces, rhs.traces, format_tt))


def suite_theorem1(seed=0, depth=2, count=20, exhaustive=True, corpus=True):
    results = []
    if corpus:
        res = LawResult(f"theorem on the corpus, bounds 0..{depth}")
        for k in range(depth + 1):
            for d in _corpus_denotations(k).values():
                p = fl2tt(d)
                for pairs in CORPUS_ORDERS:
                    _theorem_check(res, PriorityOrder.of(*pairs), p)
        results.append(res)
    if exhaustive:
        res = LawResult("theorem on every tiny TT-healthy set, every order")
        for p in tiny_tt_sets():
            for order in _orders(p.universe):
                _theorem_check(res, order, p)
        results.append(res)
    rng = random.Random(seed)
    res = LawResult("theorem on generated sets")
    for _ in range(count):
        d = gen_fl_set(rng, {"a", "b"}, depth)
        _theorem_check(res, gen_order(rng, d.universe), fl2tt(d))
    results.append(res)
    return results


def suite_examples(seed=0, depth=2, count=0):
    from .core import tt
    from .lang import SKIP, Prefix

    corpus = lang.builtin_corpus()
    den = lambda name, k: denote_spec(corpus[name], k)
    ab = PriorityOrder.of(("a", "b"))
    u = mk_universe({"a", "b"})
    out = []

    def case(name, holds):
        res = LawResult(name)
        res.check(bool(holds), "mismatch")
        out.append(res)

    case("denotation of R at bound 2", den("R", 2).traces == R_TRACES)
    case("priFL of R", pri_fl(ab, den("R", 2)).traces == PRI_R_TRACES)
    case("priFL leaves S unchanged", pri_fl(ab, den("S", 3)).traces == den("S", 3).traces)
    case("priFL maps T to priT", pri_fl(ab, den("T", 3)).traces == den("priT", 3).traces)
    case("S and T agree in tick-tock", all(fl2tt(den("S", k)).traces == fl2tt(den("T", k)).traces for k in (1, 2, 3)))
    t3 = fl2tt(den("T", 3))
    case("priTT leaves T unchanged", pri_tt(ab, t3).traces == t3.settled().traces)
    listed = [tt(), tt({TICK}), tt("a"), tt("b"), tt("a", TICK), tt("b", TICK), tt({"a", "b", TICK}),
              tt({"a", "b", TICK}, TOCK)]
    case("listed traces of T", all(x in fl2ttm(den("T", 3)).traces for x in listed))
    case("priref of T, empty refusal", priref(ab, (), t3, set()) == {"a"})
    # follows the formal definition: a refused event cannot pre-empt tock
    tock_a = PriorityOrder.of(("a", "b"), (TOCK, "a"))
    case("priref of T with tock below a", priref(tock_a, (), t3, {"a", "b", TICK}) == {"a", "b", TICK})
    case("priref of T with tock below a, b offered", priref(tock_a, (), t3, {"b", TICK}) == {"b", TICK, TOCK})
    k2 = fl2tt(den("K", 2))
    case("priref of K with f below tick", priref(PriorityOrder.of(("f", TICK)), (), k2, set()) == frozenset())
    r2 = fl2tt(den("R", 2))
    b_skip = fl2tt(denote_fl(Prefix("b", SKIP), {}, 2, u))
    case("priTT of R is b -> SKIP", pri_tt(ab, r2).traces == b_skip.settled().traces)
    return out


def _fl(*parts):
    from .core import flt

    return flt(*parts)


AB = frozenset({"a", "b"})
R_TRACES = frozenset({
    _fl(None),
    _fl(AB),
    _fl((None, "a"), None),
    _fl((AB, "a"), None),
    _fl((None, "b"), None),
    _fl((AB, "b"), None),
    _fl((None, "a"), (None, TICK), None),
    _fl((AB, "a"), (None, TICK), None),
    _fl((None, "b"), (None, TICK), None),
    _fl((AB, "b"), (None, TICK), None),
})
PRI_R_TRACES = frozenset({
    _fl(None),
    _fl({"b"}),
    _fl((None, "b"), None),
    _fl(({"b"}, "b"), None),
    _fl((None, "b"), (None, TICK), None),
    _fl(({"b"}, "b"), (None, TICK), None),
})


RUNNERS = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "closure": suite_closure,
    "galois": suite_galois,
    "theorem1": suite_theorem1,
    "examples": suite_examples,
}


def run_suite(name: str, seed: int = 0, depth: int = 2):
    return RUNNERS[name](seed=seed, depth=depth)
