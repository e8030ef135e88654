import random

import pytest
from hypothesis import given, settings, strategies as st

from tockpri.core import NULL_TRACE, TICK, TOCK, Cell, FlTrace, flt, is_fl_tick, is_valid_tt, tt, universe
from tockpri.fl import FlDenotation, denote_fl, fl_healthy
from tockpri.lang import CHAOS
from tockpri.galois import UnhealthyInput, fl2tt, fl2ttm, fl2ttobs, tt2fl, tt2fl_direct, ttm2fl
from tockpri.laws import gen_fl_set, gen_fl_trace
from tockpri.tt import TtDenotation, check_tt0, check_tt1w, check_ttm1, check_ttm2, check_ttm3, mk_tt1

AB = frozenset({"a", "b"})
U = universe(AB)


def test_fl2ttobs_clauses():
    assert fl2ttobs(NULL_TRACE, U) == tt()
    assert fl2ttobs(flt(AB), U) == tt({TICK, TOCK})
    assert fl2ttobs(flt(({TOCK}, TOCK), (None, "a"), None), U) == tt({"a", "b", TICK}, TOCK, "a")
    assert fl2ttobs(flt((AB, "a"), (None, TICK), None), U) == tt("a", TICK)


def test_unstable_tock_truncates():
    rho = flt((None, "a"), (None, TOCK), ({"b"}, "b"), {"a"})
    assert fl2ttobs(rho, U) == tt("a")
    assert fl2ttobs(flt((None, TOCK), (None, TOCK), None), U) == tt()


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_images_are_valid(seed):
    rho = gen_fl_trace(random.Random(seed), U, 4)
    assert is_fl_tick(rho)
    assert is_valid_tt(fl2ttobs(rho, U))


def test_fl2ttm_examples(den):
    assert fl2ttm(FlDenotation(frozenset({NULL_TRACE}), 0, U)).traces == {tt()}
    image = fl2ttm(den("T", 3)).traces
    for t in [tt({TICK}), tt("a"), tt("b"), tt("a", TICK), tt({"a", "b", TICK}), tt({"a", "b", TICK}, TOCK)]:
        assert t in image


def test_fl2ttm_rejects_unhealthy():
    with pytest.raises(UnhealthyInput):
        fl2ttm(FlDenotation(frozenset({flt((None, "a"), None)}), 1, U))


def test_trivial_adjoints():
    empty = TtDenotation(frozenset({tt()}), 2, U)
    # an unstable tock truncates the observation, so whatever follows one
    # maps to the empty trace as well
    anything = denote_fl(CHAOS, {}, 1, U).settled().traces
    expected = {NULL_TRACE} | {FlTrace((Cell(None, TOCK),) + r.cells, r.final) for r in anything}
    assert ttm2fl(empty).traces == expected
    assert tt2fl(empty).traces == expected
    assert fl2tt(FlDenotation(frozenset({NULL_TRACE}), 2, U)).traces == {tt()}


def test_s_and_t_agree_in_tick_tock(den):
    for k in (1, 2, 3):
        assert fl2tt(den("S", k)).traces == fl2tt(den("T", k)).traces


def test_r_refines_untimed_t(den):
    assert fl2tt(den("R", 2)).traces <= fl2tt(den("Tu", 2)).traces
    # the timed T keeps time passing, the untimed prefixes of R do not
    assert not fl2tt(den("R", 2)).traces <= fl2tt(den("T", 2)).traces


def test_ttm2fl_excludes_unmapped_acceptance(den):
    image = fl2ttm(den("S", 2))
    assert tt({TICK}) not in image.traces
    back = ttm2fl(image).traces
    assert flt((None, "a"), None) in back
    assert flt({"a", "b", TOCK}) not in back


def test_corpus_units_and_counits(den, corpus):
    for name in corpus:
        for k in (1, 2):
            d = den(name, k)
            settled = d.settled().traces
            assert settled <= ttm2fl(fl2ttm(d)).traces
            back = tt2fl(fl2tt(d))
            assert settled <= back.traces
            assert back.traces == tt2fl_direct(fl2tt(d)).traces
            assert fl2tt(back, check=False).traces <= fl2tt(d).traces
            assert fl2ttm(ttm2fl(fl2ttm(d)), check=False).traces <= fl2ttm(d).traces


def test_closure_properties_on_corpus(den, corpus):
    for name in corpus:
        m = fl2ttm(den(name, 2))
        assert check_tt0(m) and check_tt1w(m) and check_ttm1(m) and check_ttm2(m) and check_ttm3(m)
        assert fl_healthy(ttm2fl(m))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_composite_adjunction(seed):
    rng = random.Random(seed)
    q = gen_fl_set(rng, AB, 2).settled()
    p = fl2tt(gen_fl_set(rng, AB, 2))
    assert (fl2tt(q, check=False).traces <= p.traces) == (q.traces <= tt2fl(p).traces)
    assert fl2tt(tt2fl(p), check=False).traces <= p.traces
