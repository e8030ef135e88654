import pytest
from hypothesis import given, settings, strategies as st

from tockpri import lang
from tockpri.lang import (
    CHAOS,
    DIV,
    SKIP,
    STOP,
    ExtChoice,
    IntChoice,
    Prefix,
    ProcRef,
    Seq,
    SpecSyntaxError,
    TExtChoice,
    TPrefix,
    UnboundProcessName,
    UnguardedRecursion,
    UnknownEvent,
    Wait,
    parse,
    parse_expr,
    pretty,
    render,
)


def test_parse_timed_choice():
    spec = parse("alphabet a, b\norder a < b\nprocess T = (a ->t SKIP [+] b ->t SKIP) |~| (WAIT 1 ; T)\n")
    t = spec.main_expr()
    assert t == IntChoice(TExtChoice(TPrefix("a", SKIP), TPrefix("b", SKIP)), Seq(Wait(1), ProcRef("T")))
    assert spec.order.lt("a", "b")


def test_precedence_and_associativity():
    assert parse_expr("a -> STOP [] b -> SKIP |~| DIV") == IntChoice(
        ExtChoice(Prefix("a", STOP), Prefix("b", SKIP)), DIV
    )
    assert parse_expr("SKIP ; SKIP ; STOP") == Seq(SKIP, Seq(SKIP, STOP))
    assert parse_expr("a -> SKIP ; STOP") == Seq(Prefix("a", SKIP), STOP)


def test_order_chains_and_inferred_alphabet():
    spec = parse("order a < b < c\nprocess P = a -> b -> c -> STOP")
    assert spec.alphabet == {"a", "b", "c"}
    assert spec.order.lt("a", "c")


def test_main_directive():
    spec = parse("process P = STOP\nprocess Q = SKIP\nmain Q")
    assert spec.main == "Q"
    assert parse("process P = STOP\nprocess Q = SKIP").main == "P"


def test_comments_and_blank_lines():
    spec = parse("# header\n\nalphabet a  # trailing\nprocess P = a -> STOP\n")
    assert spec.main_expr() == Prefix("a", STOP)


def test_syntax_error_has_position():
    with pytest.raises(SpecSyntaxError) as info:
        parse("alphabet a\nprocess P = a -> ")
    assert info.value.line == 2
    assert info.value.column is not None


def test_unknown_event():
    with pytest.raises(UnknownEvent):
        parse("alphabet a\nprocess P = b -> STOP")
    with pytest.raises(UnknownEvent):
        parse("alphabet a\norder a < z\nprocess P = a -> STOP")


def test_reserved_events_rejected():
    with pytest.raises(SpecSyntaxError):
        parse("alphabet tick\nprocess P = STOP")
    with pytest.raises(UnknownEvent):
        parse_expr("tock -> STOP")


def test_unbound_name():
    with pytest.raises(UnboundProcessName):
        parse("process P = a -> Q")


def test_cyclic_order_rejected():
    with pytest.raises(ValueError):
        parse("order a < b, b < a\nprocess P = a -> b -> STOP")


@pytest.mark.parametrize(
    "body",
    ["P", "P [] a -> STOP", "SKIP ; P", "WAIT 0 ; P", "(SKIP |~| a -> STOP) ; P", "CHAOS ; P"],
)
def test_unguarded_recursion_detected(body):
    with pytest.raises(UnguardedRecursion):
        parse(f"alphabet a\nprocess P = {body}")


def test_mutual_unguarded_recursion_reports_cycle():
    with pytest.raises(UnguardedRecursion) as info:
        parse("process P = Q\nprocess Q = SKIP ; P")
    assert set(info.value.cycle) == {"P", "Q"}


@pytest.mark.parametrize(
    "body",
    ["a -> P", "WAIT 1 ; P", "a ->t P", "(a -> SKIP) ; P", "STOP ; P", "(WAIT 2 [] a -> SKIP) ; P"],
)
def test_guarded_recursion_accepted(body):
    parse(f"alphabet a\nprocess P = {body}")


def test_corpus_parses(corpus):
    assert set(corpus) >= {"R", "S", "T", "priT", "K"}
    assert corpus["K"].order.lt("f", "tick")


def test_render_round_trip(corpus):
    for spec in corpus.values():
        again = parse(render(spec))
        assert again.defs == spec.defs
        assert again.order == spec.order
        assert again.alphabet == spec.alphabet


# --- printer/parser round trip --------------------------------------------

leaves = st.sampled_from([STOP, SKIP, DIV, CHAOS, Wait(0), Wait(2), ProcRef("P")])
names = st.sampled_from(["a", "b"])


def _extend(children):
    return st.one_of(
        st.builds(Prefix, names, children),
        st.builds(TPrefix, names, children),
        st.builds(ExtChoice, children, children),
        st.builds(TExtChoice, children, children),
        st.builds(IntChoice, children, children),
        st.builds(Seq, children, children),
    )


exprs = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(exprs)
def test_pretty_then_parse_is_identity(e):
    assert parse_expr(pretty(e)) == e


@given(exprs)
def test_nested_layout_survives(e):
    text = pretty(IntChoice(Seq(e, e), ExtChoice(e, STOP)))
    assert parse_expr(text) == IntChoice(Seq(e, e), ExtChoice(e, STOP))
