"""Command-line front end.

Exit codes: 0 on success, 1 when a refinement, health check or law fails,
2 on usage or parse errors.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from . import lang
from .core import (
    RESERVED,
    Evt,
    PriorityOrder,
    fl_from_json,
    fl_to_json,
    format_fl,
    format_tt,
    mk_priority_order,
    sorted_fl,
    sorted_tt,
    tt_from_json,
    tt_to_json,
    universe as mk_universe,
)
from .fl import FlDenotation, denote_fl, fl_health_report
from .flpri import pri_fl
from .galois import fl2tt, fl2ttm, tt2fl, ttm2fl
from .laws import SUITES, run_suite
from .tt import FULL, MAXIMAL, SKETCHED, TtDenotation, mk_tt1, tt_health_report, un_tt1
from .ttpri import pri_tt

MODELS = ("fl", "ttm", "tt")


class UsageProblem(click.ClickException):
    exit_code = 2


def depth_max() -> int:
    return int(os.environ.get("TOCKPRI_DEPTH_MAX", "6"))


def _check_depth(k: int):
    if k < 0:
        raise UsageProblem("depth must be non-negative")
    if k > depth_max():
        raise UsageProblem(f"depth {k} exceeds TOCKPRI_DEPTH_MAX={depth_max()}")


def load_spec(source: str) -> lang.SpecFile:
    """A spec file path, a built-in corpus name, or an inline process expression."""
    try:
        path = Path(source)
        if path.is_file():
            return lang.parse(path.read_text())
        corpus = lang.builtin_corpus()
        if source in corpus:
            return corpus[source]
        if "process " in source:
            return lang.parse(source)
        lang.parse_expr(source)  # reports columns relative to the expression
        return lang.parse(f"process MAIN = {source}")
    except lang.ParseError as exc:
        raise UsageProblem(f"{source}: {exc}") from None


def parse_order(text: str) -> PriorityOrder:
    pairs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line.startswith("order "):
            line = line[len("order "):]
        for chunk in filter(None, (c.strip() for c in line.split(","))):
            chain = [c.strip() for c in chunk.split("<")]
            if len(chain) < 2 or not all(chain):
                raise UsageProblem(f"bad order entry {chunk!r}")
            pairs.extend(zip(chain, chain[1:]))
    try:
        return mk_priority_order(pairs)
    except ValueError as exc:
        raise UsageProblem(str(exc)) from None


def _order(spec, order_file):
    if order_file:
        return parse_order(Path(order_file).read_text())
    return spec.order


def _fl_den(spec, k, universe=None):
    u = universe if universe is not None else mk_universe(spec.alphabet)
    return denote_fl(spec.main_expr(), spec.defs, k, u)


def _in_model(d: FlDenotation, model: str):
    if model == "fl":
        return d
    if model == "ttm":
        return fl2ttm(d)
    return fl2tt(d)


def _payload(model, depth, traces):
    if model == "fl":
        items = [fl_to_json(r) for r in sorted_fl(traces)]
    else:
        items = [tt_to_json(t) for t in sorted_tt(traces)]
    return {"model": model, "depth": depth, "traces": items}


def emit(model, depth, traces, fmt):
    if fmt == "json":
        click.echo(json.dumps(_payload(model, depth, traces), sort_keys=True))
        return
    fmt_one = format_fl if model == "fl" else format_tt
    ordered = sorted_fl(traces) if model == "fl" else sorted_tt(traces)
    click.echo(f"# model {model}, depth {depth}, {len(ordered)} traces")
    for t in ordered:
        click.echo(fmt_one(t))


def _headroom(d, k):
    """Restrict a set computed at ``k + 1`` back to ``k``."""
    return d.restrict(k)


model_opt = click.option("--model", type=click.Choice(MODELS), default="fl", show_default=True)
depth_opt = click.option("--depth", "-k", type=int, default=2, show_default=True)
format_opt = click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="table",
                          show_default=True)
name_opt = click.option("--name", default=None, help="Process to use instead of the main one.")


def _select(spec, name):
    if not name:
        return spec
    try:
        return spec.with_main(name)
    except lang.ParseError as exc:
        raise UsageProblem(str(exc)) from None


@click.group()
def main():
    """Bounded trace semantics and priorities for tock-CSP."""


@main.command()
@click.argument("source")
@model_opt
@depth_opt
@format_opt
@name_opt
def denote(source, model, depth, fmt, name):
    """Print the traces of a process up to DEPTH events."""
    _check_depth(depth)
    spec = _select(load_spec(source), name)
    emit(model, depth, _in_model(_fl_den(spec, depth), model).traces, fmt)


@main.command()
@click.argument("source")
@click.option("--model", type=click.Choice(["fl", "tt"]), default="fl", show_default=True)
@depth_opt
@click.option("--order-file", type=click.Path(exists=True, dir_okay=False), default=None)
@format_opt
@name_opt
def prioritise(source, model, depth, order_file, fmt, name):
    """Apply the priority order to a process."""
    _check_depth(depth)
    spec = _select(load_spec(source), name)
    order = _order(spec, order_file)
    if model == "fl":
        out = pri_fl(order, _fl_den(spec, depth))
    else:
        out = _headroom(pri_tt(order, fl2tt(_fl_den(spec, depth + 1))), depth)
    emit(model, depth, out.traces, fmt)


@main.command()
@click.option("--spec", "spec_src", required=True, help="Specification process.")
@click.option("--impl", "impl_src", required=True, help="Implementation process.")
@model_opt
@depth_opt
def refine(spec_src, impl_src, model, depth):
    """Check that IMPL refines SPEC (trace-set inclusion)."""
    _check_depth(depth)
    spec, impl = load_spec(spec_src), load_spec(impl_src)
    u = mk_universe(spec.alphabet | impl.alphabet)
    s = _in_model(_fl_den(spec, depth, u), model).traces
    i = _in_model(_fl_den(impl, depth, u), model).traces
    extra = i - s
    if not extra:
        click.echo(f"PASS: {impl_src} refines {spec_src} ({model}, depth {depth})")
        return
    witness = (sorted_fl if model == "fl" else sorted_tt)(extra)[0]
    shown = format_fl(witness) if model == "fl" else format_tt(witness)
    click.echo(f"FAIL: {impl_src} does not refine {spec_src} ({model}, depth {depth})")
    click.echo(f"counterexample: {shown}")
    sys.exit(1)


@main.command()
@click.argument("source")
@model_opt
@depth_opt
@name_opt
def health(source, model, depth, name):
    """Run the healthiness checks on a process denotation."""
    _check_depth(depth)
    spec = _select(load_spec(source), name)
    d = _in_model(_fl_den(spec, depth), model)
    report = fl_health_report(d) if model == "fl" else tt_health_report(d)
    failed = False
    shown = GATING[model] | (SKETCHED if model != "fl" else set())
    for cond, ok in report.items():
        if cond not in shown:
            continue
        note = " (best-effort)" if cond in SKETCHED else ""
        click.echo(f"{cond:6} {'ok' if ok else 'FAILED'}{note}")
        if not ok and cond in GATING[model]:
            failed = True
    sys.exit(1 if failed else 0)


GATING = {
    "fl": {"FL0", "FL1", "FL2", "FL3"},
    "ttm": {"TT0", "TT1w", "TT3", "TTM1", "TTM2", "TTM3"},
    "tt": {"TT0", "TT1", "TT1w", "TT3"},
}
RIGHT_ADJOINTS = {("ttm", "fl"), ("tt", "ttm"), ("tt", "fl")}


def _events(traces, model):
    out = set()
    for t in traces:
        if model == "fl":
            for acc in [c.acc for c in t.cells] + [t.final]:
                out |= set(acc or ())
            out |= {c.evt for c in t.cells}
        else:
            for o in t:
                out |= {o.event} if isinstance(o, Evt) else set(o.events)
    return out - RESERVED


def _load_traces(source, src_model, depth):
    """Either a JSON trace file written by ``denote`` or a process."""
    path = Path(source)
    if path.suffix == ".json" and path.is_file():
        data = json.loads(path.read_text())
        if data.get("model") != src_model:
            raise UsageProblem(f"{source} holds {data.get('model')} traces, not {src_model}")
        k = int(data["depth"])
        if src_model == "fl":
            traces = frozenset(fl_from_json(x) for x in data["traces"])
            return FlDenotation(traces, k, mk_universe(_events(traces, "fl"))), k
        traces = frozenset(tt_from_json(x) for x in data["traces"])
        flavour = MAXIMAL if src_model == "ttm" else FULL
        return TtDenotation(traces, k, mk_universe(_events(traces, "tt")), flavour), k
    spec = load_spec(source)
    return _in_model(_fl_den(spec, depth + 1), src_model), None


_MAPS = {
    ("fl", "ttm"): lambda d: fl2ttm(d),
    ("fl", "tt"): lambda d: fl2tt(d),
    ("ttm", "tt"): mk_tt1,
    ("ttm", "fl"): ttm2fl,
    ("tt", "ttm"): un_tt1,
    ("tt", "fl"): tt2fl,
}


@main.command("map")
@click.argument("source")
@click.option("--from", "src", type=click.Choice(MODELS), required=True)
@click.option("--to", "dst", type=click.Choice(MODELS), required=True)
@depth_opt
@format_opt
def map_cmd(source, src, dst, depth, fmt):
    """Map a trace set between models through the Galois connections."""
    _check_depth(depth)
    d, file_depth = _load_traces(source, src, depth)
    if file_depth is not None:
        # right adjoints need one level of headroom
        depth = file_depth - 1 if (src, dst) in RIGHT_ADJOINTS else file_depth
        if depth < 0:
            raise UsageProblem("input depth leaves no headroom")
    if src == dst:
        out = d
    else:
        out = _MAPS[(src, dst)](d)
    emit(dst, depth, _headroom(out, depth).traces, fmt)


@main.command()
@click.option("--suite", type=click.Choice(SUITES + ("all",)), default="all", show_default=True)
@depth_opt
@click.option("--seed", type=int, default=0, show_default=True)
def laws(suite, depth, seed):
    """Run the executable law suites."""
    _check_depth(depth)
    names = SUITES if suite == "all" else (suite,)
    failed = False
    for name in names:
        for res in run_suite(name, seed=seed, depth=depth):
            status = "PASS" if res.ok else "FAIL"
            click.echo(f"{status} [{name}] {res.name}: {res.instances} instances")
            for w in res.failures:
                click.echo(f"    witness: {w}")
            failed |= not res.ok
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
