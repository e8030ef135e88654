"""Prioritisation in the finite-linear model."""

from __future__ import annotations

from .core import Cell, FlTrace, PriorityOrder
from .fl import FlDenotation


def priacc(p: PriorityOrder, z):
    """Drop from acceptance ``z`` every event with a strictly higher one beside it."""
    if z is None:
        return None
    return frozenset(e for e in z if not any(p.lt(e, b) for b in z))


def pri_rel(p: PriorityOrder, rho: FlTrace, sigma: FlTrace) -> bool:
    """Is ``rho`` a prioritisation of ``sigma``?"""
    if len(rho.cells) != len(sigma.cells):
        return False
    for mine, theirs in zip(rho.cells, sigma.cells):
        if mine.evt != theirs.evt:
            return False
        allowed = priacc(p, theirs.acc)
        if mine.acc is not None and mine.acc != allowed:
            return False
        if not p.is_maximal(mine.evt) and (allowed is None or mine.evt not in allowed):
            return False
    return rho.final == priacc(p, sigma.final)


def pri_related(p: PriorityOrder, sigma: FlTrace):
    """Every ``rho`` with ``pri_rel(p, rho, sigma)``, built cell by cell."""
    heads = [()]
    for cell in sigma.cells:
        allowed = priacc(p, cell.acc)
        if not p.is_maximal(cell.evt) and (allowed is None or cell.evt not in allowed):
            return []
        options = [Cell(None, cell.evt)]
        if allowed is not None:
            options.append(Cell(allowed, cell.evt))
        heads = [h + (c,) for h in heads for c in options]
    final = priacc(p, sigma.final)
    return [FlTrace(h, final) for h in heads]


def pri_fl_traces(p: PriorityOrder, traces) -> frozenset:
    return frozenset(r for s in traces for r in pri_related(p, s))


def pri_fl(p: PriorityOrder, d):
    """The FL prioritisation operator; accepts a denotation or a plain trace set."""
    if isinstance(d, FlDenotation):
        return FlDenotation(pri_fl_traces(p, d.traces), d.bound, d.universe, d.complete)
    return pri_fl_traces(p, d)
