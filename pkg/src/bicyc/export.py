"""DOT and edge-list export, with an optional hamilton cycle overlay."""
from __future__ import annotations

from .core import (
    BicirculantError,
    BicirculantParams,
    Vertex,
    classify_edge,
    cycle_edges,
    neighbors,
    render_params,
    verify_certificate,
)

EDGE_COLORS = {"outer": "blue", "inner": "red", "spoke": "gray40"}


class CycleParamMismatch(BicirculantError):
    pass


def _key(v):
    return (0 if v.side == "u" else 1, v.index)


def edge_set(p: BicirculantParams):
    """Sorted list of edges, each as an endpoint pair in (u before v, low index first) order."""
    out = set()
    for v in p.vertices():
        for w in neighbors(p, v):
            out.add(tuple(sorted((v, w), key=_key)))
    return sorted(out, key=lambda e: (_key(e[0]), _key(e[1])))


def _cycle_set(p, cycle):
    if cycle is None:
        return set()
    seq = cycle.vertices if hasattr(cycle, "vertices") else [Vertex(*v) for v in cycle]
    try:
        verify_certificate(p, seq)
    except BicirculantError as e:
        raise CycleParamMismatch(f"cycle is not a hamilton cycle of {render_params(p)}: {e}") from e
    return {tuple(sorted(e, key=_key)) for e in cycle_edges(list(seq))}


def export_edgelist(p: BicirculantParams, cycle=None) -> str:
    on = _cycle_set(p, cycle)
    lines = []
    for x, y in edge_set(p):
        line = f"{x} {y}"
        if cycle is not None and (x, y) in on:
            line += " *"
        lines.append(line)
    return "\n".join(lines) + "\n"


def export_dot(p: BicirculantParams, cycle=None) -> str:
    on = _cycle_set(p, cycle)
    out = ["graph bicirculant {", f'  label="{render_params(p)}";', "  node [shape=circle];"]
    for v in sorted(p.vertices(), key=_key):
        out.append(f"  {v};")
    for x, y in edge_set(p):
        kind = classify_edge(p, x, y).kind
        attrs = [f"color={EDGE_COLORS[kind]}", f'kind="{kind}"']
        if (x, y) in on:
            attrs += ["penwidth=3", "style=bold"]
        out.append(f"  {x} -- {y} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def export_graph(p: BicirculantParams, cycle=None, fmt: str = "dot") -> str:
    if fmt == "dot":
        return export_dot(p, cycle)
    if fmt == "edgelist":
        return export_edgelist(p, cycle)
    raise ValueError(f"unknown export format {fmt!r}")
