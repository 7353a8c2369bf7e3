"""Graphviz text for the Hom and ext graphs of a model."""
from __future__ import annotations

from angulator.model import HomModel


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def emit_quiver(model: HomModel, kind: str = "hom") -> str:
    """DOT text; nodes and edges follow canonical object order so output is byte-stable.

    ``hom`` draws ``X -> Y`` for every nonzero Hom between distinct objects;
    ``ext`` draws an undirected edge wherever ext is nonzero in either order,
    including loops.
    """
    if kind not in ("hom", "ext"):
        raise ValueError(f"unknown graph kind {kind!r}")
    names = [_quote(model.format_object(o)) for o in model.objects]
    n = len(names)
    lines = ["digraph hom {" if kind == "hom" else "graph ext {"]
    lines += [f"  {name};" for name in names]
    if kind == "hom":
        for i in range(n):
            for j in range(n):
                if i != j and model.hom_nonzero(model.objects[i], model.objects[j]):
                    lines.append(f"  {names[i]} -> {names[j]};")
    else:
        conflict = model.conflict_masks
        for i in range(n):
            for j in range(i, n):
                if conflict[i] >> j & 1:
                    lines.append(f"  {names[i]} -- {names[j]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
