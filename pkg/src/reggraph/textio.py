"""Reading and writing regression graphs.

Text format, one edge per line after a block header:

    blocks: Y8,X8 | Y4,X4 || Yr,Xr,E,H
    Y4 -> Y8
    Y8 ~~ X8
    Yr -- E

``|`` separates response blocks, ``||`` separates them from the single
context block, ``->`` is an arrow (tail -> head), ``~~`` a dashed line
and ``--`` a full line.  Lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import json

from .graph import EdgeKind, GraphError, RegressionGraph

_EDGE_OPS = (("->", EdgeKind.ARROW), ("~~", EdgeKind.DASHED), ("--", EdgeKind.FULL))


def _split_names(chunk: str) -> list[str]:
    return [n.strip() for n in chunk.split(",") if n.strip()]


def parse_graph_text(text: str) -> RegressionGraph:
    """Parse the text graph format."""
    header = None
    edges = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("blocks:"):
            if header is not None:
                raise GraphError("duplicate blocks header")
            header = line[len("blocks:") :].strip()
            continue
        for op, kind in _EDGE_OPS:
            if op in line:
                a, _, b = line.partition(op)
                if not a.strip() or not b.strip():
                    raise GraphError(f"malformed edge line: {raw!r}")
                edges.append((a.strip(), b.strip(), kind))
                break
        else:
            raise GraphError(f"unrecognized line: {raw!r}")
    if header is None:
        raise GraphError("missing blocks header")
    if "||" in header:
        left, _, right = header.partition("||")
        context = _split_names(right)
    else:
        left, context = header, []
    response_blocks = [_split_names(chunk) for chunk in left.split("|") if _split_names(chunk)]
    return RegressionGraph(response_blocks, context, edges)


def emit_graph_text(g: RegressionGraph) -> str:
    """Deterministic text form; ``parse_graph_text`` inverts it."""
    parts = " | ".join(",".join(blk) for blk in g.response_blocks)
    if g.context:
        header = f"blocks: {parts} || {','.join(g.context)}" if parts else f"blocks: || {','.join(g.context)}"
    else:
        header = f"blocks: {parts}"
    lines = [header]
    lines.extend(str(e) for e in g.edges())
    return "\n".join(lines) + "\n"


def to_json_dict(g: RegressionGraph) -> dict:
    return {
        "response_blocks": [list(b) for b in g.response_blocks],
        "context": list(g.context),
        "edges": [[e.a, e.b, e.kind.value] for e in g.edges()],
    }


def from_json_dict(d: dict) -> RegressionGraph:
    return RegressionGraph(d["response_blocks"], d.get("context", []), d.get("edges", []))


def emit_graph_json(g: RegressionGraph) -> str:
    return json.dumps(to_json_dict(g), indent=2) + "\n"


def parse_graph_json(text: str) -> RegressionGraph:
    return from_json_dict(json.loads(text))


def load_graph(path: str) -> RegressionGraph:
    """Load a graph from a ``.txt`` or ``.json`` file by extension."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return parse_graph_json(text)
    return parse_graph_text(text)


def to_dot(g: RegressionGraph) -> str:
    """Graphviz form: solid directed arrows, dashed undirected lines for
    within-block response dependences, solid undirected for context."""
    lines = ["digraph regression_graph {"]
    for j, blk in enumerate(g.blocks):
        members = " ".join(f'"{n}";' for n in blk)
        lines.append(f"  {{ rank=same; {members} }}  // block {j + 1}")
    for e in g.edges():
        if e.kind is EdgeKind.ARROW:
            lines.append(f'  "{e.a}" -> "{e.b}";')
        elif e.kind is EdgeKind.DASHED:
            lines.append(f'  "{e.a}" -> "{e.b}" [dir=none, style=dashed];')
        else:
            lines.append(f'  "{e.a}" -> "{e.b}" [dir=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"
