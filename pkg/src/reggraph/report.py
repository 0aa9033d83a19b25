"""Markdown report emission for fitted regression sequences."""

from __future__ import annotations

import os

from . import textio
from .fitting import FitResult, RegressionTable, wilkinson


def _fmt(x: float | None, nd: int = 2) -> str:
    return "" if x is None else f"{x:.{nd}f}"


def render_table(table: RegressionTable) -> str:
    """One response's regression table: starting and selected models side by
    side plus the studentized value each excluded term would get when
    added next.  All computed values are printed."""
    lines = [
        f"### Response: {table.response}",
        "",
        "| term | start coeff | start s | start z | sel coeff | sel s | sel z | excl z' |",
        "|---|---|---|---|---|---|---|---|",
    ]
    start, sel = table.start_fit, table.selected_fit
    sel_names = set(sel.names)
    row = (
        f"| constant | {_fmt(start.intercept)} | {_fmt(start.intercept_s)} |  "
        f"| {_fmt(sel.intercept)} | {_fmt(sel.intercept_s)} |  |  |"
    )
    lines.append(row)
    for pos, name in enumerate(start.names):
        cells = [name, _fmt(float(start.coeffs[pos])), _fmt(float(start.s_coeffs[pos])),
                 _fmt(float(start.z[pos]))]
        if name in sel_names:
            spos = sel.names.index(name)
            cells += [_fmt(float(sel.coeffs[spos])), _fmt(float(sel.s_coeffs[spos])),
                      _fmt(float(sel.z[spos])), ""]
        else:
            cells += ["", "", "", _fmt(table.excluded_z.get(name))]
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    lines.append(
        f"R2_full = {table.r2_full:.2f}, selected model {table.response}: "
        f"{wilkinson(table)}, R2_sel = {table.r2_sel:.2f}"
    )
    if table.deletion_trace:
        lines.append(f"deletion order: {', '.join(table.deletion_trace)}")
    lines.append("")
    return "\n".join(lines)


def render_summary(result: FitResult) -> str:
    """Fitted equations in compact model notation with both R2 values."""
    lines = [
        "## Fitted equations",
        "",
        "| response | selected model | R2_full | R2_sel |",
        "|---|---|---|---|",
    ]
    for t in result.tables:
        lines.append(
            f"| {t.response} | {wilkinson(t)} | {t.r2_full:.2f} | {t.r2_sel:.2f} |"
        )
    lines.append("")
    if result.dashed:
        lines.append("## Within-block dependence tests (dashed lines)")
        lines.append("")
        for pair, (z12, z21, present) in sorted(result.dashed.items(), key=lambda x: sorted(x[0])):
            a, b = sorted(pair)
            mark = "present" if present else "absent"
            lines.append(f"- {a} ~~ {b}: z = {z12:.2f} / {z21:.2f} ({mark})")
        lines.append("")
    if result.full:
        lines.append("## Context dependence tests (full lines)")
        lines.append("")
        for pair, (za, zb, present) in sorted(result.full.items(), key=lambda x: sorted(x[0])):
            a, b = sorted(pair)
            mark = "present" if present else "absent"
            lines.append(f"- {a} -- {b}: z = {za:.2f} / {zb:.2f} ({mark})")
        lines.append("")
    return "\n".join(lines)


def render_report(result: FitResult) -> str:
    parts = [render_summary(result)]
    parts.extend(render_table(t) for t in result.tables)
    parts.append("## Fitted graph\n\n```\n" + textio.emit_graph_text(result.graph) + "```\n")
    return "\n".join(parts)


def write_report(result: FitResult, outdir: str) -> None:
    """Write summary.md, per-response tables, and the fitted graph in text,
    JSON and DOT form under ``outdir``."""
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "summary.md"), "w", encoding="utf-8") as fh:
        fh.write(render_summary(result))
    for t in result.tables:
        path = os.path.join(outdir, f"response_{t.response}.md")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_table(t))
    with open(os.path.join(outdir, "graph.txt"), "w", encoding="utf-8") as fh:
        fh.write(textio.emit_graph_text(result.graph))
    with open(os.path.join(outdir, "graph.json"), "w", encoding="utf-8") as fh:
        fh.write(textio.emit_graph_json(result.graph))
    with open(os.path.join(outdir, "graph.dot"), "w", encoding="utf-8") as fh:
        fh.write(textio.to_dot(result.graph))
