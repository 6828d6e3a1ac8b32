"""Text, SVG and DOT pictures of grids and ladder diagrams.

Layout is deterministic: x grows to the right, y grows upward, one unit per
grid step.  Terminals are drawn as ``o``, virtual terminals as ``*``.
"""

from __future__ import annotations

from .grid import GammaGrid


def _marker(grid, p):
    if p in grid.terminals:
        return "o"
    if p in grid.virtual_terminals:
        return "*"
    return "+"


def ascii_diagram(grid: GammaGrid, mask: int | None = None) -> str:
    """ASCII picture; edges absent from ``mask`` are left blank."""
    if mask is None:
        mask = grid.full
    if mask < 0:
        return "(empty face)\n"
    n = grid.n
    present = {grid.edges[i] for i in range(grid.num_edges) if mask >> i & 1}
    pts = set(grid.points)
    lines = []
    for y in range(n, -1, -1):
        row, below = [], []
        for x in range(n + 1):
            p = (x, y)
            row.append(_marker(grid, p) if p in pts else " ")
            row.append("---" if (p, (x + 1, y)) in present else "   ")
            if y > 0:
                below.append("|" if ((x, y - 1), p) in present else " ")
                below.append("   ")
        lines.append("".join(row).rstrip())
        if y > 0:
            lines.append("".join(below).rstrip())
    return "\n".join(lines) + "\n"


def svg_diagram(grid: GammaGrid, mask: int | None = None, unit: int = 40) -> str:
    """SVG with grid edges faint and diagram edges bold."""
    if mask is None:
        mask = grid.full
    n = grid.n
    pad = unit // 2
    size = n * unit + 2 * pad

    def xy(p):
        return pad + p[0] * unit, pad + (n - p[1]) * unit

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    for i, (a, b) in enumerate(grid.edges):
        (x0, y0), (x1, y1) = xy(a), xy(b)
        on = mask >= 0 and mask >> i & 1
        style = 'stroke="black" stroke-width="3"' if on else 'stroke="#ccc" stroke-width="1"'
        out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" {style}/>')
    for p in grid.points:
        cx, cy = xy(p)
        if p in grid.terminals or p == (0, 0):
            out.append(f'<circle cx="{cx}" cy="{cy}" r="5" fill="black"/>')
        elif p in grid.virtual_terminals:
            out.append(f'<circle cx="{cx}" cy="{cy}" r="5" fill="white" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def grid_dot(grid: GammaGrid) -> str:
    """DOT with pinned positions; removable edges dashed."""
    lines = ["graph gamma {", f'  label="grid {grid.mv}";', "  node [shape=point];"]
    for i, (x, y) in enumerate(grid.points):
        attrs = f'pos="{x},{y}!"'
        if (x, y) in grid.terminals:
            attrs += ", shape=circle, width=0.15, label=\"\""
        elif (x, y) in grid.virtual_terminals:
            attrs += ", shape=circle, width=0.15, style=dashed, label=\"\""
        lines.append(f"  p{i} [{attrs}];")
    rem = set(grid.removable)
    for i, (a, b) in enumerate(grid.edges):
        style = " [style=dashed]" if i in rem else ""
        lines.append(f"  p{grid.point_index[a]} -- p{grid.point_index[b]}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
