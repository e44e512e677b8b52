"""Top-view SVG of a stored snapshot: MSDs, MAPs, links and influence circles."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .graph import build_graph
from .model import ScenarioConfig


def pick_snapshot(snapshots: list[dict], t: float) -> dict:
    """Snapshot whose time is closest to ``t`` (earliest on ties)."""
    if not snapshots:
        raise ValueError("run output holds no snapshots")
    times = np.array([s["t"] for s in snapshots], dtype=float)
    return snapshots[int(np.argmin(np.abs(times - t)))]


def render_svg(snap: dict, cfg: ScenarioConfig, size: int = 800, margin: float = 10.0) -> str:
    msd = np.asarray(snap["msd_positions"], dtype=float).reshape(-1, 2)
    covered = np.asarray(snap["msd_covered"], dtype=bool)
    maps = np.asarray(snap["map_positions"], dtype=float).reshape(-1, 2)
    alive = np.asarray(snap["map_alive"], dtype=bool)
    centers = np.asarray(snap.get("cluster_centers", []), dtype=float).reshape(-1, 2)

    pts = np.vstack([msd, maps, centers]) if len(msd) + len(maps) else np.zeros((1, 2))
    lo = pts.min(axis=0) - cfg.comm_range - margin
    hi = pts.max(axis=0) + cfg.comm_range + margin
    span = float(max(hi - lo))
    scale = size / span

    def xy(p):
        # y axis points up in the world frame
        return (p[0] - lo[0]) * scale, size - (p[1] - lo[1]) * scale

    title = "t = {:.2f} s, h = {:g} m".format(snap["t"], cfg.elevation)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{escape(title)}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    ids = np.flatnonzero(alive)
    out.append('<g id="influence" fill="#3b7dd8" fill-opacity="0.06" stroke="#3b7dd8" stroke-opacity="0.3">')
    for i in ids:
        x, y = xy(maps[i])
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{cfg.comm_range * scale:.2f}"/>')
    out.append("</g>")

    graph = build_graph(maps[ids], cfg.comm_range, cfg.epsilon, cfg.gamma, ids)
    out.append('<g id="links" stroke="#333">')
    for a, b in zip(*np.nonzero(np.triu(graph.adjacency > 0, 1))):
        (x1, y1), (x2, y2) = xy(graph.positions[a]), xy(graph.positions[b])
        w = graph.adjacency[a, b]
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                   f'stroke-width="{0.4 + 1.2 * w:.2f}" stroke-opacity="{0.3 + 0.6 * w:.2f}"/>')
    out.append("</g>")

    out.append('<g id="msds">')
    for p, c in zip(msd, covered):
        x, y = xy(p)
        colour = "#2a9d4a" if c else "#d62828"
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.2" fill="{colour}"/>')
    out.append("</g>")

    out.append('<g id="maps">')
    for i, p in enumerate(maps):
        x, y = xy(p)
        if alive[i]:
            out.append(f'<path d="M{x - 4:.2f},{y + 3:.2f} L{x:.2f},{y - 4:.2f} L{x + 4:.2f},{y + 3:.2f} Z" '
                       f'fill="#1d3557"><title>MAP {i}</title></path>')
        else:
            out.append(f'<g stroke="#888"><title>MAP {i} (failed)</title>'
                       f'<line x1="{x - 3:.2f}" y1="{y - 3:.2f}" x2="{x + 3:.2f}" y2="{y + 3:.2f}"/>'
                       f'<line x1="{x - 3:.2f}" y1="{y + 3:.2f}" x2="{x + 3:.2f}" y2="{y - 3:.2f}"/></g>')
    out.append("</g>")

    out.append('<g id="centers" fill="none" stroke="#e76f51" stroke-width="2">')
    for p in centers:
        x, y = xy(p)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
