"""Weighted directed graphs: edge-list loading and Poisson-Voronoi generation.

Voronoi tessellations are built from a Bowyer-Watson Delaunay triangulation.
``Rng.random()`` returns multiples of ``2**-53``, so seed points are stored
as exact integers and the orientation / in-circle predicates run in exact
integer arithmetic; only the final Voronoi coordinates are floats.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Iterator
from pathlib import Path

from ..instrument import Rng

_SCALE = 1 << 53  # integer coordinates per unit length


class GraphFormatError(ValueError):
    """Malformed edge-list input; ``line`` is 1-based."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class Graph:
    """Directed graph on nodes ``0..n-1`` with non-negative edge weights."""

    __slots__ = ("adj", "coords", "labels")

    def __init__(self, n: int = 0) -> None:
        self.adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        self.coords: list[tuple[float, float]] | None = None
        self.labels: list[str] | None = None

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj)

    def add_node(self) -> int:
        self.adj.append([])
        return len(self.adj) - 1

    def add_edge(self, u: int, v: int, w: float) -> None:
        if not w >= 0:  # also rejects NaN
            raise ValueError(f"edge weight must be non-negative, got {w!r}")
        self.adj[u].append((v, w))

    def add_undirected(self, u: int, v: int, w: float) -> None:
        self.add_edge(u, v, w)
        self.add_edge(v, u, w)

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for u, nbrs in enumerate(self.adj):
            for v, w in nbrs:
                yield u, v, w

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def subgraph(self, nodes: Iterable[int]) -> Graph:
        """Induced subgraph, nodes renumbered in the given order."""
        order = list(nodes)
        new_id = {u: i for i, u in enumerate(order)}
        g = Graph(len(order))
        for u in order:
            nu = new_id[u]
            g.adj[nu] = [(new_id[v], w) for v, w in self.adj[u] if v in new_id]
        if self.coords is not None:
            g.coords = [self.coords[u] for u in order]
        if self.labels is not None:
            g.labels = [self.labels[u] for u in order]
        return g

    def components(self) -> list[list[int]]:
        """Weakly connected components, each sorted, largest first (ties by smallest node)."""
        undirected: list[set[int]] = [set() for _ in range(self.n)]
        for u, v, _ in self.edges():
            undirected[u].add(v)
            undirected[v].add(u)
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in undirected[u]:
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        comps.sort(key=lambda c: (-len(c), c[0]))
        return comps

    def largest_component(self) -> Graph:
        comps = self.components()
        return self.subgraph(comps[0]) if comps else Graph(0)

    def write(self, path: str | Path) -> None:
        """Write in the edge-list format read by :func:`load_graph`."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# nodes {self.n} edges {self.m}\n")
            for u, v, w in self.edges():
                a = self.labels[u] if self.labels else u
                b = self.labels[v] if self.labels else v
                fh.write(f"{a} {b} {w!r}\n")


def load_graph(path: str | Path) -> Graph:
    """Read ``src dst weight`` lines; ``#`` starts a comment.

    Node names are arbitrary tokens, numbered in order of first appearance
    (kept in ``Graph.labels``).
    """
    g = Graph(0)
    labels: list[str] = []
    ids: dict[str, int] = {}

    def node(tok: str) -> int:
        i = ids.get(tok)
        if i is None:
            i = ids[tok] = g.add_node()
            labels.append(tok)
        return i

    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise GraphFormatError(lineno, f"expected 'src dst weight', got {line!r}")
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(lineno, f"bad weight {parts[2]!r}") from None
            if not w >= 0 or math.isinf(w):
                raise GraphFormatError(lineno, f"weight must be finite and non-negative, got {parts[2]}")
            g.add_edge(node(parts[0]), node(parts[1]), w)
    g.labels = labels
    return g


# -- Delaunay triangulation ---------------------------------------------------


def _orient(ax: int, ay: int, bx: int, by: int, cx: int, cy: int) -> int:
    """Twice the signed area of abc: > 0 iff counter-clockwise."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _incircle(a, b, c, d) -> int:
    """> 0 iff d lies strictly inside the circle through ccw a, b, c."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    ad = adx * adx + ady * ady
    bd = bdx * bdx + bdy * bdy
    cd = cdx * cdx + cdy * cdy
    return (
        adx * (bdy * cd - bd * cdy)
        - ady * (bdx * cd - bd * cdx)
        + ad * (bdx * cdy - bdy * cdx)
    )


def delaunay(points: list[tuple[int, int]]) -> list[tuple[int, int, int]]:
    """Delaunay triangles (ccw vertex indices) of integer points in general position.

    Incremental Bowyer-Watson: locate the new point by a walk, grow the
    cavity of triangles whose circumcircle contains it, and fan the cavity
    boundary to the point.  A super triangle far outside the bounding box
    is removed at the end.
    """
    n = len(points)
    if n < 3:
        return []
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    big = span << 60
    ox, oy = min(xs), min(ys)
    pts = list(points) + [(ox - big, oy - big), (ox + 4 * big, oy - big), (ox - big, oy + 4 * big)]
    s0, s1, s2 = n, n + 1, n + 2

    tris: dict[int, tuple[int, int, int]] = {0: (s0, s1, s2)}
    edge_tri: dict[tuple[int, int], int] = {(s0, s1): 0, (s1, s2): 0, (s2, s0): 0}
    next_id = 1
    last = 0

    for p in _spatial_order(points):
        px, py = pts[p]
        # walk towards p
        t = last if last in tris else next(iter(tris))
        steps = 0
        while True:
            a, b, c = tris[t]
            moved = False
            for u, v in ((a, b), (b, c), (c, a)):
                if _orient(pts[u][0], pts[u][1], pts[v][0], pts[v][1], px, py) < 0:
                    nb = edge_tri.get((v, u))
                    if nb is not None:
                        t = nb
                        moved = True
                        break
            if not moved:
                break
            steps += 1
            if steps > 4 * len(tris) + 10:  # pragma: no cover - walk safety net
                t = next(k for k, tri in tris.items() if _contains(pts, tri, px, py))
                break
        # cavity of triangles whose circumcircle strictly contains p
        cavity = {t}
        stack = [t]
        q = pts[p]
        while stack:
            a, b, c = tris[stack.pop()]
            for u, v in ((a, b), (b, c), (c, a)):
                nb = edge_tri.get((v, u))
                if nb is not None and nb not in cavity:
                    na, nb_, nc = tris[nb]
                    if _incircle(pts[na], pts[nb_], pts[nc], q) > 0:
                        cavity.add(nb)
                        stack.append(nb)
        boundary = []
        for ct in cavity:
            a, b, c = tris[ct]
            for u, v in ((a, b), (b, c), (c, a)):
                nb = edge_tri.get((v, u))
                if nb is None or nb not in cavity:
                    boundary.append((u, v))
        for ct in cavity:
            a, b, c = tris.pop(ct)
            for u, v in ((a, b), (b, c), (c, a)):
                if edge_tri.get((u, v)) == ct:
                    del edge_tri[(u, v)]
        for u, v in boundary:
            tid = next_id
            next_id += 1
            tris[tid] = (u, v, p)
            edge_tri[(u, v)] = tid
            edge_tri[(v, p)] = tid
            edge_tri[(p, u)] = tid
            last = tid

    return [tri for tri in tris.values() if max(tri) < n]


def _contains(pts, tri, px, py) -> bool:
    a, b, c = tri
    return all(
        _orient(pts[u][0], pts[u][1], pts[v][0], pts[v][1], px, py) >= 0
        for u, v in ((a, b), (b, c), (c, a))
    )


def _spatial_order(points: list[tuple[int, int]]) -> list[int]:
    """Insertion order along a snake through a coarse grid (shorter walks)."""
    n = len(points)
    k = max(1, int(math.isqrt(n) // 2))
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, y0 = min(xs), min(ys)
    w = max(max(xs) - x0, max(ys) - y0, 1) + 1

    def cell(i: int) -> tuple[int, int]:
        cx = (points[i][0] - x0) * k // w
        cy = (points[i][1] - y0) * k // w
        return cy, (cx if cy % 2 == 0 else k - 1 - cx)

    return sorted(range(n), key=lambda i: (cell(i), i))


# -- Voronoi / PVT -------------------------------------------------------------


def _circumcenter(a, b, c) -> tuple[float, float]:
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)
    uy = a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)
    den = d * _SCALE
    return ux / den, uy / den


def _clip(x0: float, y0: float, dx: float, dy: float, t1: float) -> tuple[float, float] | None:
    """Liang-Barsky: parameter range of ``(x0, y0) + t (dx, dy)``, ``t in [0, t1]``, inside [0,1]^2."""
    lo, hi = 0.0, t1
    for p, q in ((-dx, x0), (dx, 1.0 - x0), (-dy, y0), (dy, 1.0 - y0)):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        r = q / p
        if p < 0.0:
            if r > hi:
                return None
            lo = max(lo, r)
        else:
            if r < lo:
                return None
            hi = min(hi, r)
    if lo > hi:
        return None
    return lo, hi


def _inside(x: float, y: float) -> bool:
    return 0.0 <= x <= 1.0 and 0.0 <= y <= 1.0


def voronoi_graph(points: list[tuple[int, int]]) -> Graph:
    """Voronoi diagram of integer points (unit square scaled by 2**53), clipped to [0,1]^2.

    Nodes are the Voronoi vertices inside the square plus the points where
    Voronoi edges leave it; edges carry their Euclidean length in both
    directions.  The square's border itself contributes no edges.
    """
    tris = delaunay(points)
    centers = [_circumcenter(points[a], points[b], points[c]) for a, b, c in tris]
    edge_tri: dict[tuple[int, int], int] = {}
    for i, (a, b, c) in enumerate(tris):
        edge_tri[(a, b)] = i
        edge_tri[(b, c)] = i
        edge_tri[(c, a)] = i

    g = Graph(0)
    coords: list[tuple[float, float]] = []
    center_node: dict[int, int] = {}

    def center(i: int) -> int:
        v = center_node.get(i)
        if v is None:
            v = center_node[i] = g.add_node()
            coords.append(centers[i])
        return v

    def point(x: float, y: float) -> int:
        # a boundary crossing: snap the coordinate nearest the border onto it
        dx, dy = min(x, 1.0 - x), min(y, 1.0 - y)
        if dx <= dy:
            x = 0.0 if x < 0.5 else 1.0
        else:
            y = 0.0 if y < 0.5 else 1.0
        v = g.add_node()
        coords.append((min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0)))
        return v

    def link(u: int, v: int) -> None:
        (x0, y0), (x1, y1) = coords[u], coords[v]
        w = math.hypot(x1 - x0, y1 - y0)
        if w > 0.0:
            g.add_undirected(u, v, w)

    for (a, b), i in sorted(edge_tri.items()):
        j = edge_tri.get((b, a))
        x0, y0 = centers[i]
        if j is not None:
            if j < i:
                continue  # each interior Delaunay edge once
            x1, y1 = centers[j]
            span = _clip(x0, y0, x1 - x0, y1 - y0, 1.0)
            if span is None:
                continue
            lo, hi = span
            start = center(i) if lo == 0.0 else point(x0 + lo * (x1 - x0), y0 + lo * (y1 - y0))
            end = center(j) if hi == 1.0 else point(x0 + hi * (x1 - x0), y0 + hi * (y1 - y0))
            link(start, end)
        else:
            # hull edge: ray from the circumcenter along the outward normal
            (ax, ay), (bx, by) = points[a], points[b]
            dx, dy = float(by - ay), float(ax - bx)
            norm = math.hypot(dx, dy)
            dx, dy = dx / norm, dy / norm
            reach = abs(x0) + abs(y0) + 4.0  # beyond this the ray is past the square
            span = _clip(x0, y0, dx, dy, reach)
            if span is None:
                continue
            lo, hi = span
            start = center(i) if lo == 0.0 else point(x0 + lo * dx, y0 + lo * dy)
            end = point(x0 + hi * dx, y0 + hi * dy)
            link(start, end)
    g.coords = coords
    return g


def gen_pvt(n: float, rng: Rng) -> Graph:
    """Poisson-Voronoi tessellation of the unit square with intensity ``n``.

    ``N ~ Poisson(n)`` seed points are drawn uniformly (redrawn while
    ``N < 3``); the clipped Voronoi diagram's largest connected component
    is returned.
    """
    if n < 4:
        raise ValueError("PVT intensity must be >= 4")
    while True:
        count = rng.poisson(n)
        if count >= 3:
            break
    points = []
    for _ in range(count):
        x = rng.next_u64() >> 11
        y = rng.next_u64() >> 11
        points.append((x, y))  # same values as (random(), random()) scaled by 2**53
    return voronoi_graph(points).largest_component()
