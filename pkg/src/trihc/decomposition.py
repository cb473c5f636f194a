"""Decomposition of a triangulation at its separating triangles.

Splitting at every separating triangle leaves pieces without separating
triangles (4-connected pieces or K4).  Pieces are the nodes of the
decomposition tree; two pieces are adjacent when they share a separating
triangle of the original graph.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .plane import Triangulation, TriangulationError, canonical_code
from .structure import SeparatingTriangle, component_masks, _bits, _mask, separating_triangles


@dataclass(frozen=True)
class DecompositionTree:
    pieces: tuple[Triangulation, ...]
    origins: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int, tuple[int, int, int]], ...]

    @property
    def node_count(self) -> int:
        return len(self.pieces)

    def degrees(self) -> list[int]:
        deg = [0] * len(self.pieces)
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b, _ in self.edges if i in (a, b)]


@dataclass(frozen=True)
class TreeShape:
    max_degree: int
    is_path: bool
    node_count: int
    key: str = field(default="", compare=False)


def split_at(
    g: Triangulation, triangle: tuple[int, int, int] | SeparatingTriangle
) -> tuple[tuple[Triangulation, tuple[int, ...]], tuple[Triangulation, tuple[int, ...]]]:
    """Cut ``g`` along a separating triangle.

    Returns ``(part, origin)`` for the inside and the outside, where
    ``origin[i]`` is the vertex of ``g`` that vertex ``i`` of the part
    came from.  The triangle is a face of both parts.
    """
    tri = triangle.vertices if isinstance(triangle, SeparatingTriangle) else tuple(triangle)
    a, b, c = tri
    if not (g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)):
        raise TriangulationError(f"{tri} is not a triangle")
    if frozenset(tri) in g.face_set():
        raise TriangulationError(f"{tri} is a face, not a separating triangle")
    full = (1 << g.n) - 1
    comps = component_masks(g.adj, full & ~_mask(tri))
    if len(comps) != 2:
        raise TriangulationError(f"{tri} does not separate the graph")
    comps.sort(key=lambda m: (m.bit_count(), m & -m))
    return tuple(_restrict(g, m | _mask(tri)) for m in comps)  # type: ignore[return-value]


def _restrict(g: Triangulation, keep: int) -> tuple[Triangulation, tuple[int, ...]]:
    origin = tuple(_bits(keep))
    index = {v: i for i, v in enumerate(origin)}
    rot = [[index[w] for w in g.rotation[v] if keep >> w & 1] for v in origin]
    return Triangulation(rot, check=False), origin


def decomposition_tree(g: Triangulation, rng: random.Random | None = None) -> DecompositionTree:
    """Split recursively until no part has a separating triangle.

    By default each part is split at its lexicographically least separating
    triangle (in original labels); ``rng`` picks a random one instead.
    """
    pending = [(g, tuple(range(g.n)))]
    pieces: list[tuple[Triangulation, tuple[int, ...]]] = []
    while pending:
        part, origin = pending.pop()
        seps = separating_triangles(part)
        if not seps:
            pieces.append((part, origin))
            continue
        if rng is None:
            s = min(seps, key=lambda t: sorted(origin[v] for v in t.vertices))
        else:
            s = rng.choice(seps)
        for sub, sub_origin in split_at(part, s):
            pending.append((sub, tuple(origin[v] for v in sub_origin)))
    pieces.sort(key=lambda p: (sorted(p[1]), p[0].n))
    sep_set = {t.vertices for t in separating_triangles(g)}
    owners: dict[tuple[int, int, int], list[int]] = {}
    for idx, (piece, origin) in enumerate(pieces):
        for f in piece.trace_faces():
            key = tuple(sorted(origin[v] for v in f))
            if key in sep_set:
                owners.setdefault(key, []).append(idx)  # type: ignore[arg-type]
    edges = []
    for tri in sorted(owners):
        own = owners[tri]
        if len(own) != 2:
            raise AssertionError(f"separating triangle {tri} owned by {len(own)} pieces")
        edges.append((own[0], own[1], tri))
    return DecompositionTree(
        pieces=tuple(p for p, _ in pieces),
        origins=tuple(o for _, o in pieces),
        edges=tuple(edges),
    )


def tree_key(tree: DecompositionTree) -> str:
    """Canonical string of the unlabelled tree (centre-rooted AHU encoding)."""
    n = tree.node_count
    nbrs = [tree.neighbors(i) for i in range(n)]
    return _unlabelled_tree_key(n, nbrs)


def _unlabelled_tree_key(n: int, nbrs: list[list[int]]) -> str:
    if n == 1:
        return "()"
    deg = [len(x) for x in nbrs]
    leaves = [i for i in range(n) if deg[i] <= 1]
    remaining = n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for leaf in leaves:
            for w in nbrs[leaf]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
            deg[leaf] = 0
        leaves = nxt
    centres = leaves

    def encode(v: int, parent: int) -> str:
        return "(" + "".join(sorted(encode(w, v) for w in nbrs[v] if w != parent)) + ")"

    if len(centres) == 1:
        return encode(centres[0], -1)
    a, b = centres
    return "|".join(sorted((encode(a, b), encode(b, a))))


def tree_key_from_edges(n: int, edges: list[tuple[int, int]]) -> str:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    return _unlabelled_tree_key(n, nbrs)


def tree_shape(tree: DecompositionTree) -> TreeShape:
    deg = tree.degrees()
    md = max(deg) if deg else 0
    return TreeShape(max_degree=md, is_path=md <= 2, node_count=tree.node_count, key=tree_key(tree))


def piece_codes(tree: DecompositionTree) -> list[bytes]:
    return sorted(canonical_code(p) for p in tree.pieces)
