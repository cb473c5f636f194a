"""Separating triangles, quadrangles, reducible edges and scattering witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .plane import Triangulation, TriangulationError, _components_mask

DEFAULT_MAX_SUBSET = 8


@dataclass(frozen=True)
class SeparatingTriangle:
    """A non-facial 3-cycle.

    ``inside`` is the smaller of the two sides (ties: the side holding the
    least vertex id); on the sphere neither side is distinguished.
    """

    vertices: tuple[int, int, int]
    inside: frozenset[int]
    outside: frozenset[int]


@dataclass(frozen=True)
class ScatteringWitness:
    X: frozenset[int]
    components: int

    @property
    def bound(self) -> int:
        return self.components - len(self.X)


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def component_masks(adj: Sequence[int], mask: int) -> list[int]:
    comps = []
    while mask:
        comp = mask & -mask
        frontier = comp
        while frontier:
            nxt = 0
            for w in _bits(frontier):
                nxt |= adj[w]
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        comps.append(comp)
        mask &= ~comp
    return comps


def triangles(g: Triangulation) -> list[tuple[int, int, int]]:
    """All 3-cycles as sorted triples, lexicographically ordered."""
    out = []
    adj = g.adj
    for u in range(g.n):
        higher = adj[u] >> (u + 1) << (u + 1)
        for v in _bits(higher):
            common = adj[u] & adj[v] & ~((1 << (v + 1)) - 1)
            for w in _bits(common):
                out.append((u, v, w))
    return out


def separating_triangles(g: Triangulation) -> list[SeparatingTriangle]:
    faces = g.face_set()
    full = (1 << g.n) - 1
    out = []
    for t in triangles(g):
        if frozenset(t) in faces:
            continue
        comps = component_masks(g.adj, full & ~_mask(t))
        if len(comps) != 2:
            raise TriangulationError(f"triangle {t} splits into {len(comps)} parts")
        a, b = comps
        if (a.bit_count(), a & -a) > (b.bit_count(), b & -b):
            a, b = b, a
        out.append(SeparatingTriangle(t, frozenset(_bits(a)), frozenset(_bits(b))))
    return out


def separating_triangle_count(g: Triangulation) -> int:
    return len(triangles(g)) - (2 * g.n - 4)


def is_4_connected(g: Triangulation) -> bool:
    return g.n >= 5 and separating_triangle_count(g) == 0


def chordless_separating_quadrangles(g: Triangulation) -> list[tuple[int, int, int, int]]:
    """Chordless 4-cycles ``(a, b, c, d)`` whose removal disconnects ``g``.

    Each cycle is listed once, starting at its least vertex with ``b < d``.
    """
    adj = g.adj
    full = (1 << g.n) - 1
    out = []
    for a in range(g.n):
        above = full & ~((1 << (a + 1)) - 1)
        for b, d in combinations(_bits(adj[a] & above), 2):
            if adj[b] >> d & 1:
                continue
            for c in _bits(adj[b] & adj[d] & above):
                if adj[a] >> c & 1:
                    continue
                if _components_mask(adj, full & ~_mask((a, b, c, d))) > 1:
                    out.append((a, b, c, d))
    return sorted(out)


def is_reducible_edge(g: Triangulation, u: int, v: int) -> bool:
    if not g.has_edge(u, v):
        raise TriangulationError(f"{u}-{v} is not an edge")
    for s in separating_triangles(g):
        if u in s.vertices and v in s.vertices:
            return False
    for q in chordless_separating_quadrangles(g):
        i, j = q.index(u) if u in q else -1, q.index(v) if v in q else -1
        if i >= 0 and j >= 0 and (i - j) % 4 in (1, 3):
            return False
    return True


def reducible_edges(g: Triangulation) -> set[tuple[int, int]]:
    """All reducible edges as sorted pairs (one pass over the structures)."""
    blocked: set[tuple[int, int]] = set()
    for s in separating_triangles(g):
        a, b, c = s.vertices
        blocked.update({(a, b), (a, c), (b, c)})
    for q in chordless_separating_quadrangles(g):
        for i in range(4):
            x, y = q[i], q[(i + 1) % 4]
            blocked.add((min(x, y), max(x, y)))
    return {e for e in g.edges() if e not in blocked}


def find_common_separating_edge(g: Triangulation) -> tuple[int, int] | None:
    """Least edge lying in every separating triangle, or ``None``.

    With no separating triangle at all the least edge is returned.
    """
    seps = separating_triangles(g)
    if not seps:
        return min(g.edges())
    common = None
    for s in seps:
        a, b, c = s.vertices
        es = {(a, b), (a, c), (b, c)}
        common = es if common is None else common & es
    return min(common) if common else None


def scattering_lower_bound(g: Triangulation, X: Iterable[int]) -> ScatteringWitness | None:
    X = frozenset(X)
    k = _components_mask(g.adj, ((1 << g.n) - 1) & ~_mask(X))
    if k == 1:
        return None
    return ScatteringWitness(X, k)


def _targeted_candidates(g: Triangulation) -> list[frozenset[int]]:
    seps = separating_triangles(g)
    cands: list[frozenset[int]] = []
    if seps:
        cands.append(frozenset().union(*(s.vertices for s in seps)))
        for v in range(g.n):
            touching = [s.vertices for s in seps if v in s.vertices]
            if touching:
                cands.append(frozenset().union(*touching))
    for v in range(g.n):
        cands.append(frozenset(g.neighbors(v)) | {v})
    if seps:
        # a piece of the decomposition, whole or with one vertex left behind
        from .decomposition import decomposition_tree

        tree = decomposition_tree(g)
        for origin in tree.origins:
            piece = frozenset(origin)
            cands.append(piece)
            cands.extend(piece - {x} for x in sorted(piece))
    seen = set()
    out = []
    for c in cands:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def scattering_certificate_not_hc(g: Triangulation, max_subset: int = DEFAULT_MAX_SUBSET) -> ScatteringWitness | None:
    """Search for ``X`` with ``k(G - X) - |X| >= 0``.

    A witness proves ``G`` is not hamiltonian-connected; ``None`` proves
    nothing.  Targeted candidates (unions of separating triangles, closed
    neighbourhoods, decomposition pieces with at most one vertex dropped)
    are tried first, then every subset of size at most ``max_subset``.
    """
    for X in _targeted_candidates(g):
        w = scattering_lower_bound(g, X)
        if w is not None and w.bound >= 0:
            return w
    adj = g.adj
    full = (1 << g.n) - 1
    for size in range(1, min(max_subset, g.n) + 1):
        for X in combinations(range(g.n), size):
            k = _components_mask(adj, full & ~_mask(X))
            if k != 1 and k >= size:
                return ScatteringWitness(frozenset(X), k)
    return None
