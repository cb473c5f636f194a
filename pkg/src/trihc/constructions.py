"""Named fixtures, exhaustive enumeration and non-hamiltonian-connected constructions."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .plane import (
    PlaneGraph,
    Triangulation,
    TriangulationError,
    canonical_code,
    flip,
    from_canonical_code,
    is_flippable,
    subdivide_face,
)

DEFAULT_ENUMERATION_CAP = 14


@dataclass(frozen=True)
class TreeSpec:
    """An unrooted tree on nodes ``0..node_count-1``."""

    node_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("tree needs at least one node")
        if len(self.edges) != self.node_count - 1:
            raise ValueError("a tree on k nodes has k-1 edges")
        parent = list(range(self.node_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            if not (0 <= a < self.node_count and 0 <= b < self.node_count) or a == b:
                raise ValueError(f"bad tree edge {(a, b)}")
            ra, rb = find(a), find(b)
            if ra == rb:
                raise ValueError("edge list contains a cycle")
            parent[ra] = rb

    def neighbors(self, v: int) -> list[int]:
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    @property
    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.node_count)), default=0)

    @classmethod
    def star(cls, leaves: int) -> "TreeSpec":
        return cls(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))

    @classmethod
    def parse(cls, text: str) -> "TreeSpec":
        """Parse an edge list, one ``a b`` pair per line (0-based)."""
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                a, b = line.split()
                edges.append((int(a), int(b)))
        nodes = 1 + max((max(e) for e in edges), default=0)
        return cls(nodes, tuple(edges))


K4_FACES = [(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)]


def k4() -> Triangulation:
    return Triangulation.from_faces(K4_FACES)


def wheel(n: int) -> PlaneGraph:
    """Cycle ``0..n-1`` plus hub ``n``; the rim ``n``-gon stays a face."""
    if n < 3:
        raise ValueError("wheel needs a cycle of length at least 3")
    hub = n
    rot = [[(i + 1) % n, hub, (i - 1) % n] for i in range(n)]
    rot.append(list(range(n)))
    return PlaneGraph(rot)


def double_wheel(n: int) -> Triangulation:
    """Bipyramid over ``C_n``: rim ``0..n-1``, apexes ``n`` and ``n+1``."""
    if n < 3:
        raise ValueError("double wheel needs a rim of length at least 3")
    top, bottom = n, n + 1
    faces = [(top, i, (i + 1) % n) for i in range(n)]
    faces += [(bottom, (i + 1) % n, i) for i in range(n)]
    return Triangulation.from_faces(faces)


def octahedron() -> Triangulation:
    return double_wheel(4)


def icosahedron() -> Triangulation:
    # 0 top, 1..5 upper ring, 6..10 lower ring, 11 bottom
    up = [1 + i for i in range(5)]
    lo = [6 + i for i in range(5)]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces.append((0, up[i], up[j]))
        faces.append((up[j], up[i], lo[i]))
        faces.append((up[j], lo[i], lo[j]))
        faces.append((11, lo[j], lo[i]))
    return Triangulation.from_faces(faces)


def stacked(k: int) -> Triangulation:
    """K4 followed by ``k`` vertex insertions, each into the newest face.

    Every insertion goes into a face created by the previous one, so the
    decomposition tree is a path on ``k + 1`` nodes.
    """
    g = k4()
    face = (0, 1, 2)
    for _ in range(k):
        z = g.n
        g = subdivide_face(g, face, k4(), (0, 1, 2))
        a, b, _ = face
        face = (a, b, z)
    return g


def insert_vertex(g: Triangulation, face: Sequence[int]) -> Triangulation:
    return subdivide_face(g, face, k4(), (0, 1, 2))


# -- counterexamples from trees -------------------------------------------


def _branch(tree: TreeSpec, root: int, parent: int) -> tuple[Triangulation, tuple[int, int, int]]:
    """Triangulation realising the subtree at ``root`` (away from ``parent``).

    Returns the graph and a face of the root piece left free for gluing.
    The root piece is K4 when it has at most 3 children, otherwise a
    double wheel with enough faces.
    """
    children = [w for w in tree.neighbors(root) if w != parent]
    need = len(children) + 1
    base = k4() if need <= 4 else double_wheel(max(4, (need + 1) // 2))
    base_faces = base.faces()
    free = base_faces[0]
    g = base
    for child, face in zip(children, base_faces[1:]):
        h, hface = _branch(tree, child, root)
        g = subdivide_face(g, face, h, hface)
    return g, free


def counterexample_from_tree(tree: TreeSpec) -> Triangulation:
    """A triangulation with decomposition tree ``tree`` that is not hamiltonian-connected.

    A node ``v`` of degree ``d >= 4`` (least such) becomes the wheel
    ``W_d`` closed by one outer vertex; each branch at ``v`` is realised
    recursively and glued into one wheel face.  Removing the wheel leaves
    ``d + 1`` components, so the scattering number is at least 0.
    """
    centre = next((v for v in range(tree.node_count) if tree.degree(v) >= 4), None)
    if centre is None:
        raise ValueError("tree has maximum degree below 4; no counterexample construction applies")
    branches = tree.neighbors(centre)
    d = len(branches)
    # W_d with the outer d-gon closed by one vertex is the double wheel;
    # the hub is vertex d, the outer vertex d + 1
    g = double_wheel(d)
    hub = d
    for i, child in enumerate(branches):
        h, hface = _branch(tree, child, centre)
        g = subdivide_face(g, (hub, i, (i + 1) % d), h, hface)
    return g


def counterexample_wheel_vertices(tree: TreeSpec) -> frozenset[int]:
    """Vertex set of ``W_d`` inside :func:`counterexample_from_tree` output."""
    centre = next(v for v in range(tree.node_count) if tree.degree(v) >= 4)
    d = tree.degree(centre)
    return frozenset(range(d + 1))


def ce10() -> Triangulation:
    """10-vertex counterexample realising the star ``K_{1,4}``.

    Labels: rim ``0..3``, hub ``4``, outer vertex ``5``, inserted ``6..9``
    (vertex ``6 + k`` sits in face ``(4, k, k+1)``).
    """
    return counterexample_from_tree(TreeSpec.star(4))


CE10_HUB = 4
CE10_RIM = (0, 1, 2, 3)
CE10_OUTER = 5
CE10_INSERTED = (6, 7, 8, 9)


def fixtures() -> dict[str, Triangulation]:
    return {
        "K4": k4(),
        "B3": double_wheel(3),
        "octahedron": octahedron(),
        "icosahedron": icosahedron(),
        "CE10": ce10(),
        "stacked_2": stacked(2),
        "stacked_3": stacked(3),
    }


def fixture(name: str) -> Triangulation:
    if name.startswith("stacked_"):
        return stacked(int(name.split("_", 1)[1]))
    table = fixtures()
    if name not in table:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(table))}, stacked_<k>")
    return table[name]


# -- enumeration -------------------------------------------------------------


def iter_triangulations(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> Iterator[Triangulation]:
    """All triangulations on ``n`` vertices up to isomorphism (mirror images identified).

    Breadth-first search of the diagonal-flip graph from the stacked
    triangulation; the visited set holds canonical codes only.  Graphs are
    yielded in canonical labelling, in discovery order.
    """
    if n < 4 or n > cap:
        raise ValueError(f"n must be in 4..{cap}, got {n}")
    seed = canonical_code(stacked(n - 4))
    seen = {seed}
    queue = deque([seed])
    while queue:
        code = queue.popleft()
        g = from_canonical_code(code)
        yield g
        for u, v in g.edges():
            if not is_flippable(g, u, v):
                continue
            c = canonical_code(flip(g, u, v))
            if c not in seen:
                seen.add(c)
                queue.append(c)


@lru_cache(maxsize=None)
def _enumeration(n: int) -> tuple[Triangulation, ...]:
    return tuple(iter_triangulations(n, cap=max(n, DEFAULT_ENUMERATION_CAP)))


def enumerate_triangulations(n: int, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Triangulation]:
    if n < 4 or n > cap:
        raise ValueError(f"n must be in 4..{cap}, got {n}")
    return list(_enumeration(n))


def random_triangulation(n: int, rng: random.Random, flips: int | None = None) -> Triangulation:
    """Random walk of diagonal flips starting from the stacked triangulation."""
    g = stacked(n - 4)
    for _ in range(flips if flips is not None else 6 * n):
        u, v = rng.choice(g.edges())
        if is_flippable(g, u, v):
            g = flip(g, u, v)
    return g


def all_triangulations(n_max: int, n_min: int = 4) -> Iterator[Triangulation]:
    for n in range(n_min, n_max + 1):
        yield from _enumeration(n)


__all__ = [
    "TreeSpec",
    "TriangulationError",
    "k4",
    "wheel",
    "double_wheel",
    "octahedron",
    "icosahedron",
    "stacked",
    "insert_vertex",
    "counterexample_from_tree",
    "counterexample_wheel_vertices",
    "ce10",
    "fixtures",
    "fixture",
    "iter_triangulations",
    "enumerate_triangulations",
    "all_triangulations",
    "random_triangulation",
]
