"""Combinatorial plane triangulations stored as rotation systems.

A graph is a tuple of per-vertex cyclic neighbour lists.  The convention used
throughout: the face to the left of the directed edge ``u -> v`` continues with
``v -> w`` where ``w`` is the neighbour *preceding* ``u`` in the rotation of
``v``.  Equivalently, for an oriented face ``(a, b, c)`` the rotation of ``a``
contains ``b`` immediately followed by ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

PLANAR_CODE_HEADER = b">>planar_code<<"
MAX_CODEC_ORDER = 255

Rotation = tuple[tuple[int, ...], ...]
Face = tuple[int, int, int]


class TriangulationError(ValueError):
    """Raised when a rotation system is not a valid simple triangulation."""


class PlanarCodeError(ValueError):
    """Raised on malformed planar_code input.

    Attributes:
        graph_index: zero-based position of the offending graph in the stream.
        offset: byte offset where the offending graph starts.
    """

    def __init__(self, message: str, graph_index: int = -1, offset: int = -1):
        super().__init__(f"graph {graph_index} (byte {offset}): {message}")
        self.graph_index = graph_index
        self.offset = offset


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _canonical_face(a: int, b: int, c: int) -> Face:
    if a < b and a < c:
        return (a, b, c)
    if b < c:
        return (b, c, a)
    return (c, a, b)


def _rotate_to_min(r: tuple[int, ...]) -> tuple[int, ...]:
    if not r:
        return r
    i = r.index(min(r))
    return r[i:] + r[:i]


class PlaneGraph:
    """A connected plane graph given by its rotation system.

    Each rotation is stored starting at its least neighbour, so equality
    means equality of embedded labelled graphs.

    Faces are traced with the module convention; no triangulation
    properties are required.
    """

    __slots__ = ("n", "rotation", "_pos", "_adj")

    def __init__(self, rotation: Iterable[Iterable[int]]):
        rot = tuple(_rotate_to_min(tuple(int(x) for x in r)) for r in rotation)
        self.n = len(rot)
        self.rotation: Rotation = rot
        pos = []
        for v, r in enumerate(rot):
            p = {}
            for i, w in enumerate(r):
                if w == v or not 0 <= w < self.n:
                    raise TriangulationError(f"vertex {v}: invalid neighbour {w}")
                if w in p:
                    raise TriangulationError(f"vertex {v}: repeated neighbour {w}")
                p[w] = i
            pos.append(p)
        for v, p in enumerate(pos):
            for w in p:
                if v not in pos[w]:
                    raise TriangulationError(f"asymmetric adjacency {v}-{w}")
        self._pos = pos
        adj = []
        for r in rot:
            m = 0
            for w in r:
                m |= 1 << w
            adj.append(m)
        self._adj = tuple(adj)

    # -- basic queries -------------------------------------------------
    @property
    def adj(self) -> tuple[int, ...]:
        """Per-vertex neighbour bitsets."""
        return self._adj

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, r in enumerate(self.rotation) for v in r if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(r) for r in self.rotation) // 2

    def position(self, v: int, w: int) -> int:
        """Index of ``w`` in the rotation of ``v``."""
        return self._pos[v][w]

    def next_in_face(self, u: int, v: int) -> int:
        r = self.rotation[v]
        return r[self._pos[v][u] - 1]

    def trace_faces(self) -> list[tuple[int, ...]]:
        """All faces as vertex cycles, each directed edge used exactly once."""
        seen: set[tuple[int, int]] = set()
        out = []
        for u, r in enumerate(self.rotation):
            for v in r:
                if (u, v) in seen:
                    continue
                cyc = []
                a, b = u, v
                while (a, b) not in seen:
                    seen.add((a, b))
                    cyc.append(a)
                    a, b = b, self.next_in_face(a, b)
                out.append(tuple(cyc))
        return out

    def __eq__(self, other: object) -> bool:
        return type(other) is type(self) and self.rotation == other.rotation  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash(self.rotation)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, rotation={self.rotation!r})"

    def __reduce__(self):
        return (type(self), (self.rotation,))

    def is_triangulation(self) -> bool:
        try:
            Triangulation(self.rotation)
        except TriangulationError:
            return False
        return True

    def as_triangulation(self) -> "Triangulation":
        return Triangulation(self.rotation)


class Triangulation(PlaneGraph):
    """A simple triangulation of the sphere (every face is a triangle).

    Construction validates simplicity, symmetry, the edge count, that all
    traced faces are triangles with Euler characteristic 2, and
    3-connectivity.  Instances are immutable.
    """

    __slots__ = ()

    def __init__(self, rotation: Iterable[Iterable[int]], check: bool = True):
        super().__init__(rotation)
        if check:
            self._validate()

    def _validate(self) -> None:
        n = self.n
        if n < 4:
            raise TriangulationError(f"need at least 4 vertices, got {n}")
        m = self.edge_count
        if m != 3 * n - 6:
            raise TriangulationError(f"{m} edges, expected {3 * n - 6}")
        faces = self.trace_faces()
        for f in faces:
            if len(f) != 3:
                raise TriangulationError(f"non-triangular face {f}")
        if len(faces) != 2 * n - 4:
            raise TriangulationError("rotation system is not spherical")
        if not _is_3_connected(self._adj, n):
            raise TriangulationError("graph is not 3-connected")

    @classmethod
    def from_faces(cls, faces: Iterable[Sequence[int]], check: bool = True) -> "Triangulation":
        """Build from consistently oriented face triples."""
        succ: dict[int, dict[int, int]] = {}
        for a, b, c in faces:
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                s = succ.setdefault(x, {})
                if y in s:
                    raise TriangulationError(f"faces are not consistently oriented at {x}")
                s[y] = z
        n = len(succ)
        if sorted(succ) != list(range(n)):
            raise TriangulationError("vertices must be 0..n-1")
        rot = []
        for v in range(n):
            s = succ[v]
            start = min(s)
            cyc = [start]
            w = s[start]
            while w != start:
                cyc.append(w)
                w = s.get(w, start)
                if len(cyc) > len(s):
                    raise TriangulationError(f"broken wheel around {v}")
            if len(cyc) != len(s):
                raise TriangulationError(f"vertex {v} is not a disc")
            rot.append(cyc)
        return cls(rot, check=check)

    def faces(self) -> list[Face]:
        """The 2n - 4 faces, each rotated to start at its least vertex."""
        return sorted(_canonical_face(*f) for f in self.trace_faces())

    def face_set(self) -> set[frozenset[int]]:
        return {frozenset(f) for f in self.trace_faces()}

    def oriented_face(self, vertices: Iterable[int]) -> Face:
        """Return the face on the given vertex triple in traced orientation."""
        a, b, c = vertices
        if not (self.has_edge(a, b) and self.has_edge(b, c) and self.has_edge(a, c)):
            raise TriangulationError(f"{(a, b, c)} is not a triangle")
        if self.next_in_face(a, b) == c:
            return (a, b, c)
        if self.next_in_face(a, c) == b:
            return (a, c, b)
        raise TriangulationError(f"{(a, b, c)} is not a face")

    def apexes(self, u: int, v: int) -> tuple[int, int]:
        """Third vertices of the faces on either side of ``uv``.

        The first is the apex of the face traced ``u -> v``.
        """
        if not self.has_edge(u, v):
            raise TriangulationError(f"{u}-{v} is not an edge")
        return self.next_in_face(u, v), self.next_in_face(v, u)

    def mirror(self) -> "Triangulation":
        return Triangulation(tuple(reversed(r)) for r in self.rotation)

    def relabel(self, perm: Sequence[int]) -> "Triangulation":
        """Relabel vertex ``v`` as ``perm[v]``."""
        rot: list[tuple[int, ...]] = [()] * self.n
        for v, r in enumerate(self.rotation):
            rot[perm[v]] = tuple(perm[w] for w in r)
        return Triangulation(rot, check=False)

    def to_text(self) -> str:
        return "\n".join(" ".join(map(str, r)) for r in self.rotation)


def _components_mask(adj: Sequence[int], mask: int) -> int:
    """Number of connected components of the subgraph induced on ``mask``."""
    count = 0
    while mask:
        comp = mask & -mask
        frontier = comp
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            nxt &= mask & ~comp
            comp |= nxt
            frontier = nxt
        mask &= ~comp
        count += 1
    return count


def _is_3_connected(adj: Sequence[int], n: int) -> bool:
    full = (1 << n) - 1
    if _components_mask(adj, full) != 1:
        return False
    for a in range(n):
        for b in range(a, n):
            if _components_mask(adj, full & ~(1 << a) & ~(1 << b)) != 1:
                return False
    return True


# -- planar_code ---------------------------------------------------------


def encode_planar_code(graphs: Iterable[Triangulation], header: bool = True) -> bytes:
    out = bytearray(PLANAR_CODE_HEADER if header else b"")
    for g in graphs:
        if g.n > MAX_CODEC_ORDER:
            raise ValueError(f"planar_code supports n <= {MAX_CODEC_ORDER}, got {g.n}")
        out.append(g.n)
        for r in g.rotation:
            out.extend(w + 1 for w in r)
            out.append(0)
    return bytes(out)


def iter_planar_code(data: bytes, errors: list[PlanarCodeError] | None = None) -> Iterator[Triangulation]:
    """Decode a planar_code stream lazily.

    If ``errors`` is given, graphs that are framed correctly but are not
    valid triangulations are skipped and their errors appended; otherwise
    the first error is raised.  Framing errors always raise.
    """
    if not data.startswith(PLANAR_CODE_HEADER):
        raise PlanarCodeError("missing >>planar_code<< header", 0, 0)
    i = len(PLANAR_CODE_HEADER)
    index = 0
    size = len(data)
    while i < size:
        start = i
        n = data[i]
        i += 1
        if n == 0:
            # plantri pads some streams with zero bytes
            continue
        rot = []
        for _ in range(n):
            nb = []
            while True:
                if i >= size:
                    raise PlanarCodeError("truncated graph", index, start)
                b = data[i]
                i += 1
                if b == 0:
                    break
                nb.append(b - 1)
            rot.append(nb)
        try:
            if n < 4:
                raise PlanarCodeError(f"order {n} outside 4..255", index, start)
            for r in rot:
                if any(w >= n for w in r):
                    raise PlanarCodeError("neighbour id out of range", index, start)
            try:
                g = Triangulation(rot)
            except TriangulationError as exc:
                raise PlanarCodeError(str(exc), index, start) from exc
        except PlanarCodeError as exc:
            if errors is None:
                raise
            errors.append(exc)
        else:
            yield g
        index += 1


def decode_planar_code(data: bytes) -> list[Triangulation]:
    return list(iter_planar_code(data))


def parse_text(text: str) -> list[Triangulation]:
    """Parse the debug text format: blank-line separated blocks, one rotation per line."""
    graphs = []
    block: list[list[int]] = []
    for line in text.splitlines() + [""]:
        line = line.strip()
        if line:
            block.append([int(x) for x in line.split()])
        elif block:
            graphs.append(Triangulation(block))
            block = []
    return graphs


def format_text(graphs: Iterable[Triangulation]) -> str:
    return "".join(g.to_text() + "\n\n" for g in graphs)


# -- canonical form ------------------------------------------------------


def canonical_code(g: PlaneGraph) -> bytes:
    """Isomorphism-invariant code, mirror images included.

    The code is the lexicographically least breadth-first planar code over
    every directed start edge and both orientations.  A candidate is
    abandoned as soon as it exceeds the best code so far.
    """
    best: list[int] | None = None
    n = g.n
    rot = g.rotation
    pos = [g._pos[v] for v in range(n)]
    for u in range(n):
        for v in rot[u]:
            for forward in (True, False):
                cand = _bfs_code(rot, pos, n, u, v, forward, best)
                if cand is not None:
                    best = cand
    assert best is not None
    return bytes([n] + best)


def _bfs_code(rot, pos, n, u, v, forward, best):
    label = [0] * n
    label[u] = 1
    order = [u]
    ref = [0] * n
    ref[u] = v
    nxt = 2
    code: list[int] = []
    smaller = best is None
    k = 0
    head = 0
    while head < len(order):
        w = order[head]
        head += 1
        r = rot[w]
        d = len(r)
        i0 = pos[w][ref[w]]
        for j in range(d):
            x = r[(i0 + j) % d] if forward else r[(i0 - j) % d]
            lx = label[x]
            if not lx:
                lx = label[x] = nxt
                nxt += 1
                ref[x] = w
                order.append(x)
            if not smaller:
                b = best[k]
                if lx > b:
                    return None
                if lx < b:
                    smaller = True
            code.append(lx)
            k += 1
        if not smaller:
            b = best[k]
            if b != 0:
                # 0 < b: candidate is smaller
                smaller = True
        code.append(0)
        k += 1
    return code if smaller else None


def canonical_form(g: Triangulation) -> Triangulation:
    """The triangulation relabelled according to its canonical code."""
    return _decode_body(canonical_code(g))


def _decode_body(code: bytes) -> Triangulation:
    n = code[0]
    rot = []
    cur: list[int] = []
    for b in code[1:]:
        if b == 0:
            rot.append(cur)
            cur = []
        else:
            cur.append(b - 1)
    assert len(rot) == n
    return Triangulation(rot, check=False)


def from_canonical_code(code: bytes) -> Triangulation:
    return _decode_body(code)


def is_isomorphic(g: Triangulation, h: Triangulation) -> bool:
    return g.n == h.n and g.edge_count == h.edge_count and canonical_code(g) == canonical_code(h)


# -- surgery ---------------------------------------------------------------


def contract_edge(g: Triangulation, u: int, v: int) -> Triangulation:
    """Contract ``uv`` into ``v``; vertex ``u`` disappears.

    Labels above ``u`` shift down by one.  Requires exactly two common
    neighbours so the result stays simple.
    """
    if not g.has_edge(u, v):
        raise TriangulationError(f"{u}-{v} is not an edge")
    common = (g.adj[u] & g.adj[v]).bit_count()
    if common != 2:
        raise TriangulationError(f"{u}-{v} has {common} common neighbours; contraction would create a multi-edge")
    if g.n <= 4:
        raise TriangulationError("cannot contract below 4 vertices")
    ru = g.rotation[u]
    i = g.position(u, v)
    d = len(ru)
    # ru = [v, wa, y..., wb] with wa the apex preceding u in the rotation of v
    around = [ru[(i + j) % d] for j in range(1, d)]
    wa, wb = around[0], around[-1]
    rot = [list(r) for r in g.rotation]
    rv = rot[v]
    k = rv.index(u)
    rot[v] = rv[:k] + around[1:-1] + rv[k + 1 :]
    rot[wa].remove(u)
    rot[wb].remove(u)
    for y in around[1:-1]:
        ry = rot[y]
        ry[ry.index(u)] = v
    rot.pop(u)
    shift = [w - (w > u) for w in range(g.n)]
    return Triangulation([[shift[w] for w in r] for r in rot], check=False)


def subdivide_face(g: Triangulation, f: Iterable[int], h: Triangulation, fh: Iterable[int]) -> Triangulation:
    """Glue ``h`` minus its face ``fh`` into the face ``f`` of ``g``.

    Vertices of ``g`` keep their ids; the remaining vertices of ``h`` get
    ids ``g.n, g.n + 1, ...`` in increasing order of their id in ``h``.
    The first corner of ``fh`` (in face orientation) lands on the first
    corner of ``f``.
    """
    a, b, c = g.oriented_face(tuple(f))
    x, y, z = h.oriented_face(tuple(fh))
    # gluing reverses orientation: x->y->z lands on a->c->b
    corner_of_h = {x: a, y: c, z: b}
    mapping = {}
    nxt = g.n
    for w in range(h.n):
        if w in corner_of_h:
            mapping[w] = corner_of_h[w]
        else:
            mapping[w] = nxt
            nxt += 1
    rot = [list(r) for r in g.rotation] + [[] for _ in range(nxt - g.n)]
    for w in range(h.n):
        if w not in corner_of_h:
            rot[mapping[w]] = [mapping[t] for t in h.rotation[w]]
    for hc, gc in corner_of_h.items():
        rh = h.rotation[hc]
        d = len(rh)
        # the two other h-corners are consecutive in rh; collect the rest in order
        others = [t for t in corner_of_h if t != hc]
        i_first = next(i for i in range(d) if rh[i] in others and rh[(i + 1) % d] in others)
        inner = [mapping[rh[(i_first + 1 + j) % d]] for j in range(1, d - 1)]
        rg = rot[gc]
        dg = len(rg)
        corners = set(corner_of_h.values())
        j = next(j for j in range(dg) if rg[j] in corners and rg[(j + 1) % dg] in corners)
        # g: rg[j] immediately precedes rg[j+1] around the face f
        rot[gc] = rg[: j + 1] + inner + rg[j + 1 :]
    return Triangulation(rot, check=False)


def subdivide_shared_edge(g: Triangulation, u: int, v: int) -> Triangulation:
    """Subdivide ``uv`` with a new vertex ``z = n`` joined to both apexes."""
    wa, wb = g.apexes(u, v)
    z = g.n
    rot = [list(r) for r in g.rotation]
    rot[u][rot[u].index(v)] = z
    rot[v][rot[v].index(u)] = z
    ra = rot[wa]
    k = ra.index(v)
    ra.insert(k, z)  # ra had u, v consecutive
    rb = rot[wb]
    k = rb.index(u)
    rb.insert(k, z)  # rb had v, u consecutive
    rot.append([v, wa, u, wb])
    return Triangulation(rot, check=False)


def delete_edge_add_edge(g: Triangulation, remove: tuple[int, int], add: tuple[int, int]) -> Triangulation:
    """Diagonal flip: replace ``remove = uv`` by the apex edge ``add``."""
    u, v = remove
    wa, wb = g.apexes(u, v)
    if {wa, wb} != set(add):
        raise TriangulationError(f"apexes of {u}-{v} are {wa},{wb}, not {add}")
    if g.has_edge(wa, wb):
        raise TriangulationError(f"{wa}-{wb} already adjacent; flip would create a multi-edge")
    rot = [list(r) for r in g.rotation]
    rot[u].remove(v)
    rot[v].remove(u)
    ra = rot[wa]
    ra.insert(ra.index(v), wb)
    rb = rot[wb]
    rb.insert(rb.index(u), wa)
    return Triangulation(rot, check=False)


def flip(g: Triangulation, u: int, v: int) -> Triangulation:
    return delete_edge_add_edge(g, (u, v), g.apexes(u, v))


def is_flippable(g: Triangulation, u: int, v: int) -> bool:
    wa, wb = g.apexes(u, v)
    return not g.has_edge(wa, wb)


def validate(g: PlaneGraph) -> Triangulation:
    """Run the full invariant check and return a checked Triangulation."""
    return Triangulation(g.rotation, check=True)


@dataclass(frozen=True)
class EdgePair:
    u: int
    v: int

    def __post_init__(self):
        if self.u >= self.v:
            raise ValueError("EdgePair requires u < v")
