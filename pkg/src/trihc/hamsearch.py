"""Hamiltonian path and cycle search plus the hamiltonian-connectedness rule engine.

``check_hc`` settles every unordered vertex pair either by an explicit
hamiltonian path or by one of the skip rules below.

Sound rules (no premise needed):
    CYCLE_SEED     pairs adjacent on one hamiltonian cycle
    ROTATION       paths obtained by rotating a found path at an endpoint
    PATH_TREE_ADJ  adjacent pairs when the decomposition tree is a path
    DIST2_DEG4     (v_i, v_{i+2}) around a degree-4 vertex u, uv_i reducible, path tree
    DIST2_DEG5     (v_i, v_{i+2}), (v_i, v_{i+3}) around a degree-5 vertex, same premise

Inductive rules (need a filled :class:`PremiseLedger`):
    FLIP_SKIP      apex pair (w1, w2) of uv, w1 not adjacent to w2, N(w1) & N(w2) = {u, v}
    CONTRACT_SKIP  (u, v) for degree-4 u with uv reducible
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .decomposition import decomposition_tree, tree_shape
from .plane import Triangulation, TriangulationError, contract_edge, delete_edge_add_edge
from .structure import _bits, is_4_connected, reducible_edges, separating_triangle_count

CYCLE_SEED = "CYCLE_SEED"
ROTATION = "ROTATION"
PATH_TREE_ADJ = "PATH_TREE_ADJ"
FLIP_SKIP = "FLIP_SKIP"
CONTRACT_SKIP = "CONTRACT_SKIP"
DIST2_DEG4 = "DIST2_DEG4"
DIST2_DEG5 = "DIST2_DEG5"
SEARCH = "SEARCH"

RULE_IDS = (CYCLE_SEED, ROTATION, PATH_TREE_ADJ, FLIP_SKIP, CONTRACT_SKIP, DIST2_DEG4, DIST2_DEG5, SEARCH)
INDUCTIVE_RULES = frozenset({FLIP_SKIP, CONTRACT_SKIP})

Pair = tuple[int, int]


class Status(str, Enum):
    RULE = "covered-by-rule"
    SEARCH = "covered-by-search"
    REFUTED = "refuted"


def _pair(x: int, y: int) -> Pair:
    return (x, y) if x < y else (y, x)


# -- path validation ---------------------------------------------------------


def is_hamiltonian_path(g: Triangulation, path: Sequence[int], x: int | None = None, y: int | None = None) -> bool:
    """Independent validator: every vertex once, consecutive vertices adjacent."""
    if len(path) != g.n or sorted(path) != list(range(g.n)):
        return False
    if any(not g.has_edge(a, b) for a, b in zip(path, path[1:])):
        return False
    if x is not None and y is not None and {path[0], path[-1]} != {x, y}:
        return False
    return True


def is_hamiltonian_cycle(adj_lists: Sequence[Iterable[int]], cycle: Sequence[int]) -> bool:
    n = len(adj_lists)
    if len(cycle) != n or sorted(cycle) != list(range(n)):
        return False
    sets = [set(a) for a in adj_lists]
    return all(cycle[(i + 1) % n] in sets[cycle[i]] for i in range(n))


# -- core path search --------------------------------------------------------


def _path_search(adj: Sequence[int], allowed: int, x: int, y: int) -> list[int] | None:
    """Hamiltonian path from ``x`` to ``y`` through exactly the vertices in ``allowed``.

    The path grows from both ends; each step extends the end with fewer
    candidate moves.  Branches die when an unvisited vertex has fewer than
    two usable neighbours or the unvisited vertices are disconnected.
    """
    if x == y or not (allowed >> x & 1) or not (allowed >> y & 1):
        return None
    if allowed.bit_count() == 2:
        return [x, y] if adj[x] >> y & 1 else None
    left = [x]
    right = [y]
    unvisited = allowed & ~(1 << x) & ~(1 << y)

    def connected(mask: int) -> bool:
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
        return comp == mask

    def rec(a: int, b: int, un: int) -> bool:
        if not un:
            return bool(adj[a] >> b & 1)
        ca = adj[a] & un
        cb = adj[b] & un
        if not ca or not cb:
            return False
        ends = un | (1 << a) | (1 << b)
        u = un
        while u:
            low = u & -u
            u ^= low
            if (adj[low.bit_length() - 1] & ends).bit_count() < 2:
                return False
        if not connected(un):
            return False
        if ca.bit_count() <= cb.bit_count():
            side, cands, other = left, ca, b
        else:
            side, cands, other = right, cb, a
        moves = _bits(cands)
        if len(moves) > 1:
            moves.sort(key=lambda w: (adj[w] & un).bit_count())
        for w in moves:
            side.append(w)
            rest = un & ~(1 << w)
            ok = rec(w, other, rest) if side is left else rec(other, w, rest)
            if ok:
                return True
            side.pop()
        return False

    if rec(x, y, unvisited):
        return left + right[::-1]
    return None


def ham_path(g: Triangulation, x: int, y: int) -> list[int] | None:
    """A hamiltonian path from ``x`` to ``y``, or ``None`` when none exists."""
    if x == y:
        raise ValueError("endpoints must differ")
    return _path_search(g.adj, (1 << g.n) - 1, x, y)


def _adj_with_extra(adj: Sequence[int], pairs: Iterable[Pair]) -> list[int]:
    out = list(adj)
    for a, b in pairs:
        out[a] |= 1 << b
        out[b] |= 1 << a
    return out


def ham_cycle_through(g: Triangulation, required: Sequence[Pair] = ()) -> list[int] | None:
    """Hamiltonian cycle of ``G + required`` containing every required pair.

    Up to two required pairs; they may be non-edges of ``G``.  Two pairs
    must either be disjoint or share exactly one endpoint.
    """
    req = [tuple(p) for p in required]
    if len(req) > 2:
        raise ValueError("at most two required edges")
    for a, b in req:
        if a == b:
            raise ValueError("required edge is a loop")
    if len(req) == 2 and set(req[0]) == set(req[1]):
        raise ValueError("required edges share both endpoints")
    n = g.n
    full = (1 << n) - 1
    adj = list(g.adj)
    if not req:
        x = 0
        for y in g.neighbors(x):
            p = _path_search(adj, full, x, y)
            if p is not None:
                return p
        return None
    if len(req) == 1:
        u, v = req[0]
        return _path_search(adj, full, u, v)
    (a, b), (c, d) = req
    shared = set(req[0]) & set(req[1])
    if shared:
        (v,) = shared
        u = a if b == v else b
        w = c if d == v else d
        p = _path_search(adj, full & ~(1 << v), w, u)
        return None if p is None else [v] + p
    # disjoint: force cd through an auxiliary degree-2 vertex z
    z = n
    aux = adj + [(1 << c) | (1 << d)]
    aux[c] |= 1 << z
    aux[d] |= 1 << z
    p = _path_search(aux, (1 << (n + 1)) - 1, a, b)
    if p is None:
        return None
    i = p.index(z)
    return p[:i] + p[i + 1 :]


def is_path_forest(pairs: Sequence[Pair]) -> bool:
    verts: dict[int, int] = {}
    for a, b in pairs:
        if a == b:
            return False
        verts[a] = verts.get(a, 0) + 1
        verts[b] = verts.get(b, 0) + 1
    if len({frozenset(p) for p in pairs}) != len(pairs):
        return False
    if any(d > 2 for d in verts.values()):
        return False
    # with at most two pairs the only possible cycle is a doubled edge
    return True


def two_edge_hc_check(g: Triangulation, X: Sequence[Pair]) -> bool:
    """Does ``G + X`` have a hamiltonian cycle through both pairs of ``X``?"""
    if not is_4_connected(g):
        raise ValueError("graph is not 4-connected")
    if not 1 <= len(X) <= 2 or not is_path_forest(X):
        raise ValueError("X must be one or two pairs forming a path forest")
    return ham_cycle_through(g, X) is not None


def _cycle_search_plain(adj_lists: Sequence[Sequence[int]], start: int) -> list[int] | None:
    """Unpruned-except-degree backtracking for a hamiltonian cycle (oracle use)."""
    n = len(adj_lists)
    nb = [set(a) for a in adj_lists]
    path = [start]
    used = [False] * n
    used[start] = True

    def rec() -> bool:
        if len(path) == n:
            return start in nb[path[-1]]
        cur = path[-1]
        for w in adj_lists[cur]:
            if used[w]:
                continue
            # every unused vertex needs two neighbours among unused + path ends
            used[w] = True
            path.append(w)
            ok = True
            for t in range(n):
                if not used[t]:
                    free = sum(1 for s in nb[t] if not used[s] or s == w or s == start)
                    if free < 2:
                        ok = False
                        break
            if ok and rec():
                return True
            path.pop()
            used[w] = False
        return False

    return list(path) if rec() else None


# -- rotations -----------------------------------------------------------------


def rotation_closure(g: Triangulation, path: Sequence[int], depth: int = 2) -> dict[Pair, list[int]]:
    """Pairs reachable by rotating ``path`` at its endpoints, ``depth`` times.

    If the head ``x_1`` is adjacent to ``x_i`` then ``x_{i-1} .. x_1 x_i .. x_n``
    is again a hamiltonian path; the same is done from the tail.  The
    input path's own pair is included.
    """
    if not is_hamiltonian_path(g, path):
        raise ValueError("input is not a hamiltonian path")
    found: dict[Pair, list[int]] = {_pair(path[0], path[-1]): list(path)}
    layer = [list(path)]
    for _ in range(depth):
        nxt = []
        for p in layer:
            for q in (p, p[::-1]):
                head = q[0]
                for i in range(2, len(q)):
                    if g.has_edge(head, q[i]):
                        r = q[i - 1 :: -1] + q[i:]
                        key = _pair(r[0], r[-1])
                        if key not in found:
                            found[key] = r
                            nxt.append(r)
        layer = nxt
    return found


# -- reports -----------------------------------------------------------------


@dataclass
class PairStatus:
    pair: Pair
    status: Status
    rule_id: str
    witness: list[int] | None = None


@dataclass
class HCReport:
    graph_id: int
    n: int
    hamiltonian_connected: bool
    pairs: list[PairStatus]
    counts: dict[str, int]
    mode: str
    elapsed: float = 0.0
    discrepancies: list[tuple[Pair, str]] = field(default_factory=list)

    @property
    def refuted(self) -> list[Pair]:
        return [p.pair for p in self.pairs if p.status is Status.REFUTED]

    def to_record(self, witness: bool = False, timing: bool = False) -> dict:
        rec: dict = {
            "graph": self.graph_id,
            "n": self.n,
            "mode": self.mode,
            "hamiltonian_connected": self.hamiltonian_connected,
            "counts": {k: v for k, v in self.counts.items() if v},
            "refuted": [list(p) for p in self.refuted],
        }
        if self.mode == "audit":
            rec["discrepancies"] = [{"pair": list(p), "rule": r} for p, r in self.discrepancies]
        if witness:
            rec["witnesses"] = {f"{a}-{b}": s.witness for s in self.pairs for a, b in [s.pair] if s.witness}
        if timing:
            rec["elapsed"] = round(self.elapsed, 6)
        return rec


# -- premise ledger for inductive rules ---------------------------------------------


@dataclass
class PremiseLedger:
    """Classes of triangulations whose adjacent pairs were all verified.

    ``by_septri[(n, s)]`` / ``by_tree[(n, key)]`` is True when every
    triangulation on ``n`` vertices with ``s`` separating triangles (resp.
    decomposition tree shape ``key``) was enumerated and each adjacent
    pair joined by a hamiltonian path.  Only exhaustive runs may set them.
    """

    by_septri: dict[tuple[int, int], bool] = field(default_factory=dict)
    by_tree: dict[tuple[int, str], bool] = field(default_factory=dict)
    complete_orders: set[int] = field(default_factory=set)

    def flip_premise(self, n: int, s: int) -> bool:
        if n not in self.complete_orders:
            return False
        return all(self.by_septri.get((n, t), True) for t in range(s + 1))

    def contract_premise(self, n: int, key: str) -> bool:
        if n not in self.complete_orders:
            return False
        return self.by_tree.get((n, key), True)

    def record(self, g: Triangulation, adjacent_ok: bool) -> None:
        s = separating_triangle_count(g)
        key = tree_shape(decomposition_tree(g)).key
        self.by_septri[(g.n, s)] = self.by_septri.get((g.n, s), True) and adjacent_ok
        self.by_tree[(g.n, key)] = self.by_tree.get((g.n, key), True) and adjacent_ok

    def fill(self, n: int, graphs: Iterable[Triangulation]) -> None:
        """Verify adjacent pairs on a complete enumeration of order ``n``."""
        for g in graphs:
            if g.n != n:
                raise ValueError("graph of the wrong order in ledger fill")
            self.record(g, adjacent_pairs_connected(g))
        self.complete_orders.add(n)

    @classmethod
    def build(cls, n_max: int, n_min: int = 4) -> "PremiseLedger":
        from .constructions import enumerate_triangulations

        ledger = cls()
        for n in range(n_min, n_max + 1):
            ledger.fill(n, enumerate_triangulations(n, cap=max(n, 14)))
        return ledger


def adjacent_pairs_connected(g: Triangulation) -> bool:
    """Every edge ``uv`` has a hamiltonian path from ``u`` to ``v``."""
    cyc = ham_cycle_through(g)
    done: set[Pair] = set()
    if cyc is not None:
        done.update(_pair(cyc[i], cyc[(i + 1) % g.n]) for i in range(g.n))
    full = (1 << g.n) - 1
    for u, v in g.edges():
        if (u, v) in done:
            continue
        p = _path_search(g.adj, full, u, v)
        if p is None:
            return False
        done.add((u, v))
    return True


# -- rule configuration and engine -----------------------------------------------


@dataclass
class RuleConfig:
    cycle_seed: bool = True
    rotation: bool = True
    rotation_depth: int = 2
    path_tree_adj: bool = True
    dist2_deg4: bool = True
    dist2_deg5: bool = True
    flip_skip: bool = False
    contract_skip: bool = False
    ledger: PremiseLedger | None = None

    @classmethod
    def inductive(cls, ledger: PremiseLedger, **kw) -> "RuleConfig":
        return cls(flip_skip=True, contract_skip=True, ledger=ledger, **kw)


def _skip_rules(g: Triangulation, config: RuleConfig) -> dict[Pair, str]:
    """Pairs settled by structural skip rules, in rule priority order."""
    covered: dict[Pair, str] = {}
    need_tree = config.path_tree_adj or config.dist2_deg4 or config.dist2_deg5 or config.contract_skip
    tree = decomposition_tree(g) if need_tree else None
    shape = tree_shape(tree) if tree is not None else None
    path_tree = shape is not None and shape.is_path
    red: set[Pair] | None = None

    def reducible() -> set[Pair]:
        nonlocal red
        if red is None:
            red = reducible_edges(g)
        return red

    if config.path_tree_adj and path_tree:
        for e in g.edges():
            covered.setdefault(e, PATH_TREE_ADJ)
    if path_tree and (config.dist2_deg4 or config.dist2_deg5):
        for u in range(g.n):
            d = g.degree(u)
            if not ((d == 4 and config.dist2_deg4) or (d == 5 and config.dist2_deg5)):
                continue
            rot = g.rotation[u]
            for i in range(d):
                if _pair(u, rot[i]) not in reducible():
                    continue
                if d == 4:
                    covered.setdefault(_pair(rot[i], rot[(i + 2) % 4]), DIST2_DEG4)
                else:
                    # the rule covers both orientations of the cyclic order
                    covered.setdefault(_pair(rot[i], rot[(i + 2) % 5]), DIST2_DEG5)
                    covered.setdefault(_pair(rot[i], rot[(i + 3) % 5]), DIST2_DEG5)
    ledger = config.ledger
    if config.flip_skip and ledger is not None:
        s = separating_triangle_count(g)
        for u, v in g.edges():
            w1, w2 = g.apexes(u, v)
            if g.has_edge(w1, w2):
                continue
            common = g.adj[w1] & g.adj[w2]
            if common != (1 << u) | (1 << v):
                continue
            flipped = delete_edge_add_edge(g, (u, v), (w1, w2))
            s2 = separating_triangle_count(flipped)
            if s2 <= s and ledger.flip_premise(g.n, s):
                covered.setdefault(_pair(w1, w2), FLIP_SKIP)
    if config.contract_skip and ledger is not None and shape is not None:
        for u in range(g.n):
            if g.degree(u) != 4:
                continue
            for v in g.rotation[u]:
                if _pair(u, v) not in reducible():
                    continue
                if not ledger.contract_premise(g.n - 1, shape.key):
                    continue
                contracted = contract_edge(g, u, v)
                if tree_shape(decomposition_tree(contracted)).key != shape.key:
                    continue
                covered.setdefault(_pair(u, v), CONTRACT_SKIP)
    return covered


def pair_order(g: Triangulation) -> list[Pair]:
    """All unordered pairs by descending endpoint-degree sum, then lexicographically."""
    pairs = [(x, y) for x in range(g.n) for y in range(x + 1, g.n)]
    pairs.sort(key=lambda p: (-(g.degree(p[0]) + g.degree(p[1])), p))
    return pairs


def check_hc(
    g: Triangulation,
    mode: str = "optimized",
    config: RuleConfig | None = None,
    graph_id: int = 0,
) -> HCReport:
    """Decide hamiltonian-connectedness of ``g``.

    ``naive`` searches every pair; ``optimized`` applies the rule pipeline;
    ``audit`` runs ``optimized`` and then re-checks each rule-covered pair
    by explicit search, recording any disagreement.
    """
    if mode not in ("naive", "optimized", "audit"):
        raise ValueError(f"unknown mode {mode!r}")
    config = config or RuleConfig()
    t0 = time.perf_counter()
    n = g.n
    full = (1 << n) - 1
    adj = g.adj
    status: dict[Pair, PairStatus] = {}

    def settle_search(p: Pair) -> list[int] | None:
        path = _path_search(adj, full, p[0], p[1])
        if path is None:
            status[p] = PairStatus(p, Status.REFUTED, SEARCH)
        else:
            status[p] = PairStatus(p, Status.SEARCH, SEARCH, path)
        return path

    if mode == "naive":
        for p in pair_order(g):
            settle_search(p)
    else:
        if config.cycle_seed:
            cyc = ham_cycle_through(g)
            if cyc is not None:
                for i in range(n):
                    p = _pair(cyc[i], cyc[(i + 1) % n])
                    status[p] = PairStatus(p, Status.RULE, CYCLE_SEED, cyc[i + 1 :] + cyc[: i + 1])
        for p, rule in _skip_rules(g, config).items():
            if p not in status:
                status[p] = PairStatus(p, Status.RULE, rule)
        for p in pair_order(g):
            if p in status:
                continue
            path = settle_search(p)
            if path is not None and config.rotation and config.rotation_depth > 0:
                for q, rp in rotation_closure(g, path, config.rotation_depth).items():
                    if q not in status:
                        status[q] = PairStatus(q, Status.RULE, ROTATION, rp)
    discrepancies: list[tuple[Pair, str]] = []
    if mode == "audit":
        for p, st in sorted(status.items()):
            if st.status is not Status.RULE:
                continue
            if st.witness is not None and not is_hamiltonian_path(g, st.witness, *p):
                discrepancies.append((p, st.rule_id))
                continue
            if _path_search(adj, full, p[0], p[1]) is None:
                discrepancies.append((p, st.rule_id))
    pairs = [status[p] for p in sorted(status)]
    assert len(pairs) == n * (n - 1) // 2
    counts = {r: 0 for r in RULE_IDS}
    for st in pairs:
        counts[st.rule_id] += 1
    return HCReport(
        graph_id=graph_id,
        n=n,
        hamiltonian_connected=not any(st.status is Status.REFUTED for st in pairs),
        pairs=pairs,
        counts=counts,
        mode=mode,
        elapsed=time.perf_counter() - t0,
        discrepancies=discrepancies,
    )


def check_hc_apex_oracle(g: Triangulation, graph_id: int = 0) -> HCReport:
    """Per pair, add a vertex joined to exactly that pair and look for a hamiltonian cycle."""
    t0 = time.perf_counter()
    n = g.n
    base = [list(r) for r in g.rotation]
    pairs = []
    for x in range(n):
        for y in range(x + 1, n):
            lists = [list(r) for r in base] + [[x, y]]
            lists[x] = lists[x] + [n]
            lists[y] = lists[y] + [n]
            cyc = _cycle_search_plain(lists, n)
            if cyc is None:
                pairs.append(PairStatus((x, y), Status.REFUTED, SEARCH))
            else:
                # the cycle is n, a, ..., b with {a, b} = {x, y}
                pairs.append(PairStatus((x, y), Status.SEARCH, SEARCH, cyc[1:]))
    counts = {r: 0 for r in RULE_IDS}
    counts[SEARCH] = len(pairs)
    return HCReport(
        graph_id=graph_id,
        n=n,
        hamiltonian_connected=not any(p.status is Status.REFUTED for p in pairs),
        pairs=pairs,
        counts=counts,
        mode="apex-oracle",
        elapsed=time.perf_counter() - t0,
    )


def is_hamiltonian_connected(g: Triangulation) -> bool:
    return check_hc(g, "optimized").hamiltonian_connected


def two_edge_cycle_instances(g: Triangulation) -> list[tuple[Pair, Pair]]:
    """Required ``(uv, vw)`` pairs for the facial-triangle cycle property.

    For a decomposition tree of maximum degree at most 3: every face
    ``uvw`` of ``g`` lying in a piece of tree degree at most 2, taken with
    each of its three vertices as the middle vertex.
    """
    tree = decomposition_tree(g)
    deg = tree.degrees()
    if deg and max(deg) > 3:
        return []
    gfaces = g.face_set()
    out = []
    seen = set()
    for idx, (piece, origin) in enumerate(zip(tree.pieces, tree.origins)):
        if deg[idx] > 2:
            continue
        for f in piece.trace_faces():
            tri = frozenset(origin[v] for v in f)
            if tri not in gfaces or tri in seen:
                continue
            seen.add(tri)
            a, b, c = sorted(tri)
            for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
                out.append(((u, v), (v, w)))
    return out
