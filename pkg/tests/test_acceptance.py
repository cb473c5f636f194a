"""Exit criteria, each checked exhaustively at small order.

Every test appends one PASS/FAIL line to the acceptance summary printed
at the end of the pytest run.
"""

import random
import time

import networkx as nx
import pytest

from trihc.constructions import (
    TreeSpec,
    all_triangulations,
    counterexample_from_tree,
    counterexample_wheel_vertices,
    enumerate_triangulations,
    icosahedron,
    random_triangulation,
)
from trihc.decomposition import decomposition_tree, tree_shape
from trihc.hamsearch import (
    CONTRACT_SKIP,
    CYCLE_SEED,
    DIST2_DEG4,
    DIST2_DEG5,
    FLIP_SKIP,
    PATH_TREE_ADJ,
    ROTATION,
    PremiseLedger,
    RuleConfig,
    check_hc,
    check_hc_apex_oracle,
    ham_cycle_through,
    is_hamiltonian_cycle,
    two_edge_cycle_instances,
    two_edge_hc_check,
)
from trihc.plane import canonical_code, subdivide_shared_edge
from trihc.structure import (
    find_common_separating_edge,
    is_4_connected,
    scattering_lower_bound,
    separating_triangle_count,
)

from oracles import brute_count_triangulations

N_MAX = 11


def report(log, number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    log.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def naive_verdicts():
    """Naive hamiltonian-connectedness verdict for every triangulation with n <= 11."""
    return {canonical_code(g): check_hc(g, "naive").hamiltonian_connected for g in all_triangulations(N_MAX)}


@pytest.fixture(scope="module")
def shapes():
    return {canonical_code(g): tree_shape(decomposition_tree(g)) for g in all_triangulations(N_MAX)}


def _failures(graphs, verdicts):
    return [g for g in graphs if not verdicts[canonical_code(g)]]


def test_c1_at_most_one_separating_triangle(naive_verdicts, acceptance_log):
    graphs = [g for g in all_triangulations(N_MAX) if separating_triangle_count(g) <= 1]
    bad = _failures(graphs, naive_verdicts)
    report(acceptance_log, 1, "<=1 separating triangle, n<=11 -> HC", not bad and len(graphs) > 0,
           f"{len(graphs)} graphs, {len(bad)} not HC")


def test_c2_common_separating_edge(naive_verdicts, acceptance_log):
    checked = bad_hc = 0
    bad_sub = []
    for g in all_triangulations(N_MAX):
        e = find_common_separating_edge(g)
        if e is None:
            continue
        checked += 1
        if not naive_verdicts[canonical_code(g)]:
            bad_hc += 1
        h = subdivide_shared_edge(g, *e)
        if separating_triangle_count(h) != 0:
            bad_sub.append(g.n)
    detail = f"{checked} graphs, {bad_hc} not HC, subdivision keeps a separating triangle at n={bad_sub}"
    title = "edge in all separating triangles, n<=11 -> HC; subdivision has 0 separating triangles"
    if bad_hc == 0 and bad_sub == [4]:
        # K4 -> B3, the only 5-vertex triangulation, which has one separating triangle
        line = f"criterion  2 FAIL  {title}: {detail} (K4 only; B3 is forced)"
        acceptance_log.append(line)
        print(line)
        pytest.xfail("subdividing an edge of K4 must give B3, which has a separating triangle")
    report(acceptance_log, 2, title, bad_hc == 0 and not bad_sub, detail)


def test_c3_two_or_three_separating_triangles(naive_verdicts, acceptance_log):
    graphs = [g for g in all_triangulations(N_MAX) if separating_triangle_count(g) in (2, 3)]
    bad = _failures(graphs, naive_verdicts)
    report(acceptance_log, 3, "2 or 3 separating triangles, n<=11 -> HC", not bad,
           f"{len(graphs)} graphs, {len(bad)} not HC")


def test_c4_path_or_maxdeg3_tree(naive_verdicts, shapes, acceptance_log):
    graphs = [g for g in all_triangulations(N_MAX) if shapes[canonical_code(g)].max_degree <= 3]
    paths = sum(shapes[canonical_code(g)].is_path for g in graphs)
    bad = _failures(graphs, naive_verdicts)
    report(acceptance_log, 4, "path or max-degree-3 decomposition tree, n<=11 -> HC", not bad,
           f"{len(graphs)} graphs ({paths} with path trees), {len(bad)} not HC")


def _tree_nx(t: TreeSpec):
    T = nx.Graph()
    T.add_nodes_from(range(t.node_count))
    T.add_edges_from(t.edges)
    return T


def test_c5_counterexamples(acceptance_log):
    cases = [
        ("K_{1,4}", TreeSpec.star(4), 10),
        ("K_{1,5}", TreeSpec.star(5), 12),
        ("spider 4+depth2", TreeSpec(6, ((0, 1), (0, 2), (0, 3), (0, 4), (4, 5))), None),
    ]
    details = []
    ok = True
    for name, t, order in cases:
        t0 = time.perf_counter()
        g = counterexample_from_tree(t)
        dt = decomposition_tree(g)
        D = nx.Graph()
        D.add_nodes_from(range(dt.node_count))
        D.add_edges_from((a, b) for a, b, _ in dt.edges)
        X = counterexample_wheel_vertices(t)
        w = scattering_lower_bound(g, X)
        hc = check_hc(g, "naive").hamiltonian_connected
        elapsed = time.perf_counter() - t0
        d = max(t.degree(v) for v in range(t.node_count))
        good = (
            (order is None or g.n == order)
            and separating_triangle_count(g) == t.node_count - 1
            and nx.is_isomorphic(D, _tree_nx(t))
            and w is not None
            and w.components == d + 1
            and len(X) == d + 1
            and w.bound == 0
            and not hc
            and elapsed < 1.0
        )
        ok &= good
        details.append(f"{name}: n={g.n} k(G-X)={w.components} |X|={len(X)} HC={hc} {elapsed:.3f}s")
    report(acceptance_log, 5, "tree counterexamples", ok, "; ".join(details))


def test_c6_oracle_equivalence(acceptance_log):
    graphs = list(all_triangulations(10))
    disagreements = 0
    for g in graphs:
        a = check_hc(g, "naive").hamiltonian_connected
        b = check_hc_apex_oracle(g).hamiltonian_connected
        c = check_hc(g, "optimized").hamiltonian_connected
        disagreements += not (a == b == c)
    report(acceptance_log, 6, "naive == apex oracle == optimized, n<=10", len(graphs) == 306 and disagreements == 0,
           f"{len(graphs)} graphs, {disagreements} disagreements")


def test_c7_generator_counts(acceptance_log):
    ours = [len(enumerate_triangulations(n)) for n in range(4, 8)]
    oracle = [brute_count_triangulations(n) for n in range(4, 8)]
    report(acceptance_log, 7, "generator counts n=4..7 vs brute-force classes", ours == oracle == [1, 1, 2, 5],
           f"generator {ours}, oracle {oracle}")


def test_c8_rule_audit(shapes, acceptance_log):
    path_graphs = [g for g in all_triangulations(N_MAX) if shapes[canonical_code(g)].is_path]
    sound = {CYCLE_SEED, ROTATION, PATH_TREE_ADJ, DIST2_DEG4, DIST2_DEG5}
    disc_sound = []
    fired: dict[str, int] = {}
    for g in path_graphs:
        r = check_hc(g, "audit", RuleConfig())
        disc_sound += r.discrepancies
        for k, v in r.counts.items():
            fired[k] = fired.get(k, 0) + v
    ledger = PremiseLedger.build(N_MAX)
    # PATH_TREE_ADJ would claim every adjacent pair first and hide CONTRACT_SKIP
    cfg = RuleConfig.inductive(ledger, path_tree_adj=False)
    disc_ind = []
    for g in path_graphs:
        r = check_hc(g, "audit", cfg)
        disc_ind += r.discrepancies
        for k in (FLIP_SKIP, CONTRACT_SKIP):
            fired[k] = fired.get(k, 0) + r.counts[k]
    ok = not disc_sound and not disc_ind and all(fired.get(k, 0) > 0 for k in sound | {FLIP_SKIP, CONTRACT_SKIP})
    counts = ", ".join(f"{k}={fired.get(k, 0)}" for k in sorted(sound | {FLIP_SKIP, CONTRACT_SKIP}))
    report(acceptance_log, 8, "audit of rule-covered pairs on path-tree graphs, n<=11", ok,
           f"{len(path_graphs)} graphs, {len(disc_sound) + len(disc_ind)} discrepancies; {counts}")


def _cycle_has(c, a, b):
    n = len(c)
    return any({c[i], c[(i + 1) % n]} == {a, b} for i in range(n))


def test_c9_two_edge_cycles(acceptance_log):
    instances = missing = 0
    for g in all_triangulations(10):
        for (u, v), (v2, w) in two_edge_cycle_instances(g):
            instances += 1
            c = ham_cycle_through(g, [(u, v), (v2, w)])
            if c is None or not (is_hamiltonian_cycle(g.rotation, c) and _cycle_has(c, u, v) and _cycle_has(c, v2, w)):
                missing += 1
    rng = random.Random(20260101)
    pool = [g for g in all_triangulations(11) if is_4_connected(g)] + [icosahedron()]
    while len([g for g in pool if g.n == 12]) < 20:
        g = random_triangulation(12, rng)
        if is_4_connected(g):
            pool.append(g)
    spot_fail = 0
    for _ in range(500):
        g = rng.choice(pool)
        if rng.random() < 0.5:
            a, b, c, d = rng.sample(range(g.n), 4)
            X = [(a, b), (c, d)]
        else:
            a, b, c = rng.sample(range(g.n), 3)
            X = [(a, b), (b, c)]
        if not two_edge_hc_check(g, X):
            spot_fail += 1
    report(acceptance_log, 9, "facial uv,vw cycles (tree maxdeg<=3, n<=10) and 2-edge spot check",
           instances > 0 and missing == 0 and spot_fail == 0,
           f"{instances} facial instances, {missing} missing; 500 random 4-connected instances, {spot_fail} failures")


def test_c10_decomposition_invariants(acceptance_log):
    graphs = list(all_triangulations(10))
    bad = 0
    for g in graphs:
        k = separating_triangle_count(g)
        t = decomposition_tree(g)
        if t.node_count != k + 1 or sum(p.n for p in t.pieces) != g.n + 3 * k:
            bad += 1
    report(acceptance_log, 10, "pieces = k+1 and sum |V| = n+3k, n<=10", bad == 0, f"{len(graphs)} graphs, {bad} violations")
