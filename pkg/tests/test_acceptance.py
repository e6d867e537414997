"""Acceptance gates. Each test prints one PASS/FAIL line.

Run on its own with ``pytest -s tests/test_acceptance.py`` or
``python3 tests/test_acceptance.py``.
"""
import functools
import itertools
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import TOY, ids, names  # noqa: E402
from mlcores import (  # noqa: E402
    ENGINES,
    CommunityQuery,
    MiningParams,
    community_bruteforce,
    community_search,
    decompose,
    delta,
    densest_bruteforce,
    densest_subgraph,
    filter_innermost,
    innermost_cores,
    mine_fcgqc,
    mine_fcgqc_pruned,
    random_multilayer,
    read_edge_list,
    sigma,
    theta,
)
from mlcores.decomposition import lattice_nodes  # noqa: E402
from mlcores.densest import best_prefix  # noqa: E402

BETAS = (0.25, 1.0, 2.0, 4.0)
PROBS = (0.05, 0.1, 0.15, 0.2, 0.25, 0.3)


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return emit


def _close(a, b, tol):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(b))


# --- 1 ---------------------------------------------------------------------------

def test_1_toy_golden(report):
    caption = {(1, 1): "ABCDEF", (2, 1): "ABDEF", (3, 1): "ABDE", (1, 3): "BCEF", (2, 2): "BEF"}
    t = time.perf_counter()
    g, _ = read_edge_list(TOY)
    got = [{k: names(g, c.vertices) for k, c in decompose(g, e).cores.items()} for e in ENGINES]
    nodes = len(list(lattice_nodes(g)))
    elapsed = time.perf_counter() - t
    ok = all(x == caption for x in got) and nodes == 13 and elapsed < 1.0
    assert report("1 toy-graph golden", ok, f"5 cores match on {len(ENGINES)} engines, {nodes} lattice nodes, {elapsed:.3f}s")


# --- 2 and 3 (and 9) share the same 200 instances -----------------------------------------

def instances_200():
    rng = random.Random(2024)
    for i in range(200):
        n = rng.randint(10, 40)
        L = rng.randint(2, 5)
        p = rng.choice(PROBS)
        yield i, random_multilayer(n, L, p, seed=i)


@functools.lru_cache(maxsize=None)
def engine_runs():
    runs = []
    elapsed = 0.0
    for i, g in instances_200():
        per = {}
        for e in ENGINES:
            t = time.perf_counter()
            per[e] = decompose(g, e, seed=i)
            elapsed += time.perf_counter() - t
        runs.append((g, per))
    return runs, elapsed


def test_2_engine_equivalence(report):
    runs, elapsed = engine_runs()
    bad = [i for i, (_, per) in enumerate(runs) if len({frozenset(d.as_map().items()) for d in per.values()}) != 1]
    ok = not bad and elapsed < 60
    assert report("2 engine equivalence", ok, f"{len(runs) - len(bad)}/{len(runs)} identical, engines took {elapsed:.1f}s (< 60s)")


def test_3_innermost_equivalence(report):
    runs, _ = engine_runs()
    bad = [i for i, (g, per) in enumerate(runs) if innermost_cores(g).as_map() != filter_innermost(per["naive"]).as_map()]
    g, _ = read_edge_list(TOY)
    toy = {k: names(g, c.vertices) for k, c in innermost_cores(g).cores.items()}
    toy_ok = toy == {(3, 1): "ABDE", (1, 3): "BCEF", (2, 2): "BEF"}
    ok = not bad and toy_ok
    assert report("3 inner-most equivalence", ok, f"{len(runs) - len(bad)}/{len(runs)} equal; toy graph three cores: {toy_ok}")


# --- 4 -----------------------------------------------------------------------------

def test_4_densest_approximation(report):
    rng = random.Random(4)
    checks = fails = 0
    worst = math.inf
    for i in range(100):
        n = rng.randint(4, 14)
        L = rng.randint(1, 4)
        g = random_multilayer(n, L, rng.choice((0.2, 0.3, 0.4, 0.5, 0.6)), seed=1000 + i)
        for beta in BETAS:
            opt = densest_bruteforce(g, beta).delta_value
            bound = opt / (2 * L ** beta)
            for mode in ("full", "innermost"):
                got = densest_subgraph(g, beta, mode).delta_value
                checks += 1
                if not got >= bound - 1e-9:
                    fails += 1
                if opt > 0:
                    worst = min(worst, got / opt)
    ok = fails == 0
    assert report("4 densest approximation", ok, f"{checks - fails}/{checks} within 2|L|^beta (both modes); worst ratio to optimum {worst:.3f}")


# --- 5 -----------------------------------------------------------------------------

def _subset_max(values, beta):
    L = len(values)
    return max(
        min(values[i] for i in ls) * len(ls) ** beta
        for j in range(1, L + 1)
        for ls in itertools.combinations(range(L), j)
    )


def test_5_prefix_scan(report):
    rng = random.Random(5)
    checks = fails = 0
    for _ in range(1000):
        L = rng.randint(1, 6)
        beta = rng.choice(BETAS + (0.5, 3.0))
        dens = [rng.randint(0, 30) / rng.randint(1, 12) for _ in range(L)]
        degs = [rng.randint(0, 6) for _ in range(L)]
        vec = tuple(rng.randint(0, 6) for _ in range(L))
        pairs = [
            (best_prefix(dens, beta)[0], _subset_max(dens, beta)),
            (best_prefix([float(x) for x in degs], beta)[0], _subset_max(degs, beta)),
            (sigma(vec, beta), _subset_max(vec, beta)),
        ]
        for got, want in pairs:
            checks += 1
            fails += not _close(got, want, 1e-12)
    assert report("5 prefix-scan oracles", fails == 0, f"{checks - fails}/{checks} delta/theta/sigma profiles match subset enumeration")


# --- 6 -----------------------------------------------------------------------------

def test_6_quasiclique_pruning(report):
    rng = random.Random(6)
    grid = list(itertools.product((0.5, 0.8, 1.0), (0.5, 1.0), (3, 4)))
    runs = mismatches = oversize = strict = strict_total = 0
    for i in range(100):
        n = rng.randint(8, 25)
        L = rng.randint(2, 4)
        g = random_multilayer(n, L, rng.choice((0.1, 0.15, 0.2, 0.25, 0.3)), seed=2000 + i)
        d = decompose(g)
        for gamma, sup, size in grid:
            p = MiningParams(gamma, sup, size)
            pruned = mine_fcgqc_pruned(g, p, d=d)
            full = mine_fcgqc(g, None, p)
            runs += 1
            mismatches += pruned.sets() != full.sets()
            oversize += len(pruned.search_space) > n
            if gamma == 1.0 and sup == 1.0:
                strict_total += 1
                strict += len(pruned.search_space) < n
    ok = mismatches == 0 and oversize == 0 and 2 * strict >= strict_total
    assert report(
        "6 quasi-clique pruning",
        ok,
        f"{runs - mismatches}/{runs} identical, |V'|<=|V| always: {oversize == 0}, strict at Gamma=1,min_sup=1 on {strict}/{strict_total}",
    )


# --- 7 -----------------------------------------------------------------------------

def test_7_community_optimality(report):
    rng = random.Random(7)
    checks = fails = 0
    for i in range(100):
        n = rng.randint(5, 14)
        L = rng.randint(1, 4)
        g = random_multilayer(n, L, rng.choice((0.2, 0.3, 0.4, 0.5)), seed=3000 + i)
        q = frozenset(rng.sample(range(n), rng.randint(1, 4)))
        for beta in BETAS:
            want = community_bruteforce(g, CommunityQuery(q, beta)).score
            for strategy in ("bfs", "dfs", "hybrid"):
                r = community_search(g, CommunityQuery(q, beta, strategy), seed=i)
                got = theta(g, r.vertices, beta)[0]
                checks += 1
                fails += not (q <= r.vertices and _close(got, want, 1e-9))
    g, _ = read_edge_list(TOY)
    f = community_search(g, CommunityQuery(ids(g, "F")))
    c = community_search(g, CommunityQuery(ids(g, "C")))
    toy_ok = f.score == 4 and c.score == 3
    ok = fails == 0 and toy_ok
    assert report("7 community-search optimality", ok, f"{checks - fails}/{checks} optimal; toy graph F->{f.score:g}, C->{c.score:g}")


# --- 8 -----------------------------------------------------------------------------

def test_8_structural_invariants(report):
    import test_properties as tp

    props = [
        tp.test_nesting,
        tp.test_meet_contains_join,
        tp.test_bfs_father_counts,
        tp.test_fixpoint,
        tp.test_unique_vertex_sets,
        tp.test_dfs_order_independent,
    ]
    failed = []
    for prop in props:
        try:
            prop()
        except Exception as e:  # report, then fail below
            failed.append(f"{prop.__name__}: {type(e).__name__}")
    ok = not failed
    detail = f"{len(props) - len(failed)}/{len(props)} properties held on {tp.CASES.max_examples} generated cases each"
    if failed:
        detail += f"; failed {failed}"
    assert report("8 structural invariants", ok, detail)


# --- 9 (same instances as 2) -----------------------------------------------------

def test_9_traversal_efficiency(report):
    runs, _ = engine_runs()
    bad = []
    for i, (_, per) in enumerate(runs):
        h, b, n = (per[e].stats.cores_computed for e in ("hybrid", "bfs", "naive"))
        if not h <= b <= n:
            bad.append((i, h, b, n))
    totals = [sum(per[e].stats.cores_computed for _, per in runs) for e in ("hybrid", "bfs", "naive")]
    ok = not bad
    detail = f"hybrid <= bfs <= naive on {len(runs) - len(bad)}/{len(runs)}; totals {totals[0]} / {totals[1]} / {totals[2]}"
    if bad:
        detail += f"; first violation {bad[0]}"
    assert report("9 traversal efficiency", ok, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
