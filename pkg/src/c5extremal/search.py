"""Exact C(n) for small n and local-search witnesses for larger n.

The exhaustive mode enumerates graphs up to isomorphism by canonical
augmentation: a child G + v of a parent G is kept only when v lies in the
automorphism orbit of the child's canonical deletion vertex, and parents
contribute one neighbourhood per orbit of their automorphism group.  The
deletion vertex is the vertex with the largest canonical label among those
maximising a cheap invariant, so most children are decided by the invariant
alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .counting import _c5_pair, count_c5
from .graph import (
    SmallGraph,
    automorphism_generators,
    canonical_form,
    certificate,
    complement,
    to_graph6,
)

MIN_EXACT = 5
MAX_EXACT = 10


@dataclass(frozen=True)
class SearchResult:
    n: int
    best_count: int
    witnesses: tuple[str, ...]
    exhaustive: bool
    examined: int
    level_counts: tuple[int, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "best_count": self.best_count,
            "witnesses": list(self.witnesses),
            "exhaustive": self.exhaustive,
            "graphs_examined": self.examined,
        }
        if self.level_counts:
            out["unlabeled_per_order"] = list(self.level_counts)
        return out


# ---------------------------------------------------------------- generation

def _invariant(adj, v: int, deg) -> tuple:
    nb = adj[v]
    tri = 0
    for w in range(len(adj)):
        if nb >> w & 1:
            tri += (adj[w] & nb).bit_count()
    return (deg[v], tri, tuple(sorted(deg[w] for w in range(len(adj)) if nb >> w & 1)))


def _accept(adj: tuple[int, ...]) -> bool:
    """Is the last vertex in the orbit of the canonical deletion vertex?"""
    n = len(adj)
    new = n - 1
    deg = [r.bit_count() for r in adj]
    # degree alone settles most children before any triangle counting
    top_deg = max(deg)
    if deg[new] != top_deg:
        return False
    cand = [v for v in range(n) if deg[v] == top_deg]
    if len(cand) > 1:
        keys = {v: _invariant(adj, v, deg) for v in cand}
        best = max(keys.values())
        if keys[new] != best:
            return False
        cand = [v for v in cand if keys[v] == best]
    if len(cand) == 1:
        return True
    g = SmallGraph(n, adj)
    cf = canonical_form(g)
    w = max(cand, key=lambda v: cf.relabeling[v])
    if w == new:
        return True
    mark_new = [0] * n
    mark_new[new] = 1
    mark_w = [0] * n
    mark_w[w] = 1
    return canonical_form(g, mark_new).certificate == canonical_form(g, mark_w).certificate


def _subset_orbit_reps(g: SmallGraph) -> list[int]:
    """One neighbourhood mask per orbit of Aut(g) on vertex subsets (the least one)."""
    m = g.n
    gens = automorphism_generators(g)
    full = 1 << m
    if not gens:
        return list(range(full))
    imgs = []
    for p in gens:
        img = np.zeros(full, dtype=np.int64)
        for v in range(m):
            img[(np.arange(full) >> v) & 1 == 1] |= 1 << p[v]
        imgs.append(img)
    parent = np.arange(full)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for img in imgs:
        for s in range(full):
            a, b = find(s), find(int(img[s]))
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [s for s in range(full) if find(s) == s]


def _children(g: SmallGraph) -> list[tuple[int, ...]]:
    m = g.n
    out = []
    for s in _subset_orbit_reps(g):
        rows = tuple(g.adj[v] | ((s >> v & 1) << m) for v in range(m)) + (s,)
        if _accept(rows):
            out.append(rows)
    return out


def generate(n: int) -> list[list[SmallGraph]]:
    """All graphs on 1..n vertices up to isomorphism, level by level, in a fixed order."""
    levels = [[SmallGraph(1, (0,))]]
    for _ in range(2, n + 1):
        nxt = []
        for parent in levels[-1]:
            nxt.extend(SmallGraph(len(rows), rows) for rows in _children(parent))
        levels.append(nxt)
    return levels


# ---------------------------------------------------------------- batch counting

def _c5_subsets(n: int):
    """5-subsets of range(n) and, for each, the 10 pair indices in a fixed order."""
    subsets = np.array(list(itertools.combinations(range(n), 5)), dtype=np.int64)
    pairs = list(itertools.combinations(range(5), 2))
    return subsets, pairs


def _c5_table() -> np.ndarray:
    pairs = list(itertools.combinations(range(5), 2))
    table = np.zeros(1 << 10, dtype=np.int64)
    from .graph import C5

    target = certificate(C5)
    for code in range(1 << 10):
        edges = [pairs[k] for k in range(10) if code >> k & 1]
        if len(edges) == 5 and certificate(SmallGraph.from_edges(5, edges)) == target:
            table[code] = 1
    return table


def batch_c5_counts(graphs: list[SmallGraph], chunk: int = 4096) -> np.ndarray:
    """Induced C5 counts of equal-order graphs via a lookup on 5-vertex codes."""
    if not graphs:
        return np.zeros(0, dtype=np.int64)
    n = graphs[0].n
    if n < 5:
        return np.zeros(len(graphs), dtype=np.int64)
    table = _c5_table()
    subsets, pairs = _c5_subsets(n)
    out = np.empty(len(graphs), dtype=np.int64)
    for start in range(0, len(graphs), chunk):
        block = graphs[start:start + chunk]
        rows = np.array([g.adj for g in block], dtype=np.int64)  # (B, n)
        code = np.zeros((len(block), len(subsets)), dtype=np.int64)
        for k, (i, j) in enumerate(pairs):
            a = rows[:, subsets[:, i]]  # (B, S)
            code |= ((a >> subsets[:, j]) & 1) << k
        out[start:start + len(block)] = table[code].sum(axis=1)
    return out


def exhaustive_C(n: int) -> SearchResult:
    """Exact maximum number of induced pentagons over all n-vertex graphs."""
    if not MIN_EXACT <= n <= MAX_EXACT:
        raise ValueError(f"exhaustive search needs {MIN_EXACT} <= n <= {MAX_EXACT}")
    levels = generate(n)
    top = levels[-1]
    counts = batch_c5_counts(top)
    best = int(counts.max())
    wit = sorted(to_graph6(top[i]) for i in np.flatnonzero(counts == best))
    return SearchResult(n, best, tuple(wit), True, len(top), tuple(len(x) for x in levels))


# ---------------------------------------------------------------- local search

def _flip(adj: list[int], u: int, v: int):
    adj[u] ^= 1 << v
    adj[v] ^= 1 << u


def _best_move(adj: list[int], n: int):
    """Steepest improving move (delta, kind, u, v), ties broken by (kind, u, v),
    together with the list of flips that leave the count unchanged."""
    pair = {}
    for u in range(n):
        for v in range(u + 1, n):
            pair[u, v] = _c5_pair(adj, u, v)
    per_vertex = [0] * n
    for (u, v), c in pair.items():
        if adj[u] >> v & 1:
            per_vertex[u] += c
            per_vertex[v] += c
    per_vertex = [c // 2 for c in per_vertex]
    best = (0, 0, -1, -1)
    flat = []
    for (u, v), before in pair.items():
        _flip(adj, u, v)
        after = _c5_pair(adj, u, v)
        _flip(adj, u, v)
        d = after - before
        if d > best[0]:
            best = (d, 0, u, v)
        elif d == 0:
            flat.append((u, v))
    # replace v by a non-adjacent twin of u; twins never share a pentagon
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            d = per_vertex[u] - pair[key] - per_vertex[v]
            if d > best[0]:
                best = (d, 1, u, v)
    return best, flat


def _duplicate(adj: list[int], n: int, u: int, v: int):
    for w in range(n):
        if w in (u, v):
            continue
        want = adj[u] >> w & 1
        if (adj[v] >> w & 1) != want:
            _flip(adj, v, w)
    if adj[u] >> v & 1:
        _flip(adj, u, v)


def _climb(adj: list[int], n: int, budget: int, rng, sideways: int) -> int:
    """Ascend until stuck; a stuck point may take up to ``sideways`` random flat flips."""
    steps = 0
    while steps < budget:
        (d, kind, u, v), flat = _best_move(adj, n)
        steps += 1
        if d <= 0:
            if sideways <= 0 or not flat:
                break
            sideways -= 1
            _flip(adj, *flat[int(rng.integers(len(flat)))])
            continue
        if kind == 0:
            _flip(adj, u, v)
        else:
            _duplicate(adj, n, u, v)
    return steps


def hill_climb(n: int, seed: int, iterations: int, sideways: int | None = None) -> SearchResult:
    """Steepest ascent over edge flips and twin duplications with random restarts.

    ``iterations`` bounds the number of steepest-ascent steps in total.  At
    a local optimum up to ``sideways`` (default 2n) count-preserving flips are
    taken at random before giving up on the current start; inside a blow-up
    class such flips are what builds the inner structure.
    Restarts alternate between a fresh random graph and a perturbation of the
    best graph so far; everything is driven by ``seed``.
    """
    if not 1 <= n <= 64:
        raise ValueError("hill climbing supports 1 <= n <= 64")
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    best_adj: list[int] | None = None
    best = -1
    used = 0
    restart = 0
    while used < max(iterations, 1):
        if best_adj is None or restart % 2 == 0 or not pairs:
            adj = [0] * n
            for (u, v), bit in zip(pairs, rng.integers(0, 2, len(pairs))):
                if bit:
                    _flip(adj, u, v)
        else:
            adj = list(best_adj)
            k = max(1, len(pairs) // 20)
            for idx in rng.choice(len(pairs), size=min(k, len(pairs)), replace=False):
                _flip(adj, *pairs[int(idx)])
        flat_budget = 2 * n if sideways is None else sideways
        used += _climb(adj, n, max(iterations, 1) - used, rng, flat_budget)
        c = count_c5(SmallGraph(n, tuple(adj)))
        if c > best:
            best, best_adj = c, list(adj)
        restart += 1
    g = SmallGraph(n, tuple(best_adj))
    return SearchResult(n, best, (to_graph6(g),), False, restart)


def complement_witnesses(result: SearchResult) -> list[str]:
    from .graph import from_graph6

    return [to_graph6(complement(from_graph6(w))) for w in result.witnesses]
