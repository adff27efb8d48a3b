"""Exact pattern densities in iterated balanced blow-ups.

Pick k uniform points of the infinitely iterated blow-up of a base graph on
b vertices.  Their top-level classes form a uniform map into the base.  If
all points share a class the situation repeats one level down.  Otherwise
the cross pairs are fixed by the base and every class holds an independent
sample of the same limit object.  For a labelled pattern P this gives the
linear equation

    d(P) = b^-k * ( b * d(P) + sum_phi prod_c d(P[phi^-1(c)]) )

over non-constant class maps phi compatible with the base, which is solved
in closed form.  Labelled densities are invariant under relabelling, so they
are memoised by certificate.  The finite construction C5^{k x} obeys the
same recursion with embedding counts in place of densities.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator, Sequence

import numpy as np

from .families import PatternFamily
from .graph import SmallGraph, automorphism_count, certificate


def class_maps(base: SmallGraph, pattern: SmallGraph) -> Iterator[tuple[int, ...]]:
    """Maps V(pattern) -> V(base) under which every cross pair matches the base."""
    k, b = pattern.n, base.n
    phi = [0] * k

    def extend(i: int):
        if i == k:
            yield tuple(phi)
            return
        for c in range(b):
            ok = True
            for j in range(i):
                cj = phi[j]
                if cj != c and pattern.has_edge(i, j) != base.has_edge(c, cj):
                    ok = False
                    break
            if ok:
                phi[i] = c
                yield from extend(i + 1)

    yield from extend(0)


def _parts(pattern: SmallGraph, phi: Sequence[int]) -> list[SmallGraph]:
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(phi):
        groups.setdefault(c, []).append(v)
    return [pattern.induced(vs) for vs in groups.values()]


class _Memo:
    def __init__(self):
        self.lock = threading.Lock()
        self.table: dict = {}

    def get(self, key):
        with self.lock:
            return self.table.get(key)

    def put(self, key, value):
        with self.lock:
            self.table.setdefault(key, value)


_labeled = _Memo()
_embeddings = _Memo()


def labeled_density(base: SmallGraph, pattern: SmallGraph) -> Fraction:
    """Probability that k random points induce ``pattern`` with this exact labelling."""
    k = pattern.n
    if k < 1:
        raise ValueError("patterns need at least one vertex")
    if k == 1:
        return Fraction(1)
    key = (base, certificate(pattern))
    hit = _labeled.get(key)
    if hit is not None:
        return hit
    b = base.n
    total = Fraction(0)
    for phi in class_maps(base, pattern):
        if len(set(phi)) == 1:
            continue
        term = Fraction(1)
        for part in _parts(pattern, phi):
            term *= labeled_density(base, part)
            if not term:
                break
        total += term
    # d * (1 - b^(1-k)) = b^-k * total
    d = total / (b ** k - b)
    _labeled.put(key, d)
    return d


def pattern_limit_density(base: SmallGraph, pattern: SmallGraph) -> Fraction:
    """Induced density of the unlabelled pattern: d(P) * k! / |Aut(P)|."""
    return labeled_density(base, pattern) * factorial(pattern.n) / automorphism_count(pattern)


@dataclass(frozen=True)
class LimitDensityResult:
    pattern: PatternFamily
    density: Fraction
    per_member: tuple[Fraction, ...]


def limit_density(base: SmallGraph, target: PatternFamily | SmallGraph) -> LimitDensityResult:
    if base.n < 2:
        raise ValueError("base graph needs at least two vertices")
    if isinstance(target, SmallGraph):
        target = PatternFamily.single(target)
    per = tuple(pattern_limit_density(base, p) for p in target.members)
    return LimitDensityResult(target, sum(per, Fraction(0)), per)


# ---------------------------------------------------------------- finite constructions

def iterated_embeddings(k: int, pattern: SmallGraph, base: SmallGraph | None = None) -> int:
    """Induced labelled embeddings of ``pattern`` into the depth-k iterated blow-up."""
    from .graph import C5

    base = base or C5
    m = pattern.n
    if m <= 1:
        return base.n ** k if m == 1 else 1
    if k == 0:
        return 0
    key = (base, k, certificate(pattern))
    hit = _embeddings.get(key)
    if hit is not None:
        return hit
    total = 0
    for phi in class_maps(base, pattern):
        term = 1
        for part in _parts(pattern, phi):
            term *= iterated_embeddings(k - 1, part, base)
            if not term:
                break
        total += term
    _embeddings.put(key, total)
    return total


def finite_count(k: int, pattern: SmallGraph) -> int:
    emb = iterated_embeddings(k, pattern)
    aut = automorphism_count(pattern)
    assert emb % aut == 0
    return emb // aut


def finite_density(k: int, target: PatternFamily | SmallGraph, explicit: bool = False) -> Fraction:
    """Exact density of the target in C5^{k x}.

    ``explicit`` counts in the realised graph (5^k <= 64 only); otherwise the
    recursion over class maps is truncated at depth k.
    """
    if isinstance(target, SmallGraph):
        target = PatternFamily.single(target)
    n = 5 ** k
    m = target.order
    if m > n:
        return Fraction(0)
    if explicit:
        from .blowup import iterated, realize
        from .counting import count_family

        hits = count_family(realize(iterated(k)), target)
    else:
        hits = sum(finite_count(k, p) for p in target.members)
    return Fraction(hits, comb(n, m))


def sample_density(
    pattern: SmallGraph,
    depth: int,
    samples: int,
    seed: int,
    base: SmallGraph | None = None,
) -> tuple[float, float]:
    """Monte Carlo estimate (mean, standard error) of the pattern density at a given depth.

    Vertices of the depth-``depth`` construction are digit strings over the
    base; two vertices are adjacent iff the base vertices at their first
    differing digit are.  Samples hitting a repeated vertex are redrawn.
    """
    from .graph import C5

    base = base or C5
    rng = np.random.default_rng(seed)
    k = pattern.n
    b = base.n
    base_adj = np.array(base.to_matrix(), dtype=bool)
    pos_weights = b ** np.arange(depth - 1, -1, -1, dtype=np.int64)
    cert = certificate(pattern)
    hits = 0
    drawn = 0
    while drawn < samples:
        batch = min(samples - drawn, 20000)
        digits = rng.integers(0, b, size=(batch, k, depth))
        ids = digits @ pos_weights
        ok = np.ones(batch, dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                ok &= ids[:, i] != ids[:, j]
        digits = digits[ok]
        m = digits.shape[0]
        if m == 0:
            continue
        adj = np.zeros((m, k, k), dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                diff = digits[:, i, :] != digits[:, j, :]
                first = np.argmax(diff, axis=1)
                ci = digits[np.arange(m), i, first]
                cj = digits[np.arange(m), j, first]
                e = base_adj[ci, cj]
                adj[:, i, j] = e
                adj[:, j, i] = e
        codes = np.zeros(m, dtype=np.int64)
        bit = 0
        for i in range(k):
            for j in range(i + 1, k):
                codes |= adj[:, i, j].astype(np.int64) << bit
                bit += 1
        for code, cnt in zip(*np.unique(codes, return_counts=True)):
            g = _graph_from_code(int(code), k)
            if certificate(g) == cert:
                hits += int(cnt)
        drawn += m
    p = hits / drawn
    return p, float(np.sqrt(p * (1 - p) / drawn))


def _graph_from_code(code: int, k: int) -> SmallGraph:
    edges = []
    bit = 0
    for i in range(k):
        for j in range(i + 1, k):
            if code >> bit & 1:
                edges.append((i, j))
            bit += 1
    return SmallGraph.from_edges(k, edges)
