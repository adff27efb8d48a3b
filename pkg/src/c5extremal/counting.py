"""Induced pattern counts and the local pentagon quantities.

The general counter enumerates induced embeddings of the pattern by
backtracking over candidate bitsets (the last pattern vertex is counted by
popcount) and divides by the pattern's automorphism count.  C5-specific
routines count induced pentagons through a vertex pair directly from
neighbourhood bitsets.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from .families import PatternFamily, c22111, c31111
from .graph import C5, SmallGraph, automorphism_count, bits


def _pattern_plan(pattern: SmallGraph):
    k = pattern.n
    order = sorted(range(k), key=lambda v: (-pattern.degree(v), v))
    rel = []
    for i, v in enumerate(order):
        rel.append(tuple(pattern.has_edge(v, order[j]) for j in range(i)))
    degs = [pattern.degree(v) for v in order]
    return rel, degs


def count_embeddings(g: SmallGraph, pattern: SmallGraph, first: int | None = None) -> int:
    """Number of injective maps pattern -> g that are induced isomorphisms onto their image.

    With ``first`` set, only maps sending the first pattern vertex in the
    search order (a maximum-degree vertex) to ``first`` are counted.
    """
    k = pattern.n
    n = g.n
    if k == 0:
        return 1
    if k > n:
        return 0
    rel, degs = _pattern_plan(pattern)
    adj = g.adj
    full = (1 << n) - 1
    gdeg = [row.bit_count() for row in adj]
    # a vertex can host pattern vertex i only with enough neighbours and non-neighbours
    host = []
    for i in range(k):
        d = degs[i]
        m = 0
        for v in range(n):
            if gdeg[v] >= d and (n - 1 - gdeg[v]) >= (k - 1 - d):
                m |= 1 << v
        host.append(m)
    chosen = [0] * k

    def extend(i: int, used: int) -> int:
        cand = host[i] & ~used
        r = rel[i]
        for j in range(i):
            a = adj[chosen[j]]
            cand &= a if r[j] else (full ^ a)
            if not cand:
                return 0
        if i == k - 1:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            chosen[i] = low.bit_length() - 1
            total += extend(i + 1, used | low)
            cand ^= low
        return total

    if first is None:
        return extend(0, 0)
    if not host[0] >> first & 1:
        return 0
    chosen[0] = first
    if k == 1:
        return 1
    return extend(1, 1 << first)


def count_induced(g: SmallGraph, pattern: SmallGraph) -> int:
    """Number of vertex subsets of ``g`` inducing a copy of ``pattern``."""
    if pattern.n > 7:
        raise ValueError("patterns are limited to 7 vertices")
    emb = count_embeddings(g, pattern)
    aut = automorphism_count(pattern)
    assert emb % aut == 0
    return emb // aut


def count_family(g: SmallGraph, fam: PatternFamily) -> int:
    return sum(count_induced(g, p) for p in fam.members)


# ---------------------------------------------------------------- C5 through vertices

def _c5_pair(adj: Sequence[int], u: int, v: int) -> int:
    au, av = adj[u], adj[v]
    if au >> v & 1:
        # u - v - a - b - c - u
        out_uv = ~(au | av)
        count = 0
        A = av & ~au & ~(1 << u)
        C = au & ~av & ~(1 << v)
        for a in bits(A):
            na = adj[a]
            for c in bits(C & ~na):
                count += (na & adj[c] & out_uv).bit_count()
        return count
    # u - w - v - y - x - u
    W = au & av
    X = au & ~av
    Y = av & ~au
    count = 0
    for w in bits(W):
        nw = adj[w]
        for x in bits(X & ~nw):
            count += (adj[x] & Y & ~nw).bit_count()
    return count


def pair_c5_count(g: SmallGraph, u: int, v: int) -> int:
    """Number of induced C5s containing both ``u`` and ``v``."""
    if u == v:
        raise ValueError("pair_c5_count needs two distinct vertices")
    return _c5_pair(g.adj, u, v)


@dataclass(frozen=True)
class VertexCounts:
    graph: SmallGraph
    per_vertex: tuple[int, ...]

    def per_pair(self, u: int, v: int) -> int:
        return pair_c5_count(self.graph, u, v)

    @property
    def total(self) -> int:
        return sum(self.per_vertex) // 5


def vertex_c5_counts(g: SmallGraph) -> VertexCounts:
    # each pentagon through u uses exactly two edges at u
    per = []
    for u in range(g.n):
        s = sum(_c5_pair(g.adj, u, v) for v in bits(g.adj[u]))
        per.append(s // 2)
    return VertexCounts(g, tuple(per))


def count_c5(g: SmallGraph) -> int:
    """Induced C5 count, summed over edges (every pentagon has five)."""
    total = 0
    for u in range(g.n):
        for v in bits(g.adj[u] >> (u + 1)):
            total += _c5_pair(g.adj, u, u + 1 + v)
    return total // 5


def pentagons(g: SmallGraph) -> Iterator[tuple[int, ...]]:
    """Every induced C5 once, as (z1..z5) in cyclic order.

    z1 is the smallest vertex and z2 the smaller of its two cycle neighbours.
    """
    adj = g.adj
    for z1 in range(g.n):
        higher = ~((1 << (z1 + 1)) - 1)
        n1 = adj[z1] & higher
        for z2 in bits(n1):
            for z5 in bits(n1 & ~adj[z2]):
                if z5 < z2:
                    continue
                for z3 in bits(adj[z2] & higher & ~adj[z1] & ~adj[z5]):
                    for z4 in bits(adj[z3] & adj[z5] & higher & ~adj[z1] & ~adj[z2]):
                        yield (z1, z2, z3, z4, z5)


def pentagons_through(g: SmallGraph, v: int) -> Iterator[tuple[int, ...]]:
    """Induced C5s containing ``v``, rotated so that ``v`` comes first."""
    for z in pentagons(g):
        if v in z:
            i = z.index(v)
            yield z[i:] + z[:i]


def cyclic_pentagon(g: SmallGraph, z: Sequence[int]) -> tuple[int, ...]:
    """Put an induced C5 given as any 5-set into cyclic order.

    Raises ValueError when g[z] is not an induced C5.
    """
    z = list(z)
    if len(set(z)) != 5:
        raise ValueError("a pentagon needs five distinct vertices")
    sub = g.induced(z)
    if any(sub.degree(i) != 2 for i in range(5)):
        raise ValueError(f"{tuple(z)} does not induce a C5")
    order = [0]
    while len(order) < 5:
        nxt = [w for w in sub.neighbors(order[-1]) if w not in order]
        if not nxt:
            raise ValueError(f"{tuple(z)} does not induce a C5")
        order.append(min(nxt))
    if not sub.has_edge(order[0], order[-1]):
        raise ValueError(f"{tuple(z)} does not induce a C5")
    return tuple(z[i] for i in order)


def _check_cyclic(g: SmallGraph, z: Sequence[int]):
    if len(z) != 5 or len(set(z)) != 5:
        raise ValueError("a pentagon needs five distinct vertices")
    for i in range(5):
        for j in range(i + 1, 5):
            want = (j - i) % 5 in (1, 4)
            if g.has_edge(z[i], z[j]) != want:
                raise ValueError(f"{tuple(z)} is not an induced C5 in cyclic order")


# ---------------------------------------------------------------- local densities

@functools.lru_cache(maxsize=None)
def _extension_class(t1: int, t2: int, edge: bool) -> tuple[bool, bool]:
    """Is C5 (in cyclic order 0..4) plus two vertices of the given types in C22111 / C31111?"""
    rows = list(C5.adj) + [t1, t2]
    for i in range(5):
        if t1 >> i & 1:
            rows[i] |= 1 << 5
        if t2 >> i & 1:
            rows[i] |= 1 << 6
    if edge:
        rows[5] |= 1 << 6
        rows[6] |= 1 << 5
    h = SmallGraph(7, tuple(rows))
    return c22111().contains(h), c31111().contains(h)


def _type_masks(g: SmallGraph, z: Sequence[int]) -> dict[int, int]:
    zset = 0
    for v in z:
        zset |= 1 << v
    masks: dict[int, int] = {}
    for v in range(g.n):
        if zset >> v & 1:
            continue
        t = 0
        for i, zi in enumerate(z):
            if g.adj[v] >> zi & 1:
                t |= 1 << i
        masks[t] = masks.get(t, 0) | (1 << v)
    return masks


def extension_counts(g: SmallGraph, z: Sequence[int]) -> tuple[int, int]:
    """Numbers of 7-sets containing the cyclic pentagon z inducing C22111 / C31111.

    A 7-set Z + {p, q} is determined up to isomorphism by the adjacency types
    of p and q towards z and whether pq is an edge, so pairs are counted per
    type combination with bitset popcounts.
    """
    masks = _type_masks(g, z)
    types = sorted(masks)
    n22 = n31 = 0
    for a, t1 in enumerate(types):
        m1 = masks[t1]
        for t2 in types[a:]:
            m2 = masks[t2]
            in22_e, in31_e = _extension_class(t1, t2, True)
            in22_n, in31_n = _extension_class(t1, t2, False)
            if not (in22_e or in31_e or in22_n or in31_n):
                continue
            if t1 == t2:
                size = m1.bit_count()
                edges = sum((g.adj[p] & m1).bit_count() for p in bits(m1)) // 2
                pairs = size * (size - 1) // 2
            else:
                edges = sum((g.adj[p] & m2).bit_count() for p in bits(m1))
                pairs = m1.bit_count() * m2.bit_count()
            non = pairs - edges
            n22 += in22_e * edges + in22_n * non
            n31 += in31_e * edges + in31_n * non
    return n22, n31


def local_density_7(g: SmallGraph, z: Sequence[int], fam: PatternFamily) -> Fraction:
    """Fraction of the C(n-5, 2) two-vertex extensions of pentagon z inducing a member of fam.

    Any containing 7-set counts, whichever five vertices play the pentagon.
    Returns 0 when there are no extensions (n < 7).
    """
    z = cyclic_pentagon(g, z)
    denom = comb(g.n - 5, 2)
    if denom == 0:
        return Fraction(0)
    if fam.label in ("C22111", "C31111") and fam in (c22111(), c31111()):
        n22, n31 = extension_counts(g, z)
        hits = n22 if fam.label == "C22111" else n31
        return Fraction(hits, denom)
    outside = [v for v in range(g.n) if v not in z]
    hits = 0
    for i, p in enumerate(outside):
        for q in outside[i + 1:]:
            if fam.contains(g.induced(list(z) + [p, q])):
                hits += 1
    return Fraction(hits, denom)


def pentagon_score(g: SmallGraph, z: Sequence[int], a: Fraction) -> Fraction:
    denom = comb(g.n - 5, 2)
    if denom == 0:
        return Fraction(0)
    n22, n31 = extension_counts(g, z)
    return Fraction(n22, denom) - a * Fraction(n31, denom)


def best_pentagon(g: SmallGraph, a) -> tuple[tuple[int, ...], Fraction]:
    """Induced C5 maximising C22111(Z) - a*C31111(Z).

    Ties go to the lexicographically least vertex set; Z is returned in
    cyclic order starting from its smallest vertex.
    """
    a = Fraction(a)
    best = None
    for z in pentagons(g):
        s = pentagon_score(g, z, a)
        key = tuple(sorted(z))
        if best is None or s > best[1] or (s == best[1] and key < best[2]):
            best = (z, s, key)
    if best is None:
        raise ValueError("graph contains no induced C5")
    return best[0], best[1]


# ---------------------------------------------------------------- funky pairs

@dataclass(frozen=True)
class PartitionAnalysis:
    """Profile of a graph relative to a reference pentagon.

    ``classes[0]`` is X_0 (vertices resembling no pentagon vertex),
    ``classes[i]`` is Z_i.  ``x`` holds class sizes over n, ``f`` the funky
    pair count over n^2 and ``df`` every classified vertex's funky degree
    over n.
    """

    n: int
    pentagon: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    x: tuple[Fraction, ...]
    f: Fraction
    df: dict[int, Fraction]
    funky_pairs: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        from .rational import rational_json

        return {
            "n": self.n,
            "pentagon": list(self.pentagon),
            "classes": [list(c) for c in self.classes],
            "x": [rational_json(v) for v in self.x],
            "f": rational_json(self.f),
            "df": {str(v): rational_json(d) for v, d in sorted(self.df.items())},
            "funky_pairs": [list(p) for p in self.funky_pairs],
        }


def funky_analysis(g: SmallGraph, z: Sequence[int]) -> PartitionAnalysis:
    """Classes Z_1..Z_5 around the cyclic pentagon z and the funky pairs between them."""
    z = tuple(z)
    _check_cyclic(g, z)
    n = g.n
    zmask = [1 << v for v in z]
    members: list[list[int]] = [[] for _ in range(6)]
    owner = {}
    for v in range(n):
        home = 0
        for i in range(5):
            rest = sum(zmask[j] for j in range(5) if j != i)
            want = zmask[(i + 1) % 5] | zmask[(i + 4) % 5]
            if v == z[i] or (not rest >> v & 1 and g.adj[v] & rest == want):
                home = i + 1
                break
        members[home].append(v)
        if home:
            owner[v] = home - 1
    funky = []
    deg = {v: 0 for v in owner}
    classified = sorted(owner)
    for a, u in enumerate(classified):
        for v in classified[a + 1:]:
            i, j = owner[u], owner[v]
            if i == j:
                continue
            if g.has_edge(u, v) != g.has_edge(z[i], z[j]):
                funky.append((u, v))
                deg[u] += 1
                deg[v] += 1
    x = tuple(Fraction(len(m), n) for m in members)
    return PartitionAnalysis(
        n=n,
        pentagon=z,
        classes=tuple(tuple(m) for m in members),
        x=x,
        f=Fraction(len(funky), n * n),
        df={v: Fraction(d, n) for v, d in deg.items()},
        funky_pairs=tuple(funky),
    )
