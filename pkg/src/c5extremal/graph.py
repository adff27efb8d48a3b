"""Small undirected graphs stored as adjacency bitsets.

Vertex ``v`` of a :class:`SmallGraph` has its neighbourhood stored as the
integer ``adj[v]``; bit ``u`` is set iff ``uv`` is an edge.  Graphs are
immutable and hashable, so they can be used as dictionary keys and shared
freely between threads.

Canonical labelling is done by partition refinement plus individualisation
with automorphism pruning.  It is meant for the tiny graphs used throughout
the package (at most 16 vertices).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_VERTICES = 64
MAX_CANONICAL = 16


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the offending byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class SmallGraph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise ValueError("need exactly one adjacency row per vertex")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {u} has bits beyond vertex {self.n - 1}")
            if row >> u & 1:
                raise ValueError(f"loop at vertex {u}")
            r = row
            while r:
                low = r & -r
                v = low.bit_length() - 1
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SmallGraph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix) -> "SmallGraph":
        n = len(matrix)
        rows = []
        for u in range(n):
            row = 0
            for v in range(n):
                if matrix[u][v]:
                    row |= 1 << v
            rows.append(row)
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.adj[u] >> v & 1]

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def induced(self, vertices: Sequence[int]) -> "SmallGraph":
        """Subgraph induced on ``vertices``; vertex ``i`` of the result is ``vertices[i]``."""
        rows = []
        for u in vertices:
            au = self.adj[u]
            row = 0
            for j, v in enumerate(vertices):
                if au >> v & 1:
                    row |= 1 << j
            rows.append(row)
        return SmallGraph(len(vertices), tuple(rows))

    def relabel(self, perm: Sequence[int]) -> "SmallGraph":
        """Return the graph in which old vertex ``v`` becomes ``perm[v]``."""
        rows = [0] * self.n
        for u in range(self.n):
            row = 0
            for v in bits(self.adj[u]):
                row |= 1 << perm[v]
            rows[perm[u]] = row
        return SmallGraph(self.n, tuple(rows))

    def disjoint_union(self, other: "SmallGraph") -> "SmallGraph":
        shift = self.n
        rows = list(self.adj) + [row << shift for row in other.adj]
        return SmallGraph(self.n + other.n, tuple(rows))

    def to_matrix(self) -> list[list[int]]:
        return [[self.adj[u] >> v & 1 for v in range(self.n)] for u in range(self.n)]

    def __repr__(self):
        return f"SmallGraph(n={self.n}, graph6={to_graph6(self)!r})"


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------- catalog

def cycle(n: int) -> SmallGraph:
    return SmallGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> SmallGraph:
    full = (1 << n) - 1
    return SmallGraph(n, tuple(full ^ (1 << v) for v in range(n)))


def empty(n: int) -> SmallGraph:
    return SmallGraph(n, (0,) * n)


def path(n: int) -> SmallGraph:
    return SmallGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen() -> SmallGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SmallGraph.from_edges(10, outer + spokes + inner)


C5 = cycle(5)


def complement(g: SmallGraph) -> SmallGraph:
    full = (1 << g.n) - 1
    return SmallGraph(g.n, tuple(full ^ row ^ (1 << v) for v, row in enumerate(g.adj)))


# ---------------------------------------------------------------- graph6

def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    return "~" + "".join(chr(((n >> shift) & 63) + 63) for shift in (12, 6, 0))


def to_graph6(g: SmallGraph) -> str:
    out = [_encode_n(g.n)]
    acc = 0
    nbits = 0
    for j in range(1, g.n):
        for i in range(j):
            acc = (acc << 1) | (g.adj[i] >> j & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def from_graph6(text: str) -> SmallGraph:
    """Decode one graph6 string.

    An optional ``>>graph6<<`` prefix and a single trailing newline are
    accepted.  Anything else outside the standard encoding raises
    :class:`Graph6Error` with the byte offset of the problem.
    """
    base = 0
    if text.startswith(">>graph6<<"):
        base = len(">>graph6<<")
        text = text[base:]
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        raise Graph6Error("empty graph6 string", base)
    codes = [ord(ch) for ch in text]
    for pos, c in enumerate(codes):
        if not 63 <= c <= 126:
            raise Graph6Error(f"byte {c!r} outside the printable range 63..126", base + pos)
    if codes[0] != 126:
        n = codes[0] - 63
        pos = 1
    else:
        if len(codes) < 4:
            raise Graph6Error("truncated long-form vertex count", base + len(codes))
        if codes[1] == 126:
            raise Graph6Error("8-byte vertex counts exceed the 64-vertex cap", base + 1)
        n = ((codes[1] - 63) << 12) | ((codes[2] - 63) << 6) | (codes[3] - 63)
        if n <= 62:
            raise Graph6Error("long-form header used for a short vertex count", base)
        pos = 4
    if n > MAX_VERTICES:
        raise Graph6Error(f"{n} vertices exceed the {MAX_VERTICES}-vertex cap", base)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = codes[pos:]
    if len(body) < need:
        raise Graph6Error(f"expected {need} data bytes, found {len(body)}", base + len(codes))
    if len(body) > need:
        raise Graph6Error("trailing bytes after graph data", base + pos + need)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            c = body[k // 6] - 63
            if c >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if need and nbits % 6:
        pad = 6 - nbits % 6
        if (body[-1] - 63) & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits", base + pos + need - 1)
    return SmallGraph(n, tuple(rows))


# ---------------------------------------------------------------- canonical labelling

@dataclass(frozen=True)
class CanonicalForm:
    """``certificate`` identifies the isomorphism class (of the coloured graph).

    ``relabeling[v]`` is the canonical position of vertex ``v``; applying it
    with :meth:`SmallGraph.relabel` gives the canonical representative.
    """

    certificate: bytes
    relabeling: tuple[int, ...]


def _refine(adj: Sequence[int], cells: list[int]) -> list[int]:
    """Equitable refinement of an ordered partition given as vertex masks.

    Every cell is split by the number of neighbours its vertices have in a
    splitter cell, fragments ordered by that count.  The procedure depends
    only on positions and counts, so it commutes with relabelling.
    """
    cells = list(cells)
    changed = True
    while changed:
        changed = False
        s = 0
        while s < len(cells):
            splitter = cells[s]
            out = []
            for cell in cells:
                if cell & (cell - 1) == 0:
                    out.append(cell)
                    continue
                groups: dict[int, int] = {}
                c = cell
                while c:
                    low = c & -c
                    v = low.bit_length() - 1
                    k = (adj[v] & splitter).bit_count()
                    groups[k] = groups.get(k, 0) | low
                    c ^= low
                if len(groups) == 1:
                    out.append(cell)
                else:
                    changed = True
                    out.extend(groups[k] for k in sorted(groups))
            cells = out
            s += 1
    return cells


def _leaf_key(adj: Sequence[int], order: Sequence[int]) -> tuple[int, ...]:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    key = []
    for v in order:
        row = 0
        a = adj[v]
        while a:
            low = a & -a
            row |= 1 << pos[low.bit_length() - 1]
            a ^= low
        key.append(row)
    return tuple(key)


class _Orbits:
    """Union-find over vertices under a set of permutations."""

    def __init__(self, n: int, gens: Iterable[Sequence[int]]):
        self.parent = list(range(n))
        for g in gens:
            for v, w in enumerate(g):
                self.union(v, w)

    def find(self, v: int) -> int:
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _search(adj: Sequence[int], n: int, colors: Sequence[int] | None):
    """Return (best leaf key, best leaf order, automorphism generators)."""
    if colors is None:
        cells = [(1 << n) - 1] if n else []
    else:
        by_color: dict[int, int] = {}
        for v, c in enumerate(colors):
            by_color[c] = by_color.get(c, 0) | (1 << v)
        cells = [by_color[c] for c in sorted(by_color)]
    cells = _refine(adj, cells)

    best_key = None
    best_order = None
    autos: list[tuple[int, ...]] = []

    def visit(cells: list[int], fixed: tuple[int, ...]):
        nonlocal best_key, best_order
        target = next((i for i, c in enumerate(cells) if c & (c - 1)), None)
        if target is None:
            order = [c.bit_length() - 1 for c in cells]
            key = _leaf_key(adj, order)
            if best_key is None or key > best_key:
                best_key, best_order = key, order
            elif key == best_key:
                # two leaves with the same key differ by an automorphism
                perm = [0] * n
                for a, b in zip(best_order, order):
                    perm[a] = b
                autos.append(tuple(perm))
            return
        explored: list[int] = []
        for v in bits(cells[target]):
            if explored:
                stab = [g for g in autos if all(g[x] == x for x in fixed)]
                if stab:
                    orb = _Orbits(n, stab)
                    rv = orb.find(v)
                    if any(orb.find(w) == rv for w in explored):
                        continue
            explored.append(v)
            low = 1 << v
            child = cells[:target] + [low, cells[target] ^ low] + cells[target + 1:]
            visit(_refine(adj, child), fixed + (v,))

    visit(cells, ())
    return best_key, best_order or [], autos


def _certificate(n: int, key: Sequence[int], colors_sorted: Sequence[int] | None) -> bytes:
    out = bytearray([n])
    for row in key:
        out += row.to_bytes(2, "little")
    if colors_sorted is not None:
        out += b"|" + bytes(c & 255 for c in colors_sorted)
    return bytes(out)


def canonical_form(g: SmallGraph, colors: Sequence[int] | None = None) -> CanonicalForm:
    """Canonical certificate of ``g``, optionally of the vertex-coloured graph.

    ``colors`` must be small non-negative integers; coloured certificates are
    equal iff some isomorphism maps each colour class onto the same colour.
    """
    if g.n > MAX_CANONICAL:
        raise ValueError(f"canonical labelling supports at most {MAX_CANONICAL} vertices")
    key, order, _ = _search(g.adj, g.n, colors)
    relabeling = [0] * g.n
    for i, v in enumerate(order):
        relabeling[v] = i
    csorted = None if colors is None else [colors[v] for v in order]
    return CanonicalForm(_certificate(g.n, key, csorted), tuple(relabeling))


def automorphism_generators(g: SmallGraph, colors: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Generators of the (colour-preserving) automorphism group found by the canonical search."""
    if g.n > MAX_CANONICAL:
        raise ValueError(f"canonical labelling supports at most {MAX_CANONICAL} vertices")
    return _search(g.adj, g.n, colors)[2]


def certificate(g: SmallGraph) -> bytes:
    return canonical_form(g).certificate


def canonical_graph(g: SmallGraph) -> SmallGraph:
    return g.relabel(canonical_form(g).relabeling)


def is_isomorphic(g: SmallGraph, h: SmallGraph) -> bool:
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False
    return certificate(g) == certificate(h)


def automorphisms(g: SmallGraph):
    """Yield every automorphism as a tuple ``p`` with ``p[v]`` the image of ``v``.

    Permutations are built one vertex at a time and a partial map is dropped
    as soon as an already placed pair disagrees on adjacency.
    """
    n = g.n
    adj = g.adj
    deg = [row.bit_count() for row in adj]
    image = [-1] * n
    used = 0

    def extend(v: int):
        nonlocal used
        if v == n:
            yield tuple(image)
            return
        for w in range(n):
            if used >> w & 1 or deg[w] != deg[v]:
                continue
            ok = True
            for u in range(v):
                if (adj[v] >> u & 1) != (adj[w] >> image[u] & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used |= 1 << w
                yield from extend(v + 1)
                used ^= 1 << w
        image[v] = -1

    yield from extend(0)


def automorphism_count(g: SmallGraph) -> int:
    return sum(1 for _ in automorphisms(g))


def all_labeled_graphs(n: int):
    """Every labelled graph on ``n`` vertices (2^(n choose 2) of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        rows = [0] * n
        for k, (u, v) in enumerate(pairs):
            if mask >> k & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        yield SmallGraph(n, tuple(rows))
