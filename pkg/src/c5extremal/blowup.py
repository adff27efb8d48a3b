"""Blow-ups of small graphs, the balanced C5 recursion and 5-partitions."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence, Union

from .graph import C5, MAX_VERTICES, SmallGraph, bits, complete, cycle, empty


@dataclass(frozen=True)
class Leaf:
    inner: SmallGraph

    @property
    def size(self) -> int:
        return self.inner.n


@dataclass(frozen=True)
class Node:
    base: SmallGraph
    children: tuple["BlowupTree", ...]

    def __post_init__(self):
        if len(self.children) != self.base.n:
            raise ValueError(
                f"base has {self.base.n} vertices but {len(self.children)} children were given"
            )

    @property
    def size(self) -> int:
        return sum(c.size for c in self.children)


BlowupTree = Union[Leaf, Node]


def realize(t: BlowupTree) -> SmallGraph:
    """The graph described by a blow-up tree.

    Vertices are numbered child by child, so the vertices of child ``i``
    form a contiguous block that precedes the block of child ``i + 1``.
    """
    if t.size > MAX_VERTICES:
        raise ValueError(f"blow-up has {t.size} vertices, cap is {MAX_VERTICES}")
    return SmallGraph(t.size, tuple(_rows(t)))


def _rows(t: BlowupTree) -> list[int]:
    if isinstance(t, Leaf):
        return list(t.inner.adj)
    blocks = []
    offset = 0
    for child in t.children:
        size = child.size
        blocks.append((offset, ((1 << size) - 1) << offset, _rows(child)))
        offset += size
    rows = []
    for i, (off, _, child_rows) in enumerate(blocks):
        cross = 0
        for j in bits(t.base.adj[i]):
            cross |= blocks[j][1]
        rows.extend((r << off) | cross for r in child_rows)
    return rows


def pentagon_blowup(parts: Sequence[int], inners: Sequence[SmallGraph] | None = None) -> BlowupTree:
    """C5 with vertex ``i`` replaced by ``parts[i]`` vertices (empty inside unless ``inners``)."""
    if len(parts) != 5:
        raise ValueError("a pentagon blow-up needs five part sizes")
    if inners is None:
        inners = [empty(p) for p in parts]
    for p, h in zip(parts, inners):
        if h.n != p:
            raise ValueError("inner graph size does not match its part")
    return Node(C5, tuple(Leaf(h) for h in inners))


def iterated(k: int) -> BlowupTree:
    """Tree of C5^{k x}, the (k-1)-times iterated blow-up of C5 (5^k vertices)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    t: BlowupTree = Leaf(empty(1))
    for _ in range(k):
        t = Node(C5, (t,) * 5)
    return t


def balanced_parts(n: int) -> tuple[int, ...]:
    q, r = divmod(n, 5)
    return (q + 1,) * r + (q,) * (5 - r)


def balanced_tree(n: int) -> BlowupTree:
    """The construction whose C5 count is ``recursion_value(n)``."""
    if n < 5:
        return Leaf(empty(n))
    return Node(C5, tuple(balanced_tree(p) for p in balanced_parts(n)))


@functools.lru_cache(maxsize=None)
def recursion_value(n: int) -> int:
    """R(n) = abcde + R(a) + ... + R(e) with a..e as equal as possible."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n < 5:
        return 0
    parts = balanced_parts(n)
    prod = 1
    for p in parts:
        prod *= p
    return prod + sum(recursion_value(p) for p in parts)


def lex_product(outer: SmallGraph, h: SmallGraph) -> SmallGraph:
    """Replace every vertex of ``outer`` by a copy of ``h``."""
    return realize(Node(outer, tuple(Leaf(h) for _ in range(outer.n))))


# ---------------------------------------------------------------- 5-partitions

@dataclass(frozen=True)
class FivePartition:
    """Classes X_1..X_5 in cyclic order: X_i ~ X_j completely iff j - i = +-1 mod 5."""

    classes: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)


@dataclass(frozen=True)
class PartitionFailure:
    reason: str
    pair: tuple[int, int] | None = None

    def __bool__(self):
        return False


def pentagon_violation(g: SmallGraph, classes: Sequence[Sequence[int]]) -> tuple[int, int] | None:
    """First cross-class pair whose adjacency breaks the pentagon pattern, if any."""
    masks = [sum(1 << v for v in c) for c in classes]
    for i in range(5):
        want = masks[(i + 1) % 5] | masks[(i + 4) % 5]
        other = masks[(i + 2) % 5] | masks[(i + 3) % 5]
        for u in classes[i]:
            bad = (g.adj[u] & other) | (want & ~g.adj[u])
            if bad:
                v = (bad & -bad).bit_length() - 1
                return (min(u, v), max(u, v))
    return None


def _classes_from_pentagon(g: SmallGraph, z: Sequence[int]) -> list[list[int]] | None:
    zmask = [1 << v for v in z]
    patterns = []
    for i in range(5):
        rest = 0
        for j in range(5):
            if j != i:
                rest |= zmask[j]
        nbrs = zmask[(i + 1) % 5] | zmask[(i + 4) % 5]
        patterns.append((rest, nbrs))
    classes: list[list[int]] = [[] for _ in range(5)]
    for v in range(g.n):
        home = None
        for i, (rest, nbrs) in enumerate(patterns):
            if v == z[i] or (g.adj[v] & rest == nbrs and not rest >> v & 1):
                home = i
                break
        if home is None:
            return None
        classes[home].append(v)
    return classes


def _normalise(classes: list[list[int]]) -> FivePartition:
    classes = [sorted(c) for c in classes]
    start = min(range(5), key=lambda i: classes[i][0])
    rot = [classes[(start + k) % 5] for k in range(5)]
    if rot[4][0] < rot[1][0]:
        rot = [rot[0], rot[4], rot[3], rot[2], rot[1]]
    return FivePartition(tuple(tuple(c) for c in rot))


def _majority_clusters(g: SmallGraph) -> list[list[int]]:
    n = g.n
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    full = (1 << n) - 1
    for u in range(n):
        for v in range(u + 1, n):
            rest = full & ~(1 << u) & ~(1 << v)
            agree = (n - 2) - ((g.adj[u] ^ g.adj[v]) & rest).bit_count()
            if 2 * agree > n - 2:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def _cyclic_order(g: SmallGraph, reps: Sequence[int]) -> list[int] | None:
    """Order five vertices along the induced C5 they span, or None."""
    for v in reps:
        if sum(1 for w in reps if w != v and g.has_edge(v, w)) != 2:
            return None
    order = [reps[0]]
    prev = None
    while len(order) < 5:
        cur = order[-1]
        nxt = [w for w in reps if w != cur and w != prev and g.has_edge(cur, w) and w not in order]
        if not nxt:
            return None
        prev = cur
        order.append(nxt[0])
    return order if g.has_edge(order[0], order[4]) else None


def detect_5_partition(g: SmallGraph) -> FivePartition | PartitionFailure:
    """Find a partition into five non-empty classes with pentagon cross-adjacency.

    Majority-agreement clustering proposes a candidate first; it is accepted
    only after the exact check.  Otherwise every induced C5 through vertex 0
    is tried as a transversal: given a transversal, class membership is
    forced by adjacency to the other four pentagon vertices.
    """
    if g.n < 5:
        return PartitionFailure("fewer than five vertices")
    first_bad = None
    clusters = _majority_clusters(g)
    if len(clusters) == 5:
        order = _cyclic_order(g, [c[0] for c in clusters])
        if order is not None:
            by_rep = {c[0]: c for c in clusters}
            cand = [by_rep[v] for v in order]
            bad = pentagon_violation(g, cand)
            if bad is None:
                return _normalise(cand)
            first_bad = bad
    from .counting import pentagons_through

    for z in pentagons_through(g, 0):
        cand = _classes_from_pentagon(g, z)
        if cand is None:
            continue
        bad = pentagon_violation(g, cand)
        if bad is None:
            return _normalise(cand)
        if first_bad is None:
            first_bad = bad
    return PartitionFailure("no pentagon partition exists", first_bad)


def compose_identity_check(outer: SmallGraph, h: SmallGraph) -> tuple[int, int]:
    """Induced-C5 count of outer[h] against |outer|*C(h) + C(outer)*|h|^5.

    The identity holds for every outer graph, because C5 has no pair of
    vertices that look alike to the other three, so an induced C5 either
    stays inside one copy of ``h`` or meets |outer|-distinct copies.
    """
    from .counting import count_c5

    if outer.n * h.n > MAX_VERTICES:
        raise ValueError(f"composition would have {outer.n * h.n} vertices, cap is {MAX_VERTICES}")
    lhs = count_c5(lex_product(outer, h))
    rhs = outer.n * count_c5(h) + count_c5(outer) * h.n ** 5
    return lhs, rhs


def parse_tree(spec: str) -> BlowupTree:
    """Parse the small tree language used by the command line.

    ``C5^k``           iterated blow-up C5^{k x}
    ``C5(a,b,c,d,e)``  pentagon blow-up, empty parts
    ``balanced:n``     the balanced recursive construction on n vertices
    ``K3[t1,t2,t3]``   node with a named base (Cn, Kn, En, or graph6 in ``g6:...``)
    ``E4`` / ``K2``    leaves
    """
    from .graph import from_graph6

    spec = spec.strip()
    pos = 0

    def named(name: str) -> SmallGraph:
        if name.startswith("g6:"):
            return from_graph6(name[3:])
        kind, num = name[:1].upper(), name[1:]
        if not num.isdigit():
            raise ValueError(f"unknown graph name {name!r}")
        k = int(num)
        if kind == "C":
            return cycle(k)
        if kind == "K":
            return complete(k)
        if kind == "E":
            return empty(k)
        raise ValueError(f"unknown graph name {name!r}")

    def read_token() -> str:
        nonlocal pos
        start = pos
        while pos < len(spec) and spec[pos] not in "[](),^":
            pos += 1
        return spec[start:pos].strip()

    def parse() -> BlowupTree:
        nonlocal pos
        tok = read_token()
        if tok.startswith("balanced:"):
            return balanced_tree(int(tok.split(":", 1)[1]))
        if pos < len(spec) and spec[pos] == "^":
            pos += 1
            k = read_token()
            if tok.upper() != "C5" or not k.isdigit():
                raise ValueError("only C5^k iterated blow-ups are supported")
            return iterated(int(k))
        if pos < len(spec) and spec[pos] == "(":
            pos += 1
            end = spec.find(")", pos)
            if end < 0:
                raise ValueError("unterminated part-size list")
            parts = [int(x) for x in spec[pos:end].split(",")]
            pos = end + 1
            if tok.upper() != "C5":
                raise ValueError("part-size shorthand is only defined for C5")
            return pentagon_blowup(parts)
        if pos < len(spec) and spec[pos] == "[":
            pos += 1
            children = [parse()]
            while pos < len(spec) and spec[pos] == ",":
                pos += 1
                children.append(parse())
            if pos >= len(spec) or spec[pos] != "]":
                raise ValueError(f"expected ']' at {pos}")
            pos += 1
            return Node(named(tok), tuple(children))
        return Leaf(named(tok))

    tree = parse()
    if pos != len(spec):
        raise ValueError(f"unexpected text at position {pos}: {spec[pos:]!r}")
    return tree
