"""Families of blow-up patterns such as C22111 and C31111."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .graph import C5, SmallGraph, certificate


@dataclass(frozen=True)
class PatternFamily:
    """Pairwise non-isomorphic graphs on a common vertex count."""

    label: str
    members: tuple[SmallGraph, ...]
    _certs: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sizes = {g.n for g in self.members}
        if len(sizes) > 1:
            raise ValueError("family members must share a vertex count")
        certs = [certificate(g) for g in self.members]
        if len(set(certs)) != len(certs):
            raise ValueError("family members must be pairwise non-isomorphic")
        object.__setattr__(self, "_certs", frozenset(certs))

    @property
    def order(self) -> int:
        return self.members[0].n if self.members else 0

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def contains(self, g: SmallGraph) -> bool:
        return g.n == self.order and certificate(g) in self._certs

    @classmethod
    def single(cls, g: SmallGraph, label: str | None = None) -> "PatternFamily":
        from .graph import to_graph6

        return cls(label or to_graph6(g), (g,))


def _placements(multiplicities: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(set(itertools.permutations(multiplicities)))


def pattern_family(base: SmallGraph, multiplicities: Sequence[int], label: str | None = None) -> PatternFamily:
    """All graphs obtained by giving base vertices the listed multiplicities.

    Every arrangement of the multiplicity multiset over the base vertices is
    used; copies of different base vertices are joined according to the base
    and copies of the same vertex carry any edge set.  Members are sorted by
    certificate so the result is reproducible.
    """
    if len(multiplicities) != base.n:
        raise ValueError(f"{len(multiplicities)} multiplicities for a base on {base.n} vertices")
    if any(m < 0 for m in multiplicities):
        raise ValueError("multiplicities must be non-negative")
    if sum(multiplicities) > 7 or base.n > 7:
        raise ValueError("families are limited to 7 vertices")
    found: dict[bytes, SmallGraph] = {}
    for placement in _placements(multiplicities):
        owner = [i for i, m in enumerate(placement) for _ in range(m)]
        k = len(owner)
        cross = []
        inner = []
        for u in range(k):
            for v in range(u + 1, k):
                if owner[u] == owner[v]:
                    inner.append((u, v))
                elif base.has_edge(owner[u], owner[v]):
                    cross.append((u, v))
        for mask in range(1 << len(inner)):
            extra = [p for b, p in enumerate(inner) if mask >> b & 1]
            g = SmallGraph.from_edges(k, cross + extra)
            found.setdefault(certificate(g), g)
    members = tuple(found[c] for c in sorted(found))
    name = label or f"{base!r}x{''.join(map(str, multiplicities))}"
    return PatternFamily(name, members)


@functools.lru_cache(maxsize=None)
def c22111() -> PatternFamily:
    return pattern_family(C5, (2, 2, 1, 1, 1), "C22111")


@functools.lru_cache(maxsize=None)
def c31111() -> PatternFamily:
    return pattern_family(C5, (3, 1, 1, 1, 1), "C31111")


@functools.lru_cache(maxsize=None)
def c5_family() -> PatternFamily:
    return PatternFamily("C5", (C5,))


def named_family(name: str) -> PatternFamily:
    key = name.lower()
    if key == "c5":
        return c5_family()
    if key == "c22111":
        return c22111()
    if key == "c31111":
        return c31111()
    raise ValueError(f"unknown pattern {name!r} (expected c5, c22111 or c31111)")
