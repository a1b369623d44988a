"""Temperley-Lieb diagrams: non-crossing perfect matchings and their gluing.

Boundary points are numbered ``1..m`` anticlockwise. A type A diagram for
partitions of size ``n`` has ``m = 2n`` points; a type B diagram has
``m = 4n`` points and is invariant under the half-turn
``sigma(p) = ((p - 1 + 2n) mod 4n) + 1``.

The bijections from non-crossing partitions double every boundary
position ``i`` into the points ``2i-1, 2i`` and trace the boundary of a
regular neighbourhood of the connection chords. Gluing two diagrams along
their common boundary gives a union of two matchings whose connected
components are the circles; every point has degree two so the components
are cycles.

The annular model is the quotient by ``sigma``: a chord orbit
``{C, sigma C}`` becomes one chord of an annulus with ``2n`` outer points,
tagged with the parity of its crossings with a cut arc placed between
points ``2n`` and ``1``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .ncpart import Partition, is_noncrossing

__all__ = [
    "AnnularDiagram",
    "Matching",
    "annular_glue",
    "from_annular",
    "glue_count_a",
    "glue_count_b",
    "half_turn",
    "iota_a",
    "iota_a_inv",
    "iota_b",
    "iota_b_inv",
    "noncrossing_matchings",
    "parse_matching",
    "symmetric_matchings",
    "to_annular",
]


@dataclass(frozen=True)
class Matching:
    """Perfect matching of the points ``1..npoints``.

    ``chords`` is stored canonically: each pair ascending, pairs sorted.
    """

    npoints: int
    chords: tuple[tuple[int, int], ...]

    @classmethod
    def from_pairs(cls, npoints: int, pairs: Iterable[Iterable[int]]) -> Matching:
        chords = []
        seen: set[int] = set()
        for pair in pairs:
            pair = tuple(pair)
            if len(pair) != 2 or pair[0] == pair[1]:
                raise ValueError(f"bad chord {pair}")
            for p in pair:
                if not 1 <= p <= npoints:
                    raise ValueError(f"point {p} outside 1..{npoints}")
                if p in seen:
                    raise ValueError(f"point {p} used twice")
                seen.add(p)
            chords.append((min(pair), max(pair)))
        if len(seen) != npoints:
            raise ValueError("not a perfect matching")
        return cls(npoints, tuple(sorted(chords)))

    @cached_property
    def partner(self) -> tuple[int, ...]:
        """``partner[p]`` is the point matched to ``p``; index 0 is unused."""
        out = [0] * (self.npoints + 1)
        for a, b in self.chords:
            out[a], out[b] = b, a
        return tuple(out)

    def is_noncrossing(self) -> bool:
        # balanced-bracket test
        stack = []
        for p in range(1, self.npoints + 1):
            q = self.partner[p]
            if q > p:
                stack.append(p)
            elif not stack or stack.pop() != q:
                return False
        return True

    def is_symmetric(self) -> bool:
        if self.npoints % 4:
            return False
        n = self.npoints // 4
        return all(self.partner[half_turn(p, n)] == half_turn(self.partner[p], n)
                   for p in range(1, self.npoints + 1))

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.chords]

    def __str__(self) -> str:
        return "".join("{%d,%d}" % c for c in self.chords)


def matching_from_json(data: str | list, npoints: int) -> Matching:
    if isinstance(data, str):
        data = json.loads(data)
    return Matching.from_pairs(npoints, data)


def parse_matching(text: str, npoints: int) -> Matching:
    """Inverse of ``str(Matching)``: ``"{1,2}{3,4}"``."""
    compact = "".join(text.split())
    pairs = re.findall(r"\{(\d+),(\d+)\}", compact)
    if "".join("{%s,%s}" % p for p in pairs) != compact:
        raise ValueError(f"cannot parse matching {text!r}")
    return Matching.from_pairs(npoints, [(int(a), int(b)) for a, b in pairs])


def half_turn(p: int, n: int) -> int:
    """The point involution sigma on ``4n`` points."""
    return (p - 1 + 2 * n) % (4 * n) + 1


# --- generation --------------------------------------------------------------

def _nc_pairings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first = points[0]
    for k in range(1, len(points), 2):
        for inside in _nc_pairings(points[1:k]):
            for outside in _nc_pairings(points[k + 1:]):
                yield [(first, points[k])] + inside + outside


def noncrossing_matchings(npoints: int) -> Iterator[Matching]:
    """All non-crossing perfect matchings of ``1..npoints``."""
    if npoints % 2:
        raise ValueError("need an even number of points")
    for pairs in _nc_pairings(list(range(1, npoints + 1))):
        yield Matching.from_pairs(npoints, pairs)


def _symmetric_pairings(half: list[int], n: int) -> Iterator[list[tuple[int, int]]]:
    # Pairings of half + sigma(half), invariant under sigma, with half an
    # arc of the circle. Only chords with an endpoint in `half` are emitted.
    if not half:
        yield []
        return
    first = half[0]
    m = len(half)
    for j in range(1, m, 2):
        # first -- half[j]; the arc strictly between is free, the rest recurses
        for inside in _nc_pairings(half[1:j]):
            for rest in _symmetric_pairings(half[j + 1:], n):
                yield [(first, half[j])] + inside + rest
    for j in range(1, m, 2):
        # first -- sigma(half[j]) and half[j] -- sigma(first): the band
        # between them is symmetric, the region beyond half[j] is free
        for band in _symmetric_pairings(half[1:j], n):
            for inside in _nc_pairings(half[j + 1:]):
                yield [(first, half_turn(half[j], n)), (half[j], half_turn(first, n))] + band + inside


def symmetric_matchings(n: int) -> Iterator[Matching]:
    """All sigma-symmetric non-crossing perfect matchings of ``4n`` points."""
    for pairs in _symmetric_pairings(list(range(1, 2 * n + 1)), n):
        full = set()
        for a, b in pairs:
            full.add((min(a, b), max(a, b)))
            a, b = half_turn(a, n), half_turn(b, n)
            full.add((min(a, b), max(a, b)))
        yield Matching.from_pairs(4 * n, full)


# --- bijections --------------------------------------------------------------

def _expand(position_blocks: Iterable[tuple[int, ...]], npos: int) -> Matching:
    pairs = []
    for b in position_blocks:
        for x, y in zip(b, b[1:]):
            pairs.append((2 * x, 2 * y - 1))
        pairs.append((2 * b[-1], 2 * b[0] - 1))
    return Matching.from_pairs(2 * npos, pairs)


def _contract(b: Matching) -> list[list[int]]:
    parent = list(range(b.npoints // 2 + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in b.chords:
        x, y = find((p + 1) // 2), find((q + 1) // 2)
        if x != y:
            parent[max(x, y)] = min(x, y)
    classes: dict[int, list[int]] = {}
    for i in range(1, len(parent)):
        classes.setdefault(find(i), []).append(i)
    return list(classes.values())


def iota_a(p: Partition) -> Matching:
    if p.kind != "A":
        raise ValueError("iota_a expects a type A partition")
    if not is_noncrossing(p):
        raise ValueError(f"{p} is crossing")
    return _expand(p.position_blocks, p.n)


def iota_a_inv(b: Matching) -> Partition:
    if b.npoints % 2 or not b.is_noncrossing():
        raise ValueError("iota_a_inv expects a non-crossing matching")
    return Partition._from_positions("A", b.npoints // 2, _contract(b))


def iota_b(p: Partition) -> Matching:
    if p.kind != "B":
        raise ValueError("iota_b expects a type B partition")
    if not p.is_symmetric():
        raise ValueError(f"{p} is not symmetric")
    if not is_noncrossing(p):
        raise ValueError(f"{p} is crossing")
    return _expand(p.position_blocks, 2 * p.n)


def iota_b_inv(b: Matching) -> Partition:
    if b.npoints % 4 or not b.is_noncrossing():
        raise ValueError("iota_b_inv expects a non-crossing matching on 4n points")
    if not b.is_symmetric():
        raise ValueError("matching is not symmetric under the half-turn")
    return Partition._from_positions("B", b.npoints // 4, _contract(b))


# --- gluing ------------------------------------------------------------------

def _cycles(b1: Matching, b2: Matching) -> list[list[int]]:
    if b1.npoints != b2.npoints:
        raise ValueError(f"size mismatch: {b1.npoints} vs {b2.npoints} points")
    seen = [False] * (b1.npoints + 1)
    cycles = []
    for start in range(1, b1.npoints + 1):
        if seen[start]:
            continue
        cycle = []
        p = start
        while True:
            # alternate: chord of b1, then chord of b2
            seen[p] = True
            cycle.append(p)
            q = b1.partner[p]
            seen[q] = True
            cycle.append(q)
            p = b2.partner[q]
            if p == start:
                break
        cycles.append(cycle)
    return cycles


def glue_count_a(b1: Matching, b2: Matching) -> int:
    """Number of circles after gluing two diagrams along the boundary."""
    return len(_cycles(b1, b2))


def glue_count_b(b1: Matching, b2: Matching) -> tuple[int, int]:
    """``(c0, cd)``: invariant circles and pairs of swapped circles."""
    if b1.npoints != b2.npoints:
        raise ValueError(f"size mismatch: {b1.npoints} vs {b2.npoints} points")
    if not (b1.is_symmetric() and b2.is_symmetric()):
        raise ValueError("glue_count_b needs half-turn symmetric matchings")
    n = b1.npoints // 4
    c0 = swapped = 0
    for cycle in _cycles(b1, b2):
        # sigma maps cycles to cycles, so one point decides
        if half_turn(cycle[0], n) in cycle:
            c0 += 1
        else:
            swapped += 1
    return c0, swapped // 2


# --- annular quotient ----------------------------------------------------------

@dataclass(frozen=True)
class AnnularDiagram:
    """Chords between ``2n`` outer points of an annulus.

    Each chord is ``(p, q, w)`` with ``p < q`` and ``w`` the parity of its
    crossings with the cut arc.
    """

    n: int
    chords: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Iterable[int]]) -> AnnularDiagram:
        chords = []
        seen: set[int] = set()
        for t in triples:
            p, q, w = t
            if w not in (0, 1):
                raise ValueError(f"parity must be 0 or 1, got {w}")
            for x in (p, q):
                if not 1 <= x <= 2 * n or x in seen:
                    raise ValueError(f"bad or repeated point {x}")
                seen.add(x)
            if p == q:
                raise ValueError("chord endpoints must differ")
            chords.append((min(p, q), max(p, q), w))
        if len(seen) != 2 * n:
            raise ValueError("annular diagram must use every point once")
        return cls(n, tuple(sorted(chords)))

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.chords]

    def __str__(self) -> str:
        return "".join("{%d,%d|%d}" % c for c in self.chords)


def to_annular(b: Matching) -> AnnularDiagram:
    if not (b.is_symmetric() and b.is_noncrossing()):
        raise ValueError("to_annular expects a symmetric non-crossing matching")
    n = b.npoints // 4
    triples = set()
    for p, q in b.chords:
        w = int((p <= 2 * n) != (q <= 2 * n))
        qp, qq = (p - 1) % (2 * n) + 1, (q - 1) % (2 * n) + 1
        triples.add((min(qp, qq), max(qp, qq), w))
    return AnnularDiagram.from_triples(n, triples)


def from_annular(a: AnnularDiagram) -> Matching:
    n = a.n
    pairs = []
    for p, q, w in a.chords:
        if w:
            pairs += [(p, q + 2 * n), (p + 2 * n, q)]
        else:
            pairs += [(p, q), (p + 2 * n, q + 2 * n)]
    b = Matching.from_pairs(4 * n, pairs)
    if not b.is_noncrossing():
        raise ValueError(f"annular diagram {a} is not realizable: its lift crosses")
    return b


def annular_glue(a1: AnnularDiagram, a2: AnnularDiagram) -> tuple[int, int]:
    """``(nontrivial, trivial)`` circle counts of the glued annulus."""
    if a1.n != a2.n:
        raise ValueError(f"size mismatch: n={a1.n} vs n={a2.n}")
    links = []
    for a in (a1, a2):
        link: dict[int, tuple[int, int]] = {}
        for p, q, w in a.chords:
            link[p] = (q, w)
            link[q] = (p, w)
        links.append(link)
    seen: set[int] = set()
    nontrivial = trivial = 0
    for start in range(1, 2 * a1.n + 1):
        if start in seen:
            continue
        parity = 0
        p = start
        while True:
            seen.add(p)
            q, w1 = links[0][p]
            seen.add(q)
            p, w2 = links[1][q]
            parity ^= w1 ^ w2
            if p == start:
                break
        if parity:
            nontrivial += 1
        else:
            trivial += 1
    return nontrivial, trivial
