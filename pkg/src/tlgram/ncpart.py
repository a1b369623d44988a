"""Non-crossing set partitions of types A and B.

A type A partition lives on ``{1..n}``. A type B partition lives on the
signed set ``{+1..+n, -1..-n}`` and is closed under negation of blocks.
Signed elements are stored as plain ints; the boundary circle is read in
the position order ``+1 < ... < +n < -1 < ... < -n``, i.e. ``pos(+i) = i``
and ``pos(-i) = n + i``.

Partitions are immutable and always kept in canonical form: elements of a
block sorted by position, blocks sorted by their first position. Joins of
non-crossing partitions may cross, so :class:`Partition` itself does not
insist on the non-crossing property.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "MAX_N_A",
    "MAX_N_B",
    "Partition",
    "PartitionParseError",
    "SizeLimitError",
    "bk",
    "bk0",
    "brute_force_nc",
    "enumerate_nc_a",
    "enumerate_nc_b",
    "finest",
    "is_noncrossing",
    "join",
    "nzbk",
    "parse",
]

MAX_N_A = 12
MAX_N_B = 6
BRUTE_MAX_N_A = 6
BRUTE_MAX_N_B = 4


class SizeLimitError(ValueError):
    """Requested size is outside the supported range."""


class PartitionParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def position(e: int, n: int) -> int:
    return e if e > 0 else n - e


def element(p: int, n: int) -> int:
    return p if p <= n else n - p


def _check_kind(kind: str) -> str:
    kind = kind.upper()
    if kind not in ("A", "B"):
        raise ValueError(f"unknown partition type {kind!r}")
    return kind


@dataclass(frozen=True)
class Partition:
    """A set partition of the type A or type B ground set.

    Build instances through :meth:`from_blocks` (or :func:`parse`) so the
    block list is validated and canonicalised; the raw constructor trusts
    its input.
    """

    kind: str
    n: int
    blocks: tuple[tuple[int, ...], ...] = field(compare=True)

    @classmethod
    def from_blocks(cls, kind: str, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        kind = _check_kind(kind)
        if n < 1:
            raise ValueError("n must be positive")
        ground = set(ground_set(kind, n))
        seen: set[int] = set()
        pblocks = []
        for block in blocks:
            block = list(block)
            if not block:
                raise ValueError("empty block")
            for e in block:
                if e not in ground:
                    raise ValueError(f"element {e} is not in the type {kind} ground set for n={n}")
                if e in seen:
                    raise ValueError(f"element {e} appears twice")
                seen.add(e)
            pblocks.append(sorted(position(e, n) for e in block))
        if seen != ground:
            missing = sorted(ground - seen, key=lambda e: position(e, n))
            raise ValueError(f"elements {missing} are not covered")
        p = cls._from_positions(kind, n, pblocks)
        if kind == "B" and not p.is_symmetric():
            raise ValueError("type B partition is not closed under negation")
        return p

    @classmethod
    def _from_positions(cls, kind: str, n: int, pblocks: Iterable[Sequence[int]]) -> Partition:
        pblocks = sorted(tuple(sorted(b)) for b in pblocks)
        if kind == "A":
            return cls(kind, n, tuple(pblocks))
        return cls(kind, n, tuple(tuple(element(p, n) for p in b) for b in pblocks))

    @property
    def npos(self) -> int:
        """Number of boundary points (n for type A, 2n for type B)."""
        return self.n if self.kind == "A" else 2 * self.n

    @cached_property
    def position_blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as sorted position tuples, sorted by first position.

        This is also the basis sort key.
        """
        if self.kind == "A":
            return self.blocks
        return tuple(tuple(position(e, self.n) for e in b) for b in self.blocks)

    def is_symmetric(self) -> bool:
        blocks = {frozenset(b) for b in self.blocks}
        return all(frozenset(-e for e in b) in blocks for b in blocks)

    def is_invariant_block(self, block: Iterable[int]) -> bool:
        block = set(block)
        return {-e for e in block} == block

    @property
    def bk(self) -> int:
        return len(self.blocks)

    @property
    def bk0(self) -> int:
        if self.kind != "B":
            raise TypeError("bk0 is defined for type B partitions only")
        return sum(1 for b in self.blocks if self.is_invariant_block(b))

    @property
    def nzbk(self) -> int:
        if self.kind != "B":
            raise TypeError("nzbk is defined for type B partitions only")
        return (self.bk - self.bk0) // 2

    def encode(self) -> str:
        if self.kind == "A":
            return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)
        return "".join("{" + ",".join(f"{e:+d}" for e in b) + "}" for b in self.blocks)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return self.position_blocks

    def __str__(self) -> str:
        return self.encode()


def ground_set(kind: str, n: int) -> list[int]:
    if _check_kind(kind) == "A":
        return list(range(1, n + 1))
    return list(range(1, n + 1)) + [-i for i in range(1, n + 1)]


def finest(kind: str, n: int) -> Partition:
    return Partition.from_blocks(kind, n, [[e] for e in ground_set(kind, n)])


def bk(p: Partition) -> int:
    return p.bk


def bk0(p: Partition) -> int:
    return p.bk0


def nzbk(p: Partition) -> int:
    return p.nzbk


def connection_chords(p: Partition) -> list[tuple[int, int]]:
    """Chords between consecutive positions of each block."""
    return [(b[k], b[k + 1]) for b in p.position_blocks for k in range(len(b) - 1)]


def is_noncrossing(p: Partition) -> bool:
    chords = connection_chords(p)
    for i, (a, c) in enumerate(chords):
        for b, d in chords[i + 1:]:
            if a < b < c < d or b < a < d < c:
                return False
    return True


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[max(x, y)] = min(x, y)

    def classes(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


def join(p: Partition, q: Partition) -> Partition:
    """Finest common coarsening of ``p`` and ``q`` (possibly crossing)."""
    if (p.kind, p.n) != (q.kind, q.n):
        raise ValueError(f"ground-set mismatch: type {p.kind} n={p.n} vs type {q.kind} n={q.n}")
    uf = _UnionFind(p.npos + 1)
    for part in (p, q):
        for b in part.position_blocks:
            for x in b[1:]:
                uf.union(b[0], x)
    classes = [c for c in uf.classes() if c[0] != 0]
    return Partition._from_positions(p.kind, p.n, classes)


# --- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<open>\{)|(?P<close>\})|(?P<comma>,)|(?P<num>[+-]?\d+))")


def parse(text: str, kind: str, n: int) -> Partition:
    """Parse ``"{1,3}{2}"`` (type A) or ``"{+1,-1}{+2}{-2}"`` (type B).

    Whitespace is ignored. Type B elements need an explicit sign; type A
    elements must be unsigned.
    """
    kind = _check_kind(kind)
    blocks: list[list[int]] = []
    current: list[int] | None = None
    expect_num = False
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PartitionParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        if m.lastgroup == "open":
            if current is not None:
                raise PartitionParseError("nested '{'", start)
            current, expect_num = [], True
        elif m.lastgroup == "close":
            if current is None:
                raise PartitionParseError("unbalanced '}'", start)
            if expect_num:
                raise PartitionParseError("expected an element", start)
            blocks.append(current)
            current = None
        elif m.lastgroup == "comma":
            if current is None or expect_num:
                raise PartitionParseError("unexpected ','", start)
            expect_num = True
        else:
            tok = m.group("num")
            if current is None or not expect_num:
                raise PartitionParseError(f"unexpected element {tok!r}", start)
            signed = tok[0] in "+-"
            if kind == "B" and not signed:
                raise PartitionParseError("type B elements need a sign", start)
            if kind == "A" and signed:
                raise PartitionParseError("type A elements are unsigned", start)
            current.append(int(tok))
            expect_num = False
        pos = m.end()
    if current is not None:
        raise PartitionParseError("unterminated block", len(text))
    if not blocks:
        raise PartitionParseError("no blocks", len(text))
    try:
        return Partition.from_blocks(kind, n, blocks)
    except ValueError as exc:
        raise PartitionParseError(str(exc), 0) from None


def from_json(data: str | list, kind: str, n: int) -> Partition:
    if isinstance(data, str):
        data = json.loads(data)
    return Partition.from_blocks(kind, n, data)


# --- enumeration -----------------------------------------------------------

def _check_size(n: int, limit: int, what: str) -> None:
    if not 1 <= n <= limit:
        raise SizeLimitError(f"{what} supports 1 <= n <= {limit}, got n={n}")


def enumerate_nc_a(n: int) -> list[Partition]:
    """All non-crossing partitions of ``{1..n}`` in basis order."""
    from .tldiag import iota_a_inv, noncrossing_matchings

    _check_size(n, MAX_N_A, "enumerate_nc_a")
    return sorted((iota_a_inv(b) for b in noncrossing_matchings(2 * n)), key=Partition.sort_key)


def enumerate_nc_b(n: int) -> list[Partition]:
    """All non-crossing type B partitions for ``n`` in basis order."""
    from .tldiag import iota_b_inv, symmetric_matchings

    _check_size(n, MAX_N_B, "enumerate_nc_b")
    return sorted((iota_b_inv(b) for b in symmetric_matchings(n)), key=Partition.sort_key)


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield [[first]] + sub
        for k in range(len(sub)):
            yield sub[:k] + [[first] + sub[k]] + sub[k + 1:]


def brute_force_nc(n: int, kind: str) -> list[Partition]:
    """Oracle: filter every set partition by the crossing test."""
    kind = _check_kind(kind)
    _check_size(n, BRUTE_MAX_N_A if kind == "A" else BRUTE_MAX_N_B, "brute_force_nc")
    out = []
    for blocks in _set_partitions(list(range(1, (n if kind == "A" else 2 * n) + 1))):
        p = Partition._from_positions(kind, n, blocks)
        if kind == "B" and (not p.is_symmetric() or p.bk0 > 1):
            continue
        if is_noncrossing(p):
            out.append(p)
    return sorted(out, key=Partition.sort_key)
