import json
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tlgram.ncpart import (
    Partition,
    PartitionParseError,
    SizeLimitError,
    brute_force_nc,
    enumerate_nc_a,
    enumerate_nc_b,
    finest,
    from_json,
    is_noncrossing,
    join,
    parse,
)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def A(n, *blocks):
    return Partition.from_blocks("A", n, blocks)


def B(n, *blocks):
    return Partition.from_blocks("B", n, blocks)


# --- strategies ------------------------------------------------------------------

@st.composite
def partitions_a(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks = {}
    for e, lab in zip(range(1, n + 1), labels):
        blocks.setdefault(lab, []).append(e)
    return Partition.from_blocks("A", n, blocks.values())


@st.composite
def partitions_b(draw, max_n=5):
    # label +i and -i with opposite signs of the same class, or one shared
    # invariant class 0
    n = draw(st.integers(1, max_n))
    labels = draw(st.lists(st.integers(-n, n), min_size=n, max_size=n))
    flips = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    blocks = {}
    for i, lab, flip in zip(range(1, n + 1), labels, flips):
        if lab == 0:
            blocks.setdefault(0, []).extend([i, -i])
        else:
            lab = abs(lab)
            sign = -1 if flip else 1
            blocks.setdefault(lab, []).append(sign * i)
            blocks.setdefault(-lab, []).append(-sign * i)
    return Partition.from_blocks("B", n, blocks.values())


def same_ground(kind, n_max=5):
    return st.integers(1, n_max).flatmap(
        lambda n: st.tuples(*(partitions_of(kind, n) for _ in range(3))))


def partitions_of(kind, n):
    strat = partitions_a(max_n=n) if kind == "A" else partitions_b(max_n=n)
    return strat.filter(lambda p: p.n == n)


# --- enumeration ---------------------------------------------------------------------

def test_enumerate_small():
    assert enumerate_nc_a(1) == [A(1, [1])]
    assert len(enumerate_nc_a(3)) == 5
    assert len(enumerate_nc_a(5)) == 42
    assert enumerate_nc_b(1) == [B(1, [1], [-1]), B(1, [1, -1])]
    assert len(enumerate_nc_b(2)) == 6
    assert len(enumerate_nc_b(3)) == 20


@pytest.mark.parametrize("n", range(1, 9))
def test_type_a_count_is_catalan(n):
    assert len(enumerate_nc_a(n)) == catalan(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_type_b_count_is_central_binomial(n):
    assert len(enumerate_nc_b(n)) == comb(2 * n, n)


@pytest.mark.parametrize("n", range(1, 7))
def test_enumerate_a_matches_brute_force(n):
    assert enumerate_nc_a(n) == brute_force_nc(n, "A")


@pytest.mark.parametrize("n", range(1, 5))
def test_enumerate_b_matches_brute_force(n):
    assert enumerate_nc_b(n) == brute_force_nc(n, "B")


def test_brute_force_examples():
    assert len(brute_force_nc(4, "A")) == 14
    assert len(brute_force_nc(2, "B")) == 6
    assert len(brute_force_nc(1, "B")) == 2


def test_enumeration_is_sorted_and_distinct():
    for ps in (enumerate_nc_a(6), enumerate_nc_b(4)):
        keys = [p.sort_key() for p in ps]
        assert keys == sorted(keys)
        assert len(set(ps)) == len(ps)


def test_size_limits():
    for bad in (0, 13):
        with pytest.raises(SizeLimitError):
            enumerate_nc_a(bad)
    with pytest.raises(SizeLimitError):
        enumerate_nc_b(7)
    with pytest.raises(SizeLimitError):
        brute_force_nc(7, "A")
    with pytest.raises(SizeLimitError):
        brute_force_nc(5, "B")


# --- crossing test -------------------------------------------------------------------------

def test_is_noncrossing_examples():
    assert is_noncrossing(A(3, [1, 3], [2]))
    assert not is_noncrossing(A(4, [1, 3], [2, 4]))
    assert not is_noncrossing(B(2, [1, -1], [2, -2]))


def test_exactly_one_crossing_partition_of_four():
    from tlgram.ncpart import _set_partitions
    all_parts = [Partition.from_blocks("A", 4, b) for b in _set_partitions([1, 2, 3, 4])]
    assert len(all_parts) == 15
    assert sum(map(is_noncrossing, all_parts)) == 14


def quadruple_crossing(p):
    # oracle: a < b < c < d with a, c in one block and b, d in another
    owner = {x: k for k, blk in enumerate(p.position_blocks) for x in blk}
    pts = sorted(owner)
    for i, a_ in enumerate(pts):
        for b_ in pts[i + 1:]:
            for c_ in pts:
                if c_ <= b_:
                    continue
                for d_ in pts:
                    if d_ <= c_:
                        continue
                    if owner[a_] == owner[c_] != owner[b_] == owner[d_]:
                        return True
    return False


@given(st.one_of(partitions_a(max_n=6), partitions_b(max_n=3)))
def test_chord_test_matches_quadruple_test(p):
    assert is_noncrossing(p) == (not quadruple_crossing(p))


# --- join ---------------------------------------------------------------------------------

def test_join_examples():
    assert join(A(3, [1, 2], [3]), A(3, [2, 3], [1])) == A(3, [1, 2, 3])
    j = join(B(1, [1], [-1]), B(1, [1, -1]))
    assert j == B(1, [1, -1])
    assert (j.bk0, j.nzbk) == (1, 0)


def test_join_ground_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        join(A(2, [1, 2]), A(3, [1, 2, 3]))
    with pytest.raises(ValueError, match="mismatch"):
        join(A(2, [1, 2]), B(1, [1, -1]))


def test_join_of_noncrossing_can_cross():
    p, q = A(4, [1, 3], [2], [4]), A(4, [1], [2, 4], [3])
    assert is_noncrossing(p) and is_noncrossing(q)
    assert not is_noncrossing(join(p, q))


@given(st.one_of(same_ground("A"), same_ground("B", 4)))
def test_join_lattice_laws(triple):
    p, q, r = triple
    assert join(p, q) == join(q, p)
    assert join(join(p, q), r) == join(p, join(q, r))
    assert join(p, p) == p
    assert join(p, finest(p.kind, p.n)) == p
    jn = join(p, q)
    coarse = [set(b) for b in jn.blocks]
    for blk in p.blocks + q.blocks:
        assert any(set(blk) <= c for c in coarse)


@given(same_ground("B", 4))
def test_type_b_join_is_symmetric(triple):
    p, q, _ = triple
    jn = join(p, q)
    assert jn.is_symmetric()
    assert jn.bk == jn.bk0 + 2 * jn.nzbk
    assert jn.bk0 <= 2


def test_join_bk0_can_be_two():
    p = B(2, [1, -1], [2], [-2])
    q = B(2, [2, -2], [1], [-1])
    assert join(p, q).bk0 == 2


# --- statistics ----------------------------------------------------------------------------

def test_block_statistics():
    assert finest("A", 4).bk == 4
    p = B(2, [1, -1], [2], [-2])
    assert (p.bk, p.bk0, p.nzbk) == (3, 1, 1)
    p = B(2, [1, 2, -1, -2])
    assert (p.bk, p.bk0, p.nzbk) == (1, 1, 0)
    with pytest.raises(TypeError):
        A(2, [1, 2]).bk0


@pytest.mark.parametrize("n", range(1, 7))
def test_statistic_sums(n):
    ps = enumerate_nc_b(n)
    half = comb(2 * n, n) // 2
    assert sum(p.bk0 for p in ps) == half
    assert sum(p.nzbk for p in ps) == n * half
    assert all(p.bk0 <= 1 for p in ps)


# --- text and json forms ------------------------------------------------------------------------

def test_encode_examples():
    assert A(3, [3, 1], [2]).encode() == "{1,3}{2}"
    assert B(2, [-1, 1], [2], [-2]).encode() == "{+1,-1}{+2}{-2}"


def test_parse_examples():
    p = parse("{1,3}{2,4}", "A", 4)
    assert not is_noncrossing(p)
    assert parse(" { +1 , -1 } {+2}{-2} ", "B", 2) == B(2, [1, -1], [2], [-2])


@pytest.mark.parametrize("text, kind, n, pos", [
    ("{1,3}{2", "A", 3, 7),
    ("{1,,3}{2}", "A", 3, 3),
    ("{1}x{2}", "A", 2, 3),
    ("{1}{{2}}", "A", 2, 4),
    ("{1}{}", "A", 1, 4),
    ("{+1}{-1}", "A", 1, 1),
    ("{1,-1}", "B", 1, 1),
])
def test_parse_errors_carry_position(text, kind, n, pos):
    with pytest.raises(PartitionParseError) as info:
        parse(text, kind, n)
    assert info.value.pos == pos


@pytest.mark.parametrize("text, kind, n", [
    ("{1,2}", "A", 3),          # 3 missing
    ("{1,2}{2}", "A", 2),       # repeated
    ("{+1,+2}{-1}{-2}", "B", 2),  # not symmetric
    ("{4}", "A", 3),
])
def test_parse_rejects_bad_ground_sets(text, kind, n):
    with pytest.raises(PartitionParseError):
        parse(text, kind, n)


@given(st.one_of(partitions_a(), partitions_b()))
def test_encode_parse_round_trip(p):
    assert parse(p.encode(), p.kind, p.n) == p
    assert from_json(json.dumps(p.to_json()), p.kind, p.n) == p
