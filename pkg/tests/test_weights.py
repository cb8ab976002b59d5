import pytest

from flagvanish.errors import InvalidInputError
from flagvanish.omega import parabolic_roots
from flagvanish.weights import (
    BlockWeight,
    all_flag_types,
    canonical_weight_complete,
    canonical_weight_flag,
    expand_block_weight,
    flag_dimension,
    sort_desc_count_inversions,
    validate_flag,
)


def test_canonical_weight_complete_values():
    assert canonical_weight_complete(1) == (0,)
    assert canonical_weight_complete(2) == (-1, 1)
    assert canonical_weight_complete(4) == (-3, -1, 1, 3)


def test_canonical_weight_complete_sums_to_zero():
    for r in range(1, 12):
        w = canonical_weight_complete(r)
        assert sum(w) == 0
        assert all(b - a == 2 for a, b in zip(w, w[1:]))


def test_canonical_weight_complete_invalid_rank():
    with pytest.raises(InvalidInputError):
        canonical_weight_complete(0)


def test_canonical_weight_flag_projective():
    r = 5
    c = canonical_weight_flag((0, 1, r))
    assert c.entries == (1 - r, 1)


def test_canonical_weight_flag_grassmannian():
    n, d = 6, 2
    c = canonical_weight_flag((0, d, n))
    assert c.entries == (d - n, d)


def test_canonical_weight_flag_complete_matches_cw():
    for r in range(1, 7):
        s = tuple(range(r + 1))
        c = canonical_weight_flag(s)
        assert expand_block_weight(c) == canonical_weight_complete(r)


def test_expand_block_weight():
    assert expand_block_weight(BlockWeight((7, 0), (0, 1, 4))) == (7, 0, 0, 0)
    assert expand_block_weight(BlockWeight((3, 1, 0), (0, 2, 3, 5))) == (3, 3, 1, 0, 0)
    assert expand_block_weight(BlockWeight((0, 0), (0, 2, 5))) == (0,) * 5


def test_block_weight_length_mismatch():
    with pytest.raises(InvalidInputError):
        BlockWeight((1, 2, 3), (0, 1, 4))


def test_flag_dimension_formulas():
    for r in range(2, 8):
        assert flag_dimension((0, 1, r)) == r - 1
    for n in range(2, 8):
        for d in range(1, n):
            assert flag_dimension((0, d, n)) == d * (n - d)
    assert flag_dimension((0, 1, 2, 3)) == 3


def test_flag_dimension_counts_cross_block_pairs():
    # root enumeration is the independent count of pairs in distinct blocks
    for r in range(1, 6):
        for s in all_flag_types(r):
            assert flag_dimension(s) == len(parabolic_roots(s))


def test_validate_flag_rejects_bad_cuts():
    for bad in [(1, 2), (0, 0, 3), (0, 3, 2), (0,)]:
        with pytest.raises(InvalidInputError):
            validate_flag(bad)


def test_sort_desc_count_inversions():
    assert sort_desc_count_inversions((5, 3, 1)) == ((5, 3, 1), 0, False)
    assert sort_desc_count_inversions((1, 3)) == ((3, 1), 1, False)
    assert sort_desc_count_inversions((2, 2, 0)) == ((2, 2, 0), 0, True)


def test_sort_desc_idempotent():
    seqs = [(4, -1, 3, 3, 0), (0, 0, 0), (-5, 2, 9, 9)]
    for seq in seqs:
        sorted_once, _, _ = sort_desc_count_inversions(seq)
        again, n_inv, _ = sort_desc_count_inversions(sorted_once)
        assert again == sorted_once
        assert n_inv == 0


def test_all_flag_types_count():
    for r in range(1, 7):
        flags = all_flag_types(r)
        assert len(flags) == 2 ** (r - 1)
        assert len(set(flags)) == len(flags)
