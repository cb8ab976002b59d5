"""Exact integer arithmetic on weights and flag types.

A weight is a tuple of signed integers of length r (the rank).  A flag
type is a strictly increasing tuple 0 = s_0 < s_1 < ... < s_m = r; it
identifies the manifold of nested subspaces of C^r whose codimensions
are the s_j.  Everything here is plain integer combinatorics; no floats.
"""

from dataclasses import dataclass

from .errors import InvalidInputError

Weight = tuple[int, ...]
FlagType = tuple[int, ...]

__all__ = [
    "Weight",
    "FlagType",
    "BlockWeight",
    "validate_flag",
    "is_dominant",
    "canonical_weight_complete",
    "canonical_weight_flag",
    "expand_block_weight",
    "flag_dimension",
    "sort_desc_count_inversions",
    "all_flag_types",
]


def validate_flag(cuts) -> FlagType:
    """Check 0 = s_0 < s_1 < ... < s_m = r and return the tuple."""
    s = tuple(int(c) for c in cuts)
    if len(s) < 2:
        raise InvalidInputError(f"flag type needs at least two cuts, got {s}")
    if s[0] != 0:
        raise InvalidInputError(f"flag type must start at 0, got {s}")
    for a, b in zip(s, s[1:]):
        if b <= a:
            raise InvalidInputError(f"flag type must be strictly increasing, got {s}")
    return s


def is_dominant(w: Weight) -> bool:
    """True iff the entries are weakly decreasing."""
    return all(a >= b for a, b in zip(w, w[1:]))


def canonical_weight_complete(r: int) -> Weight:
    """Weight of the top exterior power of the cotangent space of the
    complete flag manifold of C^r: (1-r, 3-r, ..., r-1)."""
    if r < 1:
        raise InvalidInputError(f"rank must be >= 1, got {r}")
    return tuple(2 * i - r - 1 for i in range(1, r + 1))


@dataclass(frozen=True)
class BlockWeight:
    """One integer per block of a flag type; expands to a weight that is
    constant on each block."""

    entries: tuple[int, ...]
    flag: FlagType

    def __post_init__(self):
        flag = validate_flag(self.flag)
        object.__setattr__(self, "flag", flag)
        object.__setattr__(self, "entries", tuple(int(e) for e in self.entries))
        m = len(flag) - 1
        if len(self.entries) != m:
            raise InvalidInputError(
                f"block weight has {len(self.entries)} entries but flag {flag} has {m} blocks"
            )

    @property
    def rank(self) -> int:
        return self.flag[-1]


def canonical_weight_flag(s) -> BlockWeight:
    """Canonical block weight of the flag type: block j gets s_{j-1} + s_j - r."""
    s = validate_flag(s)
    r = s[-1]
    return BlockWeight(tuple(s[j - 1] + s[j] - r for j in range(1, len(s))), s)


def expand_block_weight(a_s: BlockWeight) -> Weight:
    """Length-r weight constant on each block of the flag type."""
    out: list[int] = []
    for j in range(1, len(a_s.flag)):
        out.extend([a_s.entries[j - 1]] * (a_s.flag[j] - a_s.flag[j - 1]))
    return tuple(out)


def flag_dimension(s) -> int:
    """Complex dimension of the flag manifold: sum over block pairs j < k of
    (s_j - s_{j-1})(s_k - s_{k-1})."""
    s = validate_flag(s)
    sizes = [s[j] - s[j - 1] for j in range(1, len(s))]
    return sum(
        sizes[j] * sizes[k] for j in range(len(sizes)) for k in range(j + 1, len(sizes))
    )


def sort_desc_count_inversions(x) -> tuple[tuple[int, ...], int, bool]:
    """Sort weakly decreasing; count pairs i < j with x_i < x_j; flag ties.

    The inversion count is the number of strict order inversions, which is
    what the cohomology degree of a homogeneous line bundle counts.
    """
    seq = tuple(x)
    if not seq:
        raise InvalidInputError("cannot sort an empty sequence")
    n_inv = sum(
        1
        for i in range(len(seq))
        for j in range(i + 1, len(seq))
        if seq[i] < seq[j]
    )
    has_ties = len(set(seq)) < len(seq)
    return tuple(sorted(seq, reverse=True)), n_inv, has_ties


def all_flag_types(r: int) -> list[FlagType]:
    """Every flag type with s_m = r, ordered deterministically.

    There are 2^(r-1) of them: any subset of {1, ..., r-1} as interior cuts.
    """
    if r < 1:
        raise InvalidInputError(f"rank must be >= 1, got {r}")
    out: list[FlagType] = []
    for mask in range(1 << (r - 1)):
        cuts = [0] + [i for i in range(1, r) if mask & (1 << (i - 1))] + [r]
        out.append(tuple(cuts))
    out.sort()
    return out
