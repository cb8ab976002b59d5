"""Weights of exterior powers of the cotangent space of a flag manifold.

The cotangent space at a point is the sum of one line per index pair
(lo, hi) with block(lo) < block(hi); the pair contributes -1 at position
lo and +1 at position hi to the weight of a cotangent line.  (The sign
is pinned by requiring that the enumerated first-power weight of the
projective line has a surviving group in degree 1, i.e. h^{1,1} = 1.)
Exterior powers are enumerated by brute force over subsets; at desk
scale (dimension <= ~24) this is exact and fast enough.
"""

import itertools
from dataclasses import dataclass

from .bott import bott_cohomology
from .errors import InvalidInputError
from .weights import FlagType, Weight, flag_dimension, validate_flag

__all__ = [
    "ParabolicRoot",
    "WeightedDecomposition",
    "parabolic_roots",
    "exterior_weights",
    "top_weight",
    "verify_weight_bound",
    "hodge_numbers",
]


@dataclass(frozen=True)
class ParabolicRoot:
    """Cotangent line for the index pair (lo, hi), 1-based, block(lo) < block(hi)."""

    lo: int
    hi: int
    weight: Weight


@dataclass(frozen=True)
class WeightedDecomposition:
    """Multiset of (weight, multiplicity) pairs with distinct weights,
    ordered lexicographically by weight."""

    terms: tuple[tuple[Weight, int], ...]

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.terms)

    def to_json(self) -> list[dict]:
        return [{"weight": list(w), "multiplicity": m} for w, m in self.terms]


def _block_of(s: FlagType, idx: int) -> int:
    """Block number (1-based) of a 1-based index under the flag type."""
    for j in range(1, len(s)):
        if s[j - 1] < idx <= s[j]:
            return j
    raise InvalidInputError(f"index {idx} outside 1..{s[-1]}")


def parabolic_roots(s) -> list[ParabolicRoot]:
    """One root per pair (lo, hi) with block(lo) < block(hi); the count equals
    the flag dimension."""
    s = validate_flag(s)
    r = s[-1]
    roots = []
    for lo in range(1, r + 1):
        for hi in range(lo + 1, r + 1):
            if _block_of(s, lo) < _block_of(s, hi):
                w = [0] * r
                w[lo - 1] = -1
                w[hi - 1] = 1
                roots.append(ParabolicRoot(lo, hi, tuple(w)))
    return roots


def exterior_weights(s, p: int) -> WeightedDecomposition:
    """Weights, with multiplicity, of the p-th exterior power of the
    cotangent space: sums over p-element subsets of the roots."""
    s = validate_flag(s)
    n_s = flag_dimension(s)
    if not 0 <= p <= n_s:
        raise InvalidInputError(f"degree {p} outside 0..{n_s} for flag {s}")
    roots = parabolic_roots(s)
    r = s[-1]
    counts: dict[Weight, int] = {}
    for subset in itertools.combinations(roots, p):
        total = [0] * r
        for root in subset:
            for i, x in enumerate(root.weight):
                total[i] += x
        key = tuple(total)
        counts[key] = counts.get(key, 0) + 1
    return WeightedDecomposition(tuple(sorted(counts.items())))


def top_weight(s) -> Weight:
    """The unique weight of the top exterior power: the sum of all root
    weights, which equals the expanded canonical block weight."""
    s = validate_flag(s)
    r = s[-1]
    total = [0] * r
    for root in parabolic_roots(s):
        for i, x in enumerate(root.weight):
            total[i] += x
    return tuple(total)


def verify_weight_bound(s, p: int) -> tuple[bool, list[dict]]:
    """Check the per-pair bound on the exterior-power weights: for every
    enumerated weight and every pair s_{j-1} < lo <= s_j < hi <= s_{j+1},

        u_hi - u_lo <= min(p + 1, r + 1 - (hi - lo), N_s - p + (s_{j+1} - s_{j-1})),

    where u is taken in the dual-space labeling (one +1 at the lower index,
    -1 at the higher, per cotangent line); the stored weights, whose sign is
    pinned by the Hodge oracles, are the negatives of these.  Returns
    (ok, violations); a violation records the offending triple.
    """
    s = validate_flag(s)
    r = s[-1]
    n_s = flag_dimension(s)
    violations = []
    decomposition = exterior_weights(s, p)
    for stored, _mult in decomposition.terms:
        u = tuple(-x for x in stored)
        for j in range(1, len(s) - 1):
            for lo in range(s[j - 1] + 1, s[j] + 1):
                for hi in range(s[j] + 1, s[j + 1] + 1):
                    bound = min(
                        p + 1,
                        r + 1 - (hi - lo),
                        n_s - p + (s[j + 1] - s[j - 1]),
                    )
                    if u[hi - 1] - u[lo - 1] > bound:
                        violations.append(
                            {"weight": list(u), "lo": lo, "hi": hi, "bound": bound}
                        )
    return (not violations, violations)


def hodge_numbers(s) -> list[list[int]]:
    """Table h[p][q]: dimensions of the degree-q groups of the p-th exterior
    power of the cotangent bundle, each line-bundle summand computed exactly."""
    s = validate_flag(s)
    r = s[-1]
    n_s = flag_dimension(s)
    table = [[0] * (n_s + 1) for _ in range(n_s + 1)]
    for p in range(n_s + 1):
        for u, mult in exterior_weights(s, p).terms:
            res = bott_cohomology(u, r)
            if not res.is_zero and res.degree <= n_s:
                table[p][res.degree] += mult * res.dimension
    return table
