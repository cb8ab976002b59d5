"""Cohomology of homogeneous line bundles on flag manifolds.

The algorithm: shift the weight by half the canonical weight of the
complete flag manifold, sort, and count strict inversions.  A tie in the
shifted sequence kills all cohomology; otherwise exactly one group
survives, in degree equal to the inversion count, and it is the
irreducible GL(r) representation with the sorted-and-shifted-back
highest weight.  All arithmetic is exact: the half-integer shift is
carried as the doubled integer sequence 2*a_i - (2i - r - 1).
"""

from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInputError
from .weights import (
    BlockWeight,
    Weight,
    canonical_weight_complete,
    canonical_weight_flag,
    expand_block_weight,
    is_dominant,
    sort_desc_count_inversions,
)

__all__ = [
    "CohomologyResult",
    "bott_cohomology",
    "bott_flag",
    "schur_dimension",
    "euler_characteristic",
    "serre_dual_block_weight",
]


@dataclass(frozen=True)
class CohomologyResult:
    """Either everything vanishes ("zero") or a single group survives."""

    kind: str  # "zero" | "single"
    degree: Optional[int] = None
    highest_weight: Optional[Weight] = None
    dimension: Optional[int] = None

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def to_json(self) -> dict:
        if self.kind == "zero":
            return {"kind": "zero"}
        return {
            "kind": "single",
            "degree": self.degree,
            "weight": list(self.highest_weight),
            "dimension": self.dimension,
        }


def schur_dimension(lam: Weight, r: int) -> int:
    """Dimension of the irreducible GL(r) representation of highest weight
    lam (weakly decreasing), by the Weyl product formula

        prod_{i<j} (lam_i - lam_j + j - i) / (j - i),

    evaluated as one exact integer quotient.
    """
    lam = tuple(lam)
    if len(lam) != r:
        raise InvalidInputError(f"weight {lam} does not have length {r}")
    if not is_dominant(lam):
        raise InvalidInputError(f"weight {lam} is not weakly decreasing")
    num = 1
    den = 1
    for i in range(r):
        for j in range(i + 1, r):
            num *= lam[i] - lam[j] + j - i
            den *= j - i
    if num % den:
        raise AssertionError(f"Weyl product {num}/{den} is not integral")
    return num // den


def bott_cohomology(a: Weight, r: int) -> CohomologyResult:
    """Cohomology of the line bundle with weight a on the complete flag
    manifold of C^r (and, through block expansion, on any flag manifold)."""
    a = tuple(int(x) for x in a)
    if len(a) != r:
        raise InvalidInputError(f"weight {a} does not have length {r}")
    c_w = canonical_weight_complete(r)
    doubled = tuple(2 * a[i] - c_w[i] for i in range(r))
    sorted_desc, n_inv, has_ties = sort_desc_count_inversions(doubled)
    if has_ties:
        return CohomologyResult(kind="zero")
    hat: list[int] = []
    for i in range(r):
        twice = sorted_desc[i] + c_w[i]
        if twice % 2:
            raise AssertionError("shifted weight failed to be integral")
        hat.append(twice // 2)
    weight = tuple(hat)
    return CohomologyResult(
        kind="single",
        degree=n_inv,
        highest_weight=weight,
        dimension=schur_dimension(weight, r),
    )


def bott_flag(a_s: BlockWeight) -> CohomologyResult:
    """Cohomology of the block-weight line bundle on the (in)complete flag
    manifold, computed through the constant-on-blocks expansion."""
    return bott_cohomology(expand_block_weight(a_s), a_s.rank)


def euler_characteristic(a: Weight, r: int) -> int:
    """Alternating sum of cohomology dimensions; a polynomial in the weight."""
    res = bott_cohomology(a, r)
    if res.is_zero:
        return 0
    return (-1) ** res.degree * res.dimension


def serre_dual_block_weight(a_s: BlockWeight) -> BlockWeight:
    """Componentwise c_s - a_s, the weight whose cohomology pairs with that
    of a_s: degrees add up to the flag dimension and dimensions agree."""
    c_s = canonical_weight_flag(a_s.flag)
    return BlockWeight(
        tuple(c - a for c, a in zip(c_s.entries, a_s.entries)), a_s.flag
    )
