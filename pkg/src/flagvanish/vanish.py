"""Symbolic bundle expressions, positivity-fact inference, and vanishing
verdicts with cited justifications.

Positivity facts are declared on atoms (the workbench carries no global
geometry) and propagated by a fixed rule set: monotonicity in the kernel
bound and tuple size, tensor products, Schur functors, det twists, dual
det twists, pullbacks, quotients, and flag-quotient determinants.  The
vanishing engine matches theorem shapes syntactically, modulo
commutativity of tensor products and det-as-top-wedge, and reports one
verdict per matching shape with a full hypothesis trace; a verdict is
"vanishes" only when every premise is satisfied.
"""

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

from .bott import bott_cohomology, schur_dimension
from .errors import InvalidInputError
from .omega import exterior_weights
from .weights import (
    BlockWeight,
    FlagType,
    Weight,
    expand_block_weight,
    flag_dimension,
    is_dominant,
    validate_flag,
)

__all__ = [
    "Atom",
    "Dual",
    "Tensor",
    "Det",
    "SymPow",
    "WedgePow",
    "Schur",
    "TensorPow",
    "DetTwist",
    "CanonicalTwist",
    "PositivityFact",
    "FactSet",
    "TheoremReport",
    "FlagContext",
    "rank_of",
    "infer_positivity",
    "query_vanishing",
    "check_block_gap_condition",
    "glpsd_rewrite",
    "GlpsdTerm",
    "RewriteResult",
    "projective_twisted_hodge",
    "product_projective_cohomology",
    "parse_bundle_expr",
]


# --------------------------------------------------------------------------
# expression trees
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """A named bundle with declared positivity facts.

    line=True forces rank 1.  Optional relationship declarations feed the
    structural inference rules: quotient_of (quotients inherit Griffiths
    bounds), pullback_of (a pair (source, source_base_dim); kernels grow by
    the fiber dimension of the map), and flag_det_quotient_of (the product
    of tautological quotient determinants on a flag bundle of a Griffiths
    k-positive bundle is a k-positive line).
    """

    name: str
    rank: int = 1
    facts: tuple = ()
    line: bool = False
    quotient_of: Optional["Atom"] = None
    pullback_of: Optional[tuple] = None
    flag_det_quotient_of: Optional["Atom"] = None

    def __post_init__(self):
        if self.line and self.rank != 1:
            raise InvalidInputError(f"line atom {self.name} must have rank 1")
        if self.rank < 1:
            raise InvalidInputError(f"atom {self.name} needs rank >= 1")


@dataclass(frozen=True)
class Dual:
    inner: object


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object


@dataclass(frozen=True)
class Det:
    inner: object


@dataclass(frozen=True)
class SymPow:
    inner: object
    power: int

    def __post_init__(self):
        if self.power < 1:
            raise InvalidInputError("symmetric power must be >= 1")


@dataclass(frozen=True)
class WedgePow:
    inner: object
    power: int


@dataclass(frozen=True)
class Schur:
    inner: object
    weight: Weight

    def __post_init__(self):
        object.__setattr__(self, "weight", tuple(int(x) for x in self.weight))
        if not is_dominant(self.weight):
            raise InvalidInputError(f"Schur weight {self.weight} must be dominant")


@dataclass(frozen=True)
class TensorPow:
    inner: object
    power: int

    def __post_init__(self):
        if self.power < 1:
            raise InvalidInputError("tensor power must be >= 1")


@dataclass(frozen=True)
class DetTwist:
    """Models e (x) (det e)^m as a single node."""

    inner: object
    power: int


@dataclass(frozen=True)
class CanonicalTwist:
    """Models K_X (x) e."""

    inner: object


def rank_of(e) -> int:
    if isinstance(e, Atom):
        return e.rank
    if isinstance(e, Dual):
        return rank_of(e.inner)
    if isinstance(e, Tensor):
        return rank_of(e.left) * rank_of(e.right)
    if isinstance(e, Det):
        return 1
    if isinstance(e, SymPow):
        r = rank_of(e.inner)
        return _binom(r + e.power - 1, e.power)
    if isinstance(e, WedgePow):
        r = rank_of(e.inner)
        if not 1 <= e.power <= r:
            raise InvalidInputError(f"wedge power {e.power} outside 1..rank={r}")
        return _binom(r, e.power)
    if isinstance(e, Schur):
        r = rank_of(e.inner)
        if len(e.weight) != r:
            raise InvalidInputError(
                f"Schur weight length {len(e.weight)} != rank {r}"
            )
        return schur_dimension(e.weight, r)
    if isinstance(e, TensorPow):
        return rank_of(e.inner) ** e.power
    if isinstance(e, DetTwist):
        return rank_of(e.inner)
    if isinstance(e, CanonicalTwist):
        return rank_of(e.inner)
    raise InvalidInputError(f"not a bundle expression: {e!r}")


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


# --------------------------------------------------------------------------
# positivity facts
# --------------------------------------------------------------------------

FACT_KINDS = (
    "ks_positive",
    "nakano_positive",
    "k_positive_line",
    "k_ample",
    "semipositive_line",
    "ample_line",
)


@dataclass(frozen=True)
class PositivityFact:
    kind: str
    k: Optional[int] = None
    s: Optional[int] = None
    rule: str = "declared"
    premises: tuple = ()

    def __post_init__(self):
        if self.kind not in FACT_KINDS:
            raise InvalidInputError(f"unknown fact kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == "ks_positive":
            return f"ks_positive(k={self.k}, s={self.s})"
        if self.kind in ("k_positive_line", "k_ample"):
            return f"{self.kind}(k={self.k})"
        return self.kind

    def to_json(self) -> dict:
        out = {"kind": self.kind, "rule": self.rule}
        if self.k is not None:
            out["k"] = self.k
        if self.s is not None:
            out["s"] = self.s
        if self.premises:
            out["premises"] = list(self.premises)
        return out


def griffiths_fact(k: int, rule: str = "declared", premises=()) -> PositivityFact:
    """Griffiths k-positivity is the single-vector case of (k, s)-positivity."""
    return PositivityFact("ks_positive", k=k, s=1, rule=rule, premises=tuple(premises))


class FactSet:
    """Derived positivity facts, stored as generators; membership queries are
    closed under the monotonicity entailments (larger kernel bound, smaller
    tuple size)."""

    def __init__(self):
        self.facts: list[PositivityFact] = []

    def add(self, fact: PositivityFact):
        if fact.kind == "ks_positive" and self.entails_ks(fact.k, fact.s):
            return
        self.facts.append(fact)

    @property
    def has_nakano(self) -> bool:
        return any(f.kind == "nakano_positive" for f in self.facts)

    @property
    def has_semipositive_line(self) -> bool:
        return any(f.kind == "semipositive_line" for f in self.facts)

    @property
    def has_ample_line(self) -> bool:
        return any(f.kind == "ample_line" for f in self.facts)

    def ks_generators(self, rank: int) -> list[tuple[int, int]]:
        gens = [(f.k, f.s) for f in self.facts if f.kind == "ks_positive"]
        if self.has_nakano:
            gens.append((0, rank))
        return gens

    def entails_ks(self, k: int, s: int) -> bool:
        if self.has_nakano:
            return True
        return any(
            f.kind == "ks_positive" and f.k <= k and f.s >= s for f in self.facts
        )

    def min_k_for_tuple_size(self, s: int) -> Optional[int]:
        if self.has_nakano:
            return 0
        ks = [
            f.k for f in self.facts if f.kind == "ks_positive" and f.s >= s
        ]
        return min(ks) if ks else None

    def min_griffiths(self) -> Optional[int]:
        return self.min_k_for_tuple_size(1)

    def _min_k(self, kind: str) -> Optional[int]:
        ks = [f.k for f in self.facts if f.kind == kind]
        return min(ks) if ks else None

    def min_k_positive_line(self) -> Optional[int]:
        return self._min_k("k_positive_line")

    def min_k_ample(self) -> Optional[int]:
        return self._min_k("k_ample")

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self.facts]


def _normalize(fs: FactSet, rank: int):
    """Close a fact set under the rank-1 equivalences: ample lines are
    0-ample, k-ample implies k-positive, and for lines k-positive and
    Griffiths k-positive coincide."""
    if fs.has_ample_line:
        if fs.min_k_ample() is None or fs.min_k_ample() > 0:
            fs.add(PositivityFact("k_ample", k=0, rule="ample lines are 0-ample"))
    if rank == 1:
        ka = fs.min_k_ample()
        if ka is not None:
            kp = fs.min_k_positive_line()
            if kp is None or kp > ka:
                fs.add(
                    PositivityFact(
                        "k_positive_line",
                        k=ka,
                        rule="k-ample implies k-positive",
                        premises=(f"k_ample(k={ka})",),
                    )
                )
        kp = fs.min_k_positive_line()
        if kp is not None and not fs.entails_ks(kp, 1):
            fs.add(
                griffiths_fact(
                    kp,
                    rule="for lines, k-positive and Griffiths k-positive coincide",
                    premises=(f"k_positive_line(k={kp})",),
                )
            )
        kg = fs.min_griffiths()
        if kg is not None:
            kp = fs.min_k_positive_line()
            if kp is None or kp > kg:
                fs.add(
                    PositivityFact(
                        "k_positive_line",
                        k=kg,
                        rule="for lines, k-positive and Griffiths k-positive coincide",
                        premises=(f"ks_positive(k={kg}, s=1)",),
                    )
                )


def infer_positivity(e, n: int) -> FactSet:
    """Least fact set derivable from the declared atom facts under the
    propagation rules; every derived fact carries its rule and premises."""
    memo: dict = {}

    def go(expr) -> FactSet:
        key = id(expr) if isinstance(expr, Atom) else expr
        if key in memo:
            return memo[key]
        fs = _infer(expr, n, go)
        memo[key] = fs
        return fs

    return go(e)


def _infer(e, n: int, go) -> FactSet:
    fs = FactSet()
    if isinstance(e, Atom):
        for fact in e.facts:
            fs.add(fact)
        if e.quotient_of is not None:
            src = go(e.quotient_of)
            kq = src.min_griffiths()
            if kq is not None:
                fs.add(
                    griffiths_fact(
                        kq,
                        rule="quotients of Griffiths k-positive bundles are "
                        "Griffiths k-positive",
                        premises=(f"{e.quotient_of.name}: ks_positive(k={kq}, s=1)",),
                    )
                )
        if e.pullback_of is not None:
            src_expr, src_dim = e.pullback_of
            if n < src_dim:
                raise InvalidInputError(
                    "pullback target dimension smaller than source"
                )
            src = go(src_expr)
            for k0, s0 in src.ks_generators(rank_of(src_expr)):
                fs.add(
                    PositivityFact(
                        "ks_positive",
                        k=k0 + n - src_dim,
                        s=min(s0, e.rank),
                        rule="pullbacks stay positive with kernel grown by the "
                        "fiber dimension",
                        premises=(f"source ks_positive(k={k0}, s={s0})",),
                    )
                )
        if e.flag_det_quotient_of is not None:
            src = go(e.flag_det_quotient_of)
            kf = src.min_griffiths()
            if kf is not None:
                fs.add(
                    PositivityFact(
                        "k_positive_line",
                        k=kf,
                        rule="products of flag-quotient determinants of a "
                        "Griffiths k-positive bundle are k-positive",
                        premises=(
                            f"{e.flag_det_quotient_of.name}: "
                            f"ks_positive(k={kf}, s=1)",
                        ),
                    )
                )
        _normalize(fs, e.rank)
        return fs

    if isinstance(e, Dual):
        go(e.inner)
        return fs

    if isinstance(e, Tensor):
        left, right = go(e.left), go(e.right)
        rl, rr = rank_of(e.left), rank_of(e.right)
        for (a, p) in left.ks_generators(rl):
            for (b, q) in right.ks_generators(rr):
                fs.add(
                    PositivityFact(
                        "ks_positive",
                        k=max(a, b),
                        s=min(p, q),
                        rule="tensor products keep the larger kernel bound and "
                        "the smaller tuple size",
                        premises=(
                            f"left ks_positive(k={a}, s={p})",
                            f"right ks_positive(k={b}, s={q})",
                        ),
                    )
                )
        if left.has_nakano and right.has_nakano:
            fs.add(
                PositivityFact(
                    "nakano_positive",
                    rule="tensor products of Nakano positive bundles",
                    premises=("left nakano", "right nakano"),
                )
            )
        for this, other, tag in ((left, right, "right"), (right, left, "left")):
            if other.has_semipositive_line:
                for (a, p) in this.ks_generators(rank_of(e.left if tag == "right" else e.right)):
                    fs.add(
                        PositivityFact(
                            "ks_positive",
                            k=a,
                            s=p,
                            rule="a semipositive line factor is neutral",
                            premises=(f"factor ks_positive(k={a}, s={p})",),
                        )
                    )
                if this.has_nakano:
                    fs.add(
                        PositivityFact(
                            "nakano_positive",
                            rule="a semipositive line factor is neutral",
                        )
                    )
                kp = this.min_k_positive_line()
                if kp is not None and rank_of(e) == 1:
                    fs.add(
                        PositivityFact(
                            "k_positive_line",
                            k=kp,
                            rule="a semipositive line factor is neutral",
                        )
                    )
        if left.has_semipositive_line and right.has_semipositive_line:
            fs.add(
                PositivityFact(
                    "semipositive_line",
                    rule="products of semipositive lines are semipositive",
                )
            )
        dual_twist = _match_dual_det_twist(e)
        if dual_twist is not None:
            base, s_power = dual_twist
            kb = go(base).min_griffiths()
            if kb is not None and rank_of(base) >= 2:
                fs.add(
                    PositivityFact(
                        "ks_positive",
                        k=kb,
                        s=min(s_power, rank_of(base)),
                        rule="dual det-twist rule: E* (x) (det E)^s is "
                        "(k, s)-positive for Griffiths k-positive E",
                        premises=(f"base ks_positive(k={kb}, s=1)",),
                    )
                )
        _normalize(fs, rank_of(e))
        return fs

    if isinstance(e, (Det, SymPow, WedgePow, Schur, TensorPow)):
        inner = go(e.inner)
        weight_ok = True
        if isinstance(e, Schur):
            weight_ok = e.weight[-1] >= 0
        if isinstance(e, WedgePow):
            rank_of(e)  # validates the power range
        if weight_ok:
            for (k0, s0) in inner.ks_generators(rank_of(e.inner)):
                fs.add(
                    PositivityFact(
                        "ks_positive",
                        k=k0,
                        s=s0,
                        rule="Schur-type functors preserve (k, s)-positivity",
                        premises=(f"inner ks_positive(k={k0}, s={s0})",),
                    )
                )
            if inner.has_nakano:
                fs.add(
                    PositivityFact(
                        "nakano_positive",
                        rule="Schur-type functors preserve (k, s)-positivity",
                    )
                )
        _normalize(fs, rank_of(e))
        return fs

    if isinstance(e, DetTwist):
        inner = go(e.inner)
        r = rank_of(e.inner)
        if e.power == 0:
            for f in inner.facts:
                fs.add(f)
        elif e.power >= 1:
            kd = inner.min_griffiths()
            if kd is not None:
                fs.add(
                    PositivityFact(
                        "ks_positive",
                        k=kd,
                        s=min(r, n),
                        rule="det-twist rule: E (x) (det E)^m gains every tuple "
                        "size for Griffiths k-positive E",
                        premises=(f"inner ks_positive(k={kd}, s=1)",),
                    )
                )
        _normalize(fs, rank_of(e))
        return fs

    if isinstance(e, CanonicalTwist):
        go(e.inner)
        return fs

    raise InvalidInputError(f"not a bundle expression: {e!r}")


# --------------------------------------------------------------------------
# shape helpers
# --------------------------------------------------------------------------


def _flatten_tensor(e) -> list:
    if isinstance(e, Tensor):
        return _flatten_tensor(e.left) + _flatten_tensor(e.right)
    return [e]


def _det_power_of(f) -> Optional[tuple]:
    """(base, power) if f is Det(base) or a tensor power of it."""
    if isinstance(f, Det):
        return (f.inner, 1)
    if isinstance(f, TensorPow) and isinstance(f.inner, Det):
        return (f.inner.inner, f.power)
    if isinstance(f, Schur):
        r = rank_of(f.inner)
        if all(x == 1 for x in f.weight) and len(f.weight) == r:
            return (f.inner, 1)
    return None


def _match_dual_det_twist(e) -> Optional[tuple]:
    """Match Dual(X) (x) (det X)^s modulo commutativity; returns (X, s)."""
    factors = _flatten_tensor(e)
    duals = [f for f in factors if isinstance(f, Dual)]
    if len(duals) != 1:
        return None
    base = duals[0].inner
    s_total = 0
    for f in factors:
        if f is duals[0]:
            continue
        dp = _det_power_of(f)
        if dp is None or dp[0] != base:
            return None
        s_total += dp[1]
    if s_total < 1:
        return None
    return (base, s_total)


def _split_factors(factors, facts_of):
    """Group tensor factors into (principal non-det factors, det powers by
    base, semipositive line factors)."""
    principal = []
    det_powers: dict = {}
    semis = []
    for f in factors:
        dp = _det_power_of(f)
        if dp is not None:
            det_powers[dp[0]] = det_powers.get(dp[0], 0) + dp[1]
            continue
        if rank_of(f) == 1 and facts_of(f).has_semipositive_line:
            semis.append(f)
            continue
        principal.append(f)
    return principal, det_powers, semis


# --------------------------------------------------------------------------
# theorem reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TheoremReport:
    theorem_id: str
    citation: str
    hypothesis_trace: tuple
    conclusion: str  # "vanishes" | "not_applicable"
    statement: str
    conjectural: bool = False

    @property
    def vanishes(self) -> bool:
        return self.conclusion == "vanishes"

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "citation": self.citation,
            "hypotheses": [
                {"premise": text, "satisfied": ok} for text, ok in self.hypothesis_trace
            ],
            "conclusion": self.conclusion,
            "statement": self.statement,
            "conjectural": self.conjectural,
        }


def _report(theorem_id, citation, premises, statement, conjectural=False):
    ok = all(sat for _, sat in premises)
    return TheoremReport(
        theorem_id=theorem_id,
        citation=citation,
        hypothesis_trace=tuple(premises),
        conclusion="vanishes" if ok else "not_applicable",
        statement=statement,
        conjectural=conjectural,
    )


@dataclass(frozen=True)
class FlagContext:
    """Flag data accompanying a query against the flag-weight rule: the flag
    type, the block weight, and the exterior-power weight u at degree p."""

    flag: FlagType
    block_weight: tuple
    weight: Weight


def query_vanishing(
    e,
    n: int,
    p: int,
    q: int,
    conjectural: bool = False,
    flag_context: Optional[FlagContext] = None,
) -> list[TheoremReport]:
    """Evaluate every matching vanishing rule for the Dolbeault group in
    bidegree (p, q) with values in the expression."""
    if not (0 <= p <= n and 0 <= q <= n):
        raise InvalidInputError(f"bidegree ({p}, {q}) outside 0..{n}")
    memo: dict = {}

    def facts_of(expr):
        key = id(expr)
        if key not in memo:
            memo[key] = infer_positivity(expr, n)
        return memo[key]

    fs = facts_of(e)
    r = rank_of(e)
    reports: list[TheoremReport] = []

    reports.append(
        _report(
            "nakano",
            "Nakano vanishing theorem",
            [
                ("bundle is Nakano positive", fs.has_nakano),
                ("p equals the base dimension", p == n),
                ("q >= 1", q >= 1),
            ],
            f"H^({n},{q})(X, E) = 0",
        )
    )

    if r == 1:
        k2 = fs.min_k_positive_line()
        reports.append(
            _report(
                "gigante_girbau",
                "Gigante-Girbau vanishing theorem for k-positive line bundles",
                [
                    ("a k-positive line fact is available", k2 is not None),
                    (
                        f"p + q > n + k (k = {k2})",
                        k2 is not None and p + q > n + k2,
                    ),
                ],
                f"H^({p},{q})(X, B) = 0",
            )
        )

    k3 = fs.min_griffiths()
    reports.append(
        _report(
            "griffiths_total_degree",
            "total-degree vanishing for Griffiths k-positive bundles",
            [
                ("a Griffiths k-positive fact is available", k3 is not None),
                (
                    f"p + q >= n + k + r (k = {k3}, r = {r})",
                    k3 is not None and p + q >= n + k3 + r,
                ),
            ],
            f"H^({p},{q})(X, E) = 0",
        )
    )

    s_req = min(n - q + 1, r)
    k4 = fs.min_k_for_tuple_size(s_req)
    reports.append(
        _report(
            "ks_top_degree",
            "top-degree vanishing for (k, s)-positive bundles",
            [
                ("p equals the base dimension", p == n),
                (
                    f"a (k, s)-positivity fact with s >= min(n - q + 1, r) = {s_req} "
                    "is available",
                    k4 is not None,
                ),
                (f"q > k (k = {k4})", k4 is not None and q > k4),
            ],
            f"H^({n},{q})(X, E) = 0",
        )
    )

    k7 = fs.min_k_ample()
    reports.append(
        _report(
            "sommese_k_ample",
            "Sommese vanishing for k-ample bundles",
            [
                ("a k-ample fact is declared", k7 is not None),
                (
                    f"p + q >= n + r + k (k = {k7}, r = {r})",
                    k7 is not None and p + q >= n + r + k7,
                ),
            ],
            f"H^({p},{q})(X, E) = 0",
        )
    )

    if isinstance(e, CanonicalTwist):
        reports.extend(_canonical_twist_reports(e, n, q, facts_of))
    else:
        reports.extend(_power_shape_reports(e, n, p, q, facts_of))

    if flag_context is not None:
        reports.append(_flag_twist_report(e, n, p, q, facts_of, flag_context))

    if conjectural:
        k11 = fs.min_k_for_tuple_size(s_req)
        reports.append(
            _report(
                "conjectural_mixed_degree",
                "conjectural mixed-degree vanishing for (k, s)-positive bundles "
                "(unproven; enabled explicitly)",
                [
                    (
                        f"a (k, s)-positivity fact with s >= min(n - q + 1, r) = "
                        f"{s_req} is available",
                        k11 is not None,
                    ),
                    (
                        f"p + q > n + k (k = {k11})",
                        k11 is not None and p + q > n + k11,
                    ),
                ],
                f"H^({p},{q})(X, E) = 0",
                conjectural=True,
            )
        )

    return reports


def _canonical_twist_reports(e: CanonicalTwist, n, q, facts_of):
    reports = []
    factors = _flatten_tensor(e.inner)
    principal, det_powers, semis = _split_factors(factors, facts_of)

    if len(principal) == 1 and not semis and len(det_powers) == 1:
        base = principal[0]
        det_base, power = next(iter(det_powers.items()))
        if det_base == base and power == 1:
            kb = facts_of(base).min_griffiths()
            rb = rank_of(base)
            reports.append(
                _report(
                    "canonical_det_twist",
                    "canonical det-twist vanishing: K (x) E (x) det E",
                    [
                        ("base bundle has a Griffiths k-positive fact", kb is not None),
                        (f"rank >= 2 (rank = {rb})", rb >= 2),
                        (f"q > k (k = {kb})", kb is not None and q > kb),
                    ],
                    f"H^{q}(X, K (x) E (x) det E) = 0",
                )
            )

    if len(principal) == 1 and isinstance(principal[0], Dual) and not semis:
        base = principal[0].inner
        power = 0
        consistent = len(det_powers) <= 1
        for det_base, j in det_powers.items():
            if det_base != base:
                consistent = False
            power = j
        if consistent and power >= 1:
            kb = facts_of(base).min_griffiths()
            rb = rank_of(base)
            s_req = min(n - q + 1, rb)
            reports.append(
                _report(
                    "canonical_dual_det_twist",
                    "canonical dual det-twist vanishing: K (x) E* (x) (det E)^s",
                    [
                        ("base bundle has a Griffiths k-positive fact", kb is not None),
                        (f"rank >= 2 (rank = {rb})", rb >= 2),
                        (f"q > k (k = {kb})", kb is not None and q > kb),
                        (
                            f"s >= min(n - q + 1, r) = {s_req} (s = {power})",
                            power >= s_req,
                        ),
                    ],
                    f"H^{q}(X, K (x) E* (x) (det E)^{power}) = 0",
                )
            )
    return reports


def _power_shape_reports(e, n, p, q, facts_of):
    reports = []
    factors = _flatten_tensor(e)
    principal, det_powers, semis = _split_factors(factors, facts_of)
    if len(principal) != 1:
        return reports
    head = principal[0]

    if isinstance(head, Schur):
        base = head.inner
        rb = rank_of(base)
        a = head.weight
        kb = facts_of(base).min_griffiths()
        h = sum(1 for x in a if x > 0)
        shape_ok = (
            len(a) == rb
            and all(x >= 0 for x in a)
            and a[-1] == 0
            and 1 <= h <= rb - 1
        )
        power = sum(
            j for det_base, j in det_powers.items() if det_base == base
        )
        stray = any(det_base != base for det_base in det_powers)
        reports.append(
            _report(
                "schur_det_twist_top",
                "top-degree vanishing for Schur powers with full det twist",
                [
                    (
                        "Schur weight has shape a_1 >= ... >= a_h > a_{h+1} = ... "
                        f"= a_r = 0 (weight {list(a)})",
                        shape_ok,
                    ),
                    (
                        f"det twist power equals the number of positive entries "
                        f"h = {h} (power = {power})",
                        not stray and power == h,
                    ),
                    ("base bundle has a Griffiths k-positive fact", kb is not None),
                    ("remaining line factors are semipositive", True),
                    ("p equals the base dimension", p == n),
                    (f"q > k (k = {kb})", kb is not None and q > kb),
                ],
                f"H^({n},{q})(X, Schur(E) (x) (det E)^{power} (x) B) = 0",
            )
        )
        return reports

    base = head.inner if isinstance(head, TensorPow) else head
    l_power = head.power if isinstance(head, TensorPow) else 1
    if isinstance(base, (Atom, Dual, Tensor, DetTwist, CanonicalTwist, SymPow, WedgePow)):
        rb = rank_of(base)
        kb = facts_of(base).min_griffiths()
        m_power = sum(j for det_base, j in det_powers.items() if det_base == base)
        stray = any(det_base != base for det_base in det_powers)
        reports.append(
            _report(
                "tensor_power_det_twist",
                "vanishing for tensor powers with large det twist",
                [
                    (f"tensor power l >= 1 (l = {l_power})", l_power >= 1),
                    (
                        f"det twist power m >= n - p + r - 1 = {n - p + rb - 1} "
                        f"(m = {m_power})",
                        not stray and m_power >= n - p + rb - 1,
                    ),
                    ("base bundle has a Griffiths k-positive fact", kb is not None),
                    ("remaining line factors are semipositive", True),
                    (
                        f"p + q > n + k (k = {kb})",
                        kb is not None and p + q > n + kb,
                    ),
                ],
                f"H^({p},{q})(X, E^(x{l_power}) (x) (det E)^{m_power} (x) B) = 0",
            )
        )
    return reports


def _flag_twist_report(e, n, p, q, facts_of, ctx: FlagContext):
    s = validate_flag(ctx.flag)
    a_s = BlockWeight(tuple(ctx.block_weight), s)
    n_s = flag_dimension(s)
    u = tuple(int(x) for x in ctx.weight)
    expected = tuple(
        x + y for x, y in zip(expand_block_weight(a_s), u)
    )

    factors = _flatten_tensor(e)
    principal, det_powers, semis = _split_factors(factors, facts_of)
    schur = principal[0] if len(principal) == 1 and isinstance(principal[0], Schur) else None
    weight_matches = schur is not None and schur.weight == expected and not det_powers
    kb = facts_of(schur.inner).min_griffiths() if schur is not None else None

    membership = False
    if 0 <= p <= n_s:
        membership = any(w == u for w, _ in exterior_weights(s, p).terms)
    cond_ok, _trace = check_block_gap_condition(a_s, p) if 0 <= p <= n_s else (False, [])

    return _report(
        "flag_weight_twist",
        "flag-weight twisted vanishing beyond the flag dimension",
        [
            (
                "coefficient is Schur(E) with weight expand(a_s) + u "
                f"({list(expected)})",
                weight_matches,
            ),
            (
                f"u is a weight of the degree-{p} exterior power of the flag "
                "cotangent space",
                membership,
            ),
            ("block weight satisfies the per-block gap condition", cond_ok),
            ("base bundle has a Griffiths k-positive fact", kb is not None),
            (
                f"p + q > n + k + N_s (k = {kb}, N_s = {n_s})",
                kb is not None and p + q > n + kb + n_s,
            ),
        ],
        f"H^{q}(X, Omega^{p}(Schur(E) (x) B)) = 0",
    )


# --------------------------------------------------------------------------
# gap condition, rewrite, product spaces
# --------------------------------------------------------------------------


def check_block_gap_condition(a_s: BlockWeight, p: int) -> tuple[bool, list[dict]]:
    """Per-adjacent-block gap inequalities on a block weight at exterior
    degree p: drop >= 1 at the top degree, otherwise drop >= the stated
    minimum of three bounds."""
    s = a_s.flag
    r = s[-1]
    n_s = flag_dimension(s)
    if not 0 <= p <= n_s:
        raise InvalidInputError(f"degree {p} outside 0..{n_s}")
    trace = []
    ok = True
    for j in range(1, len(s) - 1):
        drop = a_s.entries[j - 1] - a_s.entries[j]
        if p == n_s:
            bound = 1
        else:
            bound = min(
                p,
                n_s - p + (s[j + 1] - s[j]) - 1,
                r + 1 - (s[j + 1] - s[j - 1]),
            )
        good = drop >= bound
        ok = ok and good
        trace.append(
            {"block_pair": (j, j + 1), "drop": drop, "bound": bound, "ok": good}
        )
    return ok, trace


@dataclass(frozen=True)
class GlpsdTerm:
    weight: Weight
    multiplicity: int
    dominant: bool
    bott_kind: str  # "single" | "zero"
    descriptor: str

    def to_json(self) -> dict:
        out = {
            "weight": list(self.weight),
            "multiplicity": self.multiplicity,
            "dominant": self.dominant,
            "bott": self.bott_kind,
            "descriptor": self.descriptor,
        }
        if not self.dominant:
            out["warning"] = "non-dominant weight reported raw"
        return out


@dataclass(frozen=True)
class RewriteResult:
    flag: FlagType
    block_weight: tuple
    base_degree: int
    fiber_degree: int
    condition_ok: bool
    condition_trace: tuple
    terms: tuple

    def to_json(self) -> dict:
        return {
            "flag": list(self.flag),
            "block_weight": list(self.block_weight),
            "p": self.base_degree,
            "t": self.fiber_degree,
            "condition_ok": self.condition_ok,
            "condition_trace": list(self.condition_trace),
            "hypothesis_met": self.condition_ok,
            "terms": [t.to_json() for t in self.terms],
        }


def glpsd_rewrite(s, a_s: BlockWeight, p: int, t: int) -> RewriteResult:
    """Trade flag-bundle cohomology for base groups with Schur coefficients.

    Pairs the exterior weights of fiber degree t with the expanded block
    weight; emits one term per weight with its multiplicity and dominance
    status.  The per-block gap condition is evaluated at degree t and
    reported; when it fails the rewrite is still emitted, marked as
    hypothesis-unmet.  Nothing is dropped: non-dominant combinations are
    reported raw with a warning rather than silently straightened.
    """
    s = validate_flag(s)
    if a_s.flag != s:
        raise InvalidInputError("block weight does not live on the given flag")
    n_s = flag_dimension(s)
    if not 0 <= t <= n_s:
        raise InvalidInputError(f"fiber degree {t} outside 0..{n_s}")
    r = s[-1]
    a = expand_block_weight(a_s)
    cond_ok, trace = check_block_gap_condition(a_s, t)
    terms = []
    for u, mult in exterior_weights(s, t).terms:
        w = tuple(x + y for x, y in zip(a, u))
        res = bott_cohomology(w, r)
        terms.append(
            GlpsdTerm(
                weight=w,
                multiplicity=mult,
                dominant=is_dominant(w),
                bott_kind=res.kind,
                descriptor=f"H^q(X, Omega^{p}(Gamma^{list(w)} E (x) B))",
            )
        )
    return RewriteResult(
        flag=s,
        block_weight=a_s.entries,
        base_degree=p,
        fiber_degree=t,
        condition_ok=cond_ok,
        condition_trace=tuple(trace),
        terms=tuple(terms),
    )


def projective_twisted_hodge(d: int, a: int) -> list[list[int]]:
    """Table h[p][q] of the degree-q groups of the p-th cotangent power of
    d-dimensional projective space twisted by the degree-a line bundle."""
    if d < 0:
        raise InvalidInputError("projective dimension must be >= 0")
    r = d + 1
    if d == 0:
        return [[1]]
    s = (0, 1, r)
    line = expand_block_weight(BlockWeight((a, 0), s))
    table = [[0] * (d + 1) for _ in range(d + 1)]
    for p in range(d + 1):
        for u, mult in exterior_weights(s, p).terms:
            w = tuple(x + y for x, y in zip(line, u))
            res = bott_cohomology(w, r)
            if not res.is_zero and res.degree <= d:
                table[p][res.degree] += mult * res.dimension
    return table


def product_projective_cohomology(dims, twists) -> list[list[int]]:
    """Hodge-type table of a product of two projective spaces with a split
    line bundle, by pairing the per-factor tables."""
    d1, d2 = (int(x) for x in dims)
    a1, a2 = (int(x) for x in twists)
    if d1 < 0 or d2 < 0:
        raise InvalidInputError("projective dimensions must be >= 0")
    t1 = projective_twisted_hodge(d1, a1)
    t2 = projective_twisted_hodge(d2, a2)
    n = d1 + d2
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for p1, q1 in itertools.product(range(d1 + 1), range(d1 + 1)):
        if t1[p1][q1] == 0:
            continue
        for p2, q2 in itertools.product(range(d2 + 1), range(d2 + 1)):
            if t2[p2][q2]:
                table[p1 + p2][q1 + q2] += t1[p1][q1] * t2[p2][q2]
    return table


# --------------------------------------------------------------------------
# expression grammar
# --------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<kstar>K\*)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"(?:<(?P<args>[^>]*)>)?(?P<decl>\{[^}]*\})?|(?P<star>\*)|(?P<lpar>\()|(?P<rpar>\)))"
)

_FUNCTIONS = {"dual", "det", "sym", "wedge", "schur", "pow"}


def parse_bundle_expr(text: str):
    """Parse the small expression grammar used by the CLI and service.

    Atoms declare facts in braces on first use: E{n=3,r=2,griffiths_k=1},
    B{line,semipositive}.  Operators: '*', dual(...), det(...), sym<p>(...),
    wedge<q>(...), schur<a1,a2,...>(...), pow<l>(...), and a leading 'K*'
    which twists the whole product by the canonical bundle.  Returns
    (expression, base_dimension or None).
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            remainder = text[pos:].strip()
            if not remainder:
                break
            raise InvalidInputError(f"cannot tokenize expression at {remainder!r}")
        tokens.append(m)
        pos = m.end()

    state = {"i": 0, "atoms": {}, "n": None}

    def peek():
        return tokens[state["i"]] if state["i"] < len(tokens) else None

    def advance():
        state["i"] += 1

    def parse_product():
        factors = [parse_factor()]
        while True:
            tok = peek()
            if tok is not None and tok.group("star"):
                advance()
                factors.append(parse_factor())
            else:
                break
        expr = factors[0]
        for f in factors[1:]:
            expr = Tensor(expr, f)
        return expr

    def parse_factor():
        tok = peek()
        if tok is None:
            raise InvalidInputError("unexpected end of expression")
        if tok.group("kstar"):
            advance()
            return CanonicalTwist(parse_product())
        if tok.group("lpar"):
            advance()
            inner = parse_product()
            closing = peek()
            if closing is None or not closing.group("rpar"):
                raise InvalidInputError("missing closing parenthesis")
            advance()
            return inner
        if tok.group("name"):
            name = tok.group("name")
            if name in _FUNCTIONS:
                advance()
                args = tok.group("args")
                opening = peek()
                if opening is None or not opening.group("lpar"):
                    raise InvalidInputError(f"{name} needs a parenthesized argument")
                advance()
                inner = parse_product()
                closing = peek()
                if closing is None or not closing.group("rpar"):
                    raise InvalidInputError("missing closing parenthesis")
                advance()
                return _apply_function(name, args, inner)
            advance()
            return parse_atom(name, tok.group("decl"))
        raise InvalidInputError(f"unexpected token {tok.group(0)!r}")

    def _apply_function(name, args, inner):
        if name == "dual":
            return Dual(inner)
        if name == "det":
            return Det(inner)
        if args is None:
            raise InvalidInputError(f"{name} needs <...> arguments")
        values = [int(x) for x in args.split(",") if x.strip() != ""]
        if name == "sym":
            return SymPow(inner, values[0])
        if name == "wedge":
            return WedgePow(inner, values[0])
        if name == "pow":
            return TensorPow(inner, values[0])
        if name == "schur":
            return Schur(inner, tuple(values))
        raise InvalidInputError(f"unknown function {name!r}")

    def parse_atom(name, decl):
        if decl is None:
            if name not in state["atoms"]:
                raise InvalidInputError(f"atom {name!r} used before declaration")
            return state["atoms"][name]
        if name in state["atoms"]:
            raise InvalidInputError(f"atom {name!r} declared twice")
        rank = 1
        line = False
        facts = []
        for part in decl[1:-1].split(","):
            part = part.strip()
            if not part:
                continue
            if "=" in part:
                key, value = (x.strip() for x in part.split("=", 1))
                if key == "n":
                    dim = int(value)
                    if state["n"] is not None and state["n"] != dim:
                        raise InvalidInputError("conflicting base dimensions declared")
                    state["n"] = dim
                elif key == "r":
                    rank = int(value)
                elif key == "griffiths_k":
                    facts.append(griffiths_fact(int(value)))
                elif key == "ks_positive":
                    k_str, s_str = value.split(":")
                    facts.append(
                        PositivityFact("ks_positive", k=int(k_str), s=int(s_str))
                    )
                elif key == "k_positive":
                    facts.append(PositivityFact("k_positive_line", k=int(value)))
                elif key == "k_ample":
                    facts.append(PositivityFact("k_ample", k=int(value)))
                else:
                    raise InvalidInputError(f"unknown atom field {key!r}")
            elif part == "line":
                line = True
            elif part == "nakano":
                facts.append(PositivityFact("nakano_positive"))
            elif part == "semipositive":
                facts.append(PositivityFact("semipositive_line"))
            elif part == "ample":
                facts.append(PositivityFact("ample_line"))
            else:
                raise InvalidInputError(f"unknown atom flag {part!r}")
        if line:
            rank = 1
        atom = Atom(name=name, rank=rank, facts=tuple(facts), line=line)
        state["atoms"][name] = atom
        return atom

    expr = parse_product()
    if state["i"] != len(tokens):
        raise InvalidInputError("trailing tokens in expression")
    return expr, state["n"]
