"""The pointwise curvature commutator on bundle-valued (p, q)-form coefficients.

In normal frames the commutator of the curvature with the metric
contraction acts on coefficient vectors u^alpha_{J,K} (J an increasing
p-subset, K an increasing q-subset of the base indices) by three sums:
one reshuffling the holomorphic indices, one the antiholomorphic
indices, minus a base-trace term.  Coefficients are stored for strictly
increasing multi-indices only; a term addressing a permuted index set
carries the sign of the sorting permutation.  The convention is pinned
by two identities: at p = n the first sum cancels the trace term, and
for diagonal line bundles the spectrum collapses to the ratio sums over
index subsets.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .curvature import CurvatureTensor, PositivityReport, check_ks_positive, check_nakano
from .errors import InvalidInputError

__all__ = [
    "FormBasis",
    "BKNOperator",
    "bkn_matrix",
    "bkn_top_degree_matrix",
    "bkn_line_eigenvalues",
    "crosscheck_line",
    "check_nakano_pointwise",
    "check_ks_top_degree_pointwise",
]


@dataclass(frozen=True)
class FormBasis:
    """Lexicographically ordered triples (J, K, alpha) indexing coefficients
    of bundle-valued (p, q)-forms."""

    n: int
    p: int
    q: int
    r: int
    triples: tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]

    @classmethod
    def build(cls, n: int, p: int, q: int, r: int) -> "FormBasis":
        if not (0 <= p <= n and 0 <= q <= n):
            raise InvalidInputError(f"degrees (p, q) = {(p, q)} outside 0..{n}")
        triples = tuple(
            (J, K, alpha)
            for J in itertools.combinations(range(n), p)
            for K in itertools.combinations(range(n), q)
            for alpha in range(r)
        )
        return cls(n=n, p=p, q=q, r=r, triples=triples)

    @property
    def size(self) -> int:
        return len(self.triples)


@dataclass(frozen=True)
class BKNOperator:
    basis: FormBasis
    matrix: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _insertion_sign(x: int, subset: tuple[int, ...]) -> int:
    """Sign of sorting (x, subset...) into increasing order; subset is sorted
    and must not contain x."""
    below = sum(1 for y in subset if y < x)
    return -1 if below % 2 else 1


def bkn_matrix(R: CurvatureTensor, p: int, q: int) -> BKNOperator:
    """Hermitian matrix of the commutator on (p, q)-coefficients.

    Three contributions: curvature acting through the holomorphic indices
    (coefficient with J = {k} u R' against J' = {j} u R'), through the
    antiholomorphic indices (K = {j} u S against K' = {k} u S), minus the
    base trace of the curvature on the diagonal.
    """
    n, r = R.n, R.r
    basis = FormBasis.build(n, p, q, r)
    index = {t: i for i, t in enumerate(basis.triples)}
    M = np.zeros((basis.size, basis.size), dtype=complex)

    ent = R.entries
    for rest in itertools.combinations(range(n), p - 1) if p >= 1 else ():
        free = [j for j in range(n) if j not in rest]
        for K in itertools.combinations(range(n), q):
            for k in free:
                J_row = tuple(sorted((k, *rest)))
                sgn_k = _insertion_sign(k, rest)
                for j in free:
                    J_col = tuple(sorted((j, *rest)))
                    sgn = sgn_k * _insertion_sign(j, rest)
                    for alpha in range(r):
                        row = index[(J_row, K, alpha)]
                        for beta in range(r):
                            col = index[(J_col, K, beta)]
                            M[row, col] += sgn * ent[alpha, beta, j, k]

    for rest in itertools.combinations(range(n), q - 1) if q >= 1 else ():
        free = [j for j in range(n) if j not in rest]
        for J in itertools.combinations(range(n), p):
            for j in free:
                K_row = tuple(sorted((j, *rest)))
                sgn_j = _insertion_sign(j, rest)
                for k in free:
                    K_col = tuple(sorted((k, *rest)))
                    sgn = sgn_j * _insertion_sign(k, rest)
                    for alpha in range(r):
                        row = index[(J, K_row, alpha)]
                        for beta in range(r):
                            col = index[(J, K_col, beta)]
                            M[row, col] += sgn * ent[alpha, beta, j, k]

    trace = np.einsum("abjj->ab", ent)
    for J in itertools.combinations(range(n), p):
        for K in itertools.combinations(range(n), q):
            for alpha in range(r):
                row = index[(J, K, alpha)]
                for beta in range(r):
                    col = index[(J, K, beta)]
                    M[row, col] -= trace[alpha, beta]

    M = 0.5 * (M + M.conj().T)
    return BKNOperator(basis=basis, matrix=M)


def bkn_top_degree_matrix(R: CurvatureTensor, q: int) -> BKNOperator:
    """Direct single-sum construction at p = n, where the holomorphic sum
    cancels the trace term.  Regression target for bkn_matrix(R, n, q)."""
    n, r = R.n, R.r
    basis = FormBasis.build(n, n, q, r)
    index = {t: i for i, t in enumerate(basis.triples)}
    M = np.zeros((basis.size, basis.size), dtype=complex)
    full = tuple(range(n))
    ent = R.entries
    for rest in itertools.combinations(range(n), q - 1) if q >= 1 else ():
        free = [j for j in range(n) if j not in rest]
        for j in free:
            K_row = tuple(sorted((j, *rest)))
            sgn_j = _insertion_sign(j, rest)
            for k in free:
                K_col = tuple(sorted((k, *rest)))
                sgn = sgn_j * _insertion_sign(k, rest)
                for alpha in range(r):
                    for beta in range(r):
                        M[index[(full, K_row, alpha)], index[(full, K_col, beta)]] += (
                            sgn * ent[alpha, beta, j, k]
                        )
    M = 0.5 * (M + M.conj().T)
    return BKNOperator(basis=basis, matrix=M)


def bkn_line_eigenvalues(nu, mu, p: int, q: int):
    """Closed-form spectrum for a line bundle diagonal in a coordinate
    system that also diagonalizes the base metric.

    Returns (entries, lower_bound) with one entry ((J, K), value) per pair
    of index subsets, value = sum of ratios over J plus over K minus the
    total, and the bound from the p + q smallest ratios.
    """
    nu = [float(x) for x in nu]
    mu = [float(x) for x in mu]
    if len(nu) != len(mu):
        raise InvalidInputError("nu and mu must have equal length")
    if any(m <= 0 for m in mu):
        raise InvalidInputError("base eigenvalues mu must be positive")
    n = len(nu)
    if not (0 <= p <= n and 0 <= q <= n):
        raise InvalidInputError(f"degrees (p, q) = {(p, q)} outside 0..{n}")
    ratios = [v / m for v, m in zip(nu, mu)]
    total = sum(ratios)
    entries = []
    for J in itertools.combinations(range(n), p):
        for K in itertools.combinations(range(n), q):
            val = sum(ratios[j] for j in J) + sum(ratios[j] for j in K) - total
            entries.append(((J, K), val))
    asc = sorted(ratios)
    bound = sum(asc[:p]) + sum(asc[:q]) - total
    return entries, bound


def crosscheck_line(nu, mu, p: int, q: int) -> float:
    """Maximum deviation between the matrix construction and the closed-form
    line-bundle spectrum, after rescaling coordinates by sqrt(mu) to reach
    a normal frame."""
    entries, _ = bkn_line_eigenvalues(nu, mu, p, q)
    ratios = [v / m for v, m in zip(nu, mu)]
    n = len(ratios)
    R = CurvatureTensor(
        n=n, r=1, entries=np.diag(ratios).astype(complex).reshape(1, 1, n, n)
    )
    spectrum = np.sort(bkn_matrix(R, p, q).eigenvalues())
    closed = np.sort([val for _, val in entries])
    return float(np.abs(spectrum - closed).max())


def check_nakano_pointwise(R: CurvatureTensor, q: int, tol: float = 1e-9) -> PositivityReport:
    """Positive-definiteness of the commutator on (n, q)-coefficients, gated
    on the strict flattened positivity of the tensor itself."""
    if not 1 <= q <= R.n:
        raise InvalidInputError(f"need 1 <= q <= n, got q={q}")
    gate = check_nakano(R, tol)
    op = bkn_matrix(R, R.n, q)
    ev = op.eigenvalues()
    min_eig = float(ev[0])
    hypothesis_met = not gate.refuted
    refuted = hypothesis_met and min_eig <= tol
    return PositivityReport(
        claim=f"commutator positive definite on (n, {q})-coefficients",
        verdict="refuted" if refuted else "not_refuted",
        samples_run=1,
        worst_min_eigenvalue=min_eig,
        worst_kernel_dim=int(np.count_nonzero(ev < tol)),
        seed=0,
        tolerance=tol,
        hypothesis={
            "check": "nakano",
            "met": hypothesis_met,
            "gate_min_eigenvalue": gate.worst_min_eigenvalue,
        },
        details={"q": q, "matrix_size": op.basis.size},
    )


def check_ks_top_degree_pointwise(
    R: CurvatureTensor,
    k: int,
    q: int,
    tol: float = 1e-9,
    samples: int = 100,
    seed: int = 0,
) -> PositivityReport:
    """Commutator positivity on (n, q)-coefficients for q > k, gated on a
    sampled (k, s)-positivity hypothesis with s = min(n - q + 1, r)."""
    if q <= k:
        raise InvalidInputError(f"need q > k, got q={q}, k={k}")
    if not q <= R.n:
        raise InvalidInputError(f"need q <= n, got q={q}, n={R.n}")
    s_req = min(R.n - q + 1, R.r)
    gate = check_ks_positive(R, k, s_req, samples=samples, tol=tol, seed=seed)
    op = bkn_matrix(R, R.n, q)
    ev = op.eigenvalues()
    min_eig = float(ev[0])
    hypothesis_met = not gate.refuted
    refuted = hypothesis_met and min_eig <= tol
    return PositivityReport(
        claim=f"commutator positive definite on (n, {q})-coefficients given "
        f"({k}, {s_req})-positivity",
        verdict="refuted" if refuted else "not_refuted",
        samples_run=gate.samples_run + 1,
        worst_min_eigenvalue=min_eig,
        worst_kernel_dim=int(np.count_nonzero(ev < tol)),
        seed=seed,
        tolerance=tol,
        hypothesis={
            "check": "ks_positive",
            "k": k,
            "s": s_req,
            "met": hypothesis_met,
        },
        details={"q": q, "positive_margin": min_eig},
    )
