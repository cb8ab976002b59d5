"""Pointwise hermitian curvature tensors in normal frames.

A tensor holds the coefficients R[alpha, beta, j, k] of a curvature form
at a single point, in frames where both metrics are the identity.  The
(k, s)-positivity checker restricts the form to sums of simple tensors
with fixed unit vectors on one side and eigensolves the result.  The
checker is a falsifier: randomized sampling can certify a refutation but
can never prove positivity, so verdicts are "refuted" / "not_refuted".

Kernel bookkeeping: a sample with a tuple of s' vectors restricts the
form to s' slots of the opposite space; the kernel bound applied is k
per slot (k * s' in total).  For single vectors this is the plain
"semipositive with kernel at most k" test; for larger tuples it is the
slot-wise bound that the tensor calculus of twists actually satisfies,
since a k-dimensional degenerate subspace on the base shows up once per
slot.  Deterministic basis-vector probes run on the fiber side so that
structured degeneracies (matrix-unit directions of homogeneous tensors)
are found without relying on luck.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateTupleError, GeneratorFailureError, InvalidInputError

__all__ = [
    "CurvatureTensor",
    "HermitianForm",
    "PositivityReport",
    "identity_tensor",
    "zero_tensor",
    "grassmannian_curvature",
    "eval_form",
    "restricted_form",
    "check_ks_positive",
    "check_nakano",
    "reevaluate_witness",
    "dual_curvature",
    "tensor_curvature",
    "det_curvature",
    "twist_det",
    "dual_twist",
    "pullback_curvature",
    "sample_griffiths_k",
    "sample_nakano_positive",
    "tensor_to_json",
    "tensor_from_json",
]

RNG_NAME = "philox"
_HERMITIAN_TOL = 1e-12
_INDEPENDENCE_TOL = 1e-10


@dataclass(frozen=True)
class CurvatureTensor:
    """Curvature coefficients R[alpha, beta, j, k] at a point, normal frames.

    alpha, beta index the fiber (rank r), j, k the base (dimension n).
    Hermitian symmetry R[a, b, j, k] == conj(R[b, a, k, j]) is enforced
    at construction.
    """

    n: int
    r: int
    entries: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=complex)
        if arr.shape != (self.r, self.r, self.n, self.n):
            raise InvalidInputError(
                f"entries shape {arr.shape} != (r, r, n, n) = "
                f"{(self.r, self.r, self.n, self.n)}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)
        mirrored = np.conj(np.transpose(arr, (1, 0, 3, 2)))
        scale = max(1.0, float(np.abs(arr).max()))
        if np.abs(arr - mirrored).max() > _HERMITIAN_TOL * scale:
            raise InvalidInputError("tensor is not hermitian-symmetric")


@dataclass(frozen=True)
class HermitianForm:
    """A hermitian matrix with eigenvalues computed on demand (ascending)."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise InvalidInputError(f"matrix shape {m.shape} != ({self.dim}, {self.dim})")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > 1e-12 * scale:
            raise InvalidInputError("form matrix is not hermitian")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of a sampling run against a positivity claim."""

    claim: str
    verdict: str  # "refuted" | "not_refuted"
    samples_run: int
    worst_min_eigenvalue: float
    worst_kernel_dim: int
    seed: int
    tolerance: float
    generator: str = RNG_NAME
    witness: Optional[dict] = None
    hypothesis: Optional[dict] = None
    details: dict = field(default_factory=dict)

    @property
    def refuted(self) -> bool:
        return self.verdict == "refuted"

    def to_json(self) -> dict:
        out = {
            "claim": self.claim,
            "verdict": self.verdict,
            "samples_run": self.samples_run,
            "worst_min_eigenvalue": self.worst_min_eigenvalue,
            "worst_kernel_dim": self.worst_kernel_dim,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "generator": self.generator,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.hypothesis is not None:
            out["hypothesis"] = self.hypothesis
        if self.details:
            out["details"] = self.details
        return out


def identity_tensor(n: int, r: int) -> CurvatureTensor:
    """R[a, b, j, k] = delta_ab delta_jk; the standard strictly positive tensor."""
    eye = np.einsum("ab,jk->abjk", np.eye(r), np.eye(n)).astype(complex)
    return CurvatureTensor(n=n, r=r, entries=eye)


def zero_tensor(n: int, r: int) -> CurvatureTensor:
    return CurvatureTensor(n=n, r=r, entries=np.zeros((r, r, n, n), dtype=complex))


def grassmannian_curvature(n: int, d: int) -> CurvatureTensor:
    """Curvature of the tangent bundle of the Grassmannian of codimension-d
    subspaces of C^n, in the homogeneous metric.

    Base and fiber are both d*(n-d)-dimensional; an index flattens the pair
    (i, p) with 0 <= i < d, 0 <= p < n-d as i*(n-d) + p.  The nonzero
    entries come from the two delta patterns of the homogeneous curvature.
    """
    if not 1 <= d <= n - 1:
        raise InvalidInputError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    e = n - d
    dim = d * e
    R = np.zeros((dim, dim, dim, dim), dtype=complex)
    for a1 in range(d):
        for a2 in range(e):
            al = a1 * e + a2
            for b1 in range(d):
                for b2 in range(e):
                    be = b1 * e + b2
                    for j1 in range(d):
                        for j2 in range(e):
                            jj = j1 * e + j2
                            for k1 in range(d):
                                for k2 in range(e):
                                    kk = k1 * e + k2
                                    val = 0.0
                                    if j1 == k1 and a1 == b1 and j2 == b2 and k2 == a2:
                                        val += 1.0
                                    if j1 == b1 and k1 == a1 and j2 == k2 and a2 == b2:
                                        val += 1.0
                                    if val:
                                        R[al, be, jj, kk] = val
    return CurvatureTensor(n=dim, r=dim, entries=R)


def eval_form(R: CurvatureTensor, simple_tensors) -> float:
    """Value of the curvature form on u = sum_t xi_t (x) v_t.

    Each pair is (xi, v) with xi of length n and v of length r.  The
    hermitian symmetry forces a real value; the imaginary part is checked
    to be negligible and dropped.
    """
    u = np.zeros((R.r, R.n), dtype=complex)
    for xi, v in simple_tensors:
        xi = np.asarray(xi, dtype=complex)
        v = np.asarray(v, dtype=complex)
        if xi.shape != (R.n,) or v.shape != (R.r,):
            raise InvalidInputError(
                f"simple tensor shapes {xi.shape}, {v.shape} do not match (n, r) = "
                f"({R.n}, {R.r})"
            )
        u += np.outer(v, xi)
    val = complex(np.einsum("abjk,aj,bk->", R.entries, u, u.conj()))
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise AssertionError(f"form value not real: {val}")
    return float(val.real)


def _tuple_matrix(vectors, dim: int) -> np.ndarray:
    V = np.asarray(vectors, dtype=complex)
    if V.ndim != 2 or V.shape[1] != dim:
        raise InvalidInputError(f"tuple shape {V.shape} does not match dimension {dim}")
    svals = np.linalg.svd(V, compute_uv=False)
    if svals[-1] <= _INDEPENDENCE_TOL * max(1.0, svals[0]):
        raise DegenerateTupleError("restricting tuple is linearly dependent")
    return V


def restricted_form(R: CurvatureTensor, v_tuple, side: str) -> HermitianForm:
    """Restrict the curvature form to sums of simple tensors with the given
    fixed vectors on one side.

    side="fiber_vectors": the tuple lives in the fiber; the form acts on
    s copies of the base tangent space (slot-major index (t, j)).
    side="base_vectors": mirrored, form on s copies of the fiber.
    Linearly dependent tuples are rejected: they force an artificial
    kernel of the restriction map itself.
    """
    if side == "fiber_vectors":
        V = _tuple_matrix(v_tuple, R.r)
        q = np.einsum("abjk,ta,ub->tjuk", R.entries, V, V.conj())
        s = V.shape[0]
        mat = q.reshape(s * R.n, s * R.n)
    elif side == "base_vectors":
        X = _tuple_matrix(v_tuple, R.n)
        q = np.einsum("abjk,tj,uk->taub", R.entries, X, X.conj())
        s = X.shape[0]
        mat = q.reshape(s * R.r, s * R.r)
    else:
        raise InvalidInputError(f"unknown side {side!r}")
    mat = 0.5 * (mat + mat.conj().T)
    return HermitianForm(dim=mat.shape[0], matrix=mat)


def _complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _orthonormal_tuples(rng: np.random.Generator, count: int, size: int, dim: int) -> np.ndarray:
    """Stack of `count` tuples of `size` orthonormal vectors in C^dim
    (rotation-invariant Gaussian, then QR); shape (count, size, dim)."""
    g = _complex_gaussian(rng, (count, dim, size))
    q = np.linalg.qr(g)[0]
    return np.transpose(q, (0, 2, 1))


def _philox(seed: int, *stream) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def _encode_vectors(V: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in V]


def _decode_vectors(data) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def check_ks_positive(
    R: CurvatureTensor,
    k: int,
    s: int,
    samples: int = 500,
    tol: float = 1e-9,
    seed: int = 0,
) -> PositivityReport:
    """Sampled test of (k, s)-positivity.

    Fiber side: tuples of every size 1..s (deterministic basis probes at
    size 1, then `samples` seeded orthonormal tuples per size).  Base
    side: single unit vectors.  A sample refutes when its form has an
    eigenvalue below -tol or more than k * (tuple size) eigenvalues
    below tol.  Sample streams depend only on (seed, side, size, index),
    never on k, so refutations are monotone in k and s.
    """
    if not 1 <= s <= R.r:
        raise InvalidInputError(f"tuple size s={s} outside 1..rank={R.r}")
    if samples < 1:
        raise InvalidInputError("need at least one sample")

    worst_min = np.inf
    worst_kernel = 0
    witness = None
    run = 0
    refuted = False

    def _forms(tuples: np.ndarray, side: str) -> np.ndarray:
        if side == "fiber_vectors":
            q = np.einsum("abjk,xta,xub->xtjuk", R.entries, tuples, tuples.conj())
        else:
            q = np.einsum("abjk,xtj,xuk->xtaub", R.entries, tuples, tuples.conj())
        count, size = tuples.shape[0], tuples.shape[1]
        dim = q.shape[2] * size
        mats = q.reshape(count, dim, dim)
        return 0.5 * (mats + np.conj(np.transpose(mats, (0, 2, 1))))

    def sweep(tuples: np.ndarray, side: str, label: str):
        nonlocal worst_min, worst_kernel, witness, run, refuted
        size = tuples.shape[1]
        mats = _forms(tuples, side)
        evs = np.linalg.eigvalsh(mats)
        run += tuples.shape[0]
        min_eigs = evs[:, 0]
        kernels = np.count_nonzero(evs < tol, axis=1)
        worst_min = min(worst_min, float(min_eigs.min()))
        worst_kernel = max(worst_kernel, int(kernels.max()))
        bad = (min_eigs < -tol) | (kernels > k * size)
        if bad.any():
            refuted = True
            if witness is None:
                idx = int(np.argmax(bad))
                vecs = np.linalg.eigh(mats[idx])[1]
                witness = {
                    "side": side,
                    "label": f"{label}-{idx}",
                    "vectors": _encode_vectors(tuples[idx]),
                    "min_eigenvalue": float(min_eigs[idx]),
                    "kernel_dim": int(kernels[idx]),
                    "kernel_bound": k * size,
                    "eigenvector": _encode_vectors(vecs[:, :1].T),
                }

    basis = np.eye(R.r, dtype=complex)[:, None, :]
    sweep(basis, "fiber_vectors", "fiber-basis")
    for size in range(1, s + 1):
        rng = _philox(seed, 1, size)
        sweep(
            _orthonormal_tuples(rng, samples, size, R.r),
            "fiber_vectors",
            f"fiber-{size}",
        )
    rng = _philox(seed, 2, 1)
    sweep(_orthonormal_tuples(rng, samples, 1, R.n), "base_vectors", "base-1")

    return PositivityReport(
        claim=f"restricted forms semipositive with kernel at most {k} per slot "
        f"(tuple sizes up to {s})",
        verdict="refuted" if refuted else "not_refuted",
        samples_run=run,
        worst_min_eigenvalue=float(worst_min),
        worst_kernel_dim=worst_kernel,
        seed=seed,
        tolerance=tol,
        witness=witness,
        details={"k": k, "s": s, "kernel_bound_rule": "k per tuple slot"},
    )


def reevaluate_witness(R: CurvatureTensor, report: PositivityReport) -> bool:
    """Re-run a refutation witness; True iff it still violates the claim."""
    if report.witness is None:
        return False
    V = _decode_vectors(report.witness["vectors"])
    form = restricted_form(R, V, report.witness["side"])
    ev = form.eigenvalues()
    kernel = int(np.count_nonzero(ev < report.tolerance))
    return bool(
        ev[0] < -report.tolerance or kernel > report.witness["kernel_bound"]
    )


def check_nakano(R: CurvatureTensor, tol: float = 1e-9) -> PositivityReport:
    """Exact strict-positivity test on all of TX (x) E: flatten to the
    (n r) x (n r) hermitian matrix and eigensolve.  No sampling."""
    flat = np.transpose(R.entries, (0, 2, 1, 3)).reshape(R.r * R.n, R.r * R.n)
    flat = 0.5 * (flat + flat.conj().T)
    ev = np.linalg.eigvalsh(flat)
    min_eig = float(ev[0])
    refuted = min_eig <= tol
    return PositivityReport(
        claim="curvature form positive definite on all tensors",
        verdict="refuted" if refuted else "not_refuted",
        samples_run=1,
        worst_min_eigenvalue=min_eig,
        worst_kernel_dim=int(np.count_nonzero(ev < tol)),
        seed=0,
        tolerance=tol,
        details={"check": "nakano", "spectrum_min": min_eig},
    )


def dual_curvature(R: CurvatureTensor) -> CurvatureTensor:
    """Curvature of the dual bundle: R'[a, b, j, k] = -R[b, a, j, k]."""
    return CurvatureTensor(n=R.n, r=R.r, entries=-np.transpose(R.entries, (1, 0, 2, 3)))


def tensor_curvature(R_E: CurvatureTensor, R_F: CurvatureTensor) -> CurvatureTensor:
    """Curvature of a tensor product: R_E (x) Id_F + Id_E (x) R_F, fiber
    index pairs flattened as (alpha_E, alpha_F)."""
    if R_E.n != R_F.n:
        raise InvalidInputError(
            f"base dimensions differ: {R_E.n} != {R_F.n}"
        )
    n = R_E.n
    rE, rF = R_E.r, R_F.r
    out = np.einsum("abjk,mn->ambnjk", R_E.entries, np.eye(rF)) + np.einsum(
        "ab,mnjk->ambnjk", np.eye(rE), R_F.entries
    )
    return CurvatureTensor(n=n, r=rE * rF, entries=out.reshape(rE * rF, rE * rF, n, n))


def det_curvature(R: CurvatureTensor) -> np.ndarray:
    """Fiber trace: the n x n curvature matrix of the determinant bundle."""
    return np.einsum("aajk->jk", R.entries)


def twist_det(R: CurvatureTensor, m: int) -> CurvatureTensor:
    """Curvature of E (x) (det E)^m: add m copies of the fiber trace along
    the fiber identity."""
    tr = det_curvature(R)
    out = R.entries + m * np.einsum("ab,jk->abjk", np.eye(R.r), tr)
    return CurvatureTensor(n=R.n, r=R.r, entries=out)


def dual_twist(R: CurvatureTensor, s: int) -> CurvatureTensor:
    """Curvature of E* (x) (det E)^s: s copies of the fiber trace minus the
    fiber-transposed tensor."""
    tr = det_curvature(R)
    out = s * np.einsum("ab,jk->abjk", np.eye(R.r), tr) - np.transpose(
        R.entries, (1, 0, 2, 3)
    )
    return CurvatureTensor(n=R.n, r=R.r, entries=out)


def pullback_curvature(R: CurvatureTensor, jac: np.ndarray) -> CurvatureTensor:
    """Pull back along a map with the given differential.

    jac has n rows (target) and m columns (source); the result lives on an
    m-dimensional base: R'[a, b, p, q] = sum R[a, b, j, k] jac[j, p] conj(jac[k, q]).
    """
    jac = np.asarray(jac, dtype=complex)
    if jac.ndim != 2 or jac.shape[0] != R.n:
        raise InvalidInputError(
            f"jacobian shape {jac.shape} does not have {R.n} rows"
        )
    out = np.einsum("abjk,jp,kq->abpq", R.entries, jac, jac.conj())
    return CurvatureTensor(n=jac.shape[1], r=R.r, entries=out)


def _rank_one_term(c: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return c * np.einsum("a,b,j,k->abjk", a, a.conj(), b, b.conj())


def sample_griffiths_k(n: int, r: int, k: int, seed: int = 0) -> CurvatureTensor:
    """Seeded tensor whose single-fiber-vector restricted forms are PSD with
    kernel exactly the last k base directions.

    Built as a positive combination of rank-one terms a (x) b with every b
    supported on the first n - k base coordinates.  One term per (fiber
    basis vector, base coordinate <= n - k) pins the kernel for every
    nonzero fiber vector; extra random terms break symmetry.  The output
    is verified with the sampling checker before being returned; on
    failure the construction retries with a stepped seed.
    """
    if not 0 <= k < n:
        raise InvalidInputError(f"need 0 <= k < n, got k={k}, n={n}")
    for attempt in range(8):
        rng = _philox(seed + attempt, 3)
        R = np.zeros((r, r, n, n), dtype=complex)
        for alpha in range(r):
            for j in range(n - k):
                a = np.zeros(r, dtype=complex)
                a[alpha] = 1.0
                b = np.zeros(n, dtype=complex)
                b[j] = 1.0
                R += _rank_one_term(rng.uniform(0.5, 1.5), a, b)
        for _ in range(2 * max(n, r)):
            a = _complex_gaussian(rng, r)
            b = np.zeros(n, dtype=complex)
            b[: n - k] = _complex_gaussian(rng, n - k)
            R += _rank_one_term(rng.uniform(0.5, 1.5), a, b)
        # exact hermitian symmetrization: adding the conjugate mirror and
        # halving are both exact floating-point operations
        R = 0.5 * (R + np.conj(np.transpose(R, (1, 0, 3, 2))))
        tensor = CurvatureTensor(n=n, r=r, entries=R)
        report = check_ks_positive(
            tensor, k, 1, samples=32, tol=1e-9, seed=seed + attempt
        )
        if not report.refuted:
            return tensor
    raise GeneratorFailureError(
        f"failed to generate a verified sample for (n={n}, r={r}, k={k})"
    )


def sample_nakano_positive(n: int, r: int, seed: int = 0) -> CurvatureTensor:
    """Seeded strictly positive tensor: a Gram matrix plus a small identity
    on the flattened space, reshaped back to four indices."""
    rng = _philox(seed, 4)
    dim = n * r
    g = _complex_gaussian(rng, (dim, dim))
    flat = g @ g.conj().T + 0.1 * np.eye(dim)
    R = flat.reshape(r, n, r, n).transpose(0, 2, 1, 3)
    return CurvatureTensor(n=n, r=r, entries=R)


def tensor_to_json(R: CurvatureTensor) -> dict:
    """Serialize with 0-based indices; zero entries are omitted."""
    entries = []
    for a in range(R.r):
        for b in range(R.r):
            for j in range(R.n):
                for k in range(R.n):
                    z = R.entries[a, b, j, k]
                    if z != 0:
                        entries.append([a, b, j, k, float(z.real), float(z.imag)])
    return {"n": R.n, "r": R.r, "entries": entries}


def tensor_from_json(data: dict) -> CurvatureTensor:
    """Load a tensor, enforcing exact hermitian pairing: every listed entry
    must come with its conjugate partner (b, a, k, j), and the pair must
    match exactly; unlisted entries are zero."""
    try:
        n = int(data["n"])
        r = int(data["r"])
        raw = data["entries"]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed tensor document: {exc}") from exc
    listed: dict[tuple[int, int, int, int], complex] = {}
    for item in raw:
        if len(item) != 6:
            raise InvalidInputError(f"entry {item} must be [a, b, j, k, re, im]")
        a, b, j, k = (int(x) for x in item[:4])
        if not (0 <= a < r and 0 <= b < r and 0 <= j < n and 0 <= k < n):
            raise InvalidInputError(f"entry {item} indices out of range")
        if (a, b, j, k) in listed:
            raise InvalidInputError(f"duplicate entry for index {(a, b, j, k)}")
        listed[(a, b, j, k)] = complex(float(item[4]), float(item[5]))
    R = np.zeros((r, r, n, n), dtype=complex)
    for (a, b, j, k), z in listed.items():
        partner = (b, a, k, j)
        if partner not in listed:
            raise InvalidInputError(
                f"entry {(a, b, j, k)} lacks its conjugate partner {partner}"
            )
        if listed[partner] != z.conjugate():
            raise InvalidInputError(
                f"entries {(a, b, j, k)} and {partner} are not conjugate"
            )
        R[a, b, j, k] = z
    return CurvatureTensor(n=n, r=r, entries=R)
