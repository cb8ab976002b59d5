import json

import numpy as np
import pytest

from flagvanish.curvature import (
    CurvatureTensor,
    check_ks_positive,
    check_nakano,
    det_curvature,
    dual_curvature,
    dual_twist,
    eval_form,
    grassmannian_curvature,
    identity_tensor,
    pullback_curvature,
    reevaluate_witness,
    restricted_form,
    sample_griffiths_k,
    sample_nakano_positive,
    tensor_curvature,
    tensor_from_json,
    tensor_to_json,
    twist_det,
    zero_tensor,
)
from flagvanish.errors import DegenerateTupleError, InvalidInputError


def _crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _rank_one_fiber_vector(rng, d, e):
    a = _crandn(rng, d)
    b = _crandn(rng, e)
    v = np.outer(a, b).ravel()
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------- tensors


def test_grassmannian_smallest_case():
    g = grassmannian_curvature(2, 1)
    assert g.n == g.r == 1
    assert g.entries[0, 0, 0, 0] == 2


def test_grassmannian_invalid_codimension():
    with pytest.raises(InvalidInputError):
        grassmannian_curvature(3, 3)


def test_grassmannian_two_sum_identity():
    # the form on a simple tensor equals the pair of row/column overlap sums
    rng = np.random.default_rng(1)
    for n, d in [(4, 2), (5, 2), (5, 3)]:
        e = n - d
        g = grassmannian_curvature(n, d)
        for _ in range(20):
            xi = _crandn(rng, d * e)
            v = _crandn(rng, d * e)
            val = eval_form(g, [(xi, v)])
            X, V = xi.reshape(d, e), v.reshape(d, e)
            closed = np.sum(np.abs(X @ V.conj().T) ** 2) + np.sum(
                np.abs(X.T @ V.conj()) ** 2
            )
            assert abs(val - closed) <= 1e-10 * max(1.0, abs(closed))


def test_eval_form_zero_and_unit():
    g = grassmannian_curvature(4, 2)
    zero = np.zeros(4, dtype=complex)
    assert eval_form(g, [(zero, zero)]) == 0.0
    e11 = np.array([1, 0, 0, 0], dtype=complex)
    assert eval_form(g, [(e11, e11)]) == pytest.approx(2.0)


def test_eval_form_positive_on_nakano_sample():
    R = sample_nakano_positive(3, 2, seed=5)
    rng = np.random.default_rng(2)
    for _ in range(25):
        u = [(_crandn(rng, 3), _crandn(rng, 2)) for _ in range(2)]
        assert eval_form(R, u) > 0


def test_restricted_form_grassmannian_kernel():
    g = grassmannian_curvature(4, 2)
    v = np.array([1, 0, 0, 0], dtype=complex)
    form = restricted_form(g, [v], "fiber_vectors")
    evs = form.eigenvalues()
    assert np.allclose(sorted(evs), [0, 1, 1, 2], atol=1e-12)


def test_restricted_form_scaling():
    g = grassmannian_curvature(4, 2)
    rng = np.random.default_rng(3)
    v = _crandn(rng, 4)
    base = restricted_form(g, [v], "fiber_vectors").eigenvalues()
    scaled = restricted_form(g, [2.5j * v], "fiber_vectors").eigenvalues()
    assert np.allclose(scaled, abs(2.5j) ** 2 * base)


def test_restricted_form_identity_tensor():
    R = identity_tensor(3, 4)
    rng = np.random.default_rng(4)
    V = np.linalg.qr(_crandn(rng, 4, 2))[0].T
    form = restricted_form(R, V, "fiber_vectors")
    assert np.allclose(form.matrix, np.eye(6))


def test_restricted_form_rejects_dependent_tuple():
    R = identity_tensor(3, 3)
    v = np.array([1, 0, 0], dtype=complex)
    with pytest.raises(DegenerateTupleError):
        restricted_form(R, [v, 2 * v], "fiber_vectors")


def test_restricted_form_unitary_rotation_invariance():
    # rotating the tuple within its span is a unitary congruence: the
    # spectrum cannot move
    rng = np.random.default_rng(6)
    R = sample_nakano_positive(3, 4, seed=9)
    V = np.linalg.qr(_crandn(rng, 4, 2))[0][:, :2].T
    U = np.linalg.qr(_crandn(rng, 2, 2))[0]
    before = restricted_form(R, V, "fiber_vectors").eigenvalues()
    after = restricted_form(R, U @ V, "fiber_vectors").eigenvalues()
    assert np.allclose(before, after, atol=1e-9)


# ------------------------------------------------------------- checkers


def test_grassmannian_ks_positive_at_claimed_bound():
    for n, d in [(4, 2), (5, 2), (5, 3)]:
        g = grassmannian_curvature(n, d)
        k = (d - 1) * (n - d - 1)
        report = check_ks_positive(g, k, 1, samples=200, tol=1e-9, seed=0)
        assert not report.refuted, (n, d)


def test_grassmannian_refuted_below_bound():
    g = grassmannian_curvature(4, 2)
    report = check_ks_positive(g, 0, 1, samples=200, tol=1e-9, seed=0)
    assert report.refuted
    assert report.witness is not None
    assert reevaluate_witness(g, report)


def test_zero_tensor_within_large_kernel_bound():
    R = zero_tensor(2, 2)
    report = check_ks_positive(R, 2, 1, samples=50, seed=0)
    assert not report.refuted
    report = check_ks_positive(R, 1, 1, samples=50, seed=0)
    assert report.refuted


def test_refutation_monotone_in_k_and_s():
    g = grassmannian_curvature(4, 2)
    refuted = {}
    for k in range(0, 3):
        for s in (1, 2):
            refuted[(k, s)] = check_ks_positive(
                g, k, s, samples=60, seed=0
            ).refuted
    for k in range(0, 2):
        for s in (1, 2):
            if refuted[(k + 1, s)]:
                assert refuted[(k, s)]
    for k in range(0, 3):
        if refuted[(k, 1)]:
            assert refuted[(k, 2)]


def test_check_ks_invalid_tuple_size():
    with pytest.raises(InvalidInputError):
        check_ks_positive(identity_tensor(2, 2), 0, 3, samples=10)


def test_check_nakano_identity_and_negative():
    assert not check_nakano(identity_tensor(2, 2)).refuted
    neg = CurvatureTensor(n=2, r=2, entries=-identity_tensor(2, 2).entries)
    rep = check_nakano(neg)
    assert rep.refuted
    assert rep.worst_min_eigenvalue == pytest.approx(-1.0)


def test_check_nakano_projective_tangent_boundary():
    # the projective-space tangent curvature is semipositive: the strict
    # test reports the zero eigenvalue
    rep = check_nakano(grassmannian_curvature(3, 1))
    assert rep.refuted
    assert abs(rep.worst_min_eigenvalue) <= 1e-12


# ------------------------------------------------------------- algebra


def test_dual_is_involution():
    R = sample_nakano_positive(3, 2, seed=3)
    assert np.allclose(dual_curvature(dual_curvature(R)).entries, R.entries)


def test_dual_of_positive_is_refuted():
    assert check_nakano(dual_curvature(identity_tensor(2, 2))).refuted


def test_dual_negates_trace():
    R = sample_nakano_positive(3, 3, seed=4)
    assert np.allclose(det_curvature(dual_curvature(R)), -det_curvature(R))


def test_tensor_with_trivial_line_is_identity():
    R = sample_nakano_positive(3, 2, seed=6)
    F = zero_tensor(3, 1)
    T = tensor_curvature(R, F)
    assert T.r == 2
    assert np.allclose(T.entries, R.entries)


def test_tensor_of_identities_doubles_spectrum():
    R = identity_tensor(2, 2)
    T = tensor_curvature(R, R)
    flat = np.transpose(T.entries, (0, 2, 1, 3)).reshape(8, 8)
    evs = np.linalg.eigvalsh(flat)
    assert np.allclose(evs, 2.0)


def test_tensor_requires_equal_base():
    with pytest.raises(InvalidInputError):
        tensor_curvature(identity_tensor(2, 2), identity_tensor(3, 2))


def test_tensor_of_grassmannians_stays_ks_positive():
    g = grassmannian_curvature(4, 2)
    T = tensor_curvature(g, g)
    report = check_ks_positive(T, 1, 1, samples=100, seed=0)
    assert not report.refuted


def test_det_curvature_values():
    assert np.allclose(det_curvature(identity_tensor(3, 4)), 4 * np.eye(3))
    n = 4
    g = grassmannian_curvature(n, 1)
    assert np.allclose(det_curvature(g), n * np.eye(n - 1))


def test_det_curvature_of_tensor_product():
    rng = np.random.default_rng(8)
    A = sample_nakano_positive(3, 2, seed=10)
    B = sample_nakano_positive(3, 3, seed=11)
    lhs = det_curvature(tensor_curvature(A, B))
    rhs = B.r * det_curvature(A) + A.r * det_curvature(B)
    assert np.allclose(lhs, rhs)


def test_twist_det_zero_is_identity():
    R = sample_nakano_positive(2, 3, seed=12)
    assert np.allclose(twist_det(R, 0).entries, R.entries)


def test_twist_det_identity_pattern():
    R = identity_tensor(2, 3)
    T = twist_det(R, 1)
    assert np.allclose(T.entries, (1 + 3) * R.entries)


def test_dual_twist_identity_spectrum():
    r = 3
    R = identity_tensor(2, r)
    D = dual_twist(R, 1)
    flat = np.transpose(D.entries, (0, 2, 1, 3)).reshape(2 * r, 2 * r)
    evs = np.linalg.eigvalsh(flat)
    assert evs.min() == pytest.approx(r - 1)


def test_dual_twist_zero_is_dual():
    R = sample_nakano_positive(2, 2, seed=13)
    assert np.allclose(dual_twist(R, 0).entries, dual_curvature(R).entries)


def test_twists_commute_with_positive_scaling():
    R = sample_griffiths_k(3, 2, 1, seed=2)
    c = 2.75
    scaled = CurvatureTensor(n=3, r=2, entries=c * R.entries)
    assert np.allclose(twist_det(scaled, 1).entries, c * twist_det(R, 1).entries)
    assert np.allclose(dual_twist(scaled, 2).entries, c * dual_twist(R, 2).entries)


def test_pullback_identity_and_zero():
    R = sample_nakano_positive(3, 2, seed=14)
    same = pullback_curvature(R, np.eye(3))
    assert np.allclose(same.entries, R.entries)
    null = pullback_curvature(R, np.zeros((3, 3)))
    assert np.allclose(null.entries, 0)


def test_pullback_submersion_grows_kernel():
    R = sample_nakano_positive(3, 2, seed=15)
    jac = np.hstack([np.eye(3), np.zeros((3, 1))])
    P = pullback_curvature(R, jac)
    assert P.n == 4
    rng = np.random.default_rng(16)
    for _ in range(10):
        v = _crandn(rng, 2)
        before = restricted_form(R, [v], "fiber_vectors").eigenvalues()
        after = restricted_form(P, [v], "fiber_vectors").eigenvalues()
        kernel_before = int(np.count_nonzero(before < 1e-9))
        kernel_after = int(np.count_nonzero(after < 1e-9))
        assert kernel_after == kernel_before + 1


def test_pullback_shape_mismatch():
    with pytest.raises(InvalidInputError):
        pullback_curvature(identity_tensor(3, 2), np.eye(2))


# ----------------------------------------------------------- generators


def test_sample_griffiths_hermitian_exact():
    R = sample_griffiths_k(4, 3, 2, seed=0)
    assert np.array_equal(
        R.entries, np.conj(np.transpose(R.entries, (1, 0, 3, 2)))
    )


def test_sample_griffiths_kernel_exact_for_every_fiber_vector():
    rng = np.random.default_rng(17)
    for n, r, k in [(3, 1, 1), (3, 2, 1), (4, 3, 2)]:
        R = sample_griffiths_k(n, r, k, seed=1)
        for _ in range(25):
            v = _crandn(rng, r)
            evs = restricted_form(R, [v], "fiber_vectors").eigenvalues()
            assert int(np.count_nonzero(evs < 1e-9)) == k
            assert evs.min() > -1e-9


def test_sample_griffiths_invalid_k():
    with pytest.raises(InvalidInputError):
        sample_griffiths_k(3, 2, 3, seed=0)


def test_sample_nakano_positive_is_positive():
    for seed in range(3):
        R = sample_nakano_positive(3, 3, seed=seed)
        assert not check_nakano(R).refuted


def test_rank_one_construction_kernel():
    # a single base direction gives restricted forms of rank one
    n = 4
    R = sample_griffiths_k(n, 1, n - 1, seed=0)
    v = np.array([1.0 + 0j])
    evs = restricted_form(R, [v], "fiber_vectors").eigenvalues()
    assert int(np.count_nonzero(evs < 1e-9)) == n - 1


# ------------------------------------------------------------------ io


def test_tensor_json_round_trip():
    R = grassmannian_curvature(4, 2)
    doc = tensor_to_json(R)
    back = tensor_from_json(json.loads(json.dumps(doc)))
    assert np.array_equal(back.entries, R.entries)


def test_tensor_json_rejects_missing_partner():
    doc = {"n": 1, "r": 2, "entries": [[0, 1, 0, 0, 1.0, 0.5]]}
    with pytest.raises(InvalidInputError):
        tensor_from_json(doc)


def test_tensor_json_rejects_non_conjugate_pair():
    doc = {
        "n": 1,
        "r": 2,
        "entries": [[0, 1, 0, 0, 1.0, 0.5], [1, 0, 0, 0, 1.0, 0.5]],
    }
    with pytest.raises(InvalidInputError):
        tensor_from_json(doc)


def test_tensor_json_rejects_complex_diagonal():
    doc = {"n": 1, "r": 1, "entries": [[0, 0, 0, 0, 1.0, 0.5]]}
    with pytest.raises(InvalidInputError):
        tensor_from_json(doc)


def test_tensor_json_accepts_hermitian_pair():
    doc = {
        "n": 1,
        "r": 2,
        "entries": [[0, 1, 0, 0, 1.0, 0.5], [1, 0, 0, 0, 1.0, -0.5]],
    }
    R = tensor_from_json(doc)
    assert R.entries[0, 1, 0, 0] == 1.0 + 0.5j


def test_constructor_rejects_non_hermitian():
    bad = np.zeros((2, 2, 1, 1), dtype=complex)
    bad[0, 1, 0, 0] = 1.0
    with pytest.raises(InvalidInputError):
        CurvatureTensor(n=1, r=2, entries=bad)


def test_restricted_form_base_side_matches_on_symmetric_tensor():
    # the homogeneous Grassmannian tensor treats base and fiber alike
    g = grassmannian_curvature(4, 2)
    v = np.array([1, 0, 0, 0], dtype=complex)
    fiber = restricted_form(g, [v], "fiber_vectors").eigenvalues()
    base = restricted_form(g, [v], "base_vectors").eigenvalues()
    assert np.allclose(fiber, base)


def test_restricted_form_unknown_side():
    v = np.array([1, 0], dtype=complex)
    with pytest.raises(InvalidInputError):
        restricted_form(identity_tensor(2, 2), [v], "sideways")


def test_dual_twist_at_full_rank_tuple_size():
    # the dual det-twist with exponent equal to the rank stays positive for
    # tuples of every size up to the rank
    for n, r, k in [(3, 3, 1), (2, 4, 1)]:
        R = sample_griffiths_k(n, r, k, seed=21)
        rep = check_ks_positive(dual_twist(R, r), k, r, samples=100, seed=5)
        assert not rep.refuted, (n, r, k, rep.witness)
