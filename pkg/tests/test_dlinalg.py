import numpy as np
import pytest

from parakahler import dcore, dlinalg
from parakahler.dcore import ParaComplex, exp_tau
from parakahler.dlinalg import (
    apply_J,
    basis_vector,
    d_matmul,
    det_D,
    dvector,
    gram_identity_check,
    hermitian_form,
    lagrangian_angle_of_frame,
    metric,
    omega,
    random_lagrangian_frame,
)
from parakahler.errors import (
    DegenerateMetric,
    DimensionMismatch,
    LagrangianViolation,
)


def test_metric_signature():
    e1 = basis_vector(3, 0)
    te1 = basis_vector(3, 0, tau=True)
    assert metric(e1, e1) == 1.0
    assert metric(te1, te1) == -1.0


def test_metric_null_combination():
    X = dvector([ParaComplex(1, 0), ParaComplex(0, 1)])
    assert metric(X, X) == 0.0


def test_metric_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        metric(basis_vector(2, 0), basis_vector(3, 0))


def test_apply_J_involution(rng):
    X = rng.normal(size=(4, 2))
    assert np.allclose(apply_J(apply_J(X)), X)
    assert np.allclose(apply_J(basis_vector(2, 0)), basis_vector(2, 0, tau=True))


def test_J_is_antiisometry(rng):
    for _ in range(50):
        X, Y = rng.normal(size=(2, 3, 2))
        assert metric(apply_J(X), apply_J(Y)) == pytest.approx(-metric(X, Y))


def test_omega_examples(rng):
    e1, e2 = basis_vector(2, 0), basis_vector(2, 1)
    assert omega(e1, apply_J(e1)) == 1.0
    assert omega(e1, e2) == 0.0
    X = rng.normal(size=(2, 2))
    assert omega(X, X) == pytest.approx(0.0)
    Y = rng.normal(size=(2, 2))
    assert omega(X, Y) == pytest.approx(-omega(Y, X))


def test_hermitian_form_values(rng):
    e1 = basis_vector(2, 0)
    assert hermitian_form(e1, e1) == ParaComplex(1.0, 0.0)
    h = hermitian_form(e1, apply_J(e1))
    assert (h.x, h.y) == (0.0, -1.0)
    X, Y = rng.normal(size=(2, 3, 2))
    a, b = hermitian_form(X, Y), hermitian_form(Y, X).conj()
    assert a.x == pytest.approx(b.x)
    assert a.y == pytest.approx(b.y)


def test_hermitian_form_is_entrywise_product(rng):
    # <<X, Y>> = sum_j X_j conj(Y_j)
    X, Y = rng.normal(size=(2, 3, 2))
    total = dcore.ZERO
    for j in range(3):
        total = total + ParaComplex(*X[j]) * ParaComplex(*Y[j]).conj()
    h = hermitian_form(X, Y)
    assert h.x == pytest.approx(total.x)
    assert h.y == pytest.approx(total.y)


def test_conj_transpose_involution(rng):
    M = rng.normal(size=(3, 3, 2))
    from parakahler.dlinalg import conj_transpose

    assert np.allclose(conj_transpose(conj_transpose(M)), M)


def test_det_identity():
    I = np.zeros((3, 3, 2))
    I[..., 0] = np.eye(3)
    assert det_D(I) == ParaComplex(1.0, 0.0)


def test_det_tau_proportional_rows():
    M = np.zeros((2, 2, 2))
    M[0, 0] = [1, 0]
    M[0, 1] = [0, 1]
    M[1, 0] = [0, 1]
    M[1, 1] = [1, 0]
    assert det_D(M).grading_norm() == 0.0


def test_det_diagonal_formula():
    a, b = 0.7, -0.4
    M = np.zeros((2, 2, 2))
    M[0, 0] = [1, a]
    M[1, 1] = [1, b]
    d = det_D(M)
    assert d.x == pytest.approx(1 + a * b)
    assert d.y == pytest.approx(a + b)


def test_det_multiplicative(rng):
    for _ in range(50):
        A, B = rng.normal(size=(2, 3, 3, 2))
        lhs = det_D(d_matmul(A, B))
        rhs = det_D(A) * det_D(B)
        assert (lhs - rhs).grading_norm() < 1e-10 * max(rhs.grading_norm(), 1)


def test_det_division_free_path_matches_leibniz(rng):
    # n > 4 goes through Bird's elimination; cross-check against Leibniz
    from parakahler.dlinalg import _det_bird, _det_leibniz

    for n in (5, 6):
        M = rng.normal(size=(n, n, 2))
        assert np.allclose(_det_bird(M), _det_leibniz(M), atol=1e-9)


def test_det_bird_handles_null_pivots():
    # top-left entry on the light cone defeats division-based elimination
    M = np.zeros((5, 5, 2))
    M[..., 0] = np.eye(5)
    M[0, 0] = [1, 1]
    M[0, 1] = [2, 0]
    M[1, 0] = [3, 0]
    from parakahler.dlinalg import _det_bird, _det_leibniz

    assert np.allclose(_det_bird(M), _det_leibniz(M), atol=1e-12)


def test_gram_identity_standard_basis():
    frame = np.zeros((3, 3, 2))
    frame[..., 0] = np.eye(3)
    assert gram_identity_check(frame) == (pytest.approx(1.0), pytest.approx(1.0))


def test_gram_identity_unit_scaling():
    z = exp_tau(0.7)
    frame = np.array([[[z.x, z.y]]])
    dg, sq = gram_identity_check(frame)
    assert dg == pytest.approx(1.0)
    assert sq == pytest.approx(1.0)


@pytest.mark.parametrize("n", [2, 3])
def test_gram_identity_random_frames(n, rng):
    for _ in range(100):
        fr = random_lagrangian_frame(n, rng)
        dg, sq = gram_identity_check(fr)
        assert dg == pytest.approx(sq, rel=1e-10, abs=1e-12)


def test_gram_identity_rejects_non_lagrangian():
    frame = np.zeros((2, 2, 2))
    frame[0] = [[1, 0], [0, 0]]
    frame[1] = [[0, 1], [0, 0]]  # tau e1: omega(e1, tau e1) = 1
    with pytest.raises(LagrangianViolation):
        gram_identity_check(frame)


def test_angle_standard_basis():
    frame = np.zeros((2, 2, 2))
    frame[..., 0] = np.eye(2)
    ang = lagrangian_angle_of_frame(frame)
    assert (ang.q, ang.theta) == (0, 0.0)


def test_angle_of_unit_curve_frame():
    z = exp_tau(0.4)
    ang = lagrangian_angle_of_frame(np.array([[[z.x, z.y]]]))
    assert ang.q == 0
    assert ang.theta == pytest.approx(0.4)


def test_angle_invariant_under_real_frame_changes(rng):
    fr = random_lagrangian_frame(3, rng)
    ang = lagrangian_angle_of_frame(fr)
    for _ in range(20):
        A = rng.normal(size=(3, 3))
        if abs(np.linalg.det(A)) < 0.2:
            continue
        ang2 = lagrangian_angle_of_frame(np.einsum("ij,jkc->ikc", A, fr))
        assert ang2.q == ang.q
        assert ang2.theta == pytest.approx(ang.theta, abs=1e-9)


def test_angle_degenerate_frame():
    frame = np.zeros((2, 2, 2))
    frame[0] = [[1, 0], [0, 1]]   # e1 + tau e2
    frame[1] = [[0, -1], [1, 0]]  # e2 - tau e1: Lagrangian but null det
    with pytest.raises((DegenerateMetric, LagrangianViolation)):
        lagrangian_angle_of_frame(frame)
