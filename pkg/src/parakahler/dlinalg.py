"""Vectors, frames and matrices over the split-complex ring D.

D^n is identified with R^{2n} by splitting each entry into (x, y) parts; a
D-vector is stored as a float array of shape (n, 2) and a D-matrix as
(n, n, 2), rows being frame vectors.  The structures carried along:

    metric   <X, Y>  = sum_j x_j x'_j - y_j y'_j          (signature (n, n))
    J        entrywise multiplication by tau              (J^2 = Id)
    omega    omega(X, Y) = <X, J Y>                       (standard symplectic
             form of T*R^n: omega(e_i, tau e_j) = delta_ij)
    <<X,Y>>  = <X,Y> - tau omega(X,Y) = sum_j X_j conj(Y_j)

The determinant over D is computed division-free: D has zero divisors, so
elimination with division is unsound.  Leibniz expansion covers n <= 4 and
Bird's iterated-elimination scheme (only ring products) covers larger sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import dcore
from .dcore import ParaComplex, d_array, d_conj, d_grading2, d_mul
from .errors import DegenerateMetric, DimensionMismatch, LagrangianViolation


def dvector(entries) -> np.ndarray:
    """Build an (n, 2) D-vector from ParaComplex entries or raw pairs."""
    if isinstance(entries, np.ndarray):
        return d_array(entries)
    rows = []
    for e in entries:
        if isinstance(e, ParaComplex):
            rows.append([e.x, e.y])
        elif isinstance(e, (int, float)):
            rows.append([float(e), 0.0])
        else:
            rows.append([float(e[0]), float(e[1])])
    return np.array(rows, dtype=float)


def basis_vector(n: int, j: int, tau: bool = False) -> np.ndarray:
    v = np.zeros((n, 2))
    v[j, 1 if tau else 0] = 1.0
    return v


def from_real(x, y=None) -> np.ndarray:
    """Assemble a D-vector from real part x and tau part y (default 0)."""
    x = np.asarray(x, dtype=float)
    y = np.zeros_like(x) if y is None else np.asarray(y, dtype=float)
    return np.stack([x, y], axis=-1)


def _check_dims(X, Y):
    if X.shape != Y.shape:
        raise DimensionMismatch(f"shapes {X.shape} and {Y.shape} differ")


def metric(X, Y) -> float:
    X, Y = d_array(X), d_array(Y)
    _check_dims(X, Y)
    return float(np.sum(X[..., 0] * Y[..., 0] - X[..., 1] * Y[..., 1]))


def apply_J(X) -> np.ndarray:
    """Entrywise tau-multiplication: (x, y) -> (y, x)."""
    return d_array(X)[..., ::-1].copy()


def omega(X, Y) -> float:
    X, Y = d_array(X), d_array(Y)
    _check_dims(X, Y)
    return float(np.sum(X[..., 0] * Y[..., 1] - X[..., 1] * Y[..., 0]))


def hermitian_form(X, Y) -> ParaComplex:
    """<<X, Y>> = <X, Y> - tau omega(X, Y) = sum_j X_j conj(Y_j)."""
    return ParaComplex(metric(X, Y), -omega(X, Y))


def conj_transpose(M) -> np.ndarray:
    M = d_array(M)
    return d_conj(np.swapaxes(M, -3, -2))


def d_matmul(A, B) -> np.ndarray:
    """Matrix product over D for (..., n, m, 2) x (..., m, k, 2) arrays."""
    A, B = d_array(A), d_array(B)
    re = A[..., 0] @ B[..., 0] + A[..., 1] @ B[..., 1]
    im = A[..., 0] @ B[..., 1] + A[..., 1] @ B[..., 0]
    return np.stack([re, im], axis=-1)


_PERMS: dict[int, list] = {}


def _perm_table(n: int):
    table = _PERMS.get(n)
    if table is None:
        table = []
        for p in permutations(range(n)):
            sign = 1
            for i in range(n):
                for j in range(i + 1, n):
                    if p[i] > p[j]:
                        sign = -sign
            table.append((p, sign))
        _PERMS[n] = table
    return table


def _det_leibniz(M: np.ndarray) -> np.ndarray:
    n = M.shape[-2]
    acc = np.zeros(M.shape[:-3] + (2,))
    for perm, sign in _perm_table(n):
        term = M[..., 0, perm[0], :]
        for i in range(1, n):
            term = d_mul(term, M[..., i, perm[i], :])
        acc = acc + sign * term
    return acc


def _det_bird(M: np.ndarray) -> np.ndarray:
    # Bird's division-free determinant: F_{k+1} = mu(F_k) A, with mu(X) the
    # strictly upper part of X plus diag_i(-sum_{j>i} X_jj).  After n-1 steps
    # the (0, 0) entry is (-1)^(n-1) det(A).  O(n^4) ring products, no
    # division, hence safe in the presence of zero divisors.
    n = M.shape[-2]
    F = M.copy()
    upper = np.triu(np.ones((n, n)), k=1)
    for _ in range(n - 1):
        diag = F[..., np.arange(n), np.arange(n), :]
        suffix = np.flip(np.cumsum(np.flip(diag, axis=-2), axis=-2), axis=-2)
        # mu diagonal: -(sum of trailing diagonal entries strictly below i)
        mu = F * upper[..., None]
        shifted = np.zeros_like(diag)
        shifted[..., :-1, :] = suffix[..., 1:, :]
        mu[..., np.arange(n), np.arange(n), :] = -shifted
        F = d_matmul(mu, M)
    sign = 1.0 if (n - 1) % 2 == 0 else -1.0
    return sign * F[..., 0, 0, :]


def det_D(M):
    """Determinant over D; ParaComplex for one matrix, (..., 2) for a batch.

    Multiplicative: det(AB) = det(A) det(B) up to rounding.
    """
    M = d_array(M)
    if M.ndim < 3 or M.shape[-2] != M.shape[-3]:
        raise DimensionMismatch(f"not a square D-matrix: shape {M.shape}")
    n = M.shape[-2]
    if n <= 4:
        out = _det_leibniz(M)
    else:
        out = _det_bird(M)
    if M.ndim == 3:
        return ParaComplex(float(out[0]), float(out[1]))
    return out


def frame_matrix(frame) -> np.ndarray:
    """Stack frame vectors into the D-matrix of their components."""
    frame = d_array(frame)
    if frame.ndim != 3:
        raise DimensionMismatch("a frame is a sequence of D-vectors")
    return frame


def max_omega(frame) -> float:
    """Largest |omega(X_i, X_j)| over all frame pairs."""
    frame = frame_matrix(frame)
    m = frame.shape[0]
    worst = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            worst = max(worst, abs(omega(frame[i], frame[j])))
    return worst


def _require_lagrangian(frame, tol):
    scale = max(float(np.max(np.sqrt(d_grading2(frame)))) ** 2, 1e-300)
    worst = max_omega(frame)
    if worst > tol * scale:
        raise LagrangianViolation(
            f"max |omega| = {worst:.3e} exceeds {tol:.1e} * scale ({scale:.3e})"
        )


def gram_identity_check(frame, tol: float = 1e-8):
    """(det_R of the Gram matrix, squared_norm(det_D M)) for a Lagrangian frame.

    The two numbers agree to relative 1e-10 for well-conditioned frames; the
    caller asserts that contract.
    """
    frame = frame_matrix(frame)
    _require_lagrangian(frame, tol)
    m = frame.shape[0]
    gram = np.array([[metric(frame[i], frame[j]) for j in range(m)] for i in range(m)])
    det_gram = float(np.linalg.det(gram))
    dd = det_D(frame)
    return det_gram, dd.squared_norm()


@dataclass(frozen=True)
class LagrangianAngle:
    """Causal class q and angle theta of a para-holomorphic volume.

    The overall sign p of the polar form is dropped on purpose: a real frame
    change with negative determinant flips p, so only (q, theta) is intrinsic.
    """
    q: int
    theta: float


def lagrangian_angle_of_frame(frame, tol: float = 1e-8) -> LagrangianAngle:
    frame = frame_matrix(frame)
    _require_lagrangian(frame, tol)
    dd = det_D(frame)
    try:
        pf = dcore.polar(dd)
    except Exception as exc:
        raise DegenerateMetric(f"det_D is null: {dd}") from exc
    return LagrangianAngle(pf.q, pf.theta)


def random_lagrangian_frame(n: int, rng: np.random.Generator,
                            mix: bool = True, scale: float = 1.0) -> np.ndarray:
    """Random frame spanning a Lagrangian plane of D^n.

    Rows are e_i + tau S_i for a random symmetric S (omega vanishes pairwise
    by symmetry), optionally mixed by a random real GL(n) matrix, which
    preserves the Lagrangian span.
    """
    S = rng.normal(scale=scale, size=(n, n))
    S = 0.5 * (S + S.T)
    frame = np.zeros((n, n, 2))
    frame[..., 0] = np.eye(n)
    frame[..., 1] = S
    if mix:
        A = rng.normal(size=(n, n))
        while abs(np.linalg.det(A)) < 0.1:
            A = rng.normal(size=(n, n))
        frame = np.einsum("ij,jkc->ikc", A, frame)
    return frame
