"""Lagrangian-specific structure on sampled submanifolds of D^n.

The para-holomorphic volume of a Lagrangian tangent frame is its determinant
over D; its polar data (q, theta) is the Lagrangian angle, frame-independent
up to the dropped overall sign.  The angle field drives the curvature
identity

    m H = J grad(beta)

(grad taken in the induced metric).  With this library's conventions,
omega(X, Y) = <X, J Y> and theta from the polar form, the identity holds
with the sign as written; texts using the opposite symplectic sign print it
as m H = -J grad(beta).  The residual below measures the vanishing
combination.

Constructors cover gradient graphs, products of null curves, para-complex
graphs, tau-rotations and normal bundles of real submanifolds.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import dcore
from .dcore import ParaComplex, d_array, d_grading2, d_mul, d_norm2, d_polar
from .dlinalg import LagrangianAngle, apply_J, det_D, metric
from .errors import (
    BoundaryPoint,
    DegenerateMetric,
    DegeneratePairing,
    LagrangianViolation,
    NotNullCurve,
    NotParaHolomorphic,
)
from .geometry import (
    DEGENERACY_TOL,
    GridAxis,
    SampledImmersion,
    coordinate_tangents,
    jet,
    mean_curvature,
    metric_from_tangents,
)


def is_lagrangian(imm: SampledImmersion, node, tol: float = 1e-8) -> bool:
    """max |omega(d_iF, d_jF)| <= tol * scale at the node."""
    first = jet(imm, node).first
    scale = max(float(np.max(d_grading2(first))), 1e-300)
    worst = 0.0
    for i in range(imm.m):
        for j in range(i + 1, imm.m):
            w = np.sum(first[i, :, 0] * first[j, :, 1] - first[i, :, 1] * first[j, :, 0])
            worst = max(worst, abs(float(w)))
    return worst <= tol * scale


@dataclass(frozen=True)
class AngleField:
    """Per-node Lagrangian angle data over an immersion grid.

    theta/q are valid where computed & ~degenerate; region labels connected
    non-degenerate patches (-1 elsewhere).  q is constant and theta is
    continuous on each region; max_jump records the worst theta step between
    neighbors inside a region as a sanity bound.
    """
    imm: SampledImmersion
    theta: np.ndarray
    q: np.ndarray
    degenerate: np.ndarray
    computed: np.ndarray
    region: np.ndarray
    n_regions: int
    max_jump: float

    @property
    def usable(self) -> np.ndarray:
        """Nodes with a defined angle: interior and non-degenerate."""
        return self.computed & ~self.degenerate

    def region_summary(self):
        out = []
        for rid in range(self.n_regions):
            mask = self.region == rid
            thetas = self.theta[mask]
            qs = self.q[mask]
            out.append({
                "region": rid,
                "nodes": int(mask.sum()),
                "q": int(qs[0]) if qs.size else -1,
                "q_constant": bool(np.all(qs == qs[0])) if qs.size else True,
                "theta_min": float(thetas.min()) if thetas.size else math.nan,
                "theta_max": float(thetas.max()) if thetas.size else math.nan,
            })
        return out


def _neighbors(axes, node):
    for a, axis in enumerate(axes):
        for delta in (-1, 1):
            j = node[a] + delta
            if axis.periodic:
                j %= axis.count
            elif j < 0 or j >= axis.count:
                continue
            yield node[:a] + (j,) + node[a + 1:]


def angle_field(imm: SampledImmersion, tol_deg: float = DEGENERACY_TOL,
                lagrangian_tol: float = 1e-8, check: bool = True) -> AngleField:
    """Lagrangian angle (q, theta) of the coordinate tangent frame per node.

    Frame independence of (q, theta) means no orthonormalization is needed.
    Nodes where det_D is numerically null are flagged degenerate; connected
    non-degenerate regions are labelled by flood fill and checked for
    continuity (a theta step above pi/2 between neighbors trips the sanity
    bound recorded in max_jump).
    """
    tangents, valid = coordinate_tangents(imm)
    if check:
        worst = 0.0
        scale = 1e-300
        for i in range(imm.m):
            for j in range(i + 1, imm.m):
                w = np.sum(
                    tangents[..., i, :, 0] * tangents[..., j, :, 1]
                    - tangents[..., i, :, 1] * tangents[..., j, :, 0],
                    axis=-1,
                )
                worst = max(worst, float(np.max(np.abs(w[valid]))))
        scale = max(float(np.max(d_grading2(tangents[valid]))), scale)
        if worst > lagrangian_tol * scale:
            raise LagrangianViolation(
                f"tangent frames are not Lagrangian (max |omega| = {worst:.3e})"
            )
    dets = det_D(tangents) if imm.m > 1 else tangents[..., 0, :, :].reshape(imm.shape + (2,))
    if imm.m > 1:
        dets = dets.reshape(imm.shape + (2,))
    # Degeneracy gauge: squared_norm(det_D) equals det_R of the induced
    # metric, so compare it against the Euclidean tangent scale (which
    # dominates every |g_ij|) rather than the determinant's own magnitude;
    # a tiny but directionally clean det still means a degenerate frame.
    g_scale = np.maximum(np.sum(d_grading2(tangents), axis=(-2, -1)), 1e-300)
    small = np.abs(d_norm2(dets)) < tol_deg * g_scale ** imm.m
    _, q, _, theta, null = d_polar(dets, tol=tol_deg)
    unusable = null | small | ~valid
    theta = np.where(unusable, np.nan, theta)
    q = np.where(unusable, -1, q)

    region = np.full(imm.shape, -1, dtype=int)
    rid = 0
    max_jump = 0.0
    for start in itertools.product(*[range(c) for c in imm.shape]):
        if unusable[start] or region[start] >= 0:
            continue
        queue = deque([start])
        region[start] = rid
        while queue:
            node = queue.popleft()
            for nbr in _neighbors(imm.axes, node):
                if unusable[nbr]:
                    continue
                jump = abs(theta[nbr] - theta[node])
                if region[nbr] < 0:
                    region[nbr] = rid
                    queue.append(nbr)
                    max_jump = max(max_jump, jump)
        rid += 1
    return AngleField(imm, theta, q, null | small, valid, region, rid, max_jump)


def angle_identity_residual(imm: SampledImmersion, node,
                            field: AngleField | None = None,
                            tol_deg: float = DEGENERACY_TOL) -> float:
    """Grading norm of m*H - J grad(beta) at a node (zero to O(h^2)).

    grad(beta) = sum_ij g^ij (d_i theta) d_jF with theta differentiated
    centrally on the angle field; neighbors must be non-degenerate.
    """
    if field is None:
        field = angle_field(imm, tol_deg)
    node = tuple(node)
    imm.require_margin(node, margin=3)
    if not field.usable[node]:
        raise DegenerateMetric(f"angle undefined at node {node}")
    dtheta = np.empty(imm.m)
    for a, axis in enumerate(imm.axes):
        up = node[:a] + (axis.shift(node[a], +1),) + node[a + 1:]
        dn = node[:a] + (axis.shift(node[a], -1),) + node[a + 1:]
        if not (field.usable[up] and field.usable[dn]):
            raise DegenerateMetric(f"angle stencil at {node} hits a degenerate node")
        dtheta[a] = (field.theta[up] - field.theta[dn]) / (2.0 * axis.spacing)
    jt = jet(imm, node)
    im = metric_from_tangents(jt.first, tol_deg)
    if im.degenerate:
        raise DegenerateMetric(f"induced metric degenerate at {node}")
    lam = np.linalg.solve(im.g, dtheta)
    grad_beta = np.tensordot(lam, jt.first, axes=1)
    H = mean_curvature(imm, node, tol_deg)
    residual = imm.m * H - apply_J(grad_beta)
    return float(np.sqrt(np.sum(d_grading2(residual))))


def triple_tensor(imm: SampledImmersion, node, i: int, j: int, k: int) -> float:
    """T(i, j, k) = <d_i d_j F, J d_k F>; tri-symmetric on Lagrangian nodes."""
    jt = jet(imm, node)
    return metric(jt.second[i, j], apply_J(jt.first[k]))


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def build_gradient_graph(axes: Sequence[GridAxis], u: Callable | None = None,
                         grad: Sequence[Callable] | None = None) -> SampledImmersion:
    """Graph of grad(u): x -> (x_1 + tau du/dx_1, ..., x_n + tau du/dx_n).

    grad may be given in closed form (list of vectorized callables); otherwise
    u is sampled with one extra margin cell and differentiated centrally.
    """
    axes = tuple(axes)
    n = len(axes)
    mesh = np.meshgrid(*[a.nodes() for a in axes], indexing="ij")
    values = np.zeros(tuple(a.count for a in axes) + (n, 2))
    for j in range(n):
        values[..., j, 0] = mesh[j]
    if grad is not None:
        for j in range(n):
            values[..., j, 1] = grad[j](*mesh)
        return SampledImmersion(axes, values)
    if u is None:
        raise ValueError("need u or grad")
    ext_nodes = [
        np.concatenate(([a.lo - a.spacing], a.nodes(), [a.hi + a.spacing]))
        for a in axes
    ]
    emesh = np.meshgrid(*ext_nodes, indexing="ij")
    U = np.asarray(u(*emesh), dtype=float)
    inner = tuple(slice(1, -1) for _ in axes)
    for j in range(n):
        up = list(inner)
        dn = list(inner)
        up[j] = slice(2, None)
        dn[j] = slice(0, -2)
        values[..., j, 1] = (U[tuple(up)] - U[tuple(dn)]) / (2.0 * axes[j].spacing)
    return SampledImmersion(axes, values)


def graph_angle(hess: np.ndarray) -> LagrangianAngle:
    """Angle of a gradient graph from its Hessian: polar of det_D(Id + tau Hess).

    Note the tau multiplying the Hessian: the coordinate tangent frame of the
    graph is row-wise Id + tau Hess(u); for n = 2 the determinant is
    1 + det Hess + tau Laplacian(u).
    """
    hess = np.asarray(hess, dtype=float)
    n = hess.shape[0]
    M = np.zeros((n, n, 2))
    M[..., 0] = np.eye(n)
    M[..., 1] = hess
    dd = det_D(M)
    try:
        pf = dcore.polar(dd)
    except Exception as exc:
        raise DegenerateMetric(f"det_D(Id + tau Hess) is null: {dd}") from exc
    return LagrangianAngle(pf.q, pf.theta)


def standard_null_plane():
    """A totally null plane P = span{a, b} of D^2 with omega(a, b) != 0 and
    P + JP = D^2: a = e1 + tau e2, b = e2 - tau e1."""
    a = np.array([[1.0, 0.0], [0.0, 1.0]])
    b = np.array([[0.0, -1.0], [1.0, 0.0]])
    return a, b


def plane_curve(f: Callable, g: Callable):
    """Curve s -> f(s) a + g(s) b inside the standard null plane."""
    a, b = standard_null_plane()

    def curve(s):
        s = np.asarray(s, dtype=float)
        return (np.asarray(f(s))[..., None, None] * a
                + np.asarray(g(s))[..., None, None] * b)

    return curve


def j_curve(curve: Callable):
    """Pointwise J of a curve (maps a P-curve into JP)."""
    return lambda s: apply_J(curve(s))


def build_null_product(curve1: Callable, curve2: Callable,
                       axis_u: GridAxis, axis_v: GridAxis,
                       tol: float = 1e-8) -> SampledImmersion:
    """Surface f(u, v) = gamma_1(u) + gamma_2(v) from two null curves in D^2.

    Preconditions (checked numerically on the sample grids): both curves
    null, the metric cross pairing <gamma_1', gamma_2'> nonvanishing on the
    grid product, and the symplectic pairing omega(gamma_1', gamma_2')
    vanishing (else the surface is not Lagrangian).
    """
    su = axis_u.nodes()
    sv = axis_v.nodes()
    hu, hv = axis_u.spacing, axis_v.spacing
    d1 = d_array((curve1(su + hu) - curve1(su - hu)) / (2 * hu))  # (ku, 2, 2)
    d2 = d_array((curve2(sv + hv) - curve2(sv - hv)) / (2 * hv))
    for name, d in (("curve1", d1), ("curve2", d2)):
        n2 = np.abs(np.sum(d_norm2(d), axis=-1))
        g2 = np.sum(d_grading2(d), axis=-1)
        if np.any(n2 > tol * np.maximum(g2, 1e-300)):
            raise NotNullCurve(f"{name} tangent is not null (max {n2.max():.3e})")
    pair = np.einsum("ukc,vkc,c->uv", d1, d2, np.array([1.0, -1.0]))
    scale = max(float(np.max(np.sqrt(np.sum(d_grading2(d1), -1))))
                * float(np.max(np.sqrt(np.sum(d_grading2(d2), -1)))), 1e-300)
    if np.min(np.abs(pair)) <= tol * scale:
        raise DegeneratePairing("metric pairing of the two tangents vanishes on the grid")
    sympl = np.einsum("uk,vk->uv", d1[..., 0], d2[..., 1]) - np.einsum(
        "uk,vk->uv", d1[..., 1], d2[..., 0])
    if np.max(np.abs(sympl)) > tol * scale:
        raise LagrangianViolation(
            f"omega pairing of tangents reaches {np.max(np.abs(sympl)):.3e}"
        )
    g1 = d_array(curve1(su))
    g2v = d_array(curve2(sv))
    values = g1[:, None, :, :] + g2v[None, :, :, :]
    return SampledImmersion((axis_u, axis_v), values)


def build_paracomplex_graph(f: Callable, axes: Sequence[GridAxis],
                            tol: float = 1e-6) -> SampledImmersion:
    """Graph z -> (z, f(z)) of a para-holomorphic map f: D -> D.

    f takes and returns (..., 2) arrays.  The para-Cauchy-Riemann residual
    of the sampled f is checked at interior nodes; violations raise
    NotParaHolomorphic.  The tangent spaces are then J-invariant and the
    surface is minimal away from degenerate nodes.
    """
    ax, ay = axes
    mesh = np.meshgrid(ax.nodes(), ay.nodes(), indexing="ij")
    z = np.stack(mesh, axis=-1)
    fz = d_array(f(z))
    fx = (fz[2:, 1:-1] - fz[:-2, 1:-1]) / (2 * ax.spacing)
    fy = (fz[1:-1, 2:] - fz[1:-1, :-2]) / (2 * ay.spacing)
    cr = 0.5 * (fx - d_mul(np.array([0.0, 1.0]), fy))
    resid = float(np.max(np.sqrt(d_grading2(cr))))
    scale = max(float(np.max(np.sqrt(d_grading2(fx)))), 1.0)
    if resid > tol * scale:
        raise NotParaHolomorphic(
            f"para-Cauchy-Riemann residual {resid:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    values = np.stack([z, fz], axis=-2)
    return SampledImmersion(tuple(axes), values)


def rotate(imm: SampledImmersion, phi0: float) -> SampledImmersion:
    """Multiply every value by e^{tau phi0}; shifts theta by n*phi0, keeps q."""
    rot = dcore.exp_tau(phi0).as_array()
    return SampledImmersion(imm.axes, d_mul(imm.values, rot))


def apply_J_immersion(imm: SampledImmersion) -> SampledImmersion:
    """Point transformation z -> Jz; negates the metric and maps H -> -J H."""
    return SampledImmersion(imm.axes, apply_J(imm.values))


# ---------------------------------------------------------------------------
# Normal bundles of submanifolds of R^n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalBundleSpec:
    """Sampled p-submanifold of R^n with normal frames and shape operators.

    points: (*counts, n); normals: (*counts, k, n) orthonormal rows
    (k = n - p); shape_ops: (*counts, k, p, p) symmetric, expressed in an
    orthonormal tangent frame.
    """
    points: np.ndarray
    normals: np.ndarray
    shape_ops: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        nor = np.asarray(self.normals, dtype=float)
        ops = np.asarray(self.shape_ops, dtype=float)
        k = nor.shape[-2]
        gram = np.einsum("...ik,...jk->...ij", nor, nor)
        if float(np.max(np.abs(gram - np.eye(k)))) > 1e-8:
            raise ValueError("normal frames must be orthonormal")
        if float(np.max(np.abs(ops - np.swapaxes(ops, -1, -2)))) > 1e-8:
            raise ValueError("shape operators must be symmetric")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "normals", nor)
        object.__setattr__(self, "shape_ops", ops)

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[-1]

    @property
    def submanifold_dim(self) -> int:
        return self.shape_ops.shape[-1]

    @property
    def codim(self) -> int:
        return self.normals.shape[-2]


def principal_curvatures(spec: NormalBundleSpec, node, normal_index: int = 0) -> np.ndarray:
    """Eigenvalues of the chosen shape operator, ascending."""
    A = spec.shape_ops[tuple(node)][normal_index]
    return np.linalg.eigvalsh(A)


def normal_bundle_angle(spec: NormalBundleSpec, node, t: float,
                        normal_index: int = 0) -> LagrangianAngle:
    """Angle of the normal-bundle Lagrangian at (x, t * nu_1).

    The adapted tangent frame has determinant tau^{n-p} prod_i(1 - tau t k_i)
    over the principal curvatures k_i of A_{nu_1}; the polar data of that
    product is the angle.  Constant in t exactly when the curvature multiset
    is symmetric about zero (austere base).
    """
    kappas = principal_curvatures(spec, node, normal_index)
    value = ParaComplex(1.0, 0.0)
    for k in kappas:
        value = value * ParaComplex(1.0, -t * float(k))
    for _ in range(spec.ambient_dim - spec.submanifold_dim):
        value = value * dcore.TAU
    try:
        pf = dcore.polar(value)
    except Exception as exc:
        raise DegenerateMetric(f"normal-bundle volume is null at t={t}") from exc
    return LagrangianAngle(pf.q, pf.theta)


def is_austere(spec: NormalBundleSpec, node, tol: float = 1e-8) -> bool:
    """True when, for every normal direction, the sorted eigenvalue multiset
    of the shape operator equals its own negation within tol * max|kappa|."""
    for a in range(spec.codim):
        kappas = principal_curvatures(spec, node, a)
        scale = float(np.max(np.abs(kappas)))
        if scale == 0.0:
            continue
        if float(np.max(np.abs(kappas + kappas[::-1]))) > tol * scale:
            return False
    return True


def flat_normal_bundle(p: int, n: int, count: int = 5) -> NormalBundleSpec:
    """R^p inside R^n sampled on a p-cube; all curvatures vanish."""
    shape = (count,) * p
    pts = np.zeros(shape + (n,))
    grids = np.meshgrid(*[np.linspace(-1, 1, count)] * p, indexing="ij")
    for j in range(p):
        pts[..., j] = grids[j]
    normals = np.zeros(shape + (n - p, n))
    for a in range(n - p):
        normals[..., a, p + a] = 1.0
    ops = np.zeros(shape + (n - p, p, p))
    return NormalBundleSpec(pts, normals, ops)


def circle_normal_bundle(R: float, count: int = 32) -> NormalBundleSpec:
    """Circle of radius R in R^2 with the inward unit normal (kappa = 1/R)."""
    t = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
    pts = R * np.stack([np.cos(t), np.sin(t)], axis=-1)
    normals = -np.stack([np.cos(t), np.sin(t)], axis=-1)[:, None, :]
    ops = np.full((count, 1, 1, 1), 1.0 / R)
    return NormalBundleSpec(pts, normals, ops)


def catenoid_normal_bundle(u_max: float = 1.0, count: int = 9) -> NormalBundleSpec:
    """Catenoid patch in R^3; principal curvatures +-sech^2(u), austere."""
    u = np.linspace(-u_max, u_max, count)
    v = np.linspace(0.2, 1.2, count)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    pts = np.stack([np.cosh(uu) * np.cos(vv), np.cosh(uu) * np.sin(vv), uu], axis=-1)
    normals = (np.stack([np.cos(vv), np.sin(vv), -np.sinh(uu)], axis=-1)
               / np.cosh(uu)[..., None])[:, :, None, :]
    ops = np.zeros((count, count, 1, 2, 2))
    ops[..., 0, 0, 0] = 1.0 / np.cosh(uu) ** 2
    ops[..., 0, 1, 1] = -1.0 / np.cosh(uu) ** 2
    return NormalBundleSpec(pts, normals, ops)
