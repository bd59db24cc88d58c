"""Finite-difference extrinsic geometry of sampled immersions into D^n.

An immersion is sampled on a rectangular parameter grid (per-axis uniform
spacing, optionally periodic).  All derivatives are order-2 central
differences; non-periodic axes keep a 2-cell margin and raise BoundaryPoint
inside it.  Per-node quantities:

    jet                 first and second derivatives of the immersion
    induced_metric      g_ij = <d_iF, d_jF> with signature and degeneracy
    signed_gram_schmidt pivoted orthonormalization for indefinite metrics
    para_adapted_frame  orthonormal frame with e_{2i} = J e_{2i-1}
    mean_curvature      H = (1/m) sum_i eps_i h(e_i, e_i)
    nijenhuis           integrability obstruction of a sampled J-field

Normal projection solves the (indefinite but invertible) tangent Gram system
instead of orthonormalizing the normal bundle, which avoids signature
bookkeeping in codimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dcore import d_array, d_grading2
from .dlinalg import apply_J, metric
from .errors import (
    BoundaryPoint,
    DegenerateMetric,
    NotJInvariant,
    NotParaComplexStructure,
    OddDimension,
)

JET_MARGIN = 2          # cells kept clear of non-periodic boundaries
DEGENERACY_TOL = 1e-8   # relative tolerance |det g| < tol * scale^m


@dataclass(frozen=True)
class GridAxis:
    lo: float
    hi: float
    count: int
    periodic: bool = False

    def __post_init__(self):
        if self.count < 5:
            raise ValueError("grid axes need at least 5 nodes")
        if not self.hi > self.lo:
            raise ValueError("axis needs hi > lo")

    @property
    def spacing(self) -> float:
        span = self.hi - self.lo
        return span / self.count if self.periodic else span / (self.count - 1)

    def nodes(self) -> np.ndarray:
        return self.lo + self.spacing * np.arange(self.count)

    def shift(self, i: int, delta: int) -> int:
        j = i + delta
        if self.periodic:
            return j % self.count
        if j < 0 or j >= self.count:
            raise BoundaryPoint(f"index {j} outside [0, {self.count})")
        return j


@dataclass(frozen=True)
class SampledImmersion:
    axes: tuple[GridAxis, ...]
    values: np.ndarray  # (*counts, n, 2)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        v = d_array(self.values)
        expected = tuple(a.count for a in self.axes)
        if v.shape[: len(expected)] != expected or v.ndim != len(expected) + 2:
            raise ValueError(
                f"values shape {v.shape} does not match grid {expected} + (n, 2)"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("immersion values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return len(self.axes)

    @property
    def n(self) -> int:
        return self.values.shape[-2]

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.count for a in self.axes)

    def coords(self, node: Sequence[int]) -> tuple[float, ...]:
        return tuple(a.lo + a.spacing * i for a, i in zip(self.axes, node))

    def margin(self, node: Sequence[int]) -> int:
        """Distance in cells to the nearest non-periodic boundary."""
        worst = min(
            (min(i, a.count - 1 - i) for a, i in zip(self.axes, node) if not a.periodic),
            default=10 ** 9,
        )
        return worst

    def require_margin(self, node: Sequence[int], margin: int = JET_MARGIN):
        if self.margin(node) < margin:
            raise BoundaryPoint(
                f"node {tuple(node)} is within {margin} cells of a boundary"
            )

    def interior_nodes(self, margin: int = JET_MARGIN):
        ranges = []
        for a in self.axes:
            if a.periodic:
                ranges.append(range(a.count))
            else:
                ranges.append(range(margin, a.count - margin))
        return itertools.product(*ranges)

    def center_node(self) -> tuple[int, ...]:
        return tuple(a.count // 2 for a in self.axes)


def immersion_from_function(axes: Sequence[GridAxis], fn: Callable) -> SampledImmersion:
    """Sample fn over the grid; fn takes meshgrid coordinate arrays and
    returns a (*counts, n, 2) array."""
    axes = tuple(axes)
    mesh = np.meshgrid(*[a.nodes() for a in axes], indexing="ij")
    return SampledImmersion(axes, np.asarray(fn(*mesh), dtype=float))


@dataclass(frozen=True)
class Jet:
    first: np.ndarray   # (m, n, 2)
    second: np.ndarray  # (m, m, n, 2)


def _value(imm, node):
    return imm.values[tuple(node)]


def jet(imm: SampledImmersion, node) -> Jet:
    """Order-2 central first and second derivatives at a node."""
    node = tuple(node)
    imm.require_margin(node)
    m = imm.m
    first = np.empty((m, imm.n, 2))
    second = np.empty((m, m, imm.n, 2))
    for a in range(m):
        ha = imm.axes[a].spacing
        plus = _shifted(imm, node, {a: +1})
        minus = _shifted(imm, node, {a: -1})
        first[a] = (plus - minus) / (2.0 * ha)
        second[a, a] = (plus - 2.0 * _value(imm, node) + minus) / ha ** 2
        for b in range(a + 1, m):
            hb = imm.axes[b].spacing
            pp = _shifted(imm, node, {a: +1, b: +1})
            pm = _shifted(imm, node, {a: +1, b: -1})
            mp = _shifted(imm, node, {a: -1, b: +1})
            mm = _shifted(imm, node, {a: -1, b: -1})
            second[a, b] = second[b, a] = (pp - pm - mp + mm) / (4.0 * ha * hb)
    return Jet(first, second)


def _shifted(imm, node, deltas):
    idx = list(node)
    for axis, delta in deltas.items():
        idx[axis] = imm.axes[axis].shift(idx[axis], delta)
    return imm.values[tuple(idx)]


def coordinate_tangents(imm: SampledImmersion):
    """Vectorized first derivatives on the whole grid.

    Returns (tangents, valid): tangents has shape (*counts, m, n, 2); valid
    marks nodes with the full jet margin (wrapped values elsewhere are
    garbage and must be masked).
    """
    tangents = np.empty(imm.shape + (imm.m, imm.n, 2))
    for a, axis in enumerate(imm.axes):
        plus = np.roll(imm.values, -1, axis=a)
        minus = np.roll(imm.values, +1, axis=a)
        tangents[..., a, :, :] = (plus - minus) / (2.0 * axis.spacing)
    valid = np.ones(imm.shape, dtype=bool)
    for a, axis in enumerate(imm.axes):
        if not axis.periodic:
            sl = [slice(None)] * imm.m
            sl[a] = slice(0, JET_MARGIN)
            valid[tuple(sl)] = False
            sl[a] = slice(axis.count - JET_MARGIN, axis.count)
            valid[tuple(sl)] = False
    return tangents, valid


@dataclass(frozen=True)
class InducedMetric:
    g: np.ndarray
    signature: tuple[int, ...]
    degenerate: bool


def metric_from_tangents(tangents: np.ndarray, tol_deg: float = DEGENERACY_TOL) -> InducedMetric:
    m = tangents.shape[0]
    g = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            g[i, j] = g[j, i] = metric(tangents[i], tangents[j])
    # Degeneracy is judged against the Euclidean tangent scale, which
    # dominates every |g_ij|.  The pointwise metric scale max|g_ij| would
    # collapse together with g where the immersion meets the light cone
    # (e.g. the null lines of equivariant tori), leaving the relative test
    # vacuous exactly where it matters.
    scale = float(np.max(np.sum(d_grading2(tangents), axis=(-2, -1))))
    detg = float(np.linalg.det(g))
    degenerate = scale == 0.0 or abs(detg) < tol_deg * scale ** m
    if degenerate:
        signature = ()
    else:
        eig = np.linalg.eigvalsh(g)
        signature = tuple(sorted((1 if e > 0 else -1 for e in eig), reverse=True))
    return InducedMetric(g, signature, degenerate)


def induced_metric(imm: SampledImmersion, node, tol_deg: float = DEGENERACY_TOL) -> InducedMetric:
    return metric_from_tangents(jet(imm, node).first, tol_deg)


@dataclass(frozen=True)
class GramSchmidtFrame:
    frame: np.ndarray       # (m, n, 2), metric(e_i, e_j) = eps_i delta_ij
    signature: tuple[int, ...]
    coeffs: np.ndarray      # frame = coeffs @ input vectors


def signed_gram_schmidt(vectors, tol: float = 1e-10) -> GramSchmidtFrame:
    """Pivoted Gram-Schmidt for an indefinite metric.

    At each step every remaining vector is orthogonalized against the chosen
    frame and the one with largest |<v, v>| becomes the next pivot, which
    avoids normalizing a null vector.  When every remaining vector is null
    but the span is not degenerate (a hyperbolic pair of null directions,
    e.g. the tangents of a null-curve product), a pairwise sum or difference
    is substituted as the pivot.  DegenerateMetric is raised when no pivot
    with a non-null norm exists.
    """
    vectors = d_array(vectors)
    m = vectors.shape[0]
    work = [vectors[i].copy() for i in range(m)]
    coeff = [np.eye(m)[i].copy() for i in range(m)]
    frame, eps, rows = [], [], []
    remaining = list(range(m))
    for _ in range(m):
        for k in remaining:
            for e, s, c in zip(frame, eps, rows):
                proj = s * metric(work[k], e)
                work[k] = work[k] - proj * e
                coeff[k] = coeff[k] - proj * c
        norms = {k: metric(work[k], work[k]) for k in remaining}
        pivot = max(remaining, key=lambda k: abs(norms[k]))
        g2 = float(np.sum(d_grading2(work[pivot])))
        if abs(norms[pivot]) <= tol * max(g2, 1e-300):
            best, best_norm = None, 0.0
            for ii in range(len(remaining)):
                for jj in range(ii + 1, len(remaining)):
                    a, b = remaining[ii], remaining[jj]
                    for sign in (1.0, -1.0):
                        cand = work[a] + sign * work[b]
                        nn = metric(cand, cand)
                        cg2 = float(np.sum(d_grading2(cand)))
                        if abs(nn) > max(abs(best_norm), tol * max(cg2, 1e-300)):
                            best, best_norm = (a, b, sign), nn
            if best is None:
                raise DegenerateMetric(
                    f"no non-null pivot among remaining vectors or their pairs "
                    f"(best diagonal {norms[pivot]:.3e})"
                )
            a, b, sign = best
            work[a] = work[a] + sign * work[b]
            coeff[a] = coeff[a] + sign * coeff[b]
            norms[a] = best_norm
            pivot = a
        s = 1 if norms[pivot] > 0 else -1
        scale = 1.0 / np.sqrt(abs(norms[pivot]))
        frame.append(work[pivot] * scale)
        rows.append(coeff[pivot] * scale)
        eps.append(s)
        remaining.remove(pivot)
    return GramSchmidtFrame(np.array(frame), tuple(eps), np.array(rows))


def para_adapted_frame(vectors, tol: float = 1e-8) -> GramSchmidtFrame:
    """Orthonormal frame of a J-invariant span with e_{2i} = J e_{2i-1}.

    The span must be J-invariant (checked by least squares) and of even
    dimension.  Each round picks the best non-null pivot e, appends (e, Je)
    and projects the rest out of that hyperbolic pair; the metric-orthogonal
    complement of a J-invariant pair is again J-invariant.
    """
    vectors = d_array(vectors)
    m = vectors.shape[0]
    if m % 2 != 0:
        raise OddDimension(f"span dimension {m} is odd")
    flat = vectors.reshape(m, -1).T  # (2n, m) real matrix of the span
    for i in range(m):
        jv = apply_J(vectors[i]).reshape(-1)
        sol, *_ = np.linalg.lstsq(flat, jv, rcond=None)
        resid = float(np.linalg.norm(flat @ sol - jv))
        if resid > tol * max(float(np.linalg.norm(jv)), 1e-300):
            raise NotJInvariant(
                f"J(v_{i}) leaves the span (residual {resid:.3e})"
            )
    work = [vectors[i].copy() for i in range(m)]
    frame, eps = [], []
    for _ in range(m // 2):
        for k in range(len(work)):
            for e, s in zip(frame, eps):
                work[k] = work[k] - s * metric(work[k], e) * e
        norms = [metric(w, w) for w in work]
        pivot = int(np.argmax(np.abs(norms)))
        g2 = float(np.sum(d_grading2(work[pivot])))
        if abs(norms[pivot]) <= 1e-10 * max(g2, 1e-300):
            raise DegenerateMetric("no non-null pivot left in the J-invariant span")
        s = 1 if norms[pivot] > 0 else -1
        e1 = work[pivot] / np.sqrt(abs(norms[pivot]))
        e2 = apply_J(e1)
        frame.extend([e1, e2])
        eps.extend([s, -s])
        work.pop(pivot)
    return GramSchmidtFrame(np.array(frame), tuple(eps), np.empty((0, 0)))


def normal_project(W, tangents, g) -> np.ndarray:
    """Metric-normal part of W: subtract the tangential solve of the Gram
    system g lambda = <W, d_aF>."""
    rhs = np.array([metric(W, tangents[a]) for a in range(tangents.shape[0])])
    lam = np.linalg.solve(g, rhs)
    return W - np.tensordot(lam, tangents, axes=1)


def second_fundamental_form(imm: SampledImmersion, node, tol_deg: float = DEGENERACY_TOL):
    """(h, frame) with h[i, j] = normal part of the second derivative along
    the orthonormalized frame directions."""
    jt = jet(imm, node)
    im = metric_from_tangents(jt.first, tol_deg)
    if im.degenerate:
        raise DegenerateMetric(f"induced metric degenerate at node {tuple(node)}")
    gs = signed_gram_schmidt(jt.first)
    m = imm.m
    h = np.empty((m, m, imm.n, 2))
    for i in range(m):
        for j in range(i, m):
            W = np.einsum("a,b,abnc->nc", gs.coeffs[i], gs.coeffs[j], jt.second)
            h[i, j] = h[j, i] = normal_project(W, jt.first, im.g)
    return h, gs


def mean_curvature(imm: SampledImmersion, node, tol_deg: float = DEGENERACY_TOL) -> np.ndarray:
    """H = (1/m) sum_i eps_i h(e_i, e_i) as a D^n vector (n, 2)."""
    h, gs = second_fundamental_form(imm, node, tol_deg)
    m = imm.m
    H = np.zeros((imm.n, 2))
    for i in range(m):
        H += gs.signature[i] * h[i, i]
    return H / m


def mean_curvature_trace(imm: SampledImmersion, node, tol_deg: float = DEGENERACY_TOL) -> np.ndarray:
    """Un-normalized trace sum_i eps_i h(e_i, e_i) = m H."""
    return imm.m * mean_curvature(imm, node, tol_deg)


def position_normal_part(imm: SampledImmersion, node, tol_deg: float = DEGENERACY_TOL) -> np.ndarray:
    """Normal projection of the position vector F at the node."""
    jt = jet(imm, node)
    im = metric_from_tangents(jt.first, tol_deg)
    if im.degenerate:
        raise DegenerateMetric(f"induced metric degenerate at node {tuple(node)}")
    return normal_project(_value(imm, node), jt.first, im.g)


# ---------------------------------------------------------------------------
# Almost para-complex structures on a coordinate box and their Nijenhuis
# tensor.  Vector fields are constant vectors or callables of the point.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JField:
    axes: tuple[GridAxis, ...]
    mats: np.ndarray  # (*counts, d, d)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        mats = np.asarray(self.mats, dtype=float)
        object.__setattr__(self, "mats", mats)

    @property
    def dim(self) -> int:
        return self.mats.shape[-1]

    def coords(self, node) -> np.ndarray:
        return np.array([a.lo + a.spacing * i for a, i in zip(self.axes, node)])

    def check_structure(self, tol: float = 1e-8):
        d = self.dim
        sq = np.einsum("...ij,...jk->...ik", self.mats, self.mats)
        err = float(np.max(np.abs(sq - np.eye(d))))
        if err > tol:
            raise NotParaComplexStructure(f"max |J^2 - Id| = {err:.3e}")
        tr = float(np.max(np.abs(np.trace(self.mats, axis1=-2, axis2=-1))))
        if tr > tol:
            raise NotParaComplexStructure(
                f"eigendistributions have unequal rank (max |tr J| = {tr:.3e})"
            )


def jfield_from_function(axes: Sequence[GridAxis], fn: Callable) -> JField:
    axes = tuple(axes)
    shape = tuple(a.count for a in axes)
    d = len(axes)
    mats = np.empty(shape + (d, d))
    for node in itertools.product(*[range(c) for c in shape]):
        point = np.array([a.lo + a.spacing * i for a, i in zip(axes, node)])
        mats[node] = fn(point)
    return JField(axes, mats)


def _as_field(F, d):
    if callable(F):
        return F
    vec = np.asarray(F, dtype=float).reshape(d)
    return lambda point: vec


def _field_at(jf: JField, F, node) -> np.ndarray:
    return np.asarray(F(jf.coords(node)), dtype=float)


def _j_of(jf, node):
    return jf.mats[tuple(node)]


def _directional(jf: JField, F, node, direction: np.ndarray) -> np.ndarray:
    """Directional derivative sum_k dir_k d_k F by central differences."""
    out = np.zeros(jf.dim)
    for a, axis in enumerate(jf.axes):
        if direction[a] == 0.0:
            continue
        up = list(node)
        dn = list(node)
        up[a] = axis.shift(up[a], +1)
        dn[a] = axis.shift(dn[a], -1)
        out += direction[a] * (_field_at(jf, F, up) - _field_at(jf, F, dn)) / (2 * axis.spacing)
    return out


def lie_bracket(jf: JField, A, B, node) -> np.ndarray:
    """[A, B] = D_A B - D_B A at a node, via central differences."""
    A = _as_field(A, jf.dim)
    B = _as_field(B, jf.dim)
    node = tuple(node)
    for a, axis in enumerate(jf.axes):
        if not axis.periodic and not (1 <= node[a] <= axis.count - 2):
            raise BoundaryPoint(f"node {node} lacks a 1-cell stencil on axis {a}")
    a_here = _field_at(jf, A, node)
    b_here = _field_at(jf, B, node)
    return _directional(jf, B, node, a_here) - _directional(jf, A, node, b_here)


def j_apply_field(jf: JField, F):
    F = _as_field(F, jf.dim)

    def jf_field(point):
        # Nearest-node lookup is wrong for off-grid points; fields are only
        # ever evaluated on grid nodes, where coords round exactly.
        node = tuple(
            int(round((p - a.lo) / a.spacing)) % a.count if a.periodic
            else int(round((p - a.lo) / a.spacing))
            for p, a in zip(point, jf.axes)
        )
        return jf.mats[node] @ np.asarray(F(point), dtype=float)

    return jf_field


def nijenhuis(jf: JField, node, X, Y, tol_structure: float = 1e-8) -> np.ndarray:
    """N^J(X, Y) = [X, Y] + [JX, JY] - J [JX, Y] - J [X, JY] at a node."""
    jf.check_structure(tol_structure)
    X = _as_field(X, jf.dim)
    Y = _as_field(Y, jf.dim)
    JX = j_apply_field(jf, X)
    JY = j_apply_field(jf, Y)
    J = _j_of(jf, node)
    return (
        lie_bracket(jf, X, Y, node)
        + lie_bracket(jf, JX, JY, node)
        - J @ lie_bracket(jf, JX, Y, node)
        - J @ lie_bracket(jf, X, JY, node)
    )
