import math

import numpy as np
import pytest

from parakahler.dcore import d_exp_tau, d_mul
from parakahler.dlinalg import apply_J
from parakahler.errors import (
    DegenerateMetric,
    DegeneratePairing,
    LagrangianViolation,
    NotNullCurve,
    NotParaHolomorphic,
)
from parakahler.geometry import GridAxis, induced_metric, mean_curvature
from parakahler.lagrangian import (
    angle_field,
    angle_identity_residual,
    apply_J_immersion,
    build_gradient_graph,
    build_null_product,
    build_paracomplex_graph,
    catenoid_normal_bundle,
    circle_normal_bundle,
    flat_normal_bundle,
    graph_angle,
    is_austere,
    is_lagrangian,
    j_curve,
    normal_bundle_angle,
    plane_curve,
    rotate,
    triple_tensor,
)


def square_axes(count=33, lo=-0.5, hi=0.5):
    return (GridAxis(lo, hi, count), GridAxis(lo, hi, count))


def test_gradient_graph_is_lagrangian(rng):
    imm = build_gradient_graph(
        square_axes(17),
        u=lambda x1, x2: 0.2 * x1 ** 3 + 0.1 * x1 * x2 + 0.3 * x2 ** 2)
    for node in [(8, 8), (5, 10), (10, 4)]:
        assert is_lagrangian(imm, node)


def test_paracomplex_graph_not_lagrangian():
    imm = build_paracomplex_graph(
        lambda z: d_mul(z, z), (GridAxis(0.1, 0.6, 17), GridAxis(0.0, 0.4, 17)))
    assert not is_lagrangian(imm, (8, 8))


def test_flat_immersion_angle_field():
    imm = build_gradient_graph(square_axes(17), u=lambda x1, x2: 0.0 * x1)
    f = angle_field(imm)
    assert f.n_regions == 1
    assert np.all(f.q[f.usable] == 0)
    assert np.nanmax(np.abs(f.theta)) < 1e-14


def test_exp_tau_curve_angle_field():
    axis = GridAxis(-1.0, 1.0, 81)
    from parakahler.geometry import immersion_from_function

    imm = immersion_from_function((axis,), lambda s: d_exp_tau(s)[..., None, :])
    f = angle_field(imm)
    nodes = axis.nodes()
    usable = f.usable
    assert np.all(f.q[usable] == 1)
    assert np.allclose(f.theta[usable], nodes[usable], atol=1e-10)


def test_monge_ampere_graph_angle_field():
    imm = build_gradient_graph(square_axes(17),
                               grad=[lambda x1, x2: 2.0 * x1,
                                     lambda x1, x2: -0.5 * x2])
    f = angle_field(imm)
    assert np.all(f.q[f.usable] == 1)
    assert np.nanmax(np.abs(f.theta)) < 1e-12


def test_identity_residual_refines():
    res = []
    for count in (41, 81):
        imm = build_gradient_graph((GridAxis(-0.5, 0.5, count),),
                                   grad=[lambda x: 0.3 * x ** 2])
        f = angle_field(imm)
        res.append(angle_identity_residual(imm, (count // 2,), f))
    assert res[0] / res[1] == pytest.approx(4.0, abs=0.5)


def test_identity_residual_equivariant_hyperbola():
    from parakahler import equivariant

    res = []
    for scount, tcount in ((41, 16), (81, 32)):
        curve = equivariant.profile_from_function(
            lambda s: np.stack([np.cosh(s), np.sinh(s)], -1), -1.0, 1.0, scount)
        imm = equivariant.lift(curve, 2, (tcount,))
        f = angle_field(imm)
        res.append(angle_identity_residual(imm, (scount // 2, tcount // 4), f))
    assert res[0] / res[1] == pytest.approx(4.0, abs=0.5)


def test_triple_tensor_flat_zero():
    imm = build_gradient_graph(square_axes(17), u=lambda x1, x2: 0.0 * x1)
    assert triple_tensor(imm, (8, 8), 0, 1, 0) == pytest.approx(0.0, abs=1e-14)


def test_triple_tensor_symmetries():
    imm = build_gradient_graph(square_axes(33),
                               u=lambda x1, x2: x1 ** 2 * x2)
    node = (16, 16)
    h2 = imm.axes[0].spacing ** 2
    t112 = triple_tensor(imm, node, 0, 0, 1)
    t121 = triple_tensor(imm, node, 0, 1, 0)
    t211 = triple_tensor(imm, node, 1, 0, 0)
    assert t121 == pytest.approx(t211, abs=1e-14)   # FD mixed partials symmetric
    assert t112 == pytest.approx(t121, abs=20 * h2)  # tri-symmetry to O(h^2)
    assert abs(t112) > 0.1  # nontrivial entry: d1 d1 (grad u) ~ (2x2, 2x1)


def test_graph_angle_values():
    ang = graph_angle(np.zeros((2, 2)))
    assert (ang.q, ang.theta) == (0, 0.0)
    ang = graph_angle(np.diag([2.0, -0.5]))
    assert ang.q == 1
    assert ang.theta == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DegenerateMetric):
        graph_angle(np.diag([1.0, -1.0]))


def test_null_product_flat_plane():
    c1 = plane_curve(lambda s: 0.0 * s, lambda s: s)
    c2 = j_curve(plane_curve(lambda s: s, lambda s: 0.0 * s))
    imm = build_null_product(c1, c2, GridAxis(-1, 1, 9), GridAxis(-1, 1, 9))
    H = mean_curvature(imm, (4, 4))
    assert np.max(np.abs(H)) < 1e-13


def test_null_product_curved():
    c1 = plane_curve(lambda s: 0.3 * s ** 2, lambda s: s)
    c2 = j_curve(plane_curve(lambda s: s, lambda s: 0.2 * s ** 3))
    imm = build_null_product(c1, c2, GridAxis(-1, 1, 17), GridAxis(-1, 1, 17))
    node = (8, 8)
    assert is_lagrangian(imm, node)
    assert induced_metric(imm, node).signature == (1, -1)
    assert np.max(np.abs(mean_curvature(imm, node))) < 1e-12


def test_null_product_rejects_non_null_curve():
    def bad(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape + (2, 2))
        out[..., 0, 0] = s  # real line: tangent has positive norm
        return out

    c2 = j_curve(plane_curve(lambda s: s, lambda s: 0.0 * s))
    with pytest.raises(NotNullCurve):
        build_null_product(bad, c2, GridAxis(-1, 1, 9), GridAxis(-1, 1, 9))


def test_null_product_rejects_degenerate_pairing():
    # cross pairing (s_u s_v - 1) omega(a, b) vanishes at the (1, 1) corner
    c1 = plane_curve(lambda s: 0.5 * s ** 2, lambda s: s)
    c2 = j_curve(plane_curve(lambda s: s, lambda s: 0.5 * s ** 2))
    with pytest.raises(DegeneratePairing):
        build_null_product(c1, c2, GridAxis(-1, 1, 9), GridAxis(-1, 1, 9))


def test_null_product_rejects_lagrangian_violation():
    c1 = plane_curve(lambda s: 0.3 * s ** 2, lambda s: s)
    c2_in_P = plane_curve(lambda s: s, lambda s: 0.1 * s ** 2)  # not J-rotated
    with pytest.raises((LagrangianViolation, DegeneratePairing)):
        build_null_product(c1, c2_in_P, GridAxis(-1, 1, 9), GridAxis(-1, 1, 9))


def test_paracomplex_graph_constant_is_flat():
    imm = build_paracomplex_graph(
        lambda z: np.broadcast_to(np.array([0.3, 0.1]), z.shape).copy(),
        square_axes(9))
    assert np.max(np.abs(mean_curvature(imm, (4, 4)))) < 1e-13


def test_paracomplex_graph_square_minimal():
    imm = build_paracomplex_graph(
        lambda z: d_mul(z, z), (GridAxis(0.1, 0.6, 17), GridAxis(0.0, 0.4, 17)))
    node = (8, 8)
    if not induced_metric(imm, node).degenerate:
        assert np.max(np.abs(mean_curvature(imm, node))) < 1e-10


def test_paracomplex_graph_rejects_non_holomorphic():
    with pytest.raises(NotParaHolomorphic):
        build_paracomplex_graph(
            lambda z: np.stack([z[..., 0], 0 * z[..., 1]], -1),
            square_axes(9))


def test_rotate_shifts_angle():
    imm = build_gradient_graph(square_axes(17), u=lambda x1, x2: 0.0 * x1)
    f0 = angle_field(imm)
    rotated = rotate(imm, 0.3)
    f1 = angle_field(rotated)
    node = (8, 8)
    assert f1.theta[node] - f0.theta[node] == pytest.approx(0.6, abs=1e-12)
    assert f1.q[node] == f0.q[node]
    assert np.allclose(rotate(imm, 0.0).values, imm.values)


def test_rotate_catalog_uniform_shift():
    imm = build_gradient_graph(square_axes(17),
                               grad=[lambda x1, x2: 2.0 * x1,
                                     lambda x1, x2: -0.5 * x2])
    f0 = angle_field(imm)
    f1 = angle_field(rotate(imm, 0.1))
    d = (f1.theta - f0.theta)[f0.usable & f1.usable]
    assert np.max(np.abs(d - 0.2)) < 1e-10


def test_J_immersion_negates_H():
    imm = build_gradient_graph(square_axes(17), u=lambda x1, x2: x1 ** 3)
    ji = apply_J_immersion(imm)
    node = (8, 8)
    H1, H2 = mean_curvature(imm, node), mean_curvature(ji, node)
    assert np.allclose(H2, -apply_J(H1), atol=1e-12)


# -- normal bundles ----------------------------------------------------------

def test_flat_normal_bundle_angles():
    spec = flat_normal_bundle(2, 4)
    ang = normal_bundle_angle(spec, (2, 2), 0.7)
    assert (ang.q, ang.theta) == (0, 0.0)
    spec = flat_normal_bundle(1, 2)
    ang = normal_bundle_angle(spec, (2,), 0.7)
    assert (ang.q, ang.theta) == (1, 0.0)
    assert is_austere(spec, (2,))


def test_circle_normal_bundle_angle():
    R = 2.0
    spec = circle_normal_bundle(R, 16)
    for t in (0.1, 0.5, 0.9):
        ang = normal_bundle_angle(spec, (3,), t)
        assert ang.q == 1
        assert ang.theta == pytest.approx(math.atanh(-t / R), abs=1e-13)
    assert not is_austere(spec, (3,))


def test_catenoid_austere_constant_angle():
    spec = catenoid_normal_bundle(1.0, 9)
    node = (2, 6)
    assert is_austere(spec, node)
    thetas = [normal_bundle_angle(spec, node, t).theta
              for t in np.linspace(0, 0.4, 9)]
    assert max(abs(t) for t in thetas) < 1e-12
