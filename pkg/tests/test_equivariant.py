import numpy as np
import pytest

from parakahler.dcore import d_exp_tau, d_norm2, d_polar
from parakahler.equivariant import (
    ProfileCurve,
    equivariant_volume,
    explicit_circle,
    explicit_cubic_level,
    explicit_hyperbola,
    level_curve,
    level_residual,
    lift,
    lightcone_crossings,
    profile_from_function,
    tau_multiply,
)
from parakahler.errors import InvalidRange
from parakahler.lagrangian import angle_field, is_lagrangian


def test_profile_rejects_origin():
    s = np.linspace(-1, 1, 11)
    g = np.stack([s, np.zeros_like(s)], -1)
    with pytest.raises(ValueError):
        ProfileCurve(s, g)


def test_lift_constant_profile_is_circle():
    curve = profile_from_function(
        lambda s: np.broadcast_to([1.0, 0.0], np.shape(s) + (2,)).copy(),
        0.0, 1.0, 9)
    imm = lift(curve, 2, (16,))
    # image lies in the real plane R^2 with |x| = 1
    norms = np.sum(imm.values[..., 0] ** 2, axis=-1)
    assert np.allclose(norms, 1.0)
    assert np.allclose(imm.values[..., 1], 0.0)


def test_lift_is_lagrangian():
    curve = explicit_circle(1.0, 32)
    imm = lift(curve, 2, (16,))
    assert is_lagrangian(imm, (3, 5))
    curve3 = level_curve(3, 1.0, "re", -1.0, 1.0, 33)
    imm3 = lift(curve3, 3, (9, 12))
    assert is_lagrangian(imm3, (16, 4, 6))


def test_torus_angle_field_structure():
    imm = lift(explicit_circle(1.0, 64), 2, (32,))
    f = angle_field(imm)
    assert f.n_regions == 4
    summaries = f.region_summary()
    assert all(s["q"] == 1 for s in summaries)
    assert all(s["theta_max"] - s["theta_min"] < 1e-12 for s in summaries)
    assert int(f.degenerate.sum()) == 4 * 32


def test_hyperbola_profile_lift_angle():
    # theta = 0 analytically; the FD tangent leaves an O(h^2) tau component
    maxima = []
    for count in (64, 128):
        curve = explicit_hyperbola(1.0, 0.9, 2.4, count)  # off the null circle
        imm = lift(curve, 2, (16,))
        f = angle_field(imm)
        assert np.all(f.q[f.usable] == 0)
        maxima.append(float(np.nanmax(np.abs(f.theta))))
    assert maxima[0] < 1e-3
    assert maxima[0] / maxima[1] == pytest.approx(4.0, abs=0.8)


def test_equivariant_volume_exp_curve():
    curve = profile_from_function(lambda s: d_exp_tau(s), -1.0, 1.0, 201)
    vol = equivariant_volume(curve, 2)
    _, q, _, theta, null = d_polar(vol)
    s = curve.s
    assert not null.any()
    assert np.all(q == 1)
    assert np.allclose(theta, 2 * s, atol=1e-9)


def test_equivariant_volume_circle():
    curve = explicit_circle(1.0, 64)
    vol = equivariant_volume(curve, 2)
    # gammadot gamma = tau cos(2t) up to a positive factor
    expected = np.cos(2 * curve.s)
    assert np.allclose(vol[:, 0], 0.0, atol=1e-12)
    assert np.allclose(vol[:, 1] / np.max(np.abs(vol[:, 1])), expected, atol=1e-12)


def test_equivariant_volume_real_segment():
    curve = profile_from_function(
        lambda s: np.stack([1.0 + 0.3 * np.asarray(s), np.zeros_like(s)], -1),
        0.0, 1.0, 33)
    vol = equivariant_volume(curve, 3)
    assert np.allclose(vol[:, 1], 0.0, atol=1e-12)


@pytest.mark.parametrize("n,which,C", [(2, "re", 1.0), (2, "im", 1.0),
                                       (3, "re", 1.0), (3, "im", 0.7)])
def test_level_curve_membership(n, which, C):
    lo, hi = (-1.5, 1.5) if which == "re" else (0.2, 1.5)
    curve = level_curve(n, C, which, lo, hi, 101)
    assert level_residual(curve, n, which, C) < 1e-10


def test_level_curve_equations_n2():
    re = level_curve(2, 1.0, "re", -1.0, 1.0, 51)
    assert np.allclose(np.sum(re.gamma ** 2, -1), 1.0, atol=1e-12)  # x^2+y^2
    im = level_curve(2, 1.0, "im", 0.2, 1.5, 51)
    assert np.allclose(2 * im.gamma[:, 0] * im.gamma[:, 1], 1.0, atol=1e-12)


def test_level_curve_equation_n3():
    c = level_curve(3, 1.0, "re", -1.0, 1.0, 51)
    x, y = c.gamma[:, 0], c.gamma[:, 1]
    assert np.allclose(x ** 3 + 3 * x * y ** 2, 1.0, atol=1e-12)


def test_level_curve_invalid_ranges():
    with pytest.raises(InvalidRange):
        level_curve(2, 0.0, "re", -1, 1, 11)
    with pytest.raises(InvalidRange):
        level_curve(2, 1.0, "im", -1.0, 1.0, 11)
    with pytest.raises(InvalidRange):
        level_curve(2, 1.0, "either", -1, 1, 11)


def test_crossing_counts():
    assert lightcone_crossings(explicit_circle(1.0, 64)).count == 4
    assert lightcone_crossings(explicit_hyperbola(1.0, 0.2, 3.0, 301)).count == 1
    assert lightcone_crossings(explicit_cubic_level(1.0, -2.5, 2.5, 401)).count == 2


def test_tangential_contact_flagged():
    # squared norm t^3 + 1 - 1: sign change with vanishing slope at t = 0
    def fn(t):
        t = np.asarray(t, dtype=float)
        return np.stack([np.sqrt(1.0 + t ** 3), np.ones_like(t)], -1)

    curve = profile_from_function(fn, -0.9, 0.9, 181)
    rep = lightcone_crossings(curve)
    assert rep.count == 1
    assert rep.locations[0] == pytest.approx(0.0, abs=1e-9)
    assert rep.tangential[0]


def test_crossing_location_refined():
    hyp = explicit_hyperbola(1.0, 0.2, 3.0, 301)
    rep = lightcone_crossings(hyp)
    # x = y on 2xy = 1 at x = 1/sqrt(2)
    assert rep.locations[0] == pytest.approx(2 ** -0.5, abs=1e-9)
    assert not rep.tangential[0]


def test_torus_quadric_equations():
    # the lifted circle family satisfies both quadratic forms
    # (x1 - y2)^2 + (y1 + x2)^2 = (x1 + y2)^2 + (x2 - y1)^2 = C
    C = 1.7
    imm = lift(explicit_circle(C, 32), 2, (16,))
    v = imm.values
    x1, y1 = v[..., 0, 0], v[..., 0, 1]
    x2, y2 = v[..., 1, 0], v[..., 1, 1]
    q1 = (x1 - y2) ** 2 + (y1 + x2) ** 2
    q2 = (x1 + y2) ** 2 + (x2 - y1) ** 2
    assert np.allclose(q1, C, atol=1e-12)
    assert np.allclose(q2, C, atol=1e-12)


def test_tau_symmetry_even_preserves():
    c = explicit_circle(1.3, 64)
    assert level_residual(tau_multiply(c), 2, "re", 1.3) < 1e-12


def test_tau_symmetry_odd_exchanges():
    c = level_curve(3, 1.0, "re", -1.0, 1.0, 41)
    t = tau_multiply(c)
    assert level_residual(t, 3, "im", 1.0) < 1e-10
    assert level_residual(t, 3, "re", 1.0) > 1e-2


def test_cosh_branch_endpoint_limit():
    C = 2.0
    for n in (2, 3):
        c = level_curve(n, C, "re", -12.0, 12.0, 1001)
        lim = (2 * C) ** (1.0 / n) / 2.0
        assert np.allclose(c.gamma[-1], [lim, lim], atol=1e-4)
        assert np.allclose(c.gamma[0], [lim, -lim], atol=1e-4)


def test_sinh_branch_asymptotes():
    # as phi -> 0+ the im-branch blows up along a coordinate direction
    c = level_curve(2, 1.0, "im", 1e-3, 1.0, 101)
    assert d_norm2(c.gamma[:1])[0] > 100.0


def test_minimal_lift_H_refines():
    from parakahler.geometry import mean_curvature

    hs = []
    for scount, tcount in ((201, 16), (401, 32)):
        c = level_curve(2, 1.0, "re", -1.0, 1.0, scount)
        imm = lift(c, 2, (tcount,))
        H = mean_curvature(imm, (scount // 2, tcount // 4))
        hs.append(float(np.sqrt(np.sum(H ** 2))))
    assert hs[0] / hs[1] == pytest.approx(4.0, abs=0.5)
