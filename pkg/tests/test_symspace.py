"""Chamber-valued, Finsler, and Riemannian distances on positive forms.

The Riemannian normalization is pinned by an independent numerical
integration of path length in the trace-form metric, and the Finsler
metric laws are sampled over random triples.
"""

import numpy as np
import pytest

from weylkit import symspace as ss
from weylkit.errors import (DegenerateSegment, NonRegularDirection,
                            NotPositiveDefinite, SingularInput)


def _rng():
    return np.random.default_rng(20240801)


def _random_point(rng, n=3, scale=1.0):
    g = np.eye(n) + scale * rng.standard_normal((n, n)) * 0.4
    while abs(np.linalg.det(g)) < 0.1:
        g = np.eye(n) + scale * rng.standard_normal((n, n)) * 0.4
    return ss.point_from_group(g)


# --- points -------------------------------------------------------------------

def test_sympoint_normalizes_det():
    p = ss.SymPoint(2.0 * np.eye(3))
    assert abs(np.linalg.det(p.mat) - 1.0) < 1e-10


def test_sympoint_rejects_asymmetric():
    with pytest.raises(NotPositiveDefinite):
        ss.SymPoint(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_sympoint_rejects_indefinite():
    with pytest.raises(NotPositiveDefinite):
        ss.SymPoint(np.diag([1.0, -2.0]))


# --- cartan -------------------------------------------------------------------

def test_cartan_identity():
    _, mu, _ = ss.cartan(np.eye(3))
    assert np.allclose(mu, 1.0)


def test_cartan_diagonal():
    _, mu, _ = ss.cartan(np.diag([4.0, 1.0, 0.25]))
    assert np.allclose(mu, [4.0, 1.0, 0.25])


def test_cartan_reconstruction_and_signs():
    rng = _rng()
    for _ in range(25):
        g = rng.standard_normal((4, 4))
        if abs(np.linalg.det(g)) < 0.05:
            continue
        u, mu, v = ss.cartan(g)
        gn = g / abs(np.linalg.det(g)) ** 0.25
        assert np.abs(u @ np.diag(mu) @ v.T - gn).max() < 1e-9
        assert np.abs(u @ u.T - np.eye(4)).max() < 1e-10
        assert np.abs(v @ v.T - np.eye(4)).max() < 1e-10
        assert abs(np.prod(mu) - 1.0) < 1e-9
        assert np.all(np.diff(mu) <= 1e-12)
        for j in range(4):
            lead = u[:, j][np.abs(u[:, j]) > 1e-12]
            assert lead[0] > 0


def test_cartan_singular_input():
    with pytest.raises(SingularInput):
        ss.cartan(np.diag([1.0, 1.0, 0.0]))


# --- chamber-valued distance ----------------------------------------------------

def test_delta_at_origin():
    o = ss.origin(3)
    assert np.allclose(ss.delta_distance(o, o), 0.0)


def test_delta_diagonal_example():
    lam = 2.5
    o = ss.origin(3)
    y = ss.point_from_group(np.diag([lam, 1.0, 1.0 / lam]))
    assert np.allclose(ss.delta_distance(o, y),
                       [np.log(lam), 0.0, -np.log(lam)], atol=1e-12)


def test_delta_reversal_identity():
    rng = _rng()
    for _ in range(30):
        x = _random_point(rng)
        y = _random_point(rng)
        lhs = ss.delta_distance(y, x)
        rhs = ss.delta_iota(ss.delta_distance(x, y))
        assert np.abs(lhs - rhs).max() < 1e-9


def test_delta_congruence_invariance():
    rng = _rng()
    for _ in range(20):
        x = _random_point(rng)
        y = _random_point(rng)
        g = rng.standard_normal((3, 3))
        g /= abs(np.linalg.det(g)) ** (1 / 3)
        lhs = ss.delta_distance(ss.apply_isometry(g, x), ss.apply_isometry(g, y))
        assert np.abs(lhs - ss.delta_distance(x, y)).max() < 1e-8


def test_iota_examples():
    assert np.allclose(ss.delta_iota([0.0, 0.0, 0.0]), 0.0)
    assert np.allclose(ss.delta_iota([1.0, 0.0, -1.0]), [1.0, 0.0, -1.0])
    assert np.allclose(ss.delta_iota([2.0, 1.0, -3.0]), [3.0, -1.0, -2.0])
    v = np.array([0.7, 0.1, -0.8])
    assert np.allclose(ss.delta_iota(ss.delta_iota(v)), v)


# --- Finsler distance ------------------------------------------------------------

def test_default_functional_is_positive_and_symmetric():
    phi = ss.FinslerFunctional.default(4)
    assert np.allclose(phi.c, [3.0, 1.0, -1.0, -3.0])
    rng = _rng()
    for _ in range(50):
        v = np.sort(rng.standard_normal(4))[::-1]
        v -= v.mean()
        if np.linalg.norm(v) < 1e-9:
            continue
        assert phi(v) > 0
        assert abs(phi(ss.delta_iota(v)) - phi(v)) < 1e-12


def test_finsler_diagonal_value():
    lam = 1.7
    o = ss.origin(3)
    y = ss.point_from_group(np.diag([lam, 1.0, 1.0 / lam]))
    assert abs(ss.finsler_distance(o, y) - 4 * np.log(lam)) < 1e-12


def test_finsler_symmetry_and_positivity():
    rng = _rng()
    for _ in range(50):
        x = _random_point(rng)
        y = _random_point(rng)
        d1 = ss.finsler_distance(x, y)
        d2 = ss.finsler_distance(y, x)
        assert abs(d1 - d2) < 1e-9
        assert d1 > 0
    x = _random_point(rng)
    assert abs(ss.finsler_distance(x, x)) < 1e-10


def test_finsler_triangle_inequality():
    rng = _rng()
    for _ in range(1000):
        x = _random_point(rng)
        y = _random_point(rng)
        z = _random_point(rng)
        defect = (ss.finsler_distance(x, y) + ss.finsler_distance(y, z)
                  - ss.finsler_distance(x, z))
        assert defect >= -1e-9


def test_finsler_riemannian_comparability():
    # min of phi over the unit sphere of the rank-2 chamber sits on its
    # two extreme rays; the max is at the dual vector itself
    n = 3
    phi = ss.FinslerFunctional.default(n)
    rays = []
    for k in range(1, n):
        r = np.array([1.0] * k + [0.0] * (n - k))
        r -= r.mean()
        rays.append(r / np.linalg.norm(r))
    c1 = min(phi(r) for r in rays) / 2.0  # riemannian = 2 |v|
    c2 = float(np.linalg.norm(phi.c)) / 2.0
    rng = _rng()
    for _ in range(200):
        x = _random_point(rng)
        y = _random_point(rng)
        dr = ss.riemannian_distance(x, y)
        df = ss.finsler_distance(x, y)
        assert c1 * dr - 1e-9 <= df <= c2 * dr + 1e-9


def test_dual_cone_triangle_inequality():
    rng = _rng()
    for _ in range(300):
        x = _random_point(rng)
        y = _random_point(rng)
        z = _random_point(rng)
        assert ss.dual_cone_defect(x, y, z) < 1e-9


# --- Riemannian distance ----------------------------------------------------------

def _path_length(points):
    """Independent oracle: discrete path length in the trace-form metric
    ds^2 = tr((P^-1 dP)^2)."""
    total = 0.0
    for a, b in zip(points, points[1:]):
        pinv = np.linalg.inv(0.5 * (a + b))
        step = pinv @ (b - a)
        total += np.sqrt(max(0.0, np.trace(step @ step)))
    return total


def test_riemannian_example():
    o = ss.origin(3)
    y = ss.SymPoint(np.diag([np.e ** 2, 1.0, np.e ** -2]))
    assert abs(ss.riemannian_distance(o, y) - 2 * np.sqrt(2)) < 1e-12


def test_riemannian_matches_integrated_length():
    rng = _rng()
    for _ in range(5):
        x = _random_point(rng)
        y = _random_point(rng)
        ts = np.linspace(0.0, 1.0, 4001)
        pts = [ss.geodesic(x, y, t).mat for t in ts]
        assert abs(_path_length(pts) - ss.riemannian_distance(x, y)) < 1e-5


def test_geodesic_midpoint():
    rng = _rng()
    x = _random_point(rng)
    y = _random_point(rng)
    m = ss.midpoint(x, y)
    d = ss.riemannian_distance(x, y)
    assert abs(ss.riemannian_distance(x, m) - d / 2) < 1e-8
    assert abs(ss.riemannian_distance(m, y) - d / 2) < 1e-8


# --- regularity ---------------------------------------------------------------------

def test_sequence_regularity_diagonal():
    gs = [np.diag([2.0 ** k, 1.0, 2.0 ** -k]) for k in range(1, 8)]
    rep = ss.sequence_regularity(gs)
    for k, row in zip(range(1, 8), rep.margins):
        assert np.allclose(row, k * np.log(2.0), atol=1e-10)
    assert rep.regular_trend


def test_sequence_regularity_wall_sequence():
    gs = [np.diag([2.0 ** k, 2.0 ** k, 4.0 ** -k]) for k in range(1, 8)]
    rep = ss.sequence_regularity(gs)
    assert np.allclose(rep.margins[:, 0], 0.0, atol=1e-9)
    assert not rep.regular_trend


def test_sequence_regularity_rotations():
    thetas = np.linspace(0.3, 2.0, 6)
    gs = []
    for t in thetas:
        c, s = np.cos(t), np.sin(t)
        gs.append(np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]]))
    rep = ss.sequence_regularity(gs)
    assert np.abs(rep.margins).max() < 1e-9
    assert not rep.regular_trend


def test_theta_regular_segment():
    cone = ss.RegularityCone(0.3)
    o = ss.origin(3)
    y = ss.flat_point([1.0, 0.0, -1.0])
    assert ss.theta_regular_segment(o, y, cone)
    wall = ss.flat_point([1.0, 1.0, -2.0])
    assert not ss.theta_regular_segment(o, wall, cone)
    scaled = ss.flat_point([2.0, 0.0, -2.0])
    assert ss.theta_regular_segment(o, scaled, cone)
    with pytest.raises(DegenerateSegment):
        ss.theta_regular_segment(o, o, cone)


def test_regularity_cone_flags_in_report():
    cone = ss.RegularityCone(0.5)
    gs = [np.diag([2.0 ** k, 1.0, 2.0 ** -k]) for k in range(1, 5)]
    rep = ss.sequence_regularity(gs, cone=cone)
    assert rep.theta_flags == [True] * 4


# --- horofunctions --------------------------------------------------------------------

def test_horofunction_at_origin_is_zero():
    o = ss.origin(3)
    est = ss.horofunction_estimate(o, [1.0, 0.0, -1.0], o, [5, 10, 20, 40])
    assert np.abs(np.array(est.estimates)).max() < 1e-12
    assert est.converged


def test_horofunction_on_ray_value():
    # base the ray at the origin; a point at ray parameter s has
    # horofunction value -phi(direction) * s
    o = ss.origin(3)
    direction = np.array([1.0, 0.0, -1.0])
    phi = ss.FinslerFunctional.default(3)
    s = 0.7
    x = ss.chamber_ray_point(o, direction, s)
    assert np.allclose(ss.delta_distance(o, x), s * direction, atol=1e-12)
    est = ss.horofunction_estimate(o, direction, x, [5, 10, 20, 40])
    assert est.converged
    assert abs(est.value - (-phi(direction) * s)) < 1e-9


def test_horofunction_generic_convergence_and_scheme_independence():
    rng = _rng()
    for _ in range(8):
        p = _random_point(rng)
        x = _random_point(rng)
        gaps = 1.0 + rng.random(2)
        direction = np.array([gaps[0] + gaps[1], gaps[1], 0.0])
        direction -= direction.mean()
        est_a = ss.horofunction_estimate(p, direction, x, [5, 10, 20, 40])
        assert est_a.converged
        assert abs(est_a.estimates[-1] - est_a.estimates[-2]) < 1e-6
        off = rng.standard_normal(3)
        est_b = ss.horofunction_estimate(p, direction, x, [5, 10, 20, 40],
                                         offset=off)
        assert abs(est_a.value - est_b.value) < 1e-6


def test_horofunction_rejects_wall_direction():
    o = ss.origin(3)
    with pytest.raises(NonRegularDirection):
        ss.horofunction_estimate(o, [1.0, 1.0, -2.0], o, [5, 10])


def test_riemannian_at_origin():
    o = ss.origin(4)
    assert ss.riemannian_distance(o, o) < 1e-12


def test_polyhedral_norm_properties():
    from hypothesis import given, settings
    from hypothesis import strategies as st

    phi = ss.FinslerFunctional.default(3)

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=3),
           st.lists(st.floats(-10, 10), min_size=3, max_size=3))
    def check(u, v):
        u = np.array(u) - np.mean(u)
        v = np.array(v) - np.mean(v)
        # triangle inequality and duality invariance of the norm
        assert phi.norm(u + v) <= phi.norm(u) + phi.norm(v) + 1e-9
        assert abs(phi.norm(-u[::-1]) - phi.norm(u)) < 1e-9
        if np.linalg.norm(u) > 1e-6:
            assert phi.norm(u) > 0

    check()


def test_graded_distance_matches_plain_path():
    # the multiprecision distance used inside horofunction estimates must
    # agree with the float path while both are well conditioned
    rng = _rng()
    phi = ss.FinslerFunctional.default(3)
    for _ in range(5):
        p = _random_point(rng)
        x = _random_point(rng)
        direction = np.array([1.3, 0.1, -1.4])
        t = 2.0
        pt = ss.chamber_ray_point(p, direction, t)
        direct = ss.finsler_distance(x, pt, phi) - ss.finsler_distance(
            ss.origin(3), pt, phi)
        est = ss.horofunction_estimate(p, direction, x, [t], phi)
        assert abs(est.estimates[0] - direct) < 1e-7


def test_cone_constraints_must_be_involution_closed():
    with pytest.raises(ValueError):
        ss.RegularityCone(0.1, constraints=((1.0, 0.0, 0.0),))
    sym = ss.RegularityCone(0.1, constraints=((1.0, 0.0, 0.0),
                                              (0.0, 0.0, -1.0)))
    assert sym.contains(np.array([1.0, 0.0, -1.0]))
