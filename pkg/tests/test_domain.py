import math

import numpy as np
import pytest

from qfzeta.domain import (
    FundamentalPolygon,
    dirichlet_domain,
    density_weight,
    hyperbolic_area,
    inner_product,
    quadrature_rule,
    transform_rule,
)
from qfzeta.errors import BadCenter, IncompleteDomain, QuadratureUnconverged
from qfzeta.presets import (
    OCTAGON_CENTER,
    cyclic_group,
    fuchsian_schottky_group,
    octagon_group,
)
from qfzeta.words import GroupWords, invert_word

TARGET_AREA = 4.0 * math.pi  # Gauss-Bonnet for genus 2


@pytest.fixture(scope="module")
def octagon_polygon():
    return dirichlet_domain(octagon_group(), OCTAGON_CENTER)


def test_octagon_polygon_shape(octagon_polygon):
    P = octagon_polygon
    assert len(P.sides) == 8
    assert P.is_complete
    # all vertices at equal hyperbolic distance from the center
    def dist(z):
        return math.acosh(
            1 + abs(z - P.center) ** 2 / (2 * P.center.imag * z.imag))
    ds = [dist(v) for v in P.vertices]
    assert max(ds) - min(ds) < 1e-9


def test_octagon_sides_paired(octagon_polygon):
    W = GroupWords(octagon_group())
    words = {s.pairing_word for s in octagon_polygon.sides}
    for w in words:
        assert W.element_canonical(invert_word(w, 4)) in words


def test_octagon_area(octagon_polygon):
    assert abs(hyperbolic_area(octagon_polygon) - TARGET_AREA) < 1e-6


def test_area_center_independence():
    P = dirichlet_domain(octagon_group(), 0.15 + 1.2j)
    assert abs(hyperbolic_area(P) - TARGET_AREA) < 1e-6


def test_area_additivity_over_fan(octagon_polygon):
    P = octagon_polygon
    total = 0.0
    for s in P.sides:
        sub = FundamentalPolygon(P.center, (s.z1, s.z2), (s,), P.genus)
        total += hyperbolic_area(sub)
    assert abs(total - hyperbolic_area(P)) < 1e-10


def test_quadrature_invariance_under_group(octagon_polygon):
    rule = quadrature_rule(octagon_polygon, 24)
    m = octagon_group().generator("a2")
    moved = transform_rule(rule, m)
    a0 = float(np.sum(rule.weights / np.imag(rule.nodes) ** 2))
    a1 = float(np.sum(moved.weights / np.imag(moved.nodes) ** 2))
    assert abs(a0 - a1) < 1e-10


def test_inner_product_group_invariance(octagon_polygon):
    # <phi, psi> computed on gamma(F) with pulled-back differentials
    # equals the value on F
    n = 2
    rule = quadrature_rule(octagon_polygon, 20)
    m = octagon_group().generator("a1")
    phi = lambda z: (z + 2j) ** -4.0
    psi = lambda z: (z + 1 + 3j) ** -4.0
    moved = transform_rule(rule, m)
    minv = m.inverse()

    def pull(f):
        return lambda z: f((minv.a * z + minv.b) / (minv.c * z + minv.d)) \
            * (minv.c * z + minv.d) ** (-2.0 * n)

    base = np.sum(rule.weights * phi(rule.nodes)
                  * np.conj(psi(rule.nodes))
                  * density_weight(np.imag(rule.nodes), n))
    # pull both arguments back through gamma^-1 on the moved rule
    zz = moved.nodes
    moved_val = np.sum(moved.weights * pull(phi)(zz) * np.conj(pull(psi)(zz))
                       * density_weight(np.imag(zz), n))
    assert abs(base - moved_val) / abs(base) < 1e-10


def test_inner_product_matches_direct_sum(octagon_polygon):
    phi = lambda z: (z + 2j) ** -4.0
    rule = quadrature_rule(octagon_polygon, 16)
    v1 = inner_product(phi, phi, 2, octagon_polygon, rule=rule)
    direct = complex(np.sum(rule.weights * np.abs(phi(rule.nodes)) ** 2
                            * np.imag(rule.nodes) ** 2))
    assert abs(v1 - direct) < 1e-15
    assert v1.real > 0


def test_inner_product_refinement_check(octagon_polygon):
    phi = lambda z: (z + 2j) ** -4.0
    v = inner_product(phi, phi, 2, octagon_polygon, order=16, check=True)
    assert v.real > 0
    # a wildly oscillatory integrand fails the two-level agreement
    osc = lambda z: np.exp(40j * z)
    with pytest.raises(QuadratureUnconverged):
        inner_product(osc, osc, 2, octagon_polygon, order=6, check=True,
                      check_tol=1e-12)


def test_density_conventions():
    y = np.array([0.5, 2.0])
    assert np.allclose(density_weight(y, 2), y ** 2)
    assert np.allclose(density_weight(y, 2, "2y"), 4.0 * y ** 2)
    with pytest.raises(ValueError):
        density_weight(y, 2, "bogus")


def test_free_group_domains_keep_truncation_edges():
    P = dirichlet_domain(cyclic_group(), 1j)
    tags = [s.pairing_word for s in P.sides]
    assert tags.count(None) == 2
    assert (0,) in tags and (1,) in tags
    P2 = dirichlet_domain(fuchsian_schottky_group(), 1j)
    paired = {t for t in (s.pairing_word for s in P2.sides) if t is not None}
    assert {(0,), (1,), (2,), (3,)} <= paired


def test_bad_center_rejected():
    with pytest.raises(BadCenter):
        dirichlet_domain(octagon_group(), 1.0 - 1j)


def test_incomplete_domain_at_small_budget():
    with pytest.raises(IncompleteDomain):
        dirichlet_domain(octagon_group(), OCTAGON_CENTER, L=2)
