import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfzeta.errors import DegenerateMarking, NotLoxodromic, ParseError
from qfzeta.moebius import (
    INF,
    GroupDefinition,
    MoebiusMap,
    classify,
    conjugate_group,
    fixed_points,
    multiplier,
    normalize_marked_group,
)
from qfzeta.presets import octagon_group


def test_normalization_to_unit_determinant():
    m = MoebiusMap(2, 0, 0, 8)
    assert abs(m.det() - 1) < 1e-15
    assert abs(m.a - 0.5) < 1e-15 and abs(m.d - 2.0) < 1e-15


def test_singular_matrix_rejected():
    with pytest.raises(ValueError):
        MoebiusMap(1, 2, 2, 4)


def test_compose_inverse_identity():
    m = MoebiusMap(3, 1, 2, 1)
    assert (m @ m.inverse()).is_identity()
    assert (m.inverse() @ m).is_identity()
    assert MoebiusMap.identity()(0.5 + 0.5j) == 0.5 + 0.5j


def test_apply_and_infinity():
    m = MoebiusMap(0, 1, 1, 0)  # z -> 1/z with det -1 normalized away
    assert m(INF) == m.a / m.c
    m2 = MoebiusMap(1, 1, 0, 1)
    assert m2(INF) == INF
    m3 = MoebiusMap(1, 0, 1, -1)
    assert m3(1.0) == INF


def test_approx_eq_up_to_sign():
    m = MoebiusMap(3, 1, 2, 1)
    neg = MoebiusMap(-m.a, -m.b, -m.c, -m.d, _normalized=True)
    assert m.approx_eq(neg)


def test_classification_bands():
    assert classify(MoebiusMap.identity()) == "identity"
    assert classify(MoebiusMap(1, 1, 0, 1)) == "parabolic"
    # trace 1 -> trace^2 = 1 in [0,4): elliptic
    assert classify(MoebiusMap(0, -1, 1, 1)) == "elliptic"
    assert classify(MoebiusMap(2, 0, 0, 0.5)) == "loxodromic"
    # genuinely complex trace
    assert classify(MoebiusMap(3 + 0.5j, 1, 0, 1)) == "loxodromic"
    assert classify(MoebiusMap(2j, 1, 0, 1)) == "loxodromic"


def test_multiplier_trace_three():
    # lambda solves x^2 - 7x + 1 = 0 (t^2 - 2 = 7); small root (7-3*sqrt(5))/2
    m = MoebiusMap(2, 1, 1, 1)  # trace 3
    lam = multiplier(m).value
    expected = (7.0 - 3.0 * math.sqrt(5.0)) / 2.0
    assert abs(lam - expected) < 1e-12


def test_multiplier_no_cancellation_for_large_trace():
    # diag(k, 1/k) has lambda = k^-2 exactly
    k = 1e8
    m = MoebiusMap(k, 0, 0, 1 / k)
    lam = multiplier(m).value
    assert abs(lam - k ** -2) / k ** -2 < 1e-12


def test_multiplier_rejects_non_loxodromic():
    with pytest.raises(NotLoxodromic):
        multiplier(MoebiusMap(1, 1, 0, 1))


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9))
def test_multiplier_conjugation_invariance(seed):
    rng = np.random.default_rng(seed)
    m = MoebiusMap(2.0 + 0.4j, 0.3, 0.1, 1.0)
    e = rng.normal(size=8)
    h = MoebiusMap(e[0] + 1j * e[1], e[2] + 1j * e[3],
                   e[4] + 1j * e[5], e[6] + 1j * e[7] + 3.0)
    lam0 = multiplier(m).value
    lam1 = multiplier(m.conjugated_by(h)).value
    assert abs(lam0 - lam1) < 1e-10


def test_fixed_points_attracting_first():
    m = MoebiusMap(4, 0, 0, 0.25)  # z -> 16 z: attracting at infinity
    att, rep = fixed_points(m)
    assert att == INF and rep == 0
    att2, rep2 = fixed_points(m.inverse())
    assert att2 == 0 and rep2 == INF
    h = MoebiusMap(1, 2, 1, 1)
    att3, rep3 = fixed_points(m.conjugated_by(h))
    assert abs(att3 - h(INF)) < 1e-12
    assert abs(rep3 - h(0)) < 1e-12


def test_group_definition_validation():
    a = MoebiusMap(4, 0, 0, 0.25)
    with pytest.raises(ParseError):
        GroupDefinition(["a", "a"], [a, a], ("free", 2))
    with pytest.raises(NotLoxodromic):
        GroupDefinition(["p"], [MoebiusMap(1, 1, 0, 1)], ("free", 1))
    with pytest.raises(ParseError):
        GroupDefinition(["a"], [a], ("surface", 2))


def test_octagon_relator_closes():
    G = octagon_group()
    assert G.relator_value().is_identity(1e-8)
    assert G.is_fuchsian()


def test_conjugate_group_entries():
    G = octagon_group()
    Gc = conjugate_group(G)
    for m, mc in zip(G.maps, Gc.maps):
        assert mc.a == m.a.conjugate() and mc.b == m.b.conjugate()


def test_normalize_marked_group_fixed_points():
    G = normalize_marked_group(octagon_group())
    a1 = G.generator("a1")
    a2 = G.generator("a2")
    att1, rep1 = fixed_points(a1)
    att2, _ = fixed_points(a2)
    assert abs(att1) < 1e-9
    assert abs(att2 - 1) < 1e-9
    assert rep1 == INF or abs(rep1) > 1e12


def test_degenerate_marking_detected():
    a = MoebiusMap(4, 0, 0, 0.25)
    G = GroupDefinition(["a", "b"], [a, a.inverse()], ("free", 2))
    with pytest.raises(DegenerateMarking):
        normalize_marked_group(G)
