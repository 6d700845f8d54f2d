import cmath
import math

import numpy as np
import pytest

from qfzeta.errors import DomainError, NotFuchsian
from qfzeta.presets import (
    complex_schottky_group,
    cyclic_group,
    fuchsian_schottky_group,
    octagon_group,
)
from qfzeta.moebius import conjugate_group
from qfzeta.words import GroupWords
from qfzeta.zeta import (
    class_log_factor,
    f_function,
    geometric_tail,
    multiplier_series,
    selberg_z,
)


def test_cyclic_multiplier_series_closed_form():
    # classes a^k and a^-k, k = 1..L, each with |lambda|^2 = 0.01^k
    G = cyclic_group(0.1)
    out = multiplier_series(G, 2, 5)
    expected = 2.0 * sum(0.01 ** k for k in range(1, 6))
    assert abs(out.value - expected) < 1e-15
    assert out.terms_used == 10


def test_cyclic_f_closed_form():
    # two primitive classes (a and a^-1), lambda = 0.1, n = 2, M = 3:
    # each contributes (1-1e-2)(1-1e-3)(1-1e-4)(1-1e-5)
    G = cyclic_group(0.1)
    out = f_function(G, 2, 1, M=3)
    factor = (1 - 1e-2) * (1 - 1e-3) * (1 - 1e-4) * (1 - 1e-5)
    assert abs(out.value - factor ** 2) < 1e-15
    assert out.n_primitive == 2


def test_class_log_factor_truncation_tail():
    logs, tail = class_log_factor(0.5, 2, 4)
    direct = sum(cmath.log(1 - 0.5 ** (2 + m)) for m in range(5))
    assert abs(logs - direct) < 1e-15
    assert tail == pytest.approx(0.5 ** 7 / 0.5)
    with pytest.raises(DomainError):
        class_log_factor(1.0, 2, 4)


def test_f_reflection_symmetry_bitwise():
    G = complex_schottky_group()
    Gc = conjugate_group(G)
    f = f_function(G, 2, 5)
    fc = f_function(Gc, 2, 5)
    assert fc.value == f.value.conjugate()
    assert fc.log_value == f.log_value.conjugate()


def test_octagon_f_real_and_equals_z():
    G = octagon_group()
    classes = GroupWords(G).conjugacy_classes(3)
    f = f_function(G, 2, 3, classes=classes)
    assert f.log_value.imag == 0.0
    z = selberg_z(G, 2.0, 3, classes=classes)
    assert z.value == f.value  # shared code path, term for term
    assert z.value.imag == 0.0


def test_selberg_z_rejects_complex_multipliers():
    with pytest.raises(NotFuchsian):
        selberg_z(complex_schottky_group(), 2.0, 3)
    with pytest.raises(ValueError):
        selberg_z(cyclic_group(), 0.5, 2)


def test_series_requires_n_at_least_two():
    with pytest.raises(ValueError):
        multiplier_series(cyclic_group(), 1, 3)
    with pytest.raises(ValueError):
        f_function(cyclic_group(), 1, 3)


def test_geometric_tail_basics():
    assert geometric_tail([]) == 0.0
    assert geometric_tail([0.0, 0.0]) == 0.0
    # single increment: ratio defaults to 1/2 -> tail = 4 * x * 0.5 / 0.5
    assert geometric_tail([1e-3]) == pytest.approx(4e-3)
    t = geometric_tail([1.0, 0.1, 0.01])
    assert t == pytest.approx(4.0 * 0.01 * 0.1 / 0.9)


@pytest.mark.parametrize("maker,L", [
    (cyclic_group, 3),
    (fuchsian_schottky_group, 3),
    (complex_schottky_group, 3),
])
def test_tail_honesty_series(maker, L):
    G = maker()
    a = multiplier_series(G, 2, L)
    b = multiplier_series(G, 2, L + 2)
    assert abs(b.value - a.value) <= a.tail_estimate


@pytest.mark.parametrize("maker,L", [
    (cyclic_group, 3),
    (fuchsian_schottky_group, 3),
    (complex_schottky_group, 3),
])
def test_tail_honesty_f(maker, L):
    G = maker()
    a = f_function(G, 2, L)
    b = f_function(G, 2, L + 2)
    assert abs(b.value - a.value) <= a.tail_estimate


def test_schottky_f_value_stable():
    # spot value, pinned against an independent high-budget run
    G = fuchsian_schottky_group()
    out = f_function(G, 2, 6)
    ref = f_function(G, 2, 8)
    assert abs(out.value - ref.value) < 1e-8
