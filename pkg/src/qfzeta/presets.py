"""Built-in example groups used by tests and the bundled group files."""

from __future__ import annotations

import math

import numpy as np

from .moebius import GroupDefinition, MoebiusMap


def cyclic_group(lam: float = 0.1) -> GroupDefinition:
    """Cyclic group generated by z -> z/lam with multiplier lam in (0,1)."""
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0,1)")
    k = 1.0 / math.sqrt(lam)
    g = MoebiusMap(k, 0, 0, 1 / k)
    return GroupDefinition(["a"], [g], ("free", 1))


def fuchsian_schottky_group() -> GroupDefinition:
    """Real rank-2 Schottky-type group; axes 0--inf and 1--3."""
    a = MoebiusMap(4.0, 0, 0, 0.25)
    h = MoebiusMap(3, 1, 1, 1)
    b = MoebiusMap(4.5, 0, 0, 1 / 4.5).conjugated_by(h)
    return GroupDefinition(["a", "b"], [a, b], ("free", 2))


def complex_schottky_group() -> GroupDefinition:
    """Rank-2 group with genuinely complex multipliers (quasi-Fuchsian-like).

    All elements up to word length 8 are loxodromic, which is the budget the
    tests enumerate to.
    """
    k1 = 2.0 + 0.3j
    k2 = 2.2 + 0.1j
    a = MoebiusMap(k1, 0, 0, 1 / k1)
    h = MoebiusMap(3, 1, 1, 1)
    b = MoebiusMap(k2, 0, 0, 1 / k2).conjugated_by(h)
    return GroupDefinition(["a", "b"], [a, b], ("free", 2))


def octagon_group() -> GroupDefinition:
    """Genus-2 group of the regular hyperbolic octagon, in the half-plane.

    Construction: in the disc model, the eight sides of the regular octagon
    centred at 0 are paired by the four maps
        g_k = [[alpha, beta_k], [conj(beta_k), alpha]],
    alpha = 1 + sqrt(2) (= cot(pi/8)), |beta_k| = sqrt(2 + 2 sqrt(2)),
    arg(beta_k) = k pi/4, which satisfy
        g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 = id.
    Setting a = g0, b = g1^-1, c = g2, d = g3^-1 (so a b c d a- b- c- d- = 1)
    the change of generators a1 = ab, b1 = cdb, a2 = c, b2 = d turns this
    into the standard relator [a1,b1][a2,b2] = 1.  Everything is conjugated
    to the upper half-plane by the Cayley map, which makes all entries real;
    the octagon centre 0 maps to i.
    """
    alpha = 1.0 + math.sqrt(2.0)
    beta = math.sqrt(2.0 + 2.0 * math.sqrt(2.0))

    def gk(k: int) -> np.ndarray:
        bk = beta * np.exp(1j * k * np.pi / 4)
        return np.array([[alpha, bk], [np.conj(bk), alpha]])

    a = gk(0)
    b = np.linalg.inv(gk(1))
    c = gk(2)
    d = np.linalg.inv(gk(3))
    disc_gens = {
        "a1": a @ b,
        "b1": c @ d @ b,
        "a2": c,
        "b2": d,
    }
    cay = np.array([[1j, 1j], [-1, 1]]) / np.sqrt(2j)
    cay_inv = np.linalg.inv(cay)
    names = ["a1", "b1", "a2", "b2"]
    maps = []
    for name in names:
        m = cay @ disc_gens[name] @ cay_inv
        # entries are real up to roundoff; store them exactly real
        maps.append(MoebiusMap(m[0, 0].real, m[0, 1].real,
                               m[1, 0].real, m[1, 1].real))
    return GroupDefinition(names, maps, ("surface", 2),
                           marking=["a1", "b1", "a2", "b2"])


#: Half-plane image of the octagon's symmetry centre.
OCTAGON_CENTER = 1j
