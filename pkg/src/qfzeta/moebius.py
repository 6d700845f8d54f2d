"""Moebius transformations, multipliers, and group definitions.

Matrices are stored normalized to determinant 1.  A map and its negation
represent the same transformation, so all comparisons are made up to an
overall sign.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMarking, NotLoxodromic, ParseError

IDENTITY_TOL = 1e-10
RELATOR_TOL = 1e-8
TRACE_BAND_TOL = 1e-12

#: Sentinel for the point at infinity on the Riemann sphere.
INF = float("inf")


class MoebiusMap:
    """A 2x2 complex matrix of determinant 1, taken projectively."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, _normalized=False):
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        if not _normalized:
            det = a * d - b * c
            if det == 0:
                raise ValueError("singular matrix is not a Moebius map")
            s = cmath.sqrt(det)
            a, b, c, d = a / s, b / s, c / s, d / s
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1, _normalized=True)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        # No renormalization here: the determinant of a product of det-1
        # matrices is 1 up to backward error, while the *computed* det of a
        # large-entry product is cancellation noise; dividing by it would
        # inject that noise into the entries.
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            _normalized=True,
        )

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a, _normalized=True)

    def conj(self) -> "MoebiusMap":
        """Entrywise complex conjugate."""
        return MoebiusMap(
            self.a.conjugate(), self.b.conjugate(),
            self.c.conjugate(), self.d.conjugate(),
            _normalized=True,
        )

    def conjugated_by(self, h: "MoebiusMap") -> "MoebiusMap":
        """h . self . h^{-1}."""
        return h.compose(self).compose(h.inverse())

    def __call__(self, z):
        if z == INF:
            if abs(self.c) == 0:
                return INF
            return self.a / self.c
        denom = self.c * z + self.d
        if denom == 0:
            return INF
        return (self.a * z + self.b) / denom

    def derivative(self, z):
        """gamma'(z) = 1/(cz+d)^2 for finite z."""
        return 1.0 / (self.c * z + self.d) ** 2

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def approx_eq(self, other: "MoebiusMap", tol: float = IDENTITY_TOL) -> bool:
        """Entrywise equality up to the overall +/- sign."""
        dp = max(abs(self.a - other.a), abs(self.b - other.b),
                 abs(self.c - other.c), abs(self.d - other.d))
        dm = max(abs(self.a + other.a), abs(self.b + other.b),
                 abs(self.c + other.c), abs(self.d + other.d))
        return min(dp, dm) <= tol

    def is_identity(self, tol: float = IDENTITY_TOL) -> bool:
        return self.approx_eq(MoebiusMap.identity(), tol)

    def __repr__(self):
        return f"MoebiusMap({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"


@dataclass(frozen=True)
class Multiplier:
    """The eigenvalue ratio lambda of a loxodromic map, with |lambda| < 1."""

    value: complex
    trace: complex

    def __post_init__(self):
        if not abs(self.value) < 1:
            raise NotLoxodromic(f"|lambda| = {abs(self.value)} not < 1")


def classify(m: MoebiusMap) -> str:
    """One of 'identity', 'parabolic', 'elliptic', 'loxodromic'.

    The decision is by trace^2, which is sign-independent.  trace^2 in the
    closed real band [0, 4] (width TRACE_BAND_TOL) is non-loxodromic.
    """
    t2 = m.trace() ** 2
    if m.is_identity():
        return "identity"
    in_band = (abs(t2.imag) <= TRACE_BAND_TOL
               and -TRACE_BAND_TOL <= t2.real <= 4.0 + TRACE_BAND_TOL)
    if not in_band:
        return "loxodromic"
    if t2.real >= 4.0 - TRACE_BAND_TOL:
        return "parabolic"
    return "elliptic"


def multiplier(m: MoebiusMap) -> Multiplier:
    """Multiplier lambda of a loxodromic map.

    lambda is the root of lambda^2 - (t^2-2) lambda + 1 = 0 with modulus
    below 1, where t is the trace; the branch is selected by modulus, not
    by eigen-decomposition.
    """
    if classify(m) != "loxodromic":
        raise NotLoxodromic(f"classification is {classify(m)!r}")
    t = m.trace()
    u = t * t - 2.0
    root = cmath.sqrt(u * u - 4.0)
    # the roots multiply to 1; form the large one first so the small one
    # comes from a division, not a cancelling subtraction
    big1 = (u + root) / 2.0
    big2 = (u - root) / 2.0
    big = big1 if abs(big1) >= abs(big2) else big2
    lam = 1.0 / big
    return Multiplier(lam, t)


def fixed_points(m: MoebiusMap):
    """(attracting, repelling) fixed points of a loxodromic map.

    The attracting point p is the one with |m'(p)| < 1.  Either point may
    be INF.
    """
    if classify(m) != "loxodromic":
        raise NotLoxodromic(f"classification is {classify(m)!r}")
    if abs(m.c) < 1e-300:
        # fixed points: infinity and b/(d-a)
        other = m.b / (m.d - m.a)
        # in the chart 1/z the derivative at infinity is (d/a)^2
        if abs(m.a) > abs(m.d):
            return INF, other
        return other, INF
    disc = cmath.sqrt((m.d - m.a) ** 2 + 4.0 * m.b * m.c)
    z1 = ((m.a - m.d) + disc) / (2.0 * m.c)
    z2 = ((m.a - m.d) - disc) / (2.0 * m.c)
    if abs(m.derivative(z1)) < 1.0:
        return z1, z2
    return z2, z1


class GroupDefinition:
    """Named Moebius generators plus a combinatorial type.

    combinatorial_type is ('free', r) or ('surface', g).  For surface
    groups the marking is the list of 2g generator names in the order
    a1 b1 a2 b2 ..., and the standard relator prod [a_i, b_i] must be
    +/- identity within RELATOR_TOL.
    """

    def __init__(self, names, maps, combinatorial_type, marking=None,
                 validate=True):
        if len(names) != len(maps):
            raise ValueError("names and maps must align")
        if len(set(names)) != len(names):
            raise ParseError("duplicate generator names")
        self.names = list(names)
        self.maps = list(maps)
        kind, count = combinatorial_type
        if kind not in ("free", "surface"):
            raise ParseError(f"unknown combinatorial type {kind!r}")
        self.kind = kind
        self.count = int(count)
        if kind == "free" and len(names) != self.count:
            raise ParseError("free(r) expects exactly r generators")
        if kind == "surface":
            if self.count < 2:
                raise ParseError("surface type requires genus >= 2")
            if len(names) != 2 * self.count:
                raise ParseError("surface(g) expects exactly 2g generators")
            if marking is None:
                marking = list(names)
            if sorted(marking) != sorted(names):
                raise ParseError("marking must list every generator once")
        self.marking = list(marking) if marking is not None else None
        self._by_name = dict(zip(self.names, self.maps))
        if validate:
            self.validate()

    # -- basic access -------------------------------------------------

    def generator(self, name: str) -> MoebiusMap:
        return self._by_name[name]

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def genus(self):
        return self.count if self.kind == "surface" else None

    def combinatorial_type(self):
        return (self.kind, self.count)

    def a_generators(self):
        """Marked a_1..a_g (surface) or the marked order (free)."""
        if self.kind == "surface":
            return [self.marking[2 * i] for i in range(self.count)]
        return list(self.marking or self.names)

    def b_generators(self):
        if self.kind != "surface":
            raise ParseError("b-generators only exist for surface type")
        return [self.marking[2 * i + 1] for i in range(self.count)]

    def relator_value(self) -> MoebiusMap:
        """Evaluate prod_i [a_i, b_i] for surface type."""
        if self.kind != "surface":
            raise ParseError("free groups have no relator")
        out = MoebiusMap.identity()
        for i in range(self.count):
            a = self.generator(self.marking[2 * i])
            b = self.generator(self.marking[2 * i + 1])
            out = out @ a @ b @ a.inverse() @ b.inverse()
        return out

    def validate(self, relator_tol: float = RELATOR_TOL):
        for name, m in zip(self.names, self.maps):
            if classify(m) != "loxodromic":
                raise NotLoxodromic(
                    f"generator {name!r} is {classify(m)}, expected loxodromic")
        if self.kind == "surface":
            if not self.relator_value().is_identity(relator_tol):
                raise ParseError("surface relator does not close to identity")

    def is_fuchsian(self, tol: float = 1e-9) -> bool:
        """True when every generator entry is real within tol."""
        return all(
            max(abs(m.a.imag), abs(m.b.imag), abs(m.c.imag), abs(m.d.imag)) <= tol
            for m in self.maps)

    def replaced(self, maps):
        return GroupDefinition(self.names, maps, (self.kind, self.count),
                               marking=self.marking, validate=False)


def conjugate_group(G: GroupDefinition) -> GroupDefinition:
    """Entrywise complex conjugation of every generator (the inversion)."""
    return G.replaced([m.conj() for m in G.maps])


def _map_to_zero_one_inf(p, q, r) -> MoebiusMap:
    """Moebius map sending p -> 0, q -> 1, r -> infinity."""
    if len({p, q, r}) != 3:
        raise DegenerateMarking("normalization points are not distinct")
    if p == INF:
        return MoebiusMap(0, q - r, 1, -r)
    if q == INF:
        return MoebiusMap(1, -p, 1, -r)
    if r == INF:
        return MoebiusMap(1, -p, 0, q - p)
    return MoebiusMap(q - r, -p * (q - r), q - p, -r * (q - p))


def normalize_marked_group(G: GroupDefinition) -> GroupDefinition:
    """Conjugate so that fix points sit at the standard configuration.

    Attracting fixed points of a1 and a2 go to 0 and 1; the repelling
    fixed point of a1 goes to infinity.
    """
    a_names = G.a_generators()
    if len(a_names) < 2:
        raise DegenerateMarking("need at least two marked generators")
    a1 = G.generator(a_names[0])
    a2 = G.generator(a_names[1])
    att1, rep1 = fixed_points(a1)
    att2, _ = fixed_points(a2)
    h = _map_to_zero_one_inf(att1, att2, rep1)
    return G.replaced([m.conjugated_by(h) for m in G.maps])
