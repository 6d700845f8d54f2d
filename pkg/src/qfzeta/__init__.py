"""Numerics for Fuchsian and quasi-Fuchsian groups given by matrix
generators: conjugacy-class enumeration, multiplier series, the Selberg
zeta Z(s) and its holomorphic analogue F(n), Dirichlet fundamental
polygons with hyperbolic quadrature, and Bers kernel/period-matrix
computations."""

from .errors import (
    BadCenter,
    DegenerateMarking,
    DomainError,
    IncompleteDomain,
    LimitExceeded,
    NotFuchsian,
    NotLoxodromic,
    ParseError,
    QfzError,
    QuadratureUnconverged,
    RankDeficient,
    SingularCollocation,
    Unconverged,
)
from .moebius import (
    GroupDefinition,
    MoebiusMap,
    Multiplier,
    classify,
    conjugate_group,
    fixed_points,
    multiplier,
    normalize_marked_group,
)
from .groupfile import format_group, load_group, parse_group, save_group
from .words import ConjugacyClass, GroupWords
from .zeta import (
    ProductValue,
    SeriesValue,
    f_function,
    multiplier_series,
    selberg_z,
)
from .domain import (
    FundamentalPolygon,
    GeodesicSide,
    QuadratureRule,
    dirichlet_domain,
    hyperbolic_area,
    inner_product,
    quadrature_rule,
    transform_rule,
)
from .bers import (
    DifferentialBasis,
    KernelSum,
    OperatorMatrix,
    PeriodMatrix,
    bers_dual,
    element_ball,
    kappa_matrix,
    kernel,
    period_matrix,
    reproducing_check,
    theta_basis,
)

__version__ = "0.1.0"
