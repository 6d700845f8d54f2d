"""Exception hierarchy shared across the package."""


class QfzError(Exception):
    """Base class for all errors raised by qfzeta."""

    code = "qfzeta.error"


class NotLoxodromic(QfzError):
    code = "moebius.not_loxodromic"


class DegenerateMarking(QfzError):
    code = "moebius.degenerate_marking"


class ParseError(QfzError):
    code = "moebius.parse_error"


class LimitExceeded(QfzError):
    code = "group.limit_exceeded"


class DomainError(QfzError):
    """A multiplier power fell outside the open unit disc."""

    code = "zeta.domain_error"


class NotFuchsian(QfzError):
    code = "zeta.not_fuchsian"


class IncompleteDomain(QfzError):
    code = "domain.incomplete_domain"


class BadCenter(QfzError):
    code = "domain.bad_center"


class QuadratureUnconverged(QfzError):
    code = "domain.quadrature_unconverged"


class Unconverged(QfzError):
    code = "bers.unconverged"


class RankDeficient(QfzError):
    code = "bers.rank_deficient"


class SingularCollocation(QfzError):
    code = "bers.singular_collocation"
