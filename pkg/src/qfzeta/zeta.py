"""Multiplier series, the Selberg product Z(s), and its analogue F(n).

Both products run over conjugacy classes enumerated up to a word-length
budget L.  Products are accumulated in log space (principal branch); every
factor 1 - lambda^(n+m) has positive real part because |lambda| < 1, so no
branch crossing occurs.  Truncation tails are estimated from a geometric
fit on per-length increments and are reported, never silently absorbed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, NotFuchsian
from .words import DEFAULT_WORD_CAP, ConjugacyClass, GroupWords

DEFAULT_M = 64
#: per-class m-loop stops once |lambda^(n+m)| drops below this
M_FLOOR = 1e-18
#: safety factor sized for parity-oscillating increment sequences, where
#: the next increment can exceed the largest observed decay ratio
TAIL_SAFETY = 4.0
FUCHSIAN_IM_TOL = 1e-9


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    truncation_length: int
    tail_estimate: float
    terms_used: int


@dataclass(frozen=True)
class ProductValue:
    log_value: complex
    value: complex
    L: int
    M: int
    tail_estimate: float
    n_classes: int
    n_primitive: int


def geometric_tail(increments) -> float:
    """Extrapolated tail from the last (up to three) per-length increments.

    Fits a ratio from successive increment magnitudes and sums the implied
    geometric series, times a safety factor.  Zero increments give a zero
    tail (the data is exhausted, e.g. cyclic groups beyond their budget).
    """
    incs = [abs(x) for x in increments if abs(x) > 0][-3:]
    if not incs:
        return 0.0
    if len(incs) == 1:
        ratio = 0.5
    else:
        ratio = max(incs[i + 1] / incs[i] for i in range(len(incs) - 1))
    ratio = min(ratio, 0.99)
    return TAIL_SAFETY * incs[-1] * ratio / (1.0 - ratio)


def _classes(G, L, cap) -> list[ConjugacyClass]:
    return GroupWords(G).conjugacy_classes(L, cap=cap)


def multiplier_series(G, n: int, L: int, cap: int = DEFAULT_WORD_CAP,
                      classes=None) -> SeriesValue:
    """Sum of |lambda|^n over ALL conjugacy classes of length <= L."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if classes is None:
        classes = _classes(G, L, cap)
    by_len = {}
    for c in classes:
        by_len[c.word_length] = by_len.get(c.word_length, 0.0) \
            + abs(c.multiplier.value) ** n
    total = sum(by_len[k] for k in sorted(by_len))
    incs = [by_len.get(k, 0.0) for k in range(1, L + 1)]
    return SeriesValue(value=complex(total), truncation_length=L,
                       tail_estimate=geometric_tail(incs),
                       terms_used=len(classes))


def class_log_factor(lam: complex, exponent, M: int):
    """(sum of log(1 - lam^(exponent+m)) for m = 0..M', m-tail bound).

    The m loop stops at M or once the factor is within machine epsilon of
    1, whichever comes first.
    """
    if abs(lam) >= 1.0:
        raise DomainError(f"|lambda^n| >= 1 for lambda = {lam}")
    total = 0.0 + 0.0j
    m = 0
    while m <= M:
        p = lam ** (exponent + m)
        if abs(p) < M_FLOOR:
            return total, 0.0
        total += cmath.log(1.0 - p)
        m += 1
    a = abs(lam)
    # remaining sum of |lam|^(exponent+m), m > M, over the geometric tail
    tail = a ** (exponent + M + 1) / (1.0 - a)
    return total, tail


def _product_over_classes(classes, exponent, M: int, L: int) -> ProductValue:
    primitive = [c for c in classes if c.primitive]
    log_total = 0.0 + 0.0j
    by_len = {}
    m_tail = 0.0
    for c in primitive:
        logs, tail = class_log_factor(c.multiplier.value, exponent, M)
        log_total += logs
        m_tail += tail
        by_len[c.word_length] = by_len.get(c.word_length, 0.0) + abs(logs)
    incs = [by_len.get(k, 0.0) for k in range(1, L + 1)]
    log_tail = geometric_tail(incs) + m_tail
    value = cmath.exp(log_total)
    return ProductValue(
        log_value=log_total, value=value, L=L, M=M,
        tail_estimate=abs(value) * math.expm1(log_tail),
        n_classes=len(classes), n_primitive=len(primitive))


def f_function(G, n: int, L: int, M: int = DEFAULT_M,
               cap: int = DEFAULT_WORD_CAP, classes=None) -> ProductValue:
    """Double product of (1 - lambda^(n+m)) over primitive classes."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if classes is None:
        classes = _classes(G, L, cap)
    return _product_over_classes(classes, n, M, L)


def selberg_z(G, s: float, L: int, M: int = DEFAULT_M,
              cap: int = DEFAULT_WORD_CAP, classes=None) -> ProductValue:
    """Truncated Selberg zeta product for a Fuchsian group, real s > 1.

    Shares the f_function code path exactly, so for integer s the two
    agree term for term; the result is coerced to its real value.
    """
    if s <= 1:
        raise ValueError("s must be > 1")
    if classes is None:
        classes = _classes(G, L, cap)
    for c in classes:
        if abs(c.multiplier.value.imag) > FUCHSIAN_IM_TOL:
            raise NotFuchsian(
                f"class multiplier {c.multiplier.value} has nonreal part")
    out = _product_over_classes(classes, s, M, L)
    return ProductValue(
        log_value=complex(out.log_value.real), value=complex(out.value.real),
        L=out.L, M=out.M, tail_estimate=out.tail_estimate,
        n_classes=out.n_classes, n_primitive=out.n_primitive)
