"""Bers kernel and operator computations.

The kernel K(z, w) = c_n sum_gamma gamma'(z)^n / (gamma z - w)^(2n) with
c_n = 2^(2n-2) (2n-1) / pi is summed over group elements enumerated up to
word length L.  Theta series with poles in the opposite half-plane supply
bases of holomorphic n-differentials; Bers-dual bases come from a
collocation solve against kernel slices; period matrices are Gram matrices
under the hyperbolic-weighted inner product of the domain module.

The kernel is symmetric, K(z, w) = K(w, z): the gamma term of one side is
the gamma^-1 term of the other, and enumeration is closed under inverses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import FundamentalPolygon, QuadratureRule, density_weight, \
    quadrature_rule
from .errors import RankDeficient, SingularCollocation, Unconverged
from .moebius import GroupDefinition
from .words import GroupWords
from .zeta import geometric_tail

DEFAULT_KERNEL_L = 4
COND_BOUND = 1e8
POLE_RETRIES = 3
_CHUNK = 1024


def c_n(n: int) -> float:
    """Kernel prefactor 2^(2n-2) (2n-1) / pi."""
    return 2.0 ** (2 * n - 2) * (2 * n - 1) / math.pi


@dataclass(frozen=True)
class KernelSum:
    value: complex
    L: int
    tail_estimate: float
    n: int
    radius: float = math.nan   # set when a metric ball was used instead of L


@dataclass(frozen=True)
class DifferentialBasis:
    """d evaluators (vectorized z -> complex) of holomorphic n-differentials."""

    evaluators: tuple
    n: int
    side: str                  # 'plus' or 'minus'
    L: int
    poles: tuple = ()
    gram_cond: float = math.nan

    @property
    def d(self) -> int:
        return len(self.evaluators)


@dataclass(frozen=True)
class PeriodMatrix:
    entries: np.ndarray
    basis_id: str

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    det: complex
    eigenvalues: np.ndarray
    n_plus: PeriodMatrix = field(repr=False, default=None)
    n_minus: PeriodMatrix = field(repr=False, default=None)


# -- element enumeration ----------------------------------------------

def element_matrices(G, L: int):
    """(stack, lengths): matrices of all elements of word length <= L.

    Includes the identity at length 0.  Cached on the group object.
    """
    if G is None:  # trivial group
        return np.eye(2, dtype=complex)[None, :, :], np.array([0])
    cache = G.__dict__.setdefault("_element_cache", {})
    if L in cache:
        return cache[L]
    W = G.__dict__.setdefault("_group_words", GroupWords(G))
    mats = [np.eye(2, dtype=complex)]
    lengths = [0]
    for w in W.enumerate_words(L):
        mats.append(W.matrix_of(w).matrix())
        lengths.append(len(w))
    out = (np.array(mats), np.array(lengths))
    cache[L] = out
    return out


def element_ball(G, R: float, center: complex = 1j, margin: float = 2.5,
                 cap: int = 2_000_000):
    """(stack, dists): all elements with d(center, gamma center) <= R.

    Breadth-first search over the Cayley graph, expanding through elements
    up to R + margin so that displacement dips along geodesics do not
    disconnect the ball.  Deduplication keys on the orbit point gamma
    center (in disc coordinates): in a torsion-free discrete group the
    orbit map is injective, and orbit points inside the search radius are
    separated by far more than the rounding grid.
    """
    if G is None:
        return np.eye(2, dtype=complex)[None, :, :], np.array([0.0])
    cache = G.__dict__.setdefault("_ball_cache", {})
    key = (R, center, margin)
    if key in cache:
        return cache[key]
    gens = np.array([m.matrix() for m in G.maps]
                    + [m.inverse().matrix() for m in G.maps])
    cbar = np.conj(center)
    y0 = center.imag

    def orbit_keys(stack):
        a, b = stack[..., 0, 0], stack[..., 0, 1]
        c, d = stack[..., 1, 0], stack[..., 1, 1]
        gz = (a * center + b) / (c * center + d)
        u = (gz - center) / (gz - cbar)
        dist = np.arccosh(
            1.0 + np.abs(center - gz) ** 2 / (2.0 * y0 * gz.imag))
        return u, dist

    grid = 1e-10
    seen = {}
    mats = [np.eye(2, dtype=complex)]
    dists = [0.0]
    seen[(0, 0)] = 0.0 + 0.0j
    frontier = np.eye(2, dtype=complex)[None, :, :]
    limit = R + margin
    while len(frontier):
        cand = np.einsum("fij,gjk->fgik", frontier, gens).reshape(-1, 2, 2)
        u, dist = orbit_keys(cand)
        new = []
        for i in range(len(cand)):
            if not dist[i] <= limit:
                continue
            ui = u[i]
            cx, cy = round(ui.real / grid), round(ui.imag / grid)
            dup = False
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    prev = seen.get((cx + dx, cy + dy))
                    if prev is not None and abs(prev - ui) < 10 * grid:
                        dup = True
                        break
                if dup:
                    break
            if dup:
                continue
            seen[(cx, cy)] = ui
            mats.append(cand[i])
            dists.append(float(dist[i]))
            new.append(i)
            if len(mats) > cap:
                raise Unconverged(f"element cap {cap} hit in ball radius {R}")
        frontier = cand[new]
    stack = np.array(mats)
    dists = np.array(dists)
    keep = dists <= R
    out = (stack[keep], dists[keep])
    cache[key] = out
    return out


def _orbit_data(mats, z):
    """(gamma z, gamma'(z)) for every element in the stack, at scalar z."""
    a, b = mats[:, 0, 0], mats[:, 0, 1]
    c, d = mats[:, 1, 0], mats[:, 1, 1]
    den = c * z + d
    return (a * z + b) / den, den ** -2.0


# -- kernel -----------------------------------------------------------

def _stack_for(G, L, R, center):
    """Element stack plus per-element shell index (word length or ceil d)."""
    if R is not None:
        mats, dists = element_ball(G, R, center=center)
        return mats, np.ceil(dists - 1e-12).astype(int), int(math.ceil(R))
    mats, lengths = element_matrices(G, L)
    return mats, lengths, L


def kernel(G, n: int, z: complex, w: complex, side: str = "plus",
           L: int = DEFAULT_KERNEL_L, R: float = None,
           center: complex = 1j) -> KernelSum:
    """Poincare sum for the Bers kernel at a point pair.

    Elements are enumerated to word length L, or to hyperbolic
    displacement R when given (metric balls converge much faster for
    cocompact groups).  Per-shell partial sums feed a geometric tail
    estimate; Unconverged is raised when the increments grow instead of
    decaying.
    """
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    if n < 2:
        raise ValueError("n must be >= 2")
    mats, shells, top = _stack_for(G, L, R, center)
    gz, dgz = _orbit_data(mats, z)
    terms = dgz ** n * (gz - w) ** (-2 * n)
    incs = [abs(np.sum(terms[shells == k])) for k in range(1, top + 1)]
    nonzero = [x for x in incs if x > 0]
    if len(nonzero) >= 3 and nonzero[-1] > nonzero[-2] > nonzero[-3]:
        raise Unconverged("kernel per-shell increments are growing")
    pref = c_n(n)
    return KernelSum(value=pref * complex(np.sum(terms)), L=L,
                     tail_estimate=pref * geometric_tail(incs), n=n,
                     radius=math.nan if R is None else R)


def kernel_slice(G, n: int, z: complex, w, L: int = DEFAULT_KERNEL_L,
                 R: float = None, center: complex = 1j):
    """c_n sum_gamma gamma'(z)^n (gamma z - w)^(-2n) for an array of w."""
    w = np.asarray(w, dtype=complex)
    mats, _, _ = _stack_for(G, L, R, center)
    gz, dgz = _orbit_data(mats, z)
    coef = dgz ** n
    out = np.zeros(w.shape, dtype=complex)
    flat = w.reshape(-1)
    acc = np.zeros(flat.shape, dtype=complex)
    for i in range(0, len(gz), _CHUNK):
        blk_gz = gz[i:i + _CHUNK, None]
        blk_c = coef[i:i + _CHUNK, None]
        acc += np.sum(blk_c * (blk_gz - flat[None, :]) ** (-2 * n), axis=0)
    out[...] = acc.reshape(w.shape)
    return c_n(n) * out


# -- theta bases ------------------------------------------------------

def _theta_evaluator(G, n: int, pole: complex, L: int, R: float = None,
                     center: complex = 1j):
    mats, _, _ = _stack_for(G, L, R, center)

    def theta(z):
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1)
        acc = np.zeros(flat.shape, dtype=complex)
        a, b = mats[:, 0, 0], mats[:, 0, 1]
        c, d = mats[:, 1, 0], mats[:, 1, 1]
        for i in range(0, len(flat), _CHUNK):
            zz = flat[None, i:i + _CHUNK]
            den = c[:, None] * zz + d[:, None]
            gz = (a[:, None] * zz + b[:, None]) / den
            acc[i:i + _CHUNK] = np.sum(
                den ** (-2.0 * n) * (gz - pole) ** (-2 * n), axis=0)
        return acc.reshape(z.shape) if z.shape else complex(acc[0])

    return theta


def _scaled(f, s):
    def g(z):
        return s * f(z)
    return g


def default_poles(center: complex, count: int, seed: int = 0):
    """Deterministic pole candidates in the lower half-plane.

    Spread on rings around the reflection of the center, away from the
    real axis.
    """
    rng = np.random.default_rng(seed)
    c = complex(center).conjugate()
    out = []
    for k in range(count):
        ang = 2.0 * math.pi * (k + rng.random() * 0.25) / max(count, 1)
        rad = 0.35 + 0.4 * (k % 3)
        p = c + rad * complex(math.cos(ang), math.sin(ang))
        if p.imag > -0.15:
            p = complex(p.real, -0.15 - abs(p.imag))
        out.append(p)
    return out


def theta_basis(G, n: int, poles=None, L: int = DEFAULT_KERNEL_L,
                P: FundamentalPolygon = None, rule: QuadratureRule = None,
                order: int = 12, cond_bound: float = COND_BOUND,
                seed: int = 0, R: float = None) -> DifferentialBasis:
    """Basis of holomorphic n-differentials from relative theta series.

    Candidate poles (given, or generated deterministically) each yield an
    evaluator Theta_p; the subset of size d = (2n-1)(g-1) with the best
    conditioned Gram matrix is kept.  RankDeficient after pole retries.
    Evaluators are normalized to unit mass on the quadrature rule.
    """
    if G.kind != "surface":
        raise RankDeficient("theta bases require a surface-type group")
    g = G.genus
    d = (2 * n - 1) * (g - 1)
    if rule is None:
        from .domain import dirichlet_domain
        if P is None:
            P = dirichlet_domain(G, 1j)
        rule = quadrature_rule(P, order)
    center = P.center if P is not None else 1j
    weight = rule.weights * density_weight(np.imag(rule.nodes), n)
    candidates = list(poles) if poles is not None else []
    best = None
    for attempt in range(POLE_RETRIES + 1):
        need = d + 2 + 2 * attempt
        while len(candidates) < need:
            candidates = default_poles(center, need, seed=seed + attempt)
        evals = [_theta_evaluator(G, n, p, L, R=R, center=center)
                 for p in candidates]
        F = np.array([f(rule.nodes) for f in evals])
        # normalize each candidate to unit L2 mass on the rule
        norms = np.sqrt(np.abs(np.sum(weight * np.abs(F) ** 2, axis=1)))
        from itertools import combinations
        for idx in combinations(range(len(candidates)), d):
            sub = F[list(idx)] / norms[list(idx), None]
            gram = (sub * weight) @ sub.conj().T
            cond = float(np.linalg.cond(gram))
            if best is None or cond < best[0]:
                best = (cond, idx)
        if best is not None and best[0] < cond_bound:
            idx = list(best[1])
            chosen = [candidates[i] for i in idx]
            evaluators = tuple(
                _scaled(evals[i], 1.0 / norms[i]) for i in idx)
            return DifferentialBasis(
                evaluators=evaluators, n=n, side="plus", L=L,
                poles=tuple(chosen), gram_cond=best[0])
        candidates = []  # regenerate a larger deterministic pool
    raise RankDeficient(
        f"no pole subset reached condition number < {cond_bound:g} "
        f"(best {best[0]:.3g})")


def automorphy_residual(G, basis: DifferentialBasis, n_points: int = 20,
                        n_elements: int = 3, seed: int = 1) -> float:
    """Max relative residual of phi(gamma z) gamma'(z)^n = phi(z)."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1.0, 1.0, n_points) + \
        1j * rng.uniform(0.6, 1.6, n_points)
    gens = list(G.maps) + [m.inverse() for m in G.maps]
    picks = rng.choice(len(gens), size=min(n_elements, len(gens)),
                       replace=False)
    worst = 0.0
    for phi in basis.evaluators:
        base = phi(z)
        scale = np.max(np.abs(base))
        for i in picks:
            m = gens[i]
            gz = (m.a * z + m.b) / (m.c * z + m.d)
            dg = (m.c * z + m.d) ** -2.0
            res = np.max(np.abs(phi(gz) * dg ** basis.n - base)) / scale
            worst = max(worst, float(res))
    return worst


# -- dual bases and period matrices -----------------------------------

def default_samples(center: complex, count: int, seed: int = 0):
    """Deterministic collocation points spread around the center."""
    rng = np.random.default_rng(seed)
    scale = abs(center.imag)
    out = []
    for k in range(count):
        ang = 2.0 * math.pi * (k + 0.3 + 0.2 * rng.random()) / count
        rad = scale * (0.35 + 0.25 * (k % 2))
        out.append(center + rad * complex(math.cos(ang), math.sin(ang)))
    return out


def bers_dual(G, n: int, basis_plus: DifferentialBasis, samples=None,
              L: int = None, R: float = None,
              cond_bound: float = COND_BOUND, seed: int = 0,
              center: complex = 1j) -> DifferentialBasis:
    """Bers-dual evaluators from collocation against kernel slices.

    With exactly d sample points this is the square solve
    phi^-(w) = A^-1 (K(z_j, w))_j, A_jk = phi_k^+(z_j).  By default an
    overdetermined set of 4d points is used and the solve becomes a
    least-squares projection, which keeps the truncation noise of the
    theta series from being amplified by the collocation matrix.  Sample
    sets come from a deterministic seed sequence and are resampled a few
    times before SingularCollocation is raised.
    """
    if L is None:
        L = basis_plus.L
    d = basis_plus.d
    tries = [samples] if samples is not None else \
        [default_samples(center, 4 * d, seed=seed + t) for t in range(4)]
    for pts in tries:
        pts = np.asarray(pts, dtype=complex)
        A = np.array([[phi(z) for phi in basis_plus.evaluators]
                      for z in pts])
        cond = float(np.linalg.cond(A))
        if cond < cond_bound:
            break
    else:
        raise SingularCollocation(
            f"collocation condition number {cond:.3g} exceeds bound")
    Apinv = np.linalg.pinv(A)

    def make(k):
        row = Apinv[k]

        def phi_minus(w):
            slices = np.array([
                kernel_slice(G, n, z, w, L=L, R=R, center=center)
                for z in pts])
            return np.tensordot(row, slices, axes=(0, 0))

        return phi_minus

    return DifferentialBasis(
        evaluators=tuple(make(k) for k in range(d)), n=n, side="minus",
        L=L, poles=(), gram_cond=cond)


def period_matrix(G, basis: DifferentialBasis, P: FundamentalPolygon,
                  rule: QuadratureRule = None, order: int = 16,
                  basis_id: str = "") -> PeriodMatrix:
    """Gram matrix N_kl = <phi_k, phi_l> over the fundamental polygon.

    The minus side is integrated over the mirror domain: nodes are
    conjugated (weights and the density factor are invariant under the
    reflection).
    """
    if rule is None:
        rule = quadrature_rule(P, order)
    nodes = np.conj(rule.nodes) if basis.side == "minus" else rule.nodes
    weight = rule.weights * density_weight(
        np.abs(np.imag(rule.nodes)), basis.n)
    F = np.array([phi(nodes) for phi in basis.evaluators])
    N = (F * weight) @ F.conj().T
    return PeriodMatrix(entries=N, basis_id=basis_id or basis.side)


def kappa_matrix(G, n: int, basis_plus: DifferentialBasis,
                 basis_dual: DifferentialBasis, P: FundamentalPolygon,
                 rule: QuadratureRule = None,
                 order: int = 16) -> OperatorMatrix:
    """kappa = N+ N-^T with its determinant and eigenvalues."""
    if rule is None:
        rule = quadrature_rule(P, order)
    Np = period_matrix(G, basis_plus, P, rule=rule, basis_id="plus")
    Nm = period_matrix(G, basis_dual, P, rule=rule, basis_id="minus")
    kappa = Np.entries @ Nm.entries.T
    return OperatorMatrix(entries=kappa, det=complex(np.linalg.det(kappa)),
                          eigenvalues=np.linalg.eigvals(kappa),
                          n_plus=Np, n_minus=Nm)


# -- reproducing formula ----------------------------------------------

def halfplane_rule(radial_order: int = 80, angular_order: int = 160
                   ) -> QuadratureRule:
    """Quadrature over the whole upper half-plane via the disc chart.

    Polar Gauss-Legendre x trapezoid on the unit disc, pushed through
    u -> i(1+u)/(1-u).  Suited to integrands decaying at the boundary.
    """
    xs, ws = np.polynomial.legendre.leggauss(radial_order)
    rad = 0.5 * (xs + 1.0)
    wrad = 0.5 * ws
    th = 2.0 * math.pi * np.arange(angular_order) / angular_order
    wth = 2.0 * math.pi / angular_order
    u = rad[:, None] * np.exp(1j * th[None, :])
    jac = np.abs(2.0 / (1.0 - u) ** 2) ** 2
    nodes = 1j * (1.0 + u) / (1.0 - u)
    weights = wrad[:, None] * rad[:, None] * wth * jac
    return QuadratureRule(nodes=nodes.reshape(-1),
                          weights=weights.reshape(-1).real,
                          order=radial_order)


def reproducing_check(G, n: int, phi, testpoints, rule: QuadratureRule,
                      L: int = DEFAULT_KERNEL_L, R: float = None,
                      center: complex = 1j) -> float:
    """Max relative residual of the reproducing identity.

    For each test point z in the lower half-plane, the kernel slice
    K(z, .) is integrated against conj(phi) with the hyperbolic weight
    over the plus-side fundamental domain (whole half-plane for the
    trivial group) and compared to conj(phi(conj(z))).
    """
    weight = rule.weights * density_weight(np.imag(rule.nodes), n)
    pv = np.conj(phi(rule.nodes)) * weight
    worst = 0.0
    for z in testpoints:
        z = complex(z)
        if z.imag >= 0:
            raise ValueError("test points must lie in the lower half-plane")
        val = complex(np.sum(kernel_slice(
            G, n, z, rule.nodes, L=L, R=R, center=center) * pv))
        expect = complex(np.conj(phi(np.conj(z))))
        res = abs(val - expect) / max(1.0, abs(expect))
        worst = max(worst, res)
    return worst
