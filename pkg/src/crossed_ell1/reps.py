"""Representations of the crossed product algebra.

Finite-dimensional representations ``pi_{x,lambda}`` attached to a periodic
point, and the sequence-space representations ``pi^p_x`` attached to an
aperiodic point together with the constructive density solver.

Matrix convention: with basis ``e_0..e_{p-1}`` (``e_j`` belonging to the
point ``sigma^j x``), ``T_lambda e_j = e_{j+1}`` for ``j < p-1`` and
``T_lambda e_{p-1} = lambda e_0``, i.e. ones on the subdiagonal and
``lambda`` in the top-right corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .algebra import AlgebraElement, delta_power, monomial, multiply, one_norm, one_norm_bounds, zero
from .dynsys import (
    AperiodicOrbitModel,
    DomainError,
    DynSystem,
    Orbit,
    check_point,
    orbit,
    period,
    same_system,
)
from .functions import DenseTable, OrbitTable, TrigPolynomial, bump_function
from .scalars import GaussianRational, abs2, check_unit, is_exact, modulus, sqrt_bounds, unit_power

#: relative singular-value threshold for rank decisions
RANK_RTOL = 1e-9


# ====================================================================
# finite-dimensional representations
# ====================================================================


@dataclass(frozen=True)
class PeriodicRep:
    """The datum ``(x, lambda)`` of the representation ``pi_{x,lambda}``."""

    system: DynSystem = field(repr=False)
    x: object
    lam: object

    def __post_init__(self):
        x = check_point(self.system, self.x)
        object.__setattr__(self, "x", x)
        if period(self.system, x) is None:
            raise DomainError(f"point {x!r} is not periodic")
        lam = self.lam
        if not isinstance(lam, GaussianRational):
            lam = complex(lam)
        check_unit(lam)
        object.__setattr__(self, "lam", lam)

    @property
    def dimension(self) -> int:
        return period(self.system, self.x)

    @property
    def orbit(self) -> Orbit:
        return orbit(self.system, self.x)

    @property
    def exact(self) -> bool:
        return isinstance(self.lam, GaussianRational)


def _zeros(p: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty((p, p), dtype=object)
        out[...] = GaussianRational(0)
        return out
    return np.zeros((p, p), dtype=np.complex128)


def delta_matrix(p: int, lam) -> np.ndarray:
    """The cyclic matrix ``T_lambda`` (subdiagonal ones, ``lambda`` top right)."""
    if p < 1:
        raise DomainError("dimension must be at least 1")
    exact = isinstance(lam, GaussianRational)
    if not exact:
        lam = complex(lam)
    check_unit(lam)
    T = _zeros(p, exact)
    one = GaussianRational(1) if exact else 1.0
    for j in range(p - 1):
        T[j + 1, j] = one
    T[0, p - 1] = T[0, p - 1] + lam
    return T


def orbit_values(sys: DynSystem, f, pts: Sequence) -> list:
    """``[f(y) for y in pts]`` for any coefficient variant."""
    if isinstance(f, DenseTable):
        return [f.values[y] for y in pts]
    return [f.evaluate(sys, y) for y in pts]


def periodic_rep_matrix(rep: PeriodicRep, a: AlgebraElement) -> np.ndarray:
    """``pi_{x,lambda}(a) = sum_n diag(f_n(x), ..., f_n(sigma^{p-1}x)) T_lambda^n``."""
    same_system(rep.system, a.system)
    pts = rep.orbit.points
    p = len(pts)
    exact = rep.exact and a.exact
    lam = rep.lam if exact else complex(rep.lam)
    M = _zeros(p, exact)
    for n, f in a.coeffs.items():
        vals = orbit_values(rep.system, f, pts)
        for k in range(p):
            # T^n e_k = lam^((k+n)//p) e_{(k+n) mod p}
            i, wraps = (k + n) % p, (k + n) // p
            v = vals[i] if exact else complex(vals[i])
            M[i, k] = M[i, k] + v * unit_power(lam, wraps)
    return M


def point_indicator_matrix(rep: PeriodicRep, y) -> np.ndarray:
    """``pi_{x,lambda}(chi_y)`` for a continuous ``chi`` equal to 1 at ``y`` and 0 elsewhere on the orbits."""
    pts = rep.orbit.points
    return np.diag([1.0 + 0j if q == y else 0j for q in pts])


def _as_float(M: np.ndarray) -> np.ndarray:
    return M.astype(np.complex128) if M.dtype == object else M


def _null_space(rows: list[np.ndarray], n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the joint null space of stacked systems."""
    if not rows:
        return np.eye(n, dtype=np.complex128)
    A = np.vstack(rows)
    # the full V is needed only when there are fewer equations than unknowns
    _, s, vh = np.linalg.svd(A, full_matrices=A.shape[0] < n)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return np.eye(n, dtype=np.complex128)
    rank = int(np.sum(s > RANK_RTOL * smax))
    return vh[rank:].conj().T


def _intertwining_rows(pairs: Sequence[tuple[np.ndarray, np.ndarray]], p1: int, p2: int) -> list[np.ndarray]:
    # U (p2 x p1), row-major vec: vec(U A) = (I kron A^T) vec U, vec(B U) = (B kron I) vec U
    rows = []
    for A, B in pairs:
        A, B = _as_float(A), _as_float(B)
        rows.append(np.kron(np.eye(p2), A.T) - np.kron(B, np.eye(p1)))
    return rows


def commutant_dimension_of_set(matrices: Sequence[np.ndarray]) -> int:
    """Dimension of ``{M : M G = G M for every G}``."""
    if not matrices:
        raise DomainError("need at least one matrix to fix the dimension")
    p = matrices[0].shape[0]
    rows = _intertwining_rows([(G, G) for G in matrices], p, p)
    return _null_space(rows, p * p).shape[1]


def rep_generators(rep: PeriodicRep) -> list[np.ndarray]:
    """Images of ``delta`` and of point indicators of the orbit."""
    gens = [delta_matrix(rep.dimension, rep.lam)]
    gens += [point_indicator_matrix(rep, y) for y in rep.orbit.points]
    return gens


def commutant_dimension(rep: PeriodicRep) -> int:
    return commutant_dimension_of_set(rep_generators(rep))


def shift_intertwiner(p: int, lam, steps: int = 1) -> np.ndarray:
    """Unitary ``U`` carrying ``pi_{x,lambda}`` to ``pi_{sigma^steps x, lambda}``.

    One step is ``U e_0 = e'_{p-1}``, ``U e_j = lambda e'_{j-1}`` (``j >= 1``).
    """
    lam = complex(lam)
    U1 = np.zeros((p, p), dtype=np.complex128)
    U1[p - 1, 0] = 1.0
    for j in range(1, p):
        U1[j - 1, j] = lam
    return np.linalg.matrix_power(U1, steps % p) if p > 1 else np.eye(1, dtype=np.complex128)


def find_intertwiner(rep1: PeriodicRep, rep2: PeriodicRep, seed: int = 0,
                     retries: int = 3) -> Optional[np.ndarray]:
    """An invertible ``U`` with ``U pi_1(g) = pi_2(g) U`` on generators, or ``None``.

    Generators are ``delta`` and indicators of every point of both orbits.
    When ``rep2``'s base point lies on ``rep1``'s orbit with the same
    lambda, the explicit shift unitary is returned.
    """
    same_system(rep1.system, rep2.system)
    p1, p2 = rep1.dimension, rep2.dimension
    if p1 != p2:
        return None
    pts1, pts2 = rep1.orbit.points, rep2.orbit.points
    if rep1.lam == rep2.lam and rep2.x in pts1:
        return shift_intertwiner(p1, rep1.lam, pts1.index(rep2.x))
    everyone = list(dict.fromkeys(list(pts1) + list(pts2)))
    pairs = [(delta_matrix(p1, rep1.lam), delta_matrix(p2, rep2.lam))]
    pairs += [(point_indicator_matrix(rep1, y), point_indicator_matrix(rep2, y)) for y in everyone]
    basis = _null_space(_intertwining_rows(pairs, p1, p2), p1 * p2)
    if basis.shape[1] == 0:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        w = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
        U = (basis @ w).reshape(p2, p1)
        s = np.linalg.svd(U, compute_uv=False)
        if s[-1] > RANK_RTOL * s[0]:
            # Schur: the solution space is one-dimensional, so U is a multiple of a unitary
            return U * math.sqrt(p1) / np.linalg.norm(U)
    return None


def is_unitary(U: np.ndarray, tol: float = 1e-10) -> bool:
    U = _as_float(U)
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol)


# ====================================================================
# sequence-space representations
# ====================================================================


class SeqVector:
    """Finitely supported two-sided sequence ``sum_k v_k e_k`` with an l^p marker."""

    __slots__ = ("entries", "order")

    def __init__(self, entries: Mapping[int, object] | None = None, order: float = 1):
        if not (order == math.inf or (order >= 1)):
            raise DomainError("norm order must be in [1, inf]")
        self.order = order
        self.entries = {int(k): v for k, v in sorted((entries or {}).items()) if v != 0}

    @classmethod
    def basis(cls, k: int = 0, exact: bool = False, order: float = 1) -> "SeqVector":
        return cls({k: GaussianRational(1) if exact else 1.0 + 0j}, order)

    def __repr__(self) -> str:
        return f"SeqVector({self.entries!r}, order={self.order})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeqVector):
            return NotImplemented
        return self.entries == other.entries

    __hash__ = None

    def __getitem__(self, k: int):
        return self.entries.get(k, 0)

    @property
    def support(self) -> list[int]:
        return list(self.entries)

    @property
    def radius(self) -> int:
        return max((abs(k) for k in self.entries), default=0)

    @property
    def exact(self) -> bool:
        return bool(self.entries) and all(isinstance(v, GaussianRational) for v in self.entries.values())

    def is_zero(self) -> bool:
        return not self.entries

    def with_order(self, order: float) -> "SeqVector":
        return SeqVector(self.entries, order)

    def norm(self, order: float | None = None) -> float:
        p = self.order if order is None else order
        mods = [modulus(v) for v in self.entries.values()]
        if not mods:
            return 0.0
        if p == math.inf:
            return max(mods)
        if p == 1:
            return math.fsum(mods)
        return math.fsum(m ** p for m in mods) ** (1.0 / p)

    def norm_bounds(self, bits: int = 96) -> tuple[Fraction, Fraction]:
        """Rigorous enclosure of the l^1 norm."""
        lo = hi = Fraction(0)
        for v in self.entries.values():
            l, h = sqrt_bounds(abs2(v), bits)
            lo, hi = lo + l, hi + h
        return lo, hi

    def __add__(self, other: "SeqVector") -> "SeqVector":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return SeqVector(out, self.order)

    def __neg__(self) -> "SeqVector":
        return SeqVector({k: -v for k, v in self.entries.items()}, self.order)

    def __sub__(self, other: "SeqVector") -> "SeqVector":
        return self + (-other)

    def scale(self, c) -> "SeqVector":
        return SeqVector({k: v * c for k, v in self.entries.items()}, self.order)

    def shift(self, n: int) -> "SeqVector":
        """``S^n``: the entry at ``k`` moves to ``k + n``."""
        return SeqVector({k + n: v for k, v in self.entries.items()}, self.order)

    def truncate(self, N: int) -> "SeqVector":
        """Keep entries with ``|k| <= N``."""
        return SeqVector({k: v for k, v in self.entries.items() if abs(k) <= N}, self.order)

    def tail_norm(self, N: int, order: float | None = None) -> float:
        return SeqVector({k: v for k, v in self.entries.items() if abs(k) > N}, self.order).norm(order)


def _require_aperiodic(sys: DynSystem, x) -> int:
    x = check_point(sys, x)
    if not isinstance(sys, AperiodicOrbitModel) or period(sys, x) is not None:
        raise DomainError(f"point {x!r} is not aperiodic")
    return x


#: above this many coefficient-by-entry products the dense kernel is used
_KERNEL_THRESHOLD = 4096


def _apply_dense(x: int, a: AlgebraElement, v: SeqVector) -> SeqVector:
    f_lo, f_hi = a.support[0], a.support[-1]
    v_lo, v_hi = v.support[0], v.support[-1]
    m_lo, m_hi = v_lo + f_lo, v_hi + f_hi
    nm = m_hi - m_lo + 1
    F = np.zeros((f_hi - f_lo + 1, nm), dtype=np.complex128)
    for n, f in a.coeffs.items():
        row = F[n - f_lo]
        row[:] = complex(f.fill)
        for k, val in f.values.items():
            j = k - x - m_lo
            if 0 <= j < nm:
                row[j] = val
    vv = np.zeros(v_hi - v_lo + 1, dtype=np.complex128)
    for k, val in v.entries.items():
        vv[k - v_lo] = complex(val)
    out = _kernels.band_apply(F, vv, f_lo, m_lo, v_lo)
    return SeqVector({m_lo + j: out[j] for j in np.flatnonzero(out)}, v.order)


def aperiodic_apply(sys: DynSystem, x, a: AlgebraElement, v: SeqVector) -> SeqVector:
    """``pi_x(a) v``: entry ``m`` of the result is ``sum_n f_n(sigma^m x) v_{m-n}``."""
    x = _require_aperiodic(sys, x)
    same_system(sys, a.system)
    if a.is_zero() or v.is_zero():
        return SeqVector({}, v.order)
    exact = a.exact and v.exact
    if not exact and len(a.coeffs) * len(v.entries) >= _KERNEL_THRESHOLD:
        return _apply_dense(x, a, v)
    out: dict[int, object] = {}
    for n, f in a.coeffs.items():
        for k, vk in v.entries.items():
            m = k + n
            term = f(x + m) * vk
            out[m] = out[m] + term if m in out else term
    if not exact:
        out = {m: complex(val) for m, val in out.items()}
    return SeqVector(out, v.order)


def _argmax_index(rho: SeqVector) -> int:
    """Index of the largest entry; ties go to the smallest ``|n|``, then negative ``n``."""
    if rho.is_zero():
        raise DomainError("rho must be non-zero")
    best = max(abs2(v) for v in rho.entries.values())
    candidates = [k for k, v in rho.entries.items() if abs2(v) == best]
    return min(candidates, key=lambda k: (abs(k), k))


def _normalize(rho: SeqVector) -> tuple[int, object, SeqVector]:
    """Shift/scale ``rho`` so the largest entry sits at 0 with value 1."""
    n0 = _argmax_index(rho)
    lam = rho[n0]
    c = 1 / lam
    scaled = rho.shift(-n0).scale(c)
    # c * lam can miss 1 by an ulp in floating point
    one = GaussianRational(1) if scaled.exact else 1.0 + 0j
    return n0, c, SeqVector({**scaled.entries, 0: one}, rho.order)


def _scalar_shift(sys: DynSystem, c, n: int, exact: bool) -> AlgebraElement:
    return delta_power(sys, n, exact=exact).scale(c)


def density_solve_onestep(sys: DynSystem, x, rho: SeqVector, tau: SeqVector,
                          N1: Optional[int] = None, N2: Optional[int] = None,
                          bump_fill=1) -> AlgebraElement:
    """``a = (sum_{|n| <= N2} tau_n delta^n) . f`` with ``f`` a bump of radius ``N1``.

    Requires ``rho[0] == 1``.  With the defaults (``N1``, ``N2`` covering the
    supports) ``pi_x(a) rho == tau`` exactly and ``||a|| <= ||tau||_1``.
    ``f`` takes the value ``bump_fill`` off the window ``0 < |j| <= N1``;
    the default 1 makes ``f`` the unit when ``N1 = 0``.
    """
    x = _require_aperiodic(sys, x)
    if rho[0] != 1:
        raise DomainError("rho must satisfy rho(0) = 1")
    if tau.is_zero():
        return zero(sys)
    exact = rho.exact and tau.exact
    N1 = rho.radius if N1 is None else N1
    N2 = tau.radius if N2 is None else N2
    f = bump_function(sys, x, N1, fill=bump_fill, exact=exact)
    # (mu_n delta^n) f = mu_n alpha^n(f) delta^n
    coeffs = {n: f.alpha(sys, n).scale(mu) for n, mu in tau.truncate(N2).entries.items()}
    return AlgebraElement(sys, coeffs)


@dataclass
class SolveResult:
    a: AlgebraElement
    residual_norms: list[float]
    n0: int
    max_entry: float
    steps: int
    #: epsilon with ||a|| <= (1 + epsilon) ||tau|| / max|rho_n| guaranteed by the construction
    epsilon: float
    #: ||a|| max|rho_n| / ||tau|| - 1 as actually achieved (clipped at 0)
    achieved_epsilon: float
    bound_ok: bool
    truncations: list[tuple[int, int]] = field(default_factory=list)
    exact_residual_zero: bool = False


def _minimal_radius(v: SeqVector, budget: float, weight: float = 1.0) -> int:
    """Smallest ``N >= 0`` with ``weight * ||v - v_N||_1 < budget``."""
    for N in range(v.radius + 1):
        if weight * v.tail_norm(N, 1) < budget:
            return N
    return v.radius


def density_solve(sys: DynSystem, x, rho: SeqVector, tau: SeqVector, gamma: float = 0.5,
                  max_steps: int = 50, truncation: str = "exact",
                  max_n1: Optional[int] = None, max_n2: Optional[int] = None,
                  bump_fill=1) -> SolveResult:
    """Find ``a`` with ``pi^1_x(a) rho = tau`` by the inductive construction.

    ``rho`` is first normalised: with ``n0`` the index of its largest entry
    ``lambda_{n0}``, work with ``lambda_{n0}^{-1} S^{-n0} rho`` and multiply
    the answer by ``lambda_{n0}^{-1} delta^{-n0}`` on the right.

    ``truncation="exact"`` takes bump and target radii covering the supports,
    so finitely supported data is solved in one step.  ``"minimal"`` takes,
    at step ``j``, the smallest radii that keep the residual below
    ``gamma^j ||tau||``; ``max_n1``/``max_n2`` cap them further (caps below
    the minimal radii void the geometric guarantee, reported in ``bound_ok``).
    """
    if not 0 < gamma < 1:
        raise DomainError("gamma must lie in (0, 1)")
    if truncation not in ("exact", "minimal"):
        raise DomainError(f"unknown truncation mode {truncation!r}")
    x = _require_aperiodic(sys, x)
    n0, c, rho_n = _normalize(rho)
    exact = rho.exact and tau.exact
    max_entry = modulus(rho[n0])
    tau_norm = tau.norm(1)

    a_prime = zero(sys)
    residual = SeqVector(tau.entries, 1)
    residual_norms: list[float] = []
    truncations: list[tuple[int, int]] = []
    bound_ok = True
    steps = 0
    while not residual.is_zero() and steps < max_steps:
        steps += 1
        if truncation == "exact":
            N1, N2 = rho_n.radius, residual.radius
        else:
            budget = gamma ** steps * tau_norm
            r_norm = residual.norm(1)
            N2 = _minimal_radius(residual, budget / 2)
            N1 = _minimal_radius(rho_n, budget / 2, weight=r_norm)
        if max_n1 is not None:
            N1 = min(N1, max_n1)
        if max_n2 is not None:
            N2 = min(N2, max_n2)
        truncations.append((N1, N2))
        a_j = density_solve_onestep(sys, x, rho_n, residual, N1, N2, bump_fill=bump_fill)
        a_prime = a_prime + a_j
        residual = residual - aperiodic_apply(sys, x, a_j, rho_n).with_order(1)
        r = residual.norm(1)
        residual_norms.append(r)
        if not r < gamma ** steps * tau_norm and not residual.is_zero():
            bound_ok = False

    a = multiply(a_prime, _scalar_shift(sys, c, -n0, exact))
    epsilon = sum(gamma ** j for j in range(steps)) - 1.0 if steps else 0.0
    a_norm = one_norm(a)
    achieved = max(0.0, a_norm * max_entry / tau_norm - 1.0) if tau_norm else 0.0
    if exact and a.coeffs and all(hasattr(f, "sup_abs2") for f in a.coeffs.values()):
        a_lo, _ = one_norm_bounds(a)
        t_lo, t_hi = tau.norm_bounds()
        m_lo, _ = sqrt_bounds(abs2(rho[n0]))
        eps = Fraction(epsilon).limit_denominator(10 ** 12) if epsilon else Fraction(0)
        # violated only if the lower bound of ||a|| exceeds the upper bound of the right side
        norm_ok = a_lo * m_lo <= (1 + eps) * t_hi + Fraction(1, 10 ** 12) * t_hi
    else:
        norm_ok = a_norm <= (1 + epsilon) * tau_norm / max_entry * (1 + 1e-12) if tau_norm else a.is_zero()
    return SolveResult(
        a=a,
        residual_norms=residual_norms,
        n0=n0,
        max_entry=max_entry,
        steps=steps,
        epsilon=epsilon,
        achieved_epsilon=achieved,
        bound_ok=bound_ok and norm_ok,
        truncations=truncations,
        exact_residual_zero=residual.is_zero(),
    )


@dataclass
class ExtractResult:
    vector: SeqVector
    error_bound: float
    p: float
    n0: int
    scale: object


def extract_basis_vector(sys: DynSystem, x, rho: SeqVector, N: int, p: float = 2,
                         bump_fill=1) -> ExtractResult:
    """``pi^p_x(f) rho'`` for a bump ``f`` of radius ``N``, with the tail bound.

    ``rho'`` is ``rho`` shifted and scaled so its largest entry is 1 at index
    0.  The bound is ``(sum_{|n|>N} |rho'_n|^p)^{1/p}``; with the default
    ``bump_fill=1`` the distance to ``e_0`` equals the bound.
    """
    x = _require_aperiodic(sys, x)
    n0, c, rho_n = _normalize(rho)
    rho_n = rho_n.with_order(p)
    f = bump_function(sys, x, N, fill=bump_fill, exact=rho.exact)
    vec = aperiodic_apply(sys, x, AlgebraElement(sys, {0: f}), rho_n).with_order(p)
    bound = rho_n.tail_norm(N, p)
    return ExtractResult(vector=vec, error_bound=bound, p=p, n0=n0, scale=c)
