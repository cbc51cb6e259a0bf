"""Structure space computations for finite systems.

Subsets of the circle are finite unions of closed arcs and points
(:class:`TSubset`, angles in turns).  On a finite permutation system the
primitive ideals are the pairs (orbit, lambda), and a subset of the
structure space is a map orbit -> :class:`TSubset`.  Such sets are
hull-kernel closed; :func:`closure_certificates` produces explicit
separating elements built from absolutely convergent Fourier series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import _kernels
from .algebra import AlgebraElement, embed_function, multiply
from .dynsys import (
    DomainError,
    DynSystem,
    FinitePermutation,
    Orbit,
    RationalRotation,
    ToleranceNotMet,
    is_invariant,
    orbit,
    orbit_space,
)
from .functions import DenseTable, constant
from .ideals import PeriodicIdeal, is_member

#: angles closer than this (in turns) are treated as equal
ANGLE_EPS = 1e-12
DEFAULT_MARGIN = 1.0 / 64
QUADRATURE_POINTS = 16384
CHECK_POINTS = 8192


def _turn(t: float) -> float:
    t = float(t) % 1.0
    return 0.0 if t >= 1.0 - ANGLE_EPS else t


def angle_of(lam) -> float:
    """Angle in turns of a unit complex number; real inputs are taken as angles."""
    if isinstance(lam, (int, float, Fraction)) and not isinstance(lam, bool):
        return _turn(lam)
    z = complex(lam)
    return _turn(cmath.phase(z) / (2 * math.pi))


def _circ_dist(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class TSubset:
    """Finite union of closed arcs ``[lo, hi]`` (turns) and isolated points.

    Canonical form: ``0 <= lo < 1``, ``lo <= hi < lo + 1``, arcs sorted and
    pairwise disjoint on the circle, points in ``[0, 1)`` outside every arc.
    """

    arcs: tuple[tuple[float, float], ...] = ()
    points: tuple[float, ...] = ()
    full: bool = False

    @classmethod
    def make(cls, arcs: Iterable[Sequence[float]] = (), points: Iterable[float] = (),
             full: bool = False) -> "TSubset":
        if full:
            return cls((), (), True)
        spans = []
        pts = [_turn(p) for p in points]
        for arc in arcs:
            lo, hi = float(arc[0]), float(arc[1])
            if hi < lo:
                raise DomainError(f"arc [{lo}, {hi}] has hi < lo")
            if hi - lo >= 1.0 - ANGLE_EPS:
                return cls((), (), True)
            if hi - lo <= ANGLE_EPS:
                pts.append(_turn(lo))
                continue
            lo_n = _turn(lo)
            hi_n = lo_n + (hi - lo)
            if hi_n > 1.0:
                spans.append((lo_n, 1.0))
                spans.append((0.0, hi_n - 1.0))
            else:
                spans.append((lo_n, hi_n))
        spans.sort()
        merged: list[list[float]] = []
        for lo, hi in spans:
            if merged and lo <= merged[-1][1] + ANGLE_EPS:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        if merged and merged[0][0] <= ANGLE_EPS and merged[-1][1] >= 1.0 - ANGLE_EPS:
            if len(merged) == 1:
                return cls((), (), True)
            first = merged.pop(0)
            merged[-1][1] = 1.0 + first[1]
        arcs_t = tuple((lo, hi) for lo, hi in merged)
        if arcs_t and sum(hi - lo for lo, hi in arcs_t) >= 1.0 - ANGLE_EPS:
            return cls((), (), True)
        probe = cls(arcs_t, (), False)
        kept: list[float] = []
        for p in sorted(pts):
            if probe.contains(p) or any(_circ_dist(p, q) <= ANGLE_EPS for q in kept):
                continue
            kept.append(p)
        return cls(arcs_t, tuple(kept), False)

    @classmethod
    def empty(cls) -> "TSubset":
        return cls()

    @classmethod
    def circle(cls) -> "TSubset":
        return cls((), (), True)

    @property
    def is_empty(self) -> bool:
        return not self.full and not self.arcs and not self.points

    def contains(self, theta) -> bool:
        if self.full:
            return True
        t = angle_of(theta)
        for lo, hi in self.arcs:
            if (t - lo) % 1.0 <= hi - lo + ANGLE_EPS or _circ_dist(t, lo) <= ANGLE_EPS:
                return True
        return any(_circ_dist(t, p) <= ANGLE_EPS for p in self.points)

    def distance(self, theta) -> float:
        """Circular distance (turns) from ``theta`` to the set; ``inf`` if empty."""
        if self.full:
            return 0.0
        t = angle_of(theta)
        best = math.inf
        for lo, hi in self.arcs:
            if (t - lo) % 1.0 <= hi - lo:
                return 0.0
            best = min(best, _circ_dist(t, lo), _circ_dist(t, hi % 1.0))
        for p in self.points:
            best = min(best, _circ_dist(t, p))
        return best

    def distance_array(self, theta: np.ndarray) -> np.ndarray:
        theta = np.mod(theta, 1.0)
        if self.full:
            return np.zeros_like(theta)
        best = np.full(theta.shape, np.inf)
        for lo, hi in self.arcs:
            inside = np.mod(theta - lo, 1.0) <= hi - lo
            d_lo = np.abs(theta - lo) % 1.0
            d_hi = np.abs(theta - (hi % 1.0)) % 1.0
            d = np.minimum(np.minimum(d_lo, 1 - d_lo), np.minimum(d_hi, 1 - d_hi))
            best = np.minimum(best, np.where(inside, 0.0, d))
        for p in self.points:
            d = np.abs(theta - p) % 1.0
            best = np.minimum(best, np.minimum(d, 1 - d))
        return best

    def issubset(self, other: "TSubset") -> bool:
        if other.full:
            return True
        if self.full:
            return False
        for lo, hi in self.arcs:
            if not any((lo - olo) % 1.0 + (hi - lo) <= (ohi - olo) + ANGLE_EPS for olo, ohi in other.arcs):
                return False
        return all(other.contains(p) for p in self.points)

    def union(self, other: "TSubset") -> "TSubset":
        return TSubset.make(self.arcs + other.arcs, self.points + other.points, self.full or other.full)

    def sample(self, count: int = CHECK_POINTS) -> np.ndarray:
        """Roughly ``count`` angles covering the set (arc endpoints included)."""
        if self.full:
            return np.arange(count) / count
        out = [np.asarray(self.points, dtype=float)]
        total = sum(hi - lo for lo, hi in self.arcs)
        budget = max(count - len(self.points), 2 * len(self.arcs))
        for lo, hi in self.arcs:
            k = max(2, int(round(budget * (hi - lo) / total))) if total else 2
            out.append(np.mod(np.linspace(lo, hi, k), 1.0))
        return np.concatenate(out) if out else np.zeros(0)

    def to_json(self) -> dict:
        if self.full:
            return {"full": True}
        return {"arcs": [list(a) for a in self.arcs], "points": list(self.points)}


# ================================================================ Wiener witness


@dataclass
class WienerWitness:
    """Coefficients ``c_n`` (``n = n_lo .. n_lo + len - 1``) of ``c^(lambda) = sum c_n lambda^n``."""

    n_lo: int
    coeffs: np.ndarray
    l1_norm: float
    forbidden_sup: float
    value_at_lambda0: complex
    lambda0: float
    N: int
    tail_estimate: float = 0.0

    @property
    def coeff_map(self) -> dict[int, complex]:
        return {self.n_lo + i: complex(c) for i, c in enumerate(self.coeffs) if c != 0}

    def evaluate(self, theta) -> np.ndarray:
        """``c^`` at angles ``theta`` (turns)."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        return _kernels.fourier_eval(self.coeffs, self.n_lo, theta)

    def __call__(self, lam) -> complex:
        return complex(self.evaluate(angle_of(lam))[0])


def _plateau(d: np.ndarray, width: float) -> np.ndarray:
    """C^1 raised-cosine ramp: 0 at distance 0, 1 from distance ``width`` on."""
    t = np.clip(d / width, 0.0, 1.0)
    return 0.5 * (1.0 - np.cos(np.pi * t))


def wiener_witness(forbidden: TSubset, lambda0, tol: float = 1e-3, maxN: int = 2000,
                   margin: float = DEFAULT_MARGIN, quad_points: int = QUADRATURE_POINTS,
                   check_points: int = CHECK_POINTS) -> WienerWitness:
    """Finite ``(c_n)`` with ``|c^| <= tol`` on ``forbidden`` and ``c^(lambda0) = 1``."""
    theta0 = angle_of(lambda0)
    if forbidden.full:
        raise DomainError("the forbidden set is the whole circle")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if forbidden.is_empty:
        return WienerWitness(0, np.ones(1, dtype=np.complex128), 1.0, 0.0, 1 + 0j, theta0, 0)
    if forbidden.distance(theta0) < margin:
        raise DomainError(f"lambda0 is within {margin} turns of the forbidden set")
    if 2 * maxN + 1 > quad_points // 2:
        raise DomainError("maxN too large for the quadrature grid")

    grid = np.arange(quad_points) / quad_points
    g = _plateau(forbidden.distance_array(grid), margin / 2)
    c_full = np.fft.fft(g) / quad_points
    half = quad_points // 2
    n_all = np.fft.fftfreq(quad_points, d=1.0 / quad_points).astype(np.int64)
    mags = np.abs(c_full)
    # tail[N] = sum of |c_n| over N < |n| < half
    by_abs = np.zeros(half + 1)
    np.add.at(by_abs, np.minimum(np.abs(n_all), half), mags)
    by_abs[half] = 0.0
    tail = np.concatenate([np.cumsum(by_abs[::-1])[::-1][1:], [0.0]])

    samples = forbidden.sample(check_points)
    N = int(np.argmax(tail <= tol / 2)) if np.any(tail <= tol / 2) else maxN
    N = min(max(N, 1), maxN)
    while True:
        idx = np.arange(-N, N + 1)
        c = c_full[idx % quad_points].astype(np.complex128)
        v0 = complex(_kernels.fourier_eval(c, -N, np.array([theta0]))[0])
        c = c / v0
        sup = float(np.max(np.abs(_kernels.fourier_eval(c, -N, samples)))) if samples.size else 0.0
        if sup <= tol:
            break
        if N >= maxN:
            raise ToleranceNotMet(f"maxN={maxN} is insufficient for tol={tol} (sup {sup:.3g})")
        N = min(maxN, int(math.ceil(N * 1.5)))
    v0 = complex(_kernels.fourier_eval(c, -N, np.array([theta0]))[0])
    return WienerWitness(
        n_lo=-N,
        coeffs=c,
        l1_norm=math.fsum(np.abs(c)),
        forbidden_sup=sup,
        value_at_lambda0=v0,
        lambda0=theta0,
        N=N,
        tail_estimate=float(tail[N]) if N < tail.size else 0.0,
    )


def lift_witness(sys: DynSystem, orb: Orbit, witness: WienerWitness) -> AlgebraElement:
    """``a = sum_n a_n delta^n`` with ``a_{lp+j} = c_l`` (constant functions), ``j < p``.

    Every strand sum of ``a`` on ``orb`` at ``lambda`` equals ``c^(lambda)``.
    """
    if orb.infinite:
        raise DomainError("lifting needs a finite orbit")
    p = len(orb.points)
    coeffs = {}
    for l, c in witness.coeff_map.items():
        f = constant(sys, c)
        for j in range(p):
            coeffs[l * p + j] = f
    return AlgebraElement(sys, coeffs)


# ================================================================ structure space


@dataclass(frozen=True)
class SSpaceSubset:
    """Map orbit -> TSubset; orbits are keyed by their smallest point."""

    system: DynSystem = field(repr=False)
    parts: tuple[tuple[int, TSubset], ...] = ()

    @classmethod
    def make(cls, sys: FinitePermutation, parts: Mapping[int, TSubset]) -> "SSpaceSubset":
        if not isinstance(sys, FinitePermutation):
            raise DomainError("structure space subsets are built on finite permutation systems")
        keyed: dict[int, TSubset] = {}
        for x, T in parts.items():
            key = min(orbit(sys, int(x)).points)
            keyed[key] = keyed[key].union(T) if key in keyed else T
        clean = tuple(sorted((k, T) for k, T in keyed.items() if not T.is_empty))
        return cls(sys, clean)

    def get(self, key: int) -> TSubset:
        key = min(orbit(self.system, key).points)
        return dict(self.parts).get(key, TSubset.empty())

    def issubset(self, other: "SSpaceSubset") -> bool:
        return all(T.issubset(other.get(k)) for k, T in self.parts)

    def contains(self, x, lam) -> bool:
        return self.get(x).contains(lam)

    def to_json(self) -> dict:
        return {str(k): T.to_json() for k, T in self.parts}


def hk_closure(sys: DynSystem, E: SSpaceSubset) -> SSpaceSubset:
    """Hull-kernel closure of ``E``.

    Finite unions of closed arcs and points on each orbit circle are already
    closed, and ideals of distinct orbits are never contained in one another,
    so the closure is the canonical form of ``E`` itself.
    """
    if not isinstance(sys, FinitePermutation):
        raise DomainError("hull-kernel closure is computed for finite permutation systems")
    if E.system != sys:
        raise DomainError("subset belongs to a different system")
    return SSpaceSubset.make(sys, dict(E.parts))


@dataclass
class Certificate:
    """An element in the kernel of ``E`` but not in ``P_{orbit, lambda}``."""

    orbit_key: int
    angle: float
    kind: str
    element: AlgebraElement = field(repr=False)
    verified: bool
    witness: Optional[WienerWitness] = field(default=None, repr=False)


def _orbit_indicator(sys: FinitePermutation, orb: Orbit) -> AlgebraElement:
    vals = np.zeros(sys.size)
    vals[list(orb.points)] = 1.0
    return embed_function(sys, DenseTable(vals))


def closure_certificates(sys: FinitePermutation, E: SSpaceSubset, samples: int = 16,
                         tol: float = 1e-3, maxN: int = 2000,
                         margin: float = DEFAULT_MARGIN) -> list[Certificate]:
    """Separating elements for sampled ``(orbit, lambda)`` outside ``E``.

    Each orbit is probed at ``lambda = exp(2 pi i k / samples)``.  Orbits
    missing from ``E`` get their own indicator function; points outside an
    orbit's non-empty set get a lifted Wiener witness times that indicator.
    Probes within ``margin`` of the orbit's set are skipped.
    """
    closed = hk_closure(sys, E)
    out: list[Certificate] = []
    witnesses: dict[tuple[int, float], WienerWitness] = {}
    for orb in orbit_space(sys):
        key = min(orb.points)
        F = closed.get(key)
        if F.full:
            continue
        chi = _orbit_indicator(sys, orb)
        for k in range(samples):
            theta = k / samples
            if F.contains(theta):
                continue
            if F.is_empty:
                element, kind, w = chi, "indicator", None
            else:
                if F.distance(theta) < margin:
                    continue
                w = witnesses.get((key, theta))
                if w is None:
                    w = wiener_witness(F, theta, tol=tol, maxN=maxN, margin=margin)
                    witnesses[(key, theta)] = w
                element = multiply(chi, lift_witness(sys, orb, w))
                kind = "wiener"
            out.append(Certificate(key, theta, kind, element,
                                   _verify_certificate(sys, closed, element, orb, theta, tol), w))
    return out


def _verify_certificate(sys, closed: SSpaceSubset, a: AlgebraElement, orb: Orbit, theta: float,
                        tol: float) -> bool:
    lam = cmath.exp(2j * math.pi * theta)
    if is_member(a, PeriodicIdeal(orb, lam), tol):
        return False
    p = len(orb.points)
    for key, T in closed.parts:
        o = orbit(sys, key)
        for t in T.sample(64):
            # strand sums are c^ at the sample, bounded by tol
            if not is_member(a, PeriodicIdeal(o, cmath.exp(2j * math.pi * t)), tol * (1 + 1e-9)):
                return False
    return True


def closure_of_point_set(sys: DynSystem, S: Iterable[int]) -> SSpaceSubset:
    """``Pi(S)`` for an invariant ``S``: each orbit in ``S`` times the full circle."""
    if not isinstance(sys, FinitePermutation):
        raise DomainError("point-set closures are computed for finite permutation systems")
    S = set(int(s) for s in S)
    if not is_invariant(sys, S):
        raise DomainError("subset is not invariant under sigma")
    return SSpaceSubset.make(sys, {min(o.points): TSubset.circle() for o in orbit_space(sys)
                                   if set(o.points) <= S})


def structure_space_describe(sys: DynSystem, grid: int = 8) -> dict:
    """Topological description of the structure space.

    Finite permutation: one circle per orbit.  Rational rotation ``p/q``: a
    single torus, charted by ``(theta, lambda) -> (q theta mod 1, lambda)``,
    with a sampled table of the chart.
    """
    if isinstance(sys, FinitePermutation):
        comps = [{"orbit": list(o.points), "shape": "circle"} for o in orbit_space(sys)]
        return {"backend": sys.backend, "components": comps, "count": len(comps),
                "description": "disjoint union of circles, one per orbit"}
    if isinstance(sys, RationalRotation):
        table = []
        for i in range(grid):
            th = Fraction(i, grid)
            for j in range(grid):
                lam = Fraction(j, grid)
                table.append([str(th), str(lam), str(sys.orbit_label(th)), str(lam)])
        return {"backend": sys.backend, "components": 1, "count": 1, "description": "T x T",
                "orbit_chart": f"z -> z^{sys.q}", "q": sys.q, "table": table}
    raise DomainError("no structure space description for the aperiodic orbit model")


def chart(sys: RationalRotation, theta, lam_angle) -> tuple[Fraction, Fraction]:
    """``(theta, lambda) -> (q theta mod 1, lambda)``."""
    return sys.orbit_label(Fraction(theta)), Fraction(lam_angle) % 1
