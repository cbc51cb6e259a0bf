"""Primitive ideals: identifiers, membership, semisimplicity and inclusion logic.

``P_{o,lambda}`` (finite orbit ``o``, unit ``lambda``) is the kernel of
``pi_{x,lambda}`` for any ``x`` on ``o``; membership is decided by the
strand sums ``S_{j,y} = sum_l lambda^l f_{lp+j}(y)``.  ``P_o`` for an
infinite orbit closure consists of the elements whose coefficients all
vanish on the closure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .algebra import AlgebraElement, delta_power, embed_function, involution, unit
from .dynsys import (
    AperiodicOrbitModel,
    DomainError,
    DynSystem,
    FinitePermutation,
    Orbit,
    RationalRotation,
    check_point,
    orbit,
    orbit_space,
    same_system,
)
from .functions import DenseTable
from .reps import PeriodicRep, orbit_values, periodic_rep_matrix
from .scalars import GaussianRational, check_unit, modulus, unit_power

#: default membership tolerance in float mode (exact mode uses 0)
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class PeriodicIdeal:
    orbit: Orbit
    lam: object

    def __post_init__(self):
        if self.orbit.infinite:
            raise DomainError("periodic ideals need a finite orbit")
        lam = self.lam if isinstance(self.lam, GaussianRational) else complex(self.lam)
        check_unit(lam)
        object.__setattr__(self, "lam", lam)

    @property
    def system(self) -> DynSystem:
        return self.orbit.system

    @property
    def exact(self) -> bool:
        return isinstance(self.lam, GaussianRational)

    def rep(self) -> PeriodicRep:
        return PeriodicRep(self.system, self.orbit.base, self.lam)


@dataclass(frozen=True)
class AperiodicIdeal:
    """``P_o`` for an infinite orbit closure.

    ``points`` is a finite sample of the closure, or ``None`` for the
    symbolic whole closure of the modeled orbit.
    """

    system: DynSystem = field(repr=False)
    points: Optional[tuple] = None

    def __post_init__(self):
        if self.points is not None:
            pts = tuple(check_point(self.system, p) for p in self.points)
            if len(set(pts)) != len(pts):
                raise DomainError("orbit closure samples must be pairwise distinct")
            object.__setattr__(self, "points", pts)


PrimitiveIdealId = Union[PeriodicIdeal, AperiodicIdeal]


def periodic_ideal(sys: DynSystem, x, lam) -> PeriodicIdeal:
    return PeriodicIdeal(orbit(sys, x), lam)


def _default_tol(*objs) -> float:
    return 0.0 if all(getattr(o, "exact", False) for o in objs) else DEFAULT_TOL


def strand_sums(a: AlgebraElement, orb: Orbit, lam) -> np.ndarray:
    """``S[j, i] = sum_l lam^l f_{lp+j}(orb.points[i])`` for ``j, i < p``."""
    if orb.infinite:
        raise DomainError("strand sums need a finite orbit")
    same_system(a.system, orb.system)
    pts = orb.points
    p = len(pts)
    exact = a.exact and isinstance(lam, GaussianRational)
    if not exact:
        lam = complex(lam)
    if exact:
        S = np.empty((p, p), dtype=object)
        S[...] = GaussianRational(0)
    else:
        S = np.zeros((p, p), dtype=np.complex128)
    for n, f in a.coeffs.items():
        l, j = divmod(n, p)
        w = unit_power(lam, l)
        vals = orbit_values(a.system, f, pts)
        for i in range(p):
            v = vals[i] if exact else complex(vals[i])
            S[j, i] = S[j, i] + w * v
    return S


def is_member(a: AlgebraElement, ideal: PrimitiveIdealId, tol: Optional[float] = None) -> bool:
    """Membership of ``a`` in a primitive ideal (``tol = 0`` is exact)."""
    if isinstance(ideal, PeriodicIdeal):
        if tol is None:
            tol = _default_tol(a, ideal)
        S = strand_sums(a, ideal.orbit, ideal.lam)
        if tol == 0:
            return not any(S.ravel() != 0)
        return all(modulus(s) <= tol for s in S.ravel())
    same_system(a.system, ideal.system)
    if tol is None:
        tol = _default_tol(a)
    if ideal.points is None:
        if not isinstance(a.system, AperiodicOrbitModel):
            raise DomainError("the symbolic orbit closure exists only on the orbit model")
        return all(f.sup_norm(a.system) <= tol for f in a.coeffs.values())
    return all(modulus(f.evaluate(a.system, y)) <= tol for f in a.coeffs.values() for y in ideal.points)


def is_member_all_lambda(a: AlgebraElement, orb: Orbit, tol: float = 0.0) -> bool:
    """``a`` lies in every ``P_{o,lambda}`` iff each ``f_n`` vanishes on ``o``."""
    if orb.infinite:
        raise DomainError("needs a finite orbit")
    same_system(a.system, orb.system)
    for f in a.coeffs.values():
        for v in orbit_values(a.system, f, orb.points):
            if (v != 0) if tol == 0 else (modulus(v) > tol):
                return False
    return True


def _root_of_unity(k: int, m: int):
    """``exp(2 pi i k/m)``, exact when it is one of 1, i, -1, -i."""
    k %= m
    if (4 * k) % m == 0:
        return [GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1)][4 * k // m]
    return cmath.exp(2j * math.pi * k / m)


def strand_degree(a: AlgebraElement, p: int) -> int:
    """Degree span ``l_max - l_min`` of the strand polynomials in ``lambda``."""
    ls = [n // p for n in a.coeffs]
    return (max(ls) - min(ls)) if ls else 0


def radical_witness(sys: DynSystem, a: AlgebraElement, tol: Optional[float] = None) -> Optional[PrimitiveIdealId]:
    """A primitive ideal not containing ``a``; ``None`` only for ``a = 0``.

    Orbits are scanned in enumeration order.  On the first orbit where some
    coefficient is non-zero, ``lambda`` runs over the ``4(d+1)``-th roots of
    unity (``d`` the strand degree); a non-zero strand polynomial of degree
    ``d`` vanishes at no more than ``d`` of them.
    """
    same_system(sys, a.system)
    if tol is None:
        tol = _default_tol(a)
    if isinstance(sys, AperiodicOrbitModel):
        ideal = AperiodicIdeal(sys, None)
        return None if is_member(a, ideal, tol) else ideal
    if not isinstance(sys, FinitePermutation):
        raise DomainError("radical witnesses are searched on finite permutation or orbit-model systems")
    for orb in orbit_space(sys):
        if is_member_all_lambda(a, orb, tol):
            continue
        p = len(orb.points)
        m = 4 * (strand_degree(a, p) + 1)
        for k in range(m):
            lam = _root_of_unity(k, m)
            ideal = PeriodicIdeal(orb, lam)
            lam_tol = tol if isinstance(lam, GaussianRational) else max(tol, DEFAULT_TOL * 1e-3)
            if not is_member(a, ideal, lam_tol):
                return ideal
    return None


def _closure_set(ideal: AperiodicIdeal) -> Optional[frozenset]:
    return None if ideal.points is None else frozenset(ideal.points)


def ideal_inclusion(id1: PrimitiveIdealId, id2: PrimitiveIdealId, tol: float = 1e-12) -> bool:
    """Whether ``id1`` is contained in ``id2``.

    * periodic in periodic: same orbit and same lambda;
    * aperiodic in aperiodic: closure of ``id1`` contains closure of ``id2``;
    * aperiodic in periodic: closure of ``id1`` contains the finite orbit;
    * periodic in aperiodic: never.
    """
    same_system(id1.system, id2.system)
    if isinstance(id1, PeriodicIdeal):
        if isinstance(id2, AperiodicIdeal):
            return False
        return id1.orbit.same_as(id2.orbit) and _lam_equal(id1.lam, id2.lam, tol)
    c1 = _closure_set(id1)
    if isinstance(id2, AperiodicIdeal):
        c2 = _closure_set(id2)
        if c1 is None:
            return True
        return c2 is not None and c1 >= c2
    if c1 is None:
        return False  # the modeled orbit has no periodic points
    return c1 >= frozenset(id2.orbit.points)


def _lam_equal(l1, l2, tol: float) -> bool:
    if isinstance(l1, GaussianRational) and isinstance(l2, GaussianRational):
        return l1 == l2
    return abs(complex(l1) - complex(l2)) <= tol


class SelfAdjointnessViolation(AssertionError):
    pass


def selfadjointness_check(a: AlgebraElement, ideal: PrimitiveIdealId, tol: Optional[float] = None) -> bool:
    """Membership of ``a``, after asserting it agrees with membership of ``a*``."""
    m1 = is_member(a, ideal, tol)
    m2 = is_member(involution(a), ideal, tol)
    if m1 != m2:
        raise SelfAdjointnessViolation(f"a in ideal: {m1}, a* in ideal: {m2}")
    return m1


def lambda_grid(samples: int) -> list[complex]:
    return [cmath.exp(2j * math.pi * k / samples) for k in range(samples)]


def spectrum_union(sys: DynSystem, a: AlgebraElement, lambda_samples: Union[int, Sequence] = 64,
                   orbit_samples: Optional[Sequence] = None) -> list[complex]:
    """Eigenvalues of ``pi_{x,lambda}(a)`` over all orbits and the sampled lambdas.

    Finite permutation systems use every orbit; a rational rotation needs
    ``orbit_samples``.  The result is sorted by (real, imaginary) part.
    """
    same_system(sys, a.system)
    if isinstance(sys, AperiodicOrbitModel):
        raise DomainError("spectrum union needs a system with only periodic points")
    lams = lambda_grid(lambda_samples) if isinstance(lambda_samples, int) else list(lambda_samples)
    if isinstance(lambda_samples, int) and lambda_samples < 1:
        raise DomainError("need at least one lambda sample")
    orbits = orbit_space(sys, orbit_samples)
    out: list[complex] = []
    fa = a.to_float() if a.exact else a
    for orb in orbits:
        for lam in lams:
            M = periodic_rep_matrix(PeriodicRep(sys, orb.base, lam), fa)
            out.extend(complex(z) for z in np.linalg.eigvals(M.astype(np.complex128)))
    out.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)))
    return out


def separating_element(id1: PeriodicIdeal, id2: PeriodicIdeal) -> AlgebraElement:
    """An element of ``id1`` that is not in ``id2`` (distinct periodic ideals).

    Different orbits: the indicator of ``id2``'s orbit.  Same orbit:
    ``1 - delta^p / lambda_1``.
    """
    same_system(id1.system, id2.system)
    sys = id1.system
    if not id1.orbit.same_as(id2.orbit):
        if not isinstance(sys, FinitePermutation):
            raise DomainError("orbit indicators are built on finite permutation systems")
        exact = id1.exact and id2.exact
        vals = [1 if y in id2.orbit.points else 0 for y in range(sys.size)]
        f = DenseTable([GaussianRational(v) for v in vals]) if exact else DenseTable(vals)
        return embed_function(sys, f)
    if _lam_equal(id1.lam, id2.lam, 0.0):
        raise DomainError("the two ideals coincide")
    exact = id1.exact and id2.exact and not isinstance(sys, RationalRotation)
    p = len(id1.orbit.points)
    return unit(sys, exact=exact) - delta_power(sys, p, exact=exact).scale(1 / id1.lam)
