"""Computable topological dynamical systems ``(X, sigma)``.

Three backends are supported:

* :class:`FinitePermutation` -- ``X = {0, ..., N-1}`` with the discrete
  topology and ``sigma`` a permutation.
* :class:`RationalRotation` -- the circle (angles as exact fractions of a
  turn in ``[0, 1)``) rotated by ``p/q``.  Every point has period ``q``.
* :class:`AperiodicOrbitModel` -- a single aperiodic orbit, points being
  the integer orbit indices ``k`` standing for ``sigma^k x``.

All systems are immutable and hashable; two systems are "the same system"
exactly when they compare equal.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

Point = Union[int, Fraction]


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class ToleranceNotMet(DomainError):
    """A numerical construction could not reach the requested tolerance."""


class BackendMismatch(DomainError):
    """Objects belonging to different systems (or backends) were combined."""


@dataclass(frozen=True)
class FinitePermutation:
    perm: tuple[int, ...]
    backend = "finite_perm"

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise DomainError("permutation array is not a bijection of {0..N-1}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def from_cycles(cls, n: int, cycles: Sequence[Sequence[int]]) -> "FinitePermutation":
        perm = list(range(n))
        for cyc in cycles:
            for i, a in enumerate(cyc):
                perm[a] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(perm))

    @property
    def size(self) -> int:
        return len(self.perm)

    def points(self) -> list[int]:
        return list(range(self.size))

    def contains(self, x) -> bool:
        return isinstance(x, (numbers.Integral, np.integer)) and 0 <= int(x) < self.size

    def step(self, x: int, n: int) -> int:
        return int(self.power_index(n)[x])

    def power_index(self, n: int) -> np.ndarray:
        """Index array of ``sigma^n``: ``out[x] == sigma^n(x)``."""
        return _perm_power(self.perm, int(n))


@lru_cache(maxsize=512)
def _perm_power(perm: tuple[int, ...], n: int) -> np.ndarray:
    base = np.asarray(perm, dtype=np.int64)
    if n < 0:
        inv = np.empty_like(base)
        inv[base] = np.arange(base.size)
        base, n = inv, -n
    result = np.arange(base.size, dtype=np.int64)
    while n:
        if n & 1:
            result = base[result]
        base = base[base]
        n >>= 1
    result.setflags(write=False)
    return result


@dataclass(frozen=True)
class RationalRotation:
    p: int
    q: int
    backend = "rational_rotation"

    def __post_init__(self):
        if self.q < 1 or self.p <= 0 or math.gcd(self.p, self.q) != 1:
            raise DomainError("rational rotation needs 0 < p, q >= 1 and gcd(p, q) = 1")

    @property
    def angle(self) -> Fraction:
        return Fraction(self.p, self.q) % 1

    def contains(self, x) -> bool:
        return isinstance(x, (Fraction, numbers.Integral)) and 0 <= x < 1

    def step(self, x: Fraction, n: int) -> Fraction:
        return (Fraction(x) + n * self.angle) % 1

    def orbit_label(self, x: Fraction) -> Fraction:
        """The ``z -> z^q`` chart: ``q * theta mod 1`` is constant on orbits."""
        return (self.q * Fraction(x)) % 1


@dataclass(frozen=True)
class AperiodicOrbitModel:
    window: int = 64
    backend = "aperiodic_orbit"

    def __post_init__(self):
        if self.window < 0:
            raise DomainError("window radius must be non-negative")

    def contains(self, x) -> bool:
        return isinstance(x, (numbers.Integral, np.integer)) and not isinstance(x, bool)

    def step(self, x: int, n: int) -> int:
        return int(x) + n


DynSystem = Union[FinitePermutation, RationalRotation, AperiodicOrbitModel]


@dataclass(frozen=True)
class Orbit:
    """A finite orbit ``[x, sigma x, ..., sigma^(p-1) x]`` or an infinite one.

    Infinite orbits keep only the base point; ``points`` is ``None``.
    """

    system: DynSystem = field(repr=False)
    base: Point
    points: Optional[tuple] = None

    @property
    def infinite(self) -> bool:
        return self.points is None

    @property
    def period(self) -> Optional[int]:
        return None if self.points is None else len(self.points)

    @property
    def key(self) -> frozenset:
        """Order-free identity; equal for orbits built from any of their points."""
        if self.points is None:
            return frozenset({("infinite", self.base)})
        return frozenset(self.points)

    def same_as(self, other: "Orbit") -> bool:
        if self.system != other.system:
            return False
        if self.infinite or other.infinite:
            # every point of the aperiodic model lies on the one modeled orbit
            return self.infinite and other.infinite
        return self.key == other.key

    def index_of(self, y: Point) -> int:
        if self.points is None:
            return int(y) - int(self.base)
        return self.points.index(y)

    def __contains__(self, y) -> bool:
        if self.points is None:
            return self.system.contains(y)
        return y in self.points

    def __len__(self) -> int:
        if self.points is None:
            raise TypeError("infinite orbit has no length")
        return len(self.points)


@dataclass(frozen=True)
class SystemPredicates:
    free: Optional[bool]
    topologically_free: Optional[bool]
    topologically_transitive: Optional[bool]


def check_point(sys: DynSystem, x) -> Point:
    if isinstance(x, bool) or not sys.contains(x):
        raise DomainError(f"point {x!r} is outside the domain of {sys.backend}")
    if isinstance(sys, RationalRotation):
        return Fraction(x)
    return int(x)


def apply_sigma(sys: DynSystem, x: Point, n: int = 1) -> Point:
    """Return ``sigma^n(x)``."""
    x = check_point(sys, x)
    return sys.step(x, int(n))


def period(sys: DynSystem, x: Point) -> Optional[int]:
    """Smallest ``p >= 1`` with ``sigma^p x = x``, or ``None`` for aperiodic points."""
    x = check_point(sys, x)
    if isinstance(sys, AperiodicOrbitModel):
        return None
    if isinstance(sys, RationalRotation):
        return sys.q
    p, y = 1, sys.perm[x]
    while y != x:
        y = sys.perm[y]
        p += 1
    return p


def orbit(sys: DynSystem, x: Point) -> Orbit:
    x = check_point(sys, x)
    if isinstance(sys, AperiodicOrbitModel):
        return Orbit(sys, x, None)
    pts = [x]
    y = sys.step(x, 1)
    while y != x:
        pts.append(y)
        y = sys.step(y, 1)
    return Orbit(sys, x, tuple(pts))


def orbit_space(sys: DynSystem, samples: Optional[Sequence[Point]] = None) -> list[Orbit]:
    """Partition into orbits.

    For a finite permutation every orbit is listed, starting from its
    smallest point, in increasing order of that point.  For a rational
    rotation, the orbits of ``samples`` are listed in order of first
    appearance, deduplicated by the ``q * theta mod 1`` label.
    """
    if isinstance(sys, AperiodicOrbitModel):
        raise DomainError("orbit space is not enumerable for the aperiodic orbit model")
    if isinstance(sys, RationalRotation):
        if samples is None:
            raise DomainError("rational rotation orbit space needs sample points")
        seen: dict[Fraction, Orbit] = {}
        for s in samples:
            s = check_point(sys, s)
            label = sys.orbit_label(s)
            if label not in seen:
                seen[label] = orbit(sys, s)
        return list(seen.values())
    out, done = [], set()
    for x in range(sys.size):
        if x not in done:
            o = orbit(sys, x)
            done.update(o.points)
            out.append(o)
    return out


def system_predicates(sys: DynSystem) -> SystemPredicates:
    """Freeness and transitivity facts decidable from the finite data.

    ``None`` marks a predicate that is not computed for the backend.
    """
    if isinstance(sys, AperiodicOrbitModel):
        return SystemPredicates(free=True, topologically_free=True, topologically_transitive=None)
    if isinstance(sys, RationalRotation):
        # all points periodic: Aper is empty, hence not dense in the circle
        return SystemPredicates(free=False, topologically_free=False, topologically_transitive=None)
    n = sys.size
    # discrete topology: dense means equal, and every point is periodic
    free = n == 0
    transitive = n > 0 and len(orbit_space(sys)) == 1
    return SystemPredicates(free=free, topologically_free=free, topologically_transitive=transitive)


def same_orbit(sys: DynSystem, x: Point, y: Point) -> bool:
    x, y = check_point(sys, x), check_point(sys, y)
    if isinstance(sys, AperiodicOrbitModel):
        return True
    if isinstance(sys, RationalRotation):
        return sys.orbit_label(x) == sys.orbit_label(y)
    return y in orbit(sys, x).points


def is_invariant(sys: DynSystem, S) -> bool:
    if not isinstance(sys, FinitePermutation):
        raise DomainError("invariance is only checked on finite permutation systems")
    S = set(S)
    return all(sys.contains(s) for s in S) and {sys.perm[s] for s in S} == S


def same_system(a: DynSystem, b: DynSystem) -> None:
    if a != b:
        raise BackendMismatch(f"system mismatch: {a!r} vs {b!r}")
