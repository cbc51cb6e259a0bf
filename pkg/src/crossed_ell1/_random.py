"""Seeded random systems, elements and vectors for tests and benchmarks."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, involution
from .dynsys import AperiodicOrbitModel, DynSystem, FinitePermutation, RationalRotation, orbit_space
from .functions import DenseTable, OrbitTable, TrigPolynomial
from .reps import SeqVector
from .scalars import GaussianRational
from .sspace import SSpaceSubset, TSubset


def random_permutation(rng: np.random.Generator, n_min: int = 1, n_max: int = 10) -> FinitePermutation:
    n = int(rng.integers(n_min, n_max + 1))
    return FinitePermutation(tuple(int(i) for i in rng.permutation(n)))


def random_scalar(rng: np.random.Generator, exact: bool = False, denom: int = 4):
    if exact:
        re, im = rng.integers(-4 * denom, 4 * denom + 1, size=2)
        return GaussianRational(Fraction(int(re), denom), Fraction(int(im), denom))
    re, im = rng.standard_normal(2)
    return complex(re, im)


def random_function(rng: np.random.Generator, sys: DynSystem, exact: bool = False,
                    density: float = 0.8):
    if isinstance(sys, FinitePermutation):
        vals = [random_scalar(rng, exact) if rng.random() < density else (GaussianRational(0) if exact else 0j)
                for _ in range(sys.size)]
        return DenseTable(vals)
    if isinstance(sys, RationalRotation):
        ms = rng.choice(np.arange(-3, 4), size=int(rng.integers(1, 4)), replace=False)
        return TrigPolynomial({int(m): random_scalar(rng) for m in ms})
    ks = rng.choice(np.arange(-6, 7), size=int(rng.integers(1, 5)), replace=False)
    return OrbitTable({int(k): random_scalar(rng, exact) for k in ks})


def random_element(rng: np.random.Generator, sys: DynSystem, exact: bool = False,
                   max_terms: int = 4, radius: int = 3) -> AlgebraElement:
    exact = exact and not isinstance(sys, RationalRotation)
    k = int(rng.integers(1, max_terms + 1))
    ns = rng.choice(np.arange(-radius, radius + 1), size=min(k, 2 * radius + 1), replace=False)
    return AlgebraElement(sys, {int(n): random_function(rng, sys, exact) for n in ns})


def random_nonzero_element(rng: np.random.Generator, sys: DynSystem, exact: bool = False,
                           **kw) -> AlgebraElement:
    while True:
        a = random_element(rng, sys, exact, **kw)
        if not a.is_zero():
            return a


def random_selfadjoint(rng: np.random.Generator, sys: DynSystem, **kw) -> AlgebraElement:
    a = random_element(rng, sys, **kw)
    return a + involution(a)


def random_system(rng: np.random.Generator, backend: str) -> DynSystem:
    if backend == "finite_perm":
        return random_permutation(rng)
    if backend == "rational_rotation":
        q = int(rng.integers(1, 7))
        p = next(pp for pp in range(int(rng.integers(1, q + 1)), 2 * q + 2) if np.gcd(pp, q) == 1)
        return RationalRotation(p, q)
    return AperiodicOrbitModel(64)


def random_seqvector(rng: np.random.Generator, radius: int = 8, exact: bool = False,
                     order: float = 1, terms: int | None = None) -> SeqVector:
    """Nonzero vector supported in ``[-radius, radius]``."""
    terms = terms or int(rng.integers(1, 2 * radius + 2))
    ks = rng.choice(np.arange(-radius, radius + 1), size=min(terms, 2 * radius + 1), replace=False)
    entries = {}
    for k in ks:
        c = random_scalar(rng, exact)
        if c != 0:
            entries[int(k)] = c
    if not entries:
        entries[int(ks[0])] = GaussianRational(1) if exact else 1 + 0j
    return SeqVector(entries, order)


def random_tsubset(rng: np.random.Generator) -> TSubset:
    kind = rng.integers(0, 5)
    if kind == 0:
        return TSubset.empty()
    if kind == 1:
        return TSubset.circle()
    arcs = []
    for _ in range(int(rng.integers(0, 3))):
        lo = float(rng.random())
        arcs.append((lo, lo + float(rng.random()) * 0.4))
    pts = [float(t) for t in rng.random(int(rng.integers(0, 3)))]
    return TSubset.make(arcs, pts)


def random_sspace(rng: np.random.Generator, sys: FinitePermutation) -> SSpaceSubset:
    return SSpaceSubset.make(sys, {min(o.points): random_tsubset(rng) for o in orbit_space(sys)
                                   if rng.random() < 0.7})
