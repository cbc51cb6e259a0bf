import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from crossed_ell1 import _random as R
from crossed_ell1.algebra import AlgebraElement, delta_power, embed_function, involution, monomial, unit
from crossed_ell1.dynsys import AperiodicOrbitModel, DomainError, FinitePermutation, orbit, orbit_space
from crossed_ell1.functions import DenseTable, OrbitTable
from crossed_ell1.ideals import (
    AperiodicIdeal,
    PeriodicIdeal,
    SelfAdjointnessViolation,
    ideal_inclusion,
    is_member,
    is_member_all_lambda,
    lambda_grid,
    radical_witness,
    selfadjointness_check,
    separating_element,
    spectrum_union,
    strand_sums,
)
from crossed_ell1.reps import periodic_rep_matrix
from crossed_ell1.scalars import GaussianRational, pythagorean_units

S5 = FinitePermutation.from_cycles(5, [[0, 1, 2], [3, 4]])
SWAP = FinitePermutation((1, 0))
ONE = FinitePermutation((0,))
UNITS = [GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1)] + pythagorean_units(25)


def test_strand_sum_examples():
    lam = cmath.exp(0.4j)
    f0, f2 = DenseTable([1, 2j]), DenseTable([3, -1])
    a = embed_function(SWAP, f0) + monomial(SWAP, f2, 2)
    S = strand_sums(a, orbit(SWAP, 0), lam)
    for i, y in enumerate((0, 1)):
        assert abs(S[0, i] - (f0.values[y] + lam * f2.values[y])) < 1e-14
        assert S[1, i] == 0
    S = strand_sums(unit(S5), orbit(S5, 0), lam)
    assert np.allclose(S, [[1, 1, 1], [0, 0, 0], [0, 0, 0]])
    off = embed_function(S5, DenseTable([0, 0, 0, 1, 2])) + monomial(S5, DenseTable([0, 0, 0, 5, 0]), 4)
    for lam in lambda_grid(9):
        assert np.all(strand_sums(off, orbit(S5, 1), lam) == 0)
    with pytest.raises(DomainError):
        strand_sums(unit(AperiodicOrbitModel()), orbit(AperiodicOrbitModel(), 0), 1)


def _random_member(rng, sys, orb, lam):
    """b (1 - delta^p / lam) c is in P_{orb, lam}."""
    p = len(orb.points)
    killer = unit(sys, exact=True) - delta_power(sys, p, exact=True).scale(1 / lam)
    return R.random_element(rng, sys, True) * killer * R.random_element(rng, sys, True)


def test_kernel_equivalence_exact(rng):
    members = 0
    for _ in range(150):
        sys = R.random_permutation(rng, 1, 7)
        orb = orbit_space(sys)[int(rng.integers(len(orbit_space(sys))))]
        lam = UNITS[int(rng.integers(len(UNITS)))]
        a = _random_member(rng, sys, orb, lam) if rng.random() < 0.5 else R.random_element(rng, sys, True)
        ideal = PeriodicIdeal(orb, lam)
        M = periodic_rep_matrix(ideal.rep(), a)
        zero = all(v == 0 for v in M.ravel())
        assert is_member(a, ideal) == zero
        members += zero
    assert 30 < members < 120


def test_member_examples():
    for sys in (S5, SWAP, ONE):
        for orb in orbit_space(sys):
            for lam in lambda_grid(6):
                assert not is_member(unit(sys), PeriodicIdeal(orb, lam))
    orb = orbit(S5, 0)
    lam = cmath.exp(0.9j)
    a = unit(S5) - delta_power(S5, 3).scale(1 / lam)
    assert is_member(a, PeriodicIdeal(orb, lam))
    assert not is_member(a, PeriodicIdeal(orb, -lam))


def test_all_lambda(rng):
    orb = orbit(S5, 3)
    assert is_member_all_lambda(embed_function(S5, DenseTable([1, 2, 3, 0, 0])), orb)
    assert not is_member_all_lambda(embed_function(S5, DenseTable([0, 0, 0, 1, 0])), orb)
    for _ in range(60):
        sys = R.random_permutation(rng, 1, 6)
        a = R.random_element(rng, sys)
        for orb in orbit_space(sys):
            sampled = all(is_member(a, PeriodicIdeal(orb, lam), 1e-9) for lam in lambda_grid(64))
            assert is_member_all_lambda(a, orb) == sampled


def test_aperiodic_membership():
    ap = AperiodicOrbitModel()
    a = embed_function(ap, OrbitTable({5: 1}))
    assert is_member(a, AperiodicIdeal(ap, (0, 1, 2)))
    assert not is_member(a, AperiodicIdeal(ap, (4, 5)))
    assert not is_member(a, AperiodicIdeal(ap, None))


def test_radical_witness_examples(rng):
    w = radical_witness(S5, unit(S5))
    assert w.orbit.points == (0, 1, 2) and w.lam == 1
    a = embed_function(S5, DenseTable([0, 0, 0, 1, 2])) + monomial(S5, DenseTable([0, 0, 0, 0, 3]), 1)
    w = radical_witness(S5, a)
    assert set(w.orbit.points) == {3, 4} and not is_member(a, w)
    assert radical_witness(S5, AlgebraElement(S5, {})) is None
    for _ in range(100):
        sys = R.random_permutation(rng, 1, 10)
        a = R.random_nonzero_element(rng, sys)
        w = radical_witness(sys, a)
        assert w is not None and not is_member(a, w)


def test_inclusion_rules():
    orb = orbit(S5, 0)
    P = PeriodicIdeal(orb, 1j)
    assert ideal_inclusion(P, PeriodicIdeal(orb, 1j))
    assert not ideal_inclusion(P, PeriodicIdeal(orb, -1j))
    assert not ideal_inclusion(P, PeriodicIdeal(orbit(S5, 3), 1j))
    ap = AperiodicOrbitModel()
    big, small = AperiodicIdeal(ap, (0, 1, 2, 3)), AperiodicIdeal(ap, (1, 2))
    assert ideal_inclusion(big, small) and not ideal_inclusion(small, big)
    assert ideal_inclusion(AperiodicIdeal(ap, None), small)
    cyc = FinitePermutation((1, 2, 0))
    for lam in lambda_grid(5):
        assert not ideal_inclusion(PeriodicIdeal(orbit(cyc, 0), lam), AperiodicIdeal(cyc, (0, 1, 2)))
    assert ideal_inclusion(AperiodicIdeal(cyc, (0, 1, 2)), PeriodicIdeal(orbit(cyc, 0), 1))


def test_maximality_surrogate():
    ids = [PeriodicIdeal(o, lam) for o in orbit_space(S5) for lam in lambda_grid(6)]
    for i, a in enumerate(ids):
        for j, b in enumerate(ids):
            assert ideal_inclusion(a, b) == (i == j)


def test_separating_elements():
    ids = [PeriodicIdeal(o, lam) for o in orbit_space(S5) for lam in lambda_grid(5)]
    for a in ids:
        for b in ids:
            if a is b:
                continue
            s = separating_element(a, b)
            assert is_member(s, a) and not is_member(s, b)


def test_selfadjointness(rng):
    for _ in range(100):
        sys = R.random_permutation(rng, 1, 7)
        orb = orbit_space(sys)[0]
        lam = UNITS[int(rng.integers(len(UNITS)))]
        a = _random_member(rng, sys, orb, lam) if rng.random() < 0.5 else R.random_element(rng, sys, True)
        ideal = PeriodicIdeal(orb, lam)
        m = selfadjointness_check(a, ideal, 0)
        assert m == is_member(involution(a), ideal, 0)


def test_selfadjointness_violation_raises(monkeypatch):
    import crossed_ell1.ideals as I

    calls = iter([True, False])
    monkeypatch.setattr(I, "is_member", lambda *args, **kw: next(calls))
    with pytest.raises(SelfAdjointnessViolation):
        I.selfadjointness_check(unit(S5), PeriodicIdeal(orbit(S5, 0), 1))


def test_spectrum_examples(rng):
    dd = delta_power(ONE, 1) + delta_power(ONE, -1)
    vals = spectrum_union(ONE, dd, 64)
    want = sorted(2 * math.cos(2 * math.pi * k / 64) for k in range(64))
    assert np.allclose(sorted(v.real for v in vals), want, atol=1e-12)
    assert max(abs(v.imag) for v in vals) < 1e-12
    f = embed_function(SWAP, DenseTable([1.5, -3]))
    assert np.allclose(sorted(v.real for v in spectrum_union(SWAP, f, [1])), [-3, 1.5])
    cyc = FinitePermutation((1, 2, 0))
    for _ in range(10):
        a = R.random_selfadjoint(rng, cyc)
        assert max(abs(v.imag) for v in spectrum_union(cyc, a, 64)) <= 1e-10
    with pytest.raises(DomainError):
        spectrum_union(AperiodicOrbitModel(), unit(AperiodicOrbitModel()), 4)
