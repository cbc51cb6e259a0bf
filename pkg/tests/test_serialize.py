import json
import math

import numpy as np
import pytest

from crossed_ell1 import _random as R
from crossed_ell1 import serialize as S
from crossed_ell1.dynsys import AperiodicOrbitModel, FinitePermutation, RationalRotation, orbit
from crossed_ell1.ideals import AperiodicIdeal, PeriodicIdeal
from crossed_ell1.scalars import GaussianRational
from crossed_ell1.sspace import TSubset


def rt(obj):
    return json.loads(json.dumps(obj))


@pytest.mark.parametrize("backend", ["finite_perm", "rational_rotation", "aperiodic_orbit"])
@pytest.mark.parametrize("exact", [False, True])
def test_element_round_trip(rng, backend, exact):
    for _ in range(20):
        sys = R.random_system(rng, backend)
        assert S.decode_system(rt(S.encode_system(sys))) == sys
        a = R.random_element(rng, sys, exact)
        assert S.decode_element(sys, rt(S.encode_element(a))) == a


def test_float_repr_is_lossless(rng):
    for _ in range(200):
        z = complex(*rng.standard_normal(2) * 10.0 ** rng.integers(-20, 20))
        assert S.decode_scalar(rt(S.encode_scalar(z))) == z


def test_vectors_ideals_subsets(rng):
    v = R.random_seqvector(rng, 5, exact=True, order=math.inf)
    w = S.decode_seqvector(rt(S.encode_seqvector(v)))
    assert w == v and w.order == math.inf
    sys = FinitePermutation((1, 2, 0, 4, 3))
    P = PeriodicIdeal(orbit(sys, 3), GaussianRational(0, 1))
    assert S.decode_ideal(sys, rt(S.encode_ideal(sys, P))) == P
    Q = S.decode_ideal(sys, {"orbit_of": 3, "lambda": [0, 1]})
    assert Q.orbit.points == (3, 4) and Q.lam == 1j
    ap = AperiodicOrbitModel()
    for A in (AperiodicIdeal(ap, None), AperiodicIdeal(ap, (1, 5))):
        assert S.decode_ideal(ap, rt(S.encode_ideal(ap, A))) == A
    T = S.decode_tsubset({"arcs": [[0.25, 0.75]], "points": [0.1]})
    assert S.decode_tsubset(rt(T.to_json())) == T
    E = R.random_sspace(rng, sys)
    assert S.decode_sspace(sys, rt(S.encode_sspace(E))) == E


def test_rotation_points():
    rot = RationalRotation(1, 3)
    from fractions import Fraction
    assert S.encode_point(rot, Fraction(1, 6)) == "1/6"
    assert S.decode_point(rot, "1/6") == Fraction(1, 6)


def test_validate_examples(tmp_path):
    good = tmp_path / "s.json"
    good.write_text('{"backend": "finite_perm", "perm": [1, 2, 0, 4, 3]}')
    assert S.validate_formats(str(good)) == []
    bad = tmp_path / "b.json"
    bad.write_text('{\n  "backend": "finite_perm",\n  "perm": [1, 1, 0]\n}')
    (d,) = S.validate_formats(str(bad))
    assert d.startswith("line 3:") and "not a bijection" in d
    ideal = tmp_path / "i.json"
    ideal.write_text('{"orbit_of": 3,\n "lambda": [1, 1]}')
    (d,) = S.validate_formats(str(ideal))
    assert d.startswith("line 2:") and "range" in d
    broken = tmp_path / "x.json"
    broken.write_text('{\n"coeffs": {\n}')
    assert "invalid JSON" in S.validate_formats(str(broken))[0]
    elem = tmp_path / "e.json"
    elem.write_text('{"coeffs": {"x": {"table": [[1, 0]]}, "1": {"foo": 1}}}')
    assert len(S.validate_formats(str(elem))) == 2
    assert S.validate_text('{"arcs": [[0.7, 0.2]]}')
