"""JSON encoding of systems, points, elements, vectors, ideals and circle subsets.

Scalars are ``[re, im]`` pairs.  Floats are written with Python's shortest
round-trip repr; exact values are ``"num/den"`` strings, so an element
whose entries are strings parses back in exact mode.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any

from .algebra import AlgebraElement
from .dynsys import (
    AperiodicOrbitModel,
    DomainError,
    DynSystem,
    FinitePermutation,
    RationalRotation,
    check_point,
    orbit,
)
from .functions import DenseTable, OrbitTable, TrigPolynomial
from .ideals import AperiodicIdeal, PeriodicIdeal
from .reps import SeqVector
from .scalars import GaussianRational
from .sspace import SSpaceSubset, TSubset


class FormatError(ValueError):
    """Malformed JSON input."""


# ---------------------------------------------------------------- scalars


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _parse_real(v):
    if isinstance(v, bool):
        raise FormatError(f"expected a number, got {v!r}")
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational {v!r}") from exc
    if isinstance(v, (int, float)):
        return v
    raise FormatError(f"expected a number, got {v!r}")


def encode_scalar(c) -> list:
    if isinstance(c, GaussianRational):
        return [_frac_str(c.re), _frac_str(c.im)]
    if isinstance(c, Fraction):
        return [_frac_str(c), "0"]
    z = complex(c)
    return [z.real, z.imag]


def decode_scalar(v, exact: bool | None = None):
    """``[re, im]`` or a bare real; strings give an exact value."""
    parts = v if isinstance(v, list) else [v, 0]
    if len(parts) != 2:
        raise FormatError(f"scalar must be [re, im], got {v!r}")
    re_, im_ = (_parse_real(p) for p in parts)
    if exact is None:
        exact = any(isinstance(p, str) for p in parts)
    if exact:
        return GaussianRational(Fraction(re_), Fraction(im_))
    return complex(float(re_), float(im_))


def _is_exact_json(v) -> bool:
    if isinstance(v, str):
        return True
    if isinstance(v, list):
        return any(_is_exact_json(x) for x in v)
    if isinstance(v, dict):
        return any(_is_exact_json(x) for x in v.values())
    return False


def _int_key(k) -> int:
    try:
        return int(k)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"expected an integer key, got {k!r}") from exc


# ---------------------------------------------------------------- systems and points


def encode_system(sys: DynSystem) -> dict:
    if isinstance(sys, FinitePermutation):
        return {"backend": "finite_perm", "perm": list(sys.perm)}
    if isinstance(sys, RationalRotation):
        return {"backend": "rational_rotation", "p": sys.p, "q": sys.q}
    return {"backend": "aperiodic_orbit", "window": sys.window}


def decode_system(d: Any) -> DynSystem:
    if not isinstance(d, dict) or "backend" not in d:
        raise FormatError("system must be an object with a 'backend' field")
    b = d["backend"]
    try:
        if b == "finite_perm":
            return FinitePermutation(tuple(d["perm"]))
        if b == "rational_rotation":
            return RationalRotation(int(d["p"]), int(d["q"]))
        if b == "aperiodic_orbit":
            return AperiodicOrbitModel(int(d.get("window", 64)))
    except KeyError as exc:
        raise FormatError(f"system field {exc} missing") from exc
    raise FormatError(f"unknown backend {b!r}")


def encode_point(sys: DynSystem, x):
    if isinstance(sys, RationalRotation):
        return _frac_str(Fraction(x))
    return int(x)


def decode_point(sys: DynSystem, v):
    if isinstance(sys, RationalRotation):
        try:
            v = Fraction(v) if isinstance(v, (str, int)) else v
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad point {v!r}") from exc
    elif isinstance(v, str):
        try:
            v = int(v)
        except ValueError as exc:
            raise FormatError(f"bad point {v!r}") from exc
    return check_point(sys, v)


# ---------------------------------------------------------------- functions and elements


def encode_function(f) -> dict:
    if isinstance(f, DenseTable):
        return {"table": [encode_scalar(v) for v in f.values]}
    if isinstance(f, TrigPolynomial):
        return {"trig": {str(m): encode_scalar(c) for m, c in sorted(f.coeffs.items())}}
    out: dict = {"orbit_table": {str(k): encode_scalar(v) for k, v in sorted(f.values.items())}}
    if f.fill != 0:
        out["fill"] = encode_scalar(f.fill)
    return out


def decode_function(d: Any, exact: bool = False):
    if not isinstance(d, dict):
        raise FormatError("function must be an object")
    if "table" in d:
        return DenseTable([decode_scalar(v, exact) for v in d["table"]])
    if "trig" in d:
        if exact:
            raise FormatError("trigonometric polynomials have no exact mode")
        return TrigPolynomial({_int_key(k): decode_scalar(v, False) for k, v in d["trig"].items()})
    if "orbit_table" in d:
        fill = decode_scalar(d.get("fill", 0), exact)
        return OrbitTable({_int_key(k): decode_scalar(v, exact) for k, v in d["orbit_table"].items()}, fill)
    raise FormatError("function needs one of 'table', 'trig', 'orbit_table'")


def encode_element(a: AlgebraElement) -> dict:
    return {"coeffs": {str(n): encode_function(f) for n, f in a.coeffs.items()}}


def decode_element(sys: DynSystem, d: Any) -> AlgebraElement:
    if not isinstance(d, dict) or "coeffs" not in d:
        raise FormatError("element must be an object with a 'coeffs' field")
    exact = _is_exact_json(d["coeffs"])
    coeffs = {_int_key(n): decode_function(f, exact) for n, f in d["coeffs"].items()}
    return AlgebraElement(sys, coeffs)


# ---------------------------------------------------------------- vectors, ideals, subsets


def encode_seqvector(v: SeqVector) -> dict:
    order = "inf" if v.order == math.inf else v.order
    return {"entries": {str(k): encode_scalar(c) for k, c in v.entries.items()}, "order": order}


def decode_seqvector(d: Any) -> SeqVector:
    if not isinstance(d, dict):
        raise FormatError("vector must be an object")
    entries = d.get("entries", d if "order" not in d else {})
    exact = _is_exact_json(entries)
    order = d.get("order", 1)
    order = math.inf if order in ("inf", "Infinity") else float(order)
    return SeqVector({_int_key(k): decode_scalar(c, exact) for k, c in entries.items()}, order)


def encode_ideal(sys: DynSystem, ideal) -> dict:
    if isinstance(ideal, PeriodicIdeal):
        return {"orbit_of": encode_point(sys, ideal.orbit.base), "lambda": encode_scalar(ideal.lam)}
    if ideal.points is None:
        return {"orbit_closure": "full"}
    return {"orbit_closure": [encode_point(sys, p) for p in ideal.points]}


def decode_ideal(sys: DynSystem, d: Any):
    if not isinstance(d, dict):
        raise FormatError("ideal must be an object")
    if "orbit_of" in d:
        lam = decode_scalar(d.get("lambda", [1, 0]))
        return PeriodicIdeal(orbit(sys, decode_point(sys, d["orbit_of"])), lam)
    if "orbit_closure" in d:
        pts = d["orbit_closure"]
        if pts == "full":
            return AperiodicIdeal(sys, None)
        return AperiodicIdeal(sys, tuple(decode_point(sys, p) for p in pts))
    raise FormatError("ideal needs 'orbit_of' or 'orbit_closure'")


def decode_tsubset(d: Any) -> TSubset:
    if not isinstance(d, dict):
        raise FormatError("circle subset must be an object")
    if d.get("full"):
        return TSubset.circle()
    arcs = d.get("arcs", [])
    for arc in arcs:
        if not (isinstance(arc, list) and len(arc) == 2):
            raise FormatError(f"arc must be [lo, hi], got {arc!r}")
    return TSubset.make([(float(_parse_real(a)), float(_parse_real(b))) for a, b in arcs],
                        [float(_parse_real(p)) for p in d.get("points", [])])


def encode_sspace(E: SSpaceSubset) -> dict:
    return E.to_json()


def decode_sspace(sys: DynSystem, d: Any) -> SSpaceSubset:
    if not isinstance(d, dict):
        raise FormatError("structure space subset must be an object keyed by orbit point")
    return SSpaceSubset.make(sys, {decode_point(sys, k): decode_tsubset(v) for k, v in d.items()})


# ---------------------------------------------------------------- text helpers


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, no NaN)."""
    return json.dumps(obj, sort_keys=False, allow_nan=False, separators=(",", ":"))


def load_json(text_or_path: str):
    """Parse inline JSON (starting with ``{`` or ``[``) or read it from a file."""
    s = text_or_path.lstrip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    with open(text_or_path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------- validation


def _line_of(text: str, needle: str) -> int:
    idx = text.find(needle)
    return 1 if idx < 0 else text.count("\n", 0, idx) + 1


def _scalar_problem(v) -> str | None:
    try:
        decode_scalar(v)
    except FormatError as exc:
        return str(exc)
    return None


def validate_text(text: str) -> list[str]:
    """Diagnostics (``"line N: message"``) for a system, element, vector, ideal or subset."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return [f"line {exc.lineno}: invalid JSON: {exc.msg}"]
    diags: list[str] = []

    def add(needle: str, msg: str) -> None:
        diags.append(f"line {_line_of(text, needle)}: {msg}")

    if not isinstance(data, dict):
        return ["line 1: top-level value must be an object"]
    if "backend" in data:
        b = data["backend"]
        if b == "finite_perm":
            perm = data.get("perm")
            if not isinstance(perm, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in perm):
                add('"perm"', "perm must be a list of integers")
            elif sorted(perm) != list(range(len(perm))):
                seen, dup = set(), None
                for i in perm:
                    if i in seen:
                        dup = i
                        break
                    seen.add(i)
                what = f"image {dup} repeated" if dup is not None else "images out of range"
                add('"perm"', f"permutation is not a bijection ({what})")
        elif b == "rational_rotation":
            p, q = data.get("p"), data.get("q")
            if not (isinstance(p, int) and isinstance(q, int)) or q < 1 or p <= 0 or math.gcd(p, q) != 1:
                add('"p"', "rotation needs integers p > 0, q >= 1 with gcd(p, q) = 1")
        elif b == "aperiodic_orbit":
            w = data.get("window", 64)
            if not isinstance(w, int) or w < 0:
                add('"window"', "window must be a non-negative integer")
        else:
            add('"backend"', f"unknown backend {b!r}")
    elif "coeffs" in data:
        coeffs = data["coeffs"]
        if not isinstance(coeffs, dict):
            add('"coeffs"', "coeffs must be an object keyed by exponent")
            return diags
        for n, f in coeffs.items():
            if not re.fullmatch(r"-?\d+", str(n)):
                add(f'"{n}"', f"exponent {n!r} is not an integer")
            if not isinstance(f, dict) or not ({"table", "trig", "orbit_table"} & set(f)):
                add(f'"{n}"', f"coefficient {n}: needs 'table', 'trig' or 'orbit_table'")
                continue
            vals = f.get("table") or list((f.get("trig") or f.get("orbit_table") or {}).values())
            for v in vals:
                prob = _scalar_problem(v)
                if prob:
                    add(f'"{n}"', f"coefficient {n}: {prob}")
                    break
    elif "orbit_of" in data or "orbit_closure" in data:
        if "orbit_of" in data:
            lam = data.get("lambda", [1, 0])
            prob = _scalar_problem(lam)
            if prob:
                add('"lambda"', prob)
            else:
                z = decode_scalar(lam)
                mod = abs(complex(z))
                if abs(mod - 1) > 1e-12:
                    add('"lambda"', f"lambda out of range: |lambda| = {mod!r}, must be 1")
    elif {"arcs", "points", "full"} & set(data):
        for arc in data.get("arcs", []):
            if not (isinstance(arc, list) and len(arc) == 2):
                add('"arcs"', f"arc must be [lo, hi], got {arc!r}")
            elif _scalar_problem(arc[0]) or _scalar_problem(arc[1]) or float(_parse_real(arc[1])) < float(_parse_real(arc[0])):
                add('"arcs"', f"arc {arc!r} needs numeric lo <= hi")
    elif "entries" in data:
        for k, v in data["entries"].items():
            prob = _scalar_problem(v)
            if prob or not re.fullmatch(r"-?\d+", str(k)):
                add(f'"{k}"', f"entry {k!r}: {prob or 'index is not an integer'}")
    else:
        diags.append("line 1: unrecognized document (expected system, element, vector, ideal or circle subset)")
    return diags


def validate_formats(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return [f"line 0: cannot read {path}: {exc.strerror}"]
    return validate_text(text)
