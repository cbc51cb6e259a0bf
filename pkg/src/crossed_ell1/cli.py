"""Command line front-end.

Every subcommand prints one JSON document on stdout.  Exit status: 0 on
success, 2 for unparseable input, 3 for a domain error, 4 when a requested
tolerance is not met.  Errors are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import serialize as ser
from .dynsys import DomainError, ToleranceNotMet, orbit_space, system_predicates
from .ideals import ideal_inclusion, is_member, radical_witness, spectrum_union
from .reps import PeriodicRep, aperiodic_apply, density_solve, extract_basis_vector, periodic_rep_matrix
from .scalars import GaussianRational
from .sspace import (
    SSpaceSubset,
    TSubset,
    closure_certificates,
    hk_closure,
    structure_space_describe,
    wiener_witness,
)

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_TOL = 0, 2, 3, 4
HERMITIAN_IMAG_TOL = 1e-9


class _ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ParseError(message)


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


# ---------------------------------------------------------------- argument helpers


def _number(s: str):
    s = s.strip()
    if "/" in s:
        return Fraction(s)
    return float(s)


def _lambda_arg(s: str):
    parts = s.split(",")
    if len(parts) == 1:
        parts.append("0")
    if len(parts) != 2:
        raise _ParseError(f"lambda must be 're,im', got {s!r}")
    try:
        re_, im_ = (_number(p) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise _ParseError(f"bad lambda {s!r}") from exc
    if isinstance(re_, Fraction) or isinstance(im_, Fraction):
        return GaussianRational(Fraction(re_), Fraction(im_))
    return complex(re_, im_)


def _arc_arg(s: str) -> tuple[float, float]:
    try:
        lo, hi = (float(_number(p)) for p in s.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise _ParseError(f"arc must be 'lo,hi', got {s!r}") from exc
    return lo, hi


def _order_arg(s: str) -> float:
    return math.inf if s in ("inf", "Infinity") else float(s)


def _load(path: str):
    try:
        return ser.load_json(path)
    except FileNotFoundError as exc:
        raise _ParseError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise _ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _system(args):
    return ser.decode_system(_load(args.system))


def _element(sys_, path):
    return ser.decode_element(sys_, _load(path))


def _point(sys_, s):
    return ser.decode_point(sys_, s)


def _real_or_pair(values: list[complex]) -> list:
    if all(abs(z.imag) <= HERMITIAN_IMAG_TOL for z in values):
        return [z.real for z in values]
    return [[z.real, z.imag] for z in values]


# ---------------------------------------------------------------- subcommands


def cmd_orbits(args):
    sys_ = _system(args)
    samples = [_point(sys_, s) for s in args.samples.split(",")] if args.samples else None
    return [[ser.encode_point(sys_, p) for p in o.points] for o in orbit_space(sys_, samples)], EXIT_OK


def cmd_predicates(args):
    p = system_predicates(_system(args))
    return {"free": p.free, "topologically_free": p.topologically_free,
            "topologically_transitive": p.topologically_transitive}, EXIT_OK


def cmd_rep_matrix(args):
    sys_ = _system(args)
    rep = PeriodicRep(sys_, _point(sys_, args.x), _lambda_arg(args.lam))
    M = periodic_rep_matrix(rep, _element(sys_, args.element))
    return [[ser.encode_scalar(v) for v in row] for row in M], EXIT_OK


def cmd_apply(args):
    sys_ = _system(args)
    v = ser.decode_seqvector(_load(args.vector))
    out = aperiodic_apply(sys_, _point(sys_, args.x), _element(sys_, args.element), v)
    return ser.encode_seqvector(out), EXIT_OK


def cmd_solve(args):
    sys_ = _system(args)
    rho = ser.decode_seqvector(_load(args.rho))
    tau = ser.decode_seqvector(_load(args.tau))
    res = density_solve(sys_, _point(sys_, args.x), rho, tau, gamma=args.gamma, max_steps=args.max_steps,
                        truncation=args.truncation, max_n1=args.max_n1, max_n2=args.max_n2)
    out = {
        "element": ser.encode_element(res.a),
        "residual_norms": res.residual_norms,
        "steps": res.steps,
        "n0": res.n0,
        "epsilon": res.epsilon,
        "achieved_epsilon": res.achieved_epsilon,
        "bound_ok": res.bound_ok,
        "residual_zero": res.exact_residual_zero,
    }
    return out, EXIT_OK if res.bound_ok else EXIT_TOL


def cmd_extract(args):
    sys_ = _system(args)
    rho = ser.decode_seqvector(_load(args.rho))
    res = extract_basis_vector(sys_, _point(sys_, args.x), rho, args.N, p=args.p)
    err = (res.vector - type(res.vector).basis(0, res.vector.exact, res.p)).norm(res.p)
    return {"vector": ser.encode_seqvector(res.vector), "error_bound": res.error_bound,
            "error": err, "p": "inf" if res.p == math.inf else res.p, "n0": res.n0}, EXIT_OK


def cmd_ideal_member(args):
    sys_ = _system(args)
    ideal = ser.decode_ideal(sys_, _load(args.ideal))
    return {"member": is_member(_element(sys_, args.element), ideal, args.tol)}, EXIT_OK


def cmd_radical_witness(args):
    sys_ = _system(args)
    w = radical_witness(sys_, _element(sys_, args.element), args.tol)
    return (None if w is None else ser.encode_ideal(sys_, w)), EXIT_OK


def cmd_inclusion(args):
    sys_ = _system(args)
    id1 = ser.decode_ideal(sys_, _load(args.ideal1))
    id2 = ser.decode_ideal(sys_, _load(args.ideal2))
    return {"included": ideal_inclusion(id1, id2)}, EXIT_OK


def cmd_spectrum(args):
    sys_ = _system(args)
    samples = [_point(sys_, s) for s in args.orbit_samples.split(",")] if args.orbit_samples else None
    vals = spectrum_union(sys_, _element(sys_, args.element), args.samples, samples)
    return _real_or_pair(vals), EXIT_OK


def cmd_closure(args):
    sys_ = _system(args)
    E = ser.decode_sspace(sys_, _load(args.set))
    closed = hk_closure(sys_, E)
    out: dict = {"closure": ser.encode_sspace(closed)}
    code = EXIT_OK
    if args.certify:
        certs = closure_certificates(sys_, E, samples=args.cert_samples, tol=args.tol, maxN=args.maxN)
        out["certificates"] = [
            {"orbit": c.orbit_key, "angle": c.angle, "kind": c.kind, "verified": c.verified,
             "support": len(c.element.support)}
            for c in certs
        ]
        if not all(c.verified for c in certs):
            code = EXIT_TOL
    return out, code


def cmd_witness(args):
    forbidden = TSubset.make(args.arc or [], args.point or [])
    w = wiener_witness(forbidden, float(_number(args.lambda0)), tol=args.tol, maxN=args.maxN, margin=args.margin)
    return {
        "N": w.N,
        "coeffs": {str(n): ser.encode_scalar(c) for n, c in w.coeff_map.items()},
        "l1_norm": w.l1_norm,
        "forbidden_sup": w.forbidden_sup,
        "value_at_lambda0": ser.encode_scalar(w.value_at_lambda0),
    }, EXIT_OK


def cmd_structure(args):
    return structure_space_describe(_system(args)), EXIT_OK


def cmd_validate(args):
    return {path: ser.validate_formats(path) for path in args.paths}, EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crossed-ell1", description="Computations in l1 crossed products of Z-systems.")
    p.add_argument("--output", "-o", help="write the result here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, system=True):
        sp = sub.add_parser(name, help=help_)
        if system:
            sp.add_argument("--system", required=True, help="system JSON file or inline JSON")
        sp.set_defaults(func=fn)
        return sp

    sp = add("orbits", cmd_orbits, "list the orbits")
    sp.add_argument("--samples", help="comma-separated sample points (rational rotation)")
    add("predicates", cmd_predicates, "freeness and transitivity")

    sp = add("rep-matrix", cmd_rep_matrix, "matrix of a periodic representation")
    sp.add_argument("--x", required=True)
    sp.add_argument("--lambda", dest="lam", required=True, help="'re,im'; rationals like 3/5 give exact mode")
    sp.add_argument("--element", required=True)

    sp = add("apply", cmd_apply, "apply pi^p_x(a) to a finitely supported vector")
    sp.add_argument("--x", required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--vector", required=True)

    sp = add("solve", cmd_solve, "solve pi_x(a) rho = tau")
    sp.add_argument("--x", default="0")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--tau", required=True)
    sp.add_argument("--gamma", type=float, default=0.5)
    sp.add_argument("--max-steps", type=int, default=50)
    sp.add_argument("--truncation", choices=["exact", "minimal"], default="exact")
    sp.add_argument("--max-n1", type=int)
    sp.add_argument("--max-n2", type=int)

    sp = add("extract-e0", cmd_extract, "recover e_0 from a vector with a bump function")
    sp.add_argument("--x", default="0")
    sp.add_argument("--rho", required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=_order_arg, default=2.0)

    sp = add("ideal-member", cmd_ideal_member, "membership in a primitive ideal")
    sp.add_argument("--ideal", required=True)
    sp.add_argument("--element", required=True)
    sp.add_argument("--tol", type=float)

    sp = add("radical-witness", cmd_radical_witness, "a primitive ideal not containing the element")
    sp.add_argument("--element", required=True)
    sp.add_argument("--tol", type=float)

    sp = add("inclusion", cmd_inclusion, "decide ideal1 <= ideal2")
    sp.add_argument("--ideal1", required=True)
    sp.add_argument("--ideal2", required=True)

    sp = add("spectrum", cmd_spectrum, "union of eigenvalues over orbits and lambda samples")
    sp.add_argument("--element", required=True)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--orbit-samples", help="comma-separated sample points (rational rotation)")

    sp = add("closure", cmd_closure, "hull-kernel closure of a structure space subset")
    sp.add_argument("--set", required=True)
    sp.add_argument("--certify", action="store_true")
    sp.add_argument("--cert-samples", type=int, default=16)
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--maxN", type=int, default=2000)

    sp = add("witness", cmd_witness, "Fourier series vanishing on a closed set, 1 at lambda0", system=False)
    sp.add_argument("--arc", type=_arc_arg, action="append", help="'lo,hi' in turns (repeatable)")
    sp.add_argument("--point", type=float, action="append", help="angle in turns (repeatable)")
    sp.add_argument("--lambda0", default="0", help="angle in turns")
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--maxN", type=int, default=2000)
    sp.add_argument("--margin", type=float, default=1.0 / 64)

    add("structure", cmd_structure, "describe the structure space")

    sp = add("validate", cmd_validate, "check JSON input files", system=False)
    sp.add_argument("paths", nargs="+")
    return p


def _check_ranges(args) -> None:
    gamma = getattr(args, "gamma", None)
    if gamma is not None and not 0 < gamma < 1:
        raise _ParseError("--gamma must lie in (0, 1)")
    tol = getattr(args, "tol", None)
    if tol is not None and not tol > 0:
        raise _ParseError("--tol must be positive")
    for name in ("samples", "cert_samples", "maxN", "max_steps"):
        v = getattr(args, name, None)
        if isinstance(v, int) and v < 1:
            raise _ParseError(f"--{name.replace('_', '-')} must be >= 1")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_ranges(args)
        result, code = args.func(args)
    except (_ParseError, ser.FormatError) as exc:
        return _fail(EXIT_PARSE, "parse", str(exc))
    except ToleranceNotMet as exc:
        return _fail(EXIT_TOL, "tolerance", str(exc))
    except DomainError as exc:
        return _fail(EXIT_DOMAIN, "domain", str(exc))
    text = json.dumps(result, allow_nan=False)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
