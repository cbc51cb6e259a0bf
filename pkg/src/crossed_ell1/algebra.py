"""Finitely supported elements ``a = sum_n f_n delta^n`` of the crossed product algebra.

Multiplication is the twisted convolution
``(a b)(n) = sum_k a(k) alpha^k(b(n - k))`` and the involution is
``a*(n) = conj(alpha^n(a(-n)))``, with ``alpha(f) = f o sigma^-1``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .dynsys import (
    BackendMismatch,
    DomainError,
    DynSystem,
    FinitePermutation,
    is_invariant,
    same_system,
)
from .functions import DenseTable, FunctionOnX, OrbitTable, constant, function_class
from .scalars import GaussianRational, sqrt_bounds


class AlgebraElement:
    """Immutable sparse series ``{n: f_n}`` with zero coefficients pruned."""

    __slots__ = ("system", "coeffs")

    def __init__(self, system: DynSystem, coeffs: Mapping[int, FunctionOnX] | None = None):
        self.system = system
        clean: dict[int, FunctionOnX] = {}
        for n, f in (coeffs or {}).items():
            f.check(system)
            if not f.is_zero():
                clean[int(n)] = f
        self.coeffs = dict(sorted(clean.items()))

    # ------------------------------------------------------------ basics

    def __repr__(self) -> str:
        return f"AlgebraElement({self.coeffs!r})"

    @property
    def support(self) -> list[int]:
        return list(self.coeffs)

    @property
    def exact(self) -> bool:
        return all(getattr(f, "exact", False) for f in self.coeffs.values())

    def coeff(self, n: int) -> FunctionOnX:
        f = self.coeffs.get(n)
        if f is None:
            return constant(self.system, 0, exact=self.exact and bool(self.coeffs))
        return f

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        if self.system != other.system or self.support != other.support:
            return False
        return all(self.coeffs[n] == other.coeffs[n] for n in self.coeffs)

    __hash__ = None

    def _same(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        same_system(self.system, other.system)

    # ------------------------------------------------------------ linear structure

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        out = dict(self.coeffs)
        for n, g in other.coeffs.items():
            out[n] = out[n] + g if n in out else g
        return AlgebraElement(self.system, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.system, {n: -f for n, f in self.coeffs.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        return AlgebraElement(self.system, {n: f.scale(c) for n, f in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def star(self) -> "AlgebraElement":
        return involution(self)

    def to_float(self) -> "AlgebraElement":
        return AlgebraElement(self.system, {n: f.to_float() for n, f in self.coeffs.items()})

    def one_norm(self) -> float:
        return one_norm(self)


# ---------------------------------------------------------------- constructors


def unit(sys: DynSystem, exact: bool = False) -> AlgebraElement:
    return delta_power(sys, 0, exact=exact)


def delta_power(sys: DynSystem, n: int, exact: bool = False) -> AlgebraElement:
    """``delta^n``, the series with the constant function 1 at exponent ``n``."""
    return AlgebraElement(sys, {int(n): constant(sys, 1, exact=exact)})


def embed_function(sys: DynSystem, f: FunctionOnX) -> AlgebraElement:
    """``f`` as the element ``f delta^0``."""
    return AlgebraElement(sys, {0: f})


def monomial(sys: DynSystem, f: FunctionOnX, n: int) -> AlgebraElement:
    """``f delta^n``."""
    return AlgebraElement(sys, {int(n): f})


def zero(sys: DynSystem) -> AlgebraElement:
    return AlgebraElement(sys, {})


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def scale(c, a: AlgebraElement) -> AlgebraElement:
    return a.scale(c)


# ---------------------------------------------------------------- products


def _dense_block(a: AlgebraElement) -> tuple[int, np.ndarray]:
    lo, hi = a.support[0], a.support[-1]
    block = np.zeros((hi - lo + 1, a.system.size), dtype=np.complex128)
    for n, f in a.coeffs.items():
        block[n - lo] = f.values
    return lo, block


def _multiply_dense_float(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    sys: FinitePermutation = a.system
    a_lo, A = _dense_block(a)
    b_lo, B = _dense_block(b)
    shift_idx = np.stack([sys.power_index(-(a_lo + k)) for k in range(A.shape[0])])
    out = _kernels.twisted_convolve(A, B, shift_idx)
    lo = a_lo + b_lo
    return AlgebraElement(sys, {lo + i: DenseTable(row) for i, row in enumerate(out) if np.any(row)})


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Twisted convolution ``(a b)(n) = sum_k a(k) alpha^k(b(n - k))``."""
    a._same(b)
    if a.is_zero() or b.is_zero():
        return zero(a.system)
    sys = a.system
    if isinstance(sys, FinitePermutation) and not a.exact and not b.exact and sys.size:
        return _multiply_dense_float(a, b)
    out: dict[int, FunctionOnX] = {}
    for k, fk in a.coeffs.items():
        for l, gl in b.coeffs.items():
            term = fk * gl.alpha(sys, k)
            out[k + l] = out[k + l] + term if (k + l) in out else term
    return AlgebraElement(sys, out)


def involution(a: AlgebraElement) -> AlgebraElement:
    """``a*(n) = conj(alpha^n(a(-n)))``."""
    sys = a.system
    return AlgebraElement(sys, {-m: f.alpha(sys, -m).conj() for m, f in a.coeffs.items()})


# ---------------------------------------------------------------- norms


def one_norm(a: AlgebraElement) -> float:
    """``||a|| = sum_n ||f_n||_sup``."""
    return math.fsum(f.sup_norm(a.system) for f in a.coeffs.values())


def one_norm_bounds(a: AlgebraElement, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Rigorous rational enclosure of ``||a||`` (table-valued coefficients only).

    Each sup-norm is the square root of an exactly computed rational, so the
    enclosure is at most ``len(support) * 2**-bits`` wide.
    """
    lo = hi = Fraction(0)
    for f in a.coeffs.values():
        if not hasattr(f, "sup_abs2"):
            raise DomainError("exact norm bounds need table-valued coefficients")
        l, h = sqrt_bounds(f.sup_abs2(), bits)
        lo += l
        hi += h
    return lo, hi


def approx_equal(a: AlgebraElement, b: AlgebraElement, tol: float = 0.0) -> bool:
    """``||a - b|| <= tol``; ``tol = 0`` demands exact equality."""
    a._same(b)
    if tol == 0:
        return (a - b).is_zero()
    return one_norm(a - b) <= tol


def alpha_element(a: AlgebraElement, n: int = 1) -> AlgebraElement:
    """Apply ``alpha^n`` to every coefficient (conjugation by ``delta^n``)."""
    return AlgebraElement(a.system, {k: f.alpha(a.system, n) for k, f in a.coeffs.items()})


# ---------------------------------------------------------------- restriction


def restrict_to_subsystem(a: AlgebraElement, S: Iterable[int]) -> AlgebraElement:
    """Coefficientwise restriction to an invariant subset ``S``.

    The subsystem is relabelled ``0..|S|-1`` in increasing order of the
    original points; the returned element lives on that subsystem.
    """
    sys = a.system
    if not isinstance(sys, FinitePermutation):
        raise DomainError("restriction is implemented for finite permutation systems")
    pts = sorted(set(int(s) for s in S))
    if not pts:
        raise DomainError("restriction needs a non-empty subset")
    if not is_invariant(sys, pts):
        raise DomainError("subset is not invariant under sigma")
    sub = subsystem(sys, pts)
    return AlgebraElement(sub, {n: f.restrict(pts) for n, f in a.coeffs.items()})


def subsystem(sys: FinitePermutation, pts: list[int]) -> FinitePermutation:
    relabel = {p: i for i, p in enumerate(pts)}
    return FinitePermutation(tuple(relabel[sys.perm[p]] for p in pts))


def as_exact(a: AlgebraElement) -> AlgebraElement:
    """Convert float table coefficients to exact Gaussian rationals (binary-exact)."""
    out = {}
    for n, f in a.coeffs.items():
        if isinstance(f, DenseTable):
            out[n] = DenseTable([GaussianRational.coerce(complex(v)) for v in f.values])
        elif isinstance(f, OrbitTable):
            out[n] = OrbitTable({k: GaussianRational.coerce(complex(v)) for k, v in f.values.items()},
                                GaussianRational.coerce(complex(f.fill)))
        else:
            raise BackendMismatch("trigonometric coefficients have no exact form")
    return AlgebraElement(a.system, out)
