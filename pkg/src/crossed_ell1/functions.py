"""Continuous functions on ``X``, one variant per system backend.

* :class:`DenseTable` -- a value per point of a finite permutation system.
* :class:`TrigPolynomial` -- ``sum_m c_m exp(2 pi i m theta)`` on the circle.
* :class:`OrbitTable` -- values on orbit indices of the aperiodic model,
  with a constant ``fill`` value everywhere else (``0`` by default).

Values are float complex or exact :class:`~crossed_ell1.scalars.GaussianRational`
(exact mode is available for tables, not for trigonometric polynomials).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Mapping, Union

import numpy as np

from .dynsys import (
    AperiodicOrbitModel,
    BackendMismatch,
    DomainError,
    DynSystem,
    FinitePermutation,
    RationalRotation,
    check_point,
)
from .scalars import GaussianRational, abs2, as_exact_array, is_exact, sqrt_fraction

#: default number of grid points used to estimate trigonometric sup-norms
TRIG_SUP_SAMPLES = 4096


def _as_table_array(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.dtype == object or any(isinstance(v, (GaussianRational, Fraction)) for v in arr.ravel()):
        return as_exact_array(list(arr.ravel()))
    return arr.astype(np.complex128).ravel()


def _promote(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if a.dtype == b.dtype:
        return a, b
    return a.astype(np.complex128), b.astype(np.complex128)


def _exp_turn(t: Fraction) -> complex:
    """``exp(2 pi i t)`` with exact reduction of ``t`` modulo 1."""
    t = t % 1
    if t == 0:
        return 1 + 0j
    if t == Fraction(1, 2):
        return -1 + 0j
    if t == Fraction(1, 4):
        return 1j
    if t == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * math.pi * float(t))


def _scalar(c):
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, Fraction):
        return GaussianRational(c)
    return complex(c)


class DenseTable:
    """Function on a finite permutation system, one value per point."""

    __slots__ = ("values",)
    backend = "finite_perm"

    def __init__(self, values):
        arr = _as_table_array(values)
        arr.setflags(write=False)
        self.values = arr

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def __len__(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        return f"DenseTable({list(self.values)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseTable) or len(self) != len(other):
            return NotImplemented if not isinstance(other, DenseTable) else False
        return bool(np.all(self.values == other.values))

    __hash__ = None

    def check(self, sys: DynSystem) -> None:
        if not isinstance(sys, FinitePermutation):
            raise BackendMismatch("table function used with a non-permutation system")
        if len(self) != sys.size:
            raise BackendMismatch(f"table has {len(self)} values, system has {sys.size} points")

    def evaluate(self, sys: DynSystem, x):
        return self.values[check_point(sys, x)]

    def alpha(self, sys: DynSystem, n: int) -> "DenseTable":
        if n == 0:
            return self
        # alpha^n(f) = f o sigma^-n
        return DenseTable(self.values[sys.power_index(-n)])

    def __mul__(self, other: "DenseTable") -> "DenseTable":
        a, b = _promote(self.values, other.values)
        return DenseTable(a * b)

    def __add__(self, other: "DenseTable") -> "DenseTable":
        a, b = _promote(self.values, other.values)
        return DenseTable(a + b)

    def __sub__(self, other: "DenseTable") -> "DenseTable":
        a, b = _promote(self.values, other.values)
        return DenseTable(a - b)

    def __neg__(self) -> "DenseTable":
        return DenseTable(-self.values)

    def scale(self, c) -> "DenseTable":
        c = _scalar(c)
        if self.exact and not is_exact(c):
            return DenseTable(self.values.astype(np.complex128) * c)
        if not self.exact and isinstance(c, GaussianRational):
            c = complex(c)
        return DenseTable(self.values * c)

    def conj(self) -> "DenseTable":
        return DenseTable(np.conj(self.values))

    def is_zero(self) -> bool:
        return not np.any(self.values != 0)

    def sup_abs2(self) -> Fraction:
        """Exact squared sup-norm."""
        if len(self) == 0:
            return Fraction(0)
        return max(abs2(v) for v in self.values)

    def sup_norm(self, sys: DynSystem | None = None) -> float:
        if len(self) == 0:
            return 0.0
        if self.exact:
            return sqrt_fraction(self.sup_abs2())
        return float(np.max(np.abs(self.values)))

    def to_float(self) -> "DenseTable":
        return DenseTable(self.values.astype(np.complex128)) if self.exact else self

    def restrict(self, indices) -> "DenseTable":
        return DenseTable(self.values[np.asarray(indices, dtype=np.int64)])

    @classmethod
    def constant(cls, sys: FinitePermutation, c, exact: bool = False) -> "DenseTable":
        if exact or isinstance(c, GaussianRational):
            return cls(as_exact_array([c] * sys.size))
        return cls(np.full(sys.size, complex(c)))


class TrigPolynomial:
    """``theta -> sum_m c_m exp(2 pi i m theta)`` on the rotated circle."""

    __slots__ = ("coeffs",)
    backend = "rational_rotation"
    exact = False

    def __init__(self, coeffs: Mapping[int, complex]):
        self.coeffs = {int(m): complex(c) for m, c in coeffs.items() if complex(c) != 0}

    def __repr__(self) -> str:
        return f"TrigPolynomial({self.coeffs!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    __hash__ = None

    def check(self, sys: DynSystem) -> None:
        if not isinstance(sys, RationalRotation):
            raise BackendMismatch("trigonometric polynomial used with a non-rotation system")

    def evaluate(self, sys: DynSystem, x) -> complex:
        theta = check_point(sys, x)
        return sum((c * _exp_turn(m * theta) for m, c in self.coeffs.items()), 0j)

    def alpha(self, sys: RationalRotation, n: int) -> "TrigPolynomial":
        if n == 0:
            return self
        # f(theta - n p/q) picks up exp(-2 pi i m n p/q) on the m-th mode
        shift = n * sys.angle
        return TrigPolynomial({m: c * _exp_turn(-m * shift) for m, c in self.coeffs.items()})

    def __mul__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        out: dict[int, complex] = {}
        for m, c in self.coeffs.items():
            for k, d in other.coeffs.items():
                out[m + k] = out.get(m + k, 0j) + c * d
        return TrigPolynomial(out)

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        out = dict(self.coeffs)
        for k, d in other.coeffs.items():
            out[k] = out.get(k, 0j) + d
        return TrigPolynomial(out)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + (-other)

    def __neg__(self) -> "TrigPolynomial":
        return TrigPolynomial({m: -c for m, c in self.coeffs.items()})

    def scale(self, c) -> "TrigPolynomial":
        c = complex(c)
        return TrigPolynomial({m: c * d for m, d in self.coeffs.items()})

    def conj(self) -> "TrigPolynomial":
        return TrigPolynomial({-m: c.conjugate() for m, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def grid_values(self, size: int) -> np.ndarray:
        """Values at ``theta = k / size`` for ``k = 0..size-1``."""
        buf = np.zeros(size, dtype=np.complex128)
        for m, c in self.coeffs.items():
            buf[m % size] += c
        return np.fft.ifft(buf) * size

    def sup_norm(self, sys: RationalRotation | None = None, samples: int = TRIG_SUP_SAMPLES) -> float:
        """Sampled sup-norm (never an overestimate).

        With a system, the grid size is rounded up to a multiple of ``q`` so
        the grid is invariant under the rotation; the sampled norm is then a
        genuine algebra seminorm and ``alpha`` preserves it exactly.
        """
        if not self.coeffs:
            return 0.0
        size = samples
        if sys is not None:
            size = sys.q * -(-samples // sys.q)
        return float(np.max(np.abs(self.grid_values(size))))

    def coefficient_bound(self) -> float:
        """``sum |c_m|``, a guaranteed upper bound for the true sup-norm."""
        return math.fsum(abs(c) for c in self.coeffs.values())

    def to_float(self) -> "TrigPolynomial":
        return self

    @classmethod
    def constant(cls, sys: RationalRotation, c, exact: bool = False) -> "TrigPolynomial":
        if exact:
            raise DomainError("trigonometric polynomials have no exact mode")
        return cls({0: complex(c)})


class OrbitTable:
    """Function on the aperiodic orbit model.

    ``values[k]`` is the value at ``sigma^k x``; every other orbit index
    carries ``fill``.  Entries equal to ``fill`` are pruned so the table is
    canonical.
    """

    __slots__ = ("values", "fill")
    backend = "aperiodic_orbit"

    def __init__(self, values: Mapping[int, object], fill=0):
        exact = isinstance(fill, (GaussianRational, Fraction)) or any(
            isinstance(v, (GaussianRational, Fraction)) for v in values.values()
        )
        conv = GaussianRational.coerce if exact else complex
        fill = conv(fill)
        self.fill = fill
        self.values = {int(k): conv(v) for k, v in values.items() if conv(v) != fill}

    @property
    def exact(self) -> bool:
        return isinstance(self.fill, GaussianRational)

    def __repr__(self) -> str:
        body = dict(sorted(self.values.items()))
        return f"OrbitTable({body!r}, fill={self.fill!r})" if self.fill else f"OrbitTable({body!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrbitTable):
            return NotImplemented
        return self.fill == other.fill and self.values == other.values

    __hash__ = None

    def check(self, sys: DynSystem) -> None:
        if not isinstance(sys, AperiodicOrbitModel):
            raise BackendMismatch("orbit table used with a non-orbit-model system")

    def __call__(self, k: int):
        return self.values.get(int(k), self.fill)

    def evaluate(self, sys: DynSystem, x):
        return self(check_point(sys, x))

    def alpha(self, sys: DynSystem, n: int) -> "OrbitTable":
        if n == 0:
            return self
        # (f o sigma^-n)(k) = f(k - n)
        return OrbitTable({k + n: v for k, v in self.values.items()}, self.fill)

    def _zip(self, other: "OrbitTable", op) -> "OrbitTable":
        a, b = self, other
        if a.exact != b.exact:
            a, b = a.to_float(), b.to_float()
        keys = a.values.keys() | b.values.keys()
        return OrbitTable({k: op(a(k), b(k)) for k in keys}, op(a.fill, b.fill))

    def __mul__(self, other: "OrbitTable") -> "OrbitTable":
        return self._zip(other, lambda u, v: u * v)

    def __add__(self, other: "OrbitTable") -> "OrbitTable":
        return self._zip(other, lambda u, v: u + v)

    def __sub__(self, other: "OrbitTable") -> "OrbitTable":
        return self._zip(other, lambda u, v: u - v)

    def __neg__(self) -> "OrbitTable":
        return OrbitTable({k: -v for k, v in self.values.items()}, -self.fill)

    def scale(self, c) -> "OrbitTable":
        c = _scalar(c)
        src = self
        if self.exact and not is_exact(c):
            src = self.to_float()
        elif not self.exact and isinstance(c, GaussianRational):
            c = complex(c)
        return OrbitTable({k: v * c for k, v in src.values.items()}, src.fill * c)

    def conj(self) -> "OrbitTable":
        return OrbitTable({k: v.conjugate() for k, v in self.values.items()}, self.fill.conjugate())

    def is_zero(self) -> bool:
        return not self.values and not self.fill

    def sup_abs2(self) -> Fraction:
        return max([abs2(self.fill)] + [abs2(v) for v in self.values.values()])

    def sup_norm(self, sys: DynSystem | None = None) -> float:
        if self.exact:
            return sqrt_fraction(self.sup_abs2())
        return max([abs(self.fill)] + [abs(v) for v in self.values.values()])

    def to_float(self) -> "OrbitTable":
        if not self.exact:
            return self
        return OrbitTable({k: complex(v) for k, v in self.values.items()}, complex(self.fill))

    def support_range(self) -> tuple[int, int] | None:
        if not self.values:
            return None
        return min(self.values), max(self.values)

    @classmethod
    def constant(cls, sys: AperiodicOrbitModel, c, exact: bool = False) -> "OrbitTable":
        if exact:
            c = GaussianRational.coerce(c)
        return cls({}, c)


FunctionOnX = Union[DenseTable, TrigPolynomial, OrbitTable]

_VARIANTS = {
    "finite_perm": DenseTable,
    "rational_rotation": TrigPolynomial,
    "aperiodic_orbit": OrbitTable,
}


def function_class(sys: DynSystem):
    return _VARIANTS[sys.backend]


def constant(sys: DynSystem, c, exact: bool = False) -> FunctionOnX:
    return function_class(sys).constant(sys, c, exact=exact)


def alpha_power(sys: DynSystem, f: FunctionOnX, n: int) -> FunctionOnX:
    """``alpha^n(f) = f o sigma^-n``."""
    f.check(sys)
    return f.alpha(sys, int(n))


def bump_function(sys: DynSystem, x, N: int, fill=0, extent: int | None = None,
                  exact: bool = False) -> FunctionOnX:
    """Sup-norm one function with ``f(x) = 1`` and ``f(sigma^j x) = 0`` for ``0 < |j| <= N``.

    ``fill`` is the value taken at orbit points ``sigma^j x`` with
    ``N < |j| <= extent`` (default: everywhere else); ``|fill| <= 1``.
    With ``fill=1`` the function is the worst case for truncation errors.
    """
    if N < 0:
        raise DomainError("N must be non-negative")
    x = check_point(sys, x)
    one = GaussianRational(1) if exact else 1.0
    zero = GaussianRational(0) if exact else 0.0
    fill = GaussianRational.coerce(fill) if exact else complex(fill)
    if abs(complex(fill)) > 1:
        raise DomainError("fill value must have modulus at most 1")
    if isinstance(sys, AperiodicOrbitModel):
        if extent is None:
            return OrbitTable({x + j: (one if j == 0 else zero) for j in range(-N, N + 1)}, fill)
        vals = {x + j: fill for j in range(-extent, extent + 1)}
        vals.update({x + j: (one if j == 0 else zero) for j in range(-N, N + 1)})
        return OrbitTable(vals, zero)
    if isinstance(sys, FinitePermutation):
        pts = [sys.step(x, j) for j in range(-N, N + 1)]
        if len(set(pts)) != len(pts):
            raise DomainError(f"orbit points sigma^j x, |j| <= {N}, are not distinct")
        vals = [fill] * sys.size
        if extent is not None:
            vals = [zero] * sys.size
            for j in range(-extent, extent + 1):
                vals[sys.step(x, j)] = fill
        for j in range(-N, N + 1):
            vals[sys.step(x, j)] = one if j == 0 else zero
        return DenseTable(as_exact_array(vals) if exact else np.array(vals, dtype=np.complex128))
    raise DomainError("bump functions are built on finite permutation or orbit-model systems")
