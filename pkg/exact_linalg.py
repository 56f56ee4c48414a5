#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Exact scalar arithmetic and the tensor / linear-algebra substrate.

Matrices are ``numpy`` object arrays holding exact Python values:
``fractions.Fraction`` over ℚ and ``int`` residues in ``[0, p)`` over 𝔽_p.
No floating point is used anywhere.

Conventions used bit-exactly by every other module and by the file format:

* tensor bases are row-major: e_i ⊗ e_j of V ⊗ W has index ``i*dim(W) + j``;
* ``perm_action(sigma)`` is active: the factor in slot ``j`` moves to slot
  ``sigma[j]`` (0-based).
"""

from __future__ import annotations

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy.combinatorics import Permutation

from engine_errors import FieldMismatch, NonInvertibleFactorial, SearchBudgetExceeded, ShapeMismatch

__all__ = [
    "MAX_PRIME",
    "FieldSpec",
    "Scalar",
    "Space",
    "Signature",
    "LinearMap",
    "AffineSolution",
    "as_signature",
    "identity",
    "zero_map",
    "kron",
    "kron_all",
    "flip",
    "perm_action",
    "alt",
    "row_reduce",
    "array_rank",
    "array_kernel",
    "kernel_basis",
    "rank",
    "solve",
    "affine_solution_space",
    "solve_affine_system",
    "all_linear_maps",
]

logger = logging.getLogger(__name__)

MAX_PRIME = 2**31 - 1

_TO_FRACTION = np.frompyfunc(Fraction, 1, 1)

RawValue = Union[int, Fraction]


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: ℚ (characteristic 0) or a prime field 𝔽_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p < 0 or (p != 0 and (p > MAX_PRIME or not sympy.isprime(p))):
            raise ValueError(f"characteristic must be 0 or a prime ≤ {MAX_PRIME}, got {p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(int(p))

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    @property
    def kind(self) -> str:
        return "prime" if self.is_prime_field else "rationals"

    @property
    def size(self) -> Optional[int]:
        """Number of elements, ``None`` for ℚ."""
        return self.characteristic or None

    def describe(self) -> str:
        return f"GF({self.characteristic})" if self.is_prime_field else "QQ"

    # -- raw values -----------------------------------------------------

    def coerce(self, value: object) -> RawValue:
        """Bring ``value`` (int, Fraction, str or Scalar) into canonical form."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"{value.field.describe()} scalar used over {self.describe()}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        frac = Fraction(value)  # type: ignore[arg-type]
        p = self.characteristic
        if p == 0:
            return frac
        den = frac.denominator % p
        if den == 0:
            raise ZeroDivisionError(f"denominator {frac.denominator} vanishes modulo {p}")
        return (frac.numerator % p) * pow(den, -1, p) % p

    def zero(self) -> RawValue:
        return 0 if self.is_prime_field else Fraction(0)

    def one(self) -> RawValue:
        return 1 if self.is_prime_field else Fraction(1)

    def inv(self, value: RawValue) -> RawValue:
        if value == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime_field:
            return pow(int(value), -1, self.characteristic)
        return 1 / Fraction(value)

    def neg(self, value: RawValue) -> RawValue:
        return (-value) % self.characteristic if self.is_prime_field else -value

    def is_canonical(self, value: object) -> bool:
        if self.is_prime_field:
            return type(value) is int and 0 <= value < self.characteristic
        return isinstance(value, Fraction)

    def elements(self) -> range:
        if not self.is_prime_field:
            raise ValueError("ℚ cannot be enumerated")
        return range(self.characteristic)

    def format(self, value: RawValue) -> str:
        if self.is_prime_field:
            return str(int(value))
        frac = Fraction(value)
        return str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"

    def parse(self, text: str) -> RawValue:
        try:
            frac = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a scalar: {text!r}") from exc
        return self.coerce(frac)

    # -- arrays ---------------------------------------------------------

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        """Canonical form of every entry of an object array."""
        arr = np.asarray(arr, dtype=object)
        if arr.size == 0:
            return np.empty(arr.shape, dtype=object)
        if self.is_prime_field:
            return np.asarray(arr % self.characteristic, dtype=object)
        return np.asarray(_TO_FRACTION(arr), dtype=object)

    def array(self, values: object) -> np.ndarray:
        """Object array of canonical entries from nested values of any scalar type."""
        arr = np.array(values, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for index, value in np.ndenumerate(arr):
            out[index] = self.coerce(value)
        return out

    def zeros(self, shape: Union[int, Tuple[int, ...]]) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(self.zero())
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out


@dataclass(frozen=True)
class Scalar:
    """An exact field element; scalars over different fields never combine."""

    value: RawValue
    field: FieldSpec

    @classmethod
    def of(cls, value: object, field: FieldSpec) -> "Scalar":
        return cls(field.coerce(value), field)

    def _other(self, other: object) -> RawValue:
        if isinstance(other, Scalar) and other.field != self.field:
            raise FieldMismatch(f"{self.field.describe()} and {other.field.describe()} scalars combined")
        return self.field.coerce(other)

    def __add__(self, other: object) -> "Scalar":
        return Scalar.of(self.value + self._other(other), self.field)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Scalar":
        return Scalar.of(self.value - self._other(other), self.field)

    def __rsub__(self, other: object) -> "Scalar":
        return Scalar.of(self._other(other) - self.value, self.field)

    def __mul__(self, other: object) -> "Scalar":
        return Scalar.of(self.value * self._other(other), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Scalar":
        return Scalar.of(self.value * self.field.inv(self._other(other)), self.field)

    def __neg__(self) -> "Scalar":
        return Scalar.of(-self.value, self.field)

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return Scalar.of(self.field.inv(self.value), self.field) ** (-exponent)
        result = self.field.one()
        for _ in range(exponent):
            result = self.field.coerce(result * self.value)
        return Scalar(result, self.field)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return False

    def __hash__(self) -> int:
        return hash((self.value, self.field))

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return self.field.format(self.value)


@dataclass(frozen=True)
class Space:
    """Named basis of a finite-dimensional vector space."""

    labels: Tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"basis labels must be distinct: {self.labels}")

    @classmethod
    def standard(cls, dim: int, prefix: str = "e") -> "Space":
        return cls(tuple(f"{prefix}{i}" for i in range(dim)))

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Signature:
    """Ordered tensor factors; the empty signature is the ground field."""

    factors: Tuple[Space, ...] = ()

    @classmethod
    def of(cls, *spaces: Space) -> "Signature":
        return cls(tuple(spaces))

    @classmethod
    def power(cls, space: Space, n: int) -> "Signature":
        return cls((space,) * n)

    @property
    def dim(self) -> int:
        return math.prod(space.dim for space in self.factors)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(space.dim for space in self.factors)

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.factors + other.factors)

    def __len__(self) -> int:
        return len(self.factors)


def as_signature(obj: Union[Space, Signature]) -> Signature:
    return obj if isinstance(obj, Signature) else Signature.of(obj)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Exact matrix between tensor signatures (codomain rows × domain columns)."""

    domain: Signature
    codomain: Signature
    matrix: np.ndarray
    field: FieldSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", as_signature(self.domain))
        object.__setattr__(self, "codomain", as_signature(self.codomain))
        arr = np.asarray(self.matrix, dtype=object)
        expected = (self.codomain.dim, self.domain.dim)
        if arr.shape != expected:
            raise ShapeMismatch(f"matrix shape {arr.shape} does not match signatures {expected}")
        arr = self.field.normalize(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def from_rows(
        cls,
        domain: Union[Space, Signature],
        codomain: Union[Space, Signature],
        rows: Sequence[Sequence[object]],
        field: FieldSpec,
    ) -> "LinearMap":
        dom, cod = as_signature(domain), as_signature(codomain)
        arr = field.array(rows) if len(rows) else field.zeros((cod.dim, dom.dim))
        return cls(dom, cod, arr.reshape(cod.dim, dom.dim), field)

    @classmethod
    def from_vector(
        cls,
        domain: Union[Space, Signature],
        codomain: Union[Space, Signature],
        vector: np.ndarray,
        field: FieldSpec,
    ) -> "LinearMap":
        """Inverse of :meth:`vec` (row-major flattening)."""
        dom, cod = as_signature(domain), as_signature(codomain)
        return cls(dom, cod, np.asarray(vector, dtype=object).reshape(cod.dim, dom.dim), field)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape  # type: ignore[return-value]

    def _check(self, other: "LinearMap") -> None:
        if other.field != self.field:
            raise FieldMismatch(f"{self.field.describe()} map combined with {other.field.describe()} map")

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition ``self ∘ other``."""
        self._check(other)
        if self.domain.dim != other.codomain.dim:
            raise ShapeMismatch(f"cannot compose {self.shape} after {other.shape}")
        if self.domain.dim == 0:
            product = self.field.zeros((self.codomain.dim, other.domain.dim))
        else:
            product = self.matrix @ other.matrix
        return LinearMap(other.domain, self.codomain, product, self.field)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return LinearMap(self.domain, self.codomain, self.matrix + other.matrix, self.field)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return LinearMap(self.domain, self.codomain, self.matrix - other.matrix, self.field)

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.domain, self.codomain, -self.matrix, self.field)

    def scale(self, factor: object) -> "LinearMap":
        c = self.field.coerce(factor)
        return LinearMap(self.domain, self.codomain, self.matrix * c, self.field)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.all(self.matrix == other.matrix))
        )

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return all(value == 0 for value in self.matrix.flat)

    def transpose(self) -> "LinearMap":
        return LinearMap(self.codomain, self.domain, self.matrix.T, self.field)

    def relabel(self, domain: Union[Space, Signature], codomain: Union[Space, Signature]) -> "LinearMap":
        """Same matrix viewed between other signatures of equal total dimension."""
        return LinearMap(as_signature(domain), as_signature(codomain), self.matrix, self.field)

    def vec(self) -> np.ndarray:
        return self.matrix.reshape(-1)

    def column(self, j: int) -> np.ndarray:
        return self.matrix[:, j]

    def apply(self, vector: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector, dtype=object)
        if self.domain.dim == 0:
            return self.field.zeros(self.codomain.dim)
        return self.field.normalize(self.matrix @ vector)

    def inverse(self) -> Optional["LinearMap"]:
        """Two-sided inverse, or ``None`` when the map is singular."""
        n, m = self.shape
        if n != m:
            return None
        reduced, pivots = row_reduce(np.hstack([self.matrix, self.field.eye(n)]), self.field)
        if pivots != list(range(n)):
            return None
        return LinearMap(self.codomain, self.domain, reduced[:, n:], self.field)

    def is_invertible(self) -> bool:
        return self.shape[0] == self.shape[1] and array_rank(self.matrix, self.field) == self.shape[0]

    def format_rows(self) -> List[List[str]]:
        return [[self.field.format(value) for value in row] for row in self.matrix]


def identity(space: Union[Space, Signature], field: FieldSpec) -> LinearMap:
    sig = as_signature(space)
    return LinearMap(sig, sig, field.eye(sig.dim), field)


def zero_map(domain: Union[Space, Signature], codomain: Union[Space, Signature], field: FieldSpec) -> LinearMap:
    dom, cod = as_signature(domain), as_signature(codomain)
    return LinearMap(dom, cod, field.zeros((cod.dim, dom.dim)), field)


def kron(a: LinearMap, b: LinearMap) -> LinearMap:
    """a ⊗ b under the row-major index convention."""
    if a.field != b.field:
        raise FieldMismatch(f"kron of {a.field.describe()} and {b.field.describe()} maps")
    domain, codomain = a.domain + b.domain, a.codomain + b.codomain
    if 0 in a.shape or 0 in b.shape:
        return zero_map(domain, codomain, a.field)
    return LinearMap(domain, codomain, np.kron(a.matrix, b.matrix), a.field)


def kron_all(maps: Sequence[LinearMap], field: FieldSpec) -> LinearMap:
    """Left-to-right tensor product; the empty product is the identity of k."""
    result = identity(Signature(), field)
    for m in maps:
        result = kron(result, m)
    return result


def flip(v: Space, w: Space, field: FieldSpec) -> LinearMap:
    """τ: V⊗W → W⊗V, e_i⊗e_j ↦ e_j⊗e_i."""
    matrix = field.zeros((w.dim * v.dim, v.dim * w.dim))
    for i in range(v.dim):
        for j in range(w.dim):
            matrix[j * v.dim + i, i * w.dim + j] = field.one()
    return LinearMap(Signature.of(v, w), Signature.of(w, v), matrix, field)


@functools.lru_cache(maxsize=256)
def _slot_targets(sigma: Tuple[int, ...], dim: int) -> np.ndarray:
    """Flat target index of every source basis tensor under the active action."""
    n = len(sigma)
    shape = (dim,) * n
    size = dim**n
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    sources = np.indices(shape).reshape(n, -1)
    targets = np.empty_like(sources)
    targets[list(sigma)] = sources
    return np.ravel_multi_index(tuple(targets), shape)


def _check_permutation(sigma: Sequence[int]) -> Tuple[int, ...]:
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(len(sigma))):
        raise ValueError(f"not a permutation of 0..{len(sigma) - 1}: {sigma}")
    return sigma


def perm_action(sigma: Sequence[int], c: Space, field: FieldSpec) -> LinearMap:
    """ψ_σ on ⊗ⁿC: the factor in slot j moves to slot σ(j)."""
    sigma = _check_permutation(sigma)
    sig = Signature.power(c, len(sigma))
    matrix = field.zeros((sig.dim, sig.dim))
    targets = _slot_targets(sigma, c.dim)
    matrix[targets, np.arange(sig.dim)] = field.one()
    return LinearMap(sig, sig, matrix, field)


@functools.lru_cache(maxsize=64)
def alt(n: int, c: Space, field: FieldSpec) -> LinearMap:
    """The antisymmetrizer (1/n!) Σ sgn(σ) ψ_σ on ⊗ⁿC."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    if field.is_prime_field and field.characteristic <= n:
        raise NonInvertibleFactorial(n, field.characteristic)
    sig = Signature.power(c, n)
    counts = np.zeros((sig.dim, sig.dim), dtype=np.int64)
    columns = np.arange(sig.dim)
    for sigma in itertools.permutations(range(n)):
        sign = Permutation(list(sigma)).signature() if n > 1 else 1
        np.add.at(counts, (_slot_targets(sigma, c.dim), columns), sign)
    weight = field.coerce(Fraction(1, math.factorial(n)))
    logger.debug("built Alt(%d) on a %d-dimensional space", n, c.dim)
    return LinearMap(sig, sig, counts.astype(object) * weight, field)


# -- elimination -----------------------------------------------------------


def row_reduce(matrix: np.ndarray, field: FieldSpec) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot rule: columns left to right, first nonzero entry top to bottom.
    """
    a = np.array(matrix, dtype=object, copy=True)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {a.shape}")
    n_rows, n_cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        hit = next((i for i in range(r, n_rows) if a[i, c] != 0), None)
        if hit is None:
            continue
        if hit != r:
            a[[r, hit]] = a[[hit, r]]
        a[r] = field.normalize(a[r] * field.inv(a[r, c]))
        for i in range(n_rows):
            if i != r and a[i, c] != 0:
                a[i] = field.normalize(a[i] - a[i, c] * a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def array_rank(matrix: np.ndarray, field: FieldSpec) -> int:
    if 0 in np.shape(matrix):
        return 0
    return len(row_reduce(matrix, field)[1])


def array_kernel(matrix: np.ndarray, field: FieldSpec) -> List[np.ndarray]:
    """Basis of the null space, one vector per free column, in echelon order."""
    matrix = np.asarray(matrix, dtype=object)
    n_cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        reduced, pivots = matrix, []
    else:
        reduced, pivots = row_reduce(matrix, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = field.zeros(n_cols)
        v[free] = field.one()
        for row, pc in enumerate(pivots):
            v[pc] = field.neg(reduced[row, free])
        basis.append(v)
    return basis


def kernel_basis(m: LinearMap) -> List[np.ndarray]:
    return array_kernel(m.matrix, m.field)


def rank(m: LinearMap) -> int:
    return array_rank(m.matrix, m.field)


def solve(m: LinearMap, rhs: np.ndarray) -> Optional[np.ndarray]:
    """One solution x of m·x = rhs (free variables set to 0), or ``None``."""
    field = m.field
    rhs = field.normalize(np.asarray(rhs, dtype=object).reshape(-1))
    if rhs.shape[0] != m.codomain.dim:
        raise ShapeMismatch(f"right-hand side has length {rhs.shape[0]}, expected {m.codomain.dim}")
    n_cols = m.domain.dim
    if m.codomain.dim == 0:
        return field.zeros(n_cols)
    reduced, pivots = row_reduce(np.hstack([m.matrix, rhs.reshape(-1, 1)]), field)
    if pivots and pivots[-1] == n_cols:
        return None
    x = field.zeros(n_cols)
    for row, pc in enumerate(pivots):
        x[pc] = reduced[row, n_cols]
    return x


AffineConstraint = Callable[[LinearMap], LinearMap]


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(directions)`` of an affine system in X."""

    particular: LinearMap
    directions: Tuple[LinearMap, ...]

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def points(self) -> Iterator[LinearMap]:
        """Every point of the set; prime fields only."""
        field = self.particular.field
        for coefficients in itertools.product(field.elements(), repeat=len(self.directions)):
            point = self.particular
            for coefficient, direction in zip(coefficients, self.directions):
                if coefficient:
                    point = point + direction.scale(coefficient)
            yield point


def affine_solution_space(
    domain: Union[Space, Signature],
    codomain: Union[Space, Signature],
    field: FieldSpec,
    constraints: Sequence[AffineConstraint],
) -> Optional[AffineSolution]:
    """Solve ``F(X) = 0`` for every constraint F, each affine in the unknown map X.

    X is treated as the flat vector of its entries; each constraint is probed at
    0 and at the elementary maps to recover its linear part.
    """
    dom, cod = as_signature(domain), as_signature(codomain)
    n_unknowns = dom.dim * cod.dim
    blocks, constants = [], []
    zero_x = zero_map(dom, cod, field)
    for constraint in constraints:
        base = constraint(zero_x).vec()
        columns = []
        for k in range(n_unknowns):
            unit = field.zeros(n_unknowns)
            unit[k] = field.one()
            probe = constraint(LinearMap.from_vector(dom, cod, unit, field)).vec()
            columns.append(field.normalize(probe - base))
        blocks.append(np.column_stack(columns) if columns else field.zeros((base.shape[0], 0)))
        constants.append(field.normalize(-base))
    if not blocks:
        system = field.zeros((0, n_unknowns))
        rhs = field.zeros(0)
    else:
        system = np.vstack(blocks)
        rhs = np.concatenate(constants)
    sig_k = Signature.of(Space.standard(n_unknowns, "x"))
    operator = LinearMap(sig_k, Signature.of(Space.standard(system.shape[0], "r")), system, field)
    particular = solve(operator, rhs)
    if particular is None:
        return None
    directions = tuple(LinearMap.from_vector(dom, cod, v, field) for v in array_kernel(system, field))
    return AffineSolution(LinearMap.from_vector(dom, cod, particular, field), directions)


def solve_affine_system(
    domain: Union[Space, Signature],
    codomain: Union[Space, Signature],
    field: FieldSpec,
    constraints: Sequence[AffineConstraint],
) -> Optional[LinearMap]:
    """Any one X: domain → codomain with every constraint vanishing, or ``None``."""
    solution = affine_solution_space(domain, codomain, field, constraints)
    return None if solution is None else solution.particular


def all_linear_maps(
    domain: Union[Space, Signature],
    codomain: Union[Space, Signature],
    field: FieldSpec,
    budget: int,
) -> Iterator[LinearMap]:
    """Every map domain → codomain over 𝔽_p, lexicographic in the flattened entries."""
    dom, cod = as_signature(domain), as_signature(codomain)
    n_entries = dom.dim * cod.dim
    count = len(field.elements()) ** n_entries
    if count > budget:
        raise SearchBudgetExceeded(count, budget, "linear map enumeration")
    for entries in itertools.product(field.elements(), repeat=n_entries):
        yield LinearMap(dom, cod, np.array(entries, dtype=object).reshape(cod.dim, dom.dim), field)
