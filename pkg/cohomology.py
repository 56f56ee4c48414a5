#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Cochain complexes of a Rota-Baxter Lie comodule and their cohomology.

Four complexes are available:

* ``plain``:  Cⁿ(M, C) = Hom(M, ∧ⁿC) with ∂ⁿ;
* ``tilde``:  the same spaces with ∂̃ⁿ built from Δ̃ and ρ̃;
* ``rb``:     Cⁿ_RB = Cⁿ ⊕ C̃ⁿ⁻¹ with ∂_RB(f, g) = (∂f, −∂̃g − ½δf);
* ``rb-reduced``: the subcomplex with C̄¹ = C¹ ⊕ 0.

∧ⁿC is the image of Alt inside ⊗ⁿC.  Cochain values are stored as full
⊗ⁿC-valued maps; dimension counts use a basis of the alternating subspace.
Flat coordinates follow ``LinearMap.vec`` (row-major), with the second
component of an RB cochain appended after the first.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from engine_errors import CharacteristicGuard, ShapeMismatch
from exact_linalg import (
    FieldSpec,
    LinearMap,
    Signature,
    alt,
    array_kernel,
    array_rank,
    affine_solution_space,
    flip,
    identity,
    kron,
    kron_all,
    row_reduce,
    zero_map,
)
from rb_coalgebra import rb_pair_operator
from rb_comodule import RBComodule

__all__ = [
    "ComplexKind",
    "Cochain",
    "RBCochain",
    "CohomologyReport",
    "ExactnessNode",
    "SequenceReport",
    "guard_characteristic",
    "insert_delta",
    "r_placements",
    "coboundary_plain",
    "coboundary_tilde",
    "chain_map_delta",
    "coboundary_rb",
    "alternating_basis",
    "cochain_basis",
    "rb_cochain_basis",
    "cohomology_dims",
    "reduced_z1_membership",
    "reduced_z1_basis",
    "reduced_coboundary_pair",
    "reduced_z2_membership",
    "long_exact_sequence_check",
]

logger = logging.getLogger(__name__)


class ComplexKind(enum.Enum):
    PLAIN = "plain"
    TILDE = "tilde"
    RB = "rb"
    RB_REDUCED = "rb-reduced"


@dataclass(frozen=True, eq=False)
class Cochain:
    """An n-cochain M → ⊗ⁿC (M → k for n = 0)."""

    degree: int
    map: LinearMap

    def __post_init__(self) -> None:
        if len(self.map.codomain) != self.degree:
            raise ShapeMismatch(f"degree {self.degree} cochain has codomain of {len(self.map.codomain)} factors")

    @classmethod
    def of(cls, lm: LinearMap) -> "Cochain":
        return cls(len(lm.codomain), lm)

    @property
    def field(self) -> FieldSpec:
        return self.map.field

    @property
    def alternating(self) -> bool:
        if self.degree < 2:
            return True
        return alt(self.degree, self.map.codomain.factors[0], self.field) @ self.map == self.map

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and self.map == other.map

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class RBCochain:
    """(first, second) ∈ Cⁿ ⊕ C̃ⁿ⁻¹; ``second`` is absent in degree 0."""

    degree: int
    first: Cochain
    second: Optional[Cochain] = None

    def __post_init__(self) -> None:
        if self.first.degree != self.degree:
            raise ShapeMismatch("first component has the wrong degree")
        if self.degree == 0 and self.second is not None:
            raise ShapeMismatch("degree 0 RB cochains have no second component")
        if self.degree > 0 and (self.second is None or self.second.degree != self.degree - 1):
            raise ShapeMismatch("second component must have degree n−1")

    def vec(self) -> np.ndarray:
        parts = [self.first.map.vec()]
        if self.second is not None:
            parts.append(self.second.map.vec())
        return np.concatenate(parts)

    def is_zero(self) -> bool:
        return self.first.map.is_zero() and (self.second is None or self.second.map.is_zero())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RBCochain):
            return NotImplemented
        return self.degree == other.degree and bool(np.all(self.vec() == other.vec()))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class CohomologyReport:
    n: int
    complex: str
    dim_cochains: int
    dim_z: int
    dim_b: int

    @property
    def dim_h(self) -> int:
        return self.dim_z - self.dim_b

    def to_dict(self) -> dict:
        return {
            "complex": self.complex,
            "degree": self.n,
            "dim_B": self.dim_b,
            "dim_C": self.dim_cochains,
            "dim_H": self.dim_h,
            "dim_Z": self.dim_z,
        }


def guard_characteristic(field_spec: FieldSpec, n: int) -> None:
    """Degree-n work needs characteristic 0 or > n+1, and never 2."""
    p = field_spec.characteristic
    if p != 0 and (p <= n + 1 or p == 2):
        raise CharacteristicGuard(f"degree {n} cohomology needs characteristic 0 or > {max(n + 1, 2)}, got {p}")


def _half(field_spec: FieldSpec) -> object:
    if field_spec.characteristic == 2:
        raise CharacteristicGuard("½ does not exist in characteristic 2")
    return field_spec.coerce(Fraction(1, 2))


def _as_map(h: Union[Cochain, LinearMap]) -> LinearMap:
    return h.map if isinstance(h, Cochain) else h


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _cochain_codomain(com: RBComodule, n: int) -> Signature:
    return Signature.power(com.base.space, n)


def insert_delta(k: int, n: int, delta: LinearMap) -> LinearMap:
    """Δ applied to factor k (1-based) of ⊗ⁿC, its output occupying slots k, k+1."""
    if not 1 <= k <= n:
        raise ValueError(f"insertion position {k} outside 1..{n}")
    c = delta.domain.factors[0]
    i_c = identity(c, delta.field)
    return kron_all([i_c] * (k - 1) + [delta] + [i_c] * (n - k), delta.field)


def r_placements(i: int, n: int, r: LinearMap) -> LinearMap:
    """Sum over all ways of placing exactly i copies of R among n factors."""
    c = r.domain.factors[0]
    i_c = identity(c, r.field)
    total = zero_map(Signature.power(c, n), Signature.power(c, n), r.field)
    for chosen in itertools.combinations(range(n), i):
        total = total + kron_all([r if slot in chosen else i_c for slot in range(n)], r.field)
    return total


def _plain(n: int, h: LinearMap, delta: LinearMap, coaction_terms: LinearMap) -> LinearMap:
    """½ Σ_k (−1)^k Alt(Δ at k) h + (−1)^{n−1} Alt(coaction_terms)."""
    field_spec = h.field
    c = delta.domain.factors[0]
    total = zero_map(h.domain, Signature.power(c, n + 1), field_spec)
    for k in range(1, n + 1):
        total = total + (insert_delta(k, n, delta) @ h).scale(_sign(k))
    projector = alt(n + 1, c, field_spec)
    return (projector @ total).scale(_half(field_spec)) + (projector @ coaction_terms).scale(_sign(n - 1))


def coboundary_plain(n: int, h: Union[Cochain, LinearMap], com: RBComodule) -> Cochain:
    """∂ⁿ; in degree 0, ∂⁰(h) = (h⊗I)ρ."""
    hm = _as_map(h)
    i_c = identity(com.base.space, com.field)
    through_rho = kron(hm, i_c) @ com.rho
    if n == 0:
        return Cochain(1, through_rho)
    return Cochain(n + 1, _plain(n, hm, com.base.delta, through_rho))


def coboundary_tilde(n: int, h: Union[Cochain, LinearMap], com: RBComodule) -> Cochain:
    """∂̃ⁿ, computed from Δ̃ = (I⊗R+R⊗I+λ)Δ and the (h⊗R)ρ, (h⊗I)ρR_M terms."""
    hm = _as_map(h)
    base = com.base
    i_c = identity(base.space, com.field)
    coaction = kron(hm, base.r) @ com.rho - kron(hm, i_c) @ com.rho @ com.r_m
    if n == 0:
        return Cochain(1, coaction)
    delta_tilde = rb_pair_operator(base.r, base.r, base.lam) @ base.delta
    return Cochain(n + 1, _plain(n, hm, delta_tilde, coaction))


def chain_map_delta(n: int, h: Union[Cochain, LinearMap], com: RBComodule) -> Cochain:
    """δⁿ(h) = R^{⊗n} h − Σ_{i<n} λ^{n−i−1} R^{(i)_n} h R_M; δ⁰ = id."""
    hm = _as_map(h)
    if n == 0:
        return Cochain(0, hm)
    base = com.base
    result = r_placements(n, n, base.r) @ hm
    for i in range(n):
        weight = base.lam ** (n - i - 1)
        result = result - (r_placements(i, n, base.r) @ hm @ com.r_m).scale(weight)
    return Cochain(n, result)


def coboundary_rb(n: int, x: RBCochain, com: RBComodule) -> RBCochain:
    """∂⁰_RB(m*) = (∂⁰m*, −½m*); ∂ⁿ_RB(f, g) = (∂ⁿf, −∂̃ⁿ⁻¹g − ½δⁿf)."""
    half = _half(com.field)
    first = coboundary_plain(n, x.first, com)
    if n == 0:
        return RBCochain(1, first, Cochain(0, x.first.map.scale(com.field.neg(half))))
    assert x.second is not None
    second = -coboundary_tilde(n - 1, x.second, com).map - chain_map_delta(n, x.first, com).map.scale(half)
    return RBCochain(n + 1, first, Cochain(n, second))


# -- bases and matrices ----------------------------------------------------


def alternating_basis(n: int, com: RBComodule) -> List[np.ndarray]:
    """Basis of ∧ⁿC ⊂ ⊗ⁿC: the pivot columns of Alt."""
    projector = alt(n, com.base.space, com.field)
    if projector.shape[0] == 0:
        return []
    _, pivots = row_reduce(projector.matrix, com.field)
    return [projector.matrix[:, j] for j in pivots]


def cochain_basis(n: int, com: RBComodule) -> List[LinearMap]:
    """Basis of Hom(M, ∧ⁿC), wedge-major."""
    field_spec = com.field
    codomain = _cochain_codomain(com, n)
    basis = []
    for wedge in alternating_basis(n, com):
        for j in range(com.dim):
            matrix = field_spec.zeros((codomain.dim, com.dim))
            matrix[:, j] = wedge
            basis.append(LinearMap(Signature.of(com.space), codomain, matrix, field_spec))
    return basis


def rb_cochain_basis(n: int, com: RBComodule, reduced: bool = False) -> List[RBCochain]:
    field_spec = com.field
    if n == 0:
        return [RBCochain(0, Cochain(0, b)) for b in cochain_basis(0, com)]
    zero_first = Cochain(n, zero_map(com.space, _cochain_codomain(com, n), field_spec))
    zero_second = Cochain(n - 1, zero_map(com.space, _cochain_codomain(com, n - 1), field_spec))
    basis = [RBCochain(n, Cochain(n, b), zero_second) for b in cochain_basis(n, com)]
    if not (reduced and n == 1):
        basis += [RBCochain(n, zero_first, Cochain(n - 1, b)) for b in cochain_basis(n - 1, com)]
    return basis


def _columns(vectors: Sequence[np.ndarray], length: int, field_spec: FieldSpec) -> np.ndarray:
    if not vectors:
        return field_spec.zeros((length, 0))
    return np.column_stack(list(vectors))


def _ambient(kind: ComplexKind, n: int, com: RBComodule) -> int:
    """Length of flat coordinates of degree-n cochains."""
    size = com.dim * com.base.dim**n
    if kind in (ComplexKind.RB, ComplexKind.RB_REDUCED) and n > 0:
        size += com.dim * com.base.dim ** (n - 1)
    return size


@dataclass
class _Level:
    """One degree of one complex: basis, differential and flat coordinates."""

    kind: ComplexKind
    n: int
    com: RBComodule
    basis: list = field(init=False)

    def __post_init__(self) -> None:
        if self.kind in (ComplexKind.PLAIN, ComplexKind.TILDE):
            self.basis = cochain_basis(self.n, self.com)
        else:
            self.basis = rb_cochain_basis(self.n, self.com, reduced=self.kind is ComplexKind.RB_REDUCED)

    @property
    def ambient(self) -> int:
        return _ambient(self.kind, self.n, self.com)

    @staticmethod
    def vec(x: object) -> np.ndarray:
        return x.vec() if isinstance(x, RBCochain) else _as_map(x).vec()  # type: ignore[union-attr]

    def differential(self, x: object) -> object:
        if self.kind is ComplexKind.PLAIN:
            return coboundary_plain(self.n, x, self.com)  # type: ignore[arg-type]
        if self.kind is ComplexKind.TILDE:
            return coboundary_tilde(self.n, x, self.com)  # type: ignore[arg-type]
        return coboundary_rb(self.n, x, self.com)  # type: ignore[arg-type]

    def basis_matrix(self) -> np.ndarray:
        return _columns([self.vec(b) for b in self.basis], self.ambient, self.com.field)

    def differential_matrix(self) -> np.ndarray:
        images = [self.vec(self.differential(b)) for b in self.basis]
        return _columns(images, _ambient(self.kind, self.n + 1, self.com), self.com.field)

    def cocycle_vectors(self) -> List[np.ndarray]:
        """Ambient coordinates of a basis of Zⁿ."""
        field_spec = self.com.field
        basis_matrix = self.basis_matrix()
        kernel = array_kernel(self.differential_matrix(), field_spec)
        return [field_spec.normalize(basis_matrix @ v) for v in kernel]

    def coboundary_vectors(self) -> List[np.ndarray]:
        """Ambient coordinates spanning Bⁿ."""
        field_spec = self.com.field
        if self.n == 0:
            return []
        if self.kind is ComplexKind.RB_REDUCED and self.n == 1:
            return _reduced_b1_vectors(self.com)
        below = _Level(self.kind, self.n - 1, self.com)
        matrix = below.differential_matrix()
        return [matrix[:, j] for j in range(matrix.shape[1])] if matrix.shape[1] else []


def _reduced_b1_vectors(com: RBComodule) -> List[np.ndarray]:
    """∂⁰_RB(M*) ∩ C̄¹: images of the m* whose −½m* component vanishes."""
    field_spec = com.field
    level0 = _Level(ComplexKind.RB, 0, com)
    full = level0.differential_matrix()
    first_len = com.dim * com.base.dim
    kernel = array_kernel(full[first_len:, :], field_spec)
    return [field_spec.normalize(full @ v) for v in kernel]


def cohomology_dims(n: int, kind: Union[ComplexKind, str], com: RBComodule) -> CohomologyReport:
    """dim Zⁿ, Bⁿ and Hⁿ of the chosen complex."""
    kind = ComplexKind(kind)
    guard_characteristic(com.field, n)
    level = _Level(kind, n, com)
    field_spec = com.field
    logger.debug("degree %d %s complex: %d cochains", n, kind.value, len(level.basis))
    dim_z = len(level.basis) - array_rank(level.differential_matrix(), field_spec)
    coboundaries = level.coboundary_vectors()
    dim_b = array_rank(_columns(coboundaries, level.ambient, field_spec), field_spec)
    report = CohomologyReport(n, kind.value, len(level.basis), dim_z, dim_b)
    logger.info("H^%d (%s): dim Z=%d dim B=%d dim H=%d", n, kind.value, dim_z, dim_b, report.dim_h)
    return report


# -- reduced complex in explicit form --------------------------------------


def _tau_rho(com: RBComodule) -> LinearMap:
    return flip(com.space, com.base.space, com.field) @ com.rho


def reduced_z1_membership(f: LinearMap, com: RBComodule) -> bool:
    """(f⊗I)ρ − (I⊗f)τρ = Δ_C f and f R_M = R_C f."""
    i_c = identity(com.base.space, com.field)
    lhs = kron(f, i_c) @ com.rho - kron(i_c, f) @ _tau_rho(com)
    return lhs == com.base.delta @ f and f @ com.r_m == com.base.r @ f


def reduced_z1_basis(com: RBComodule) -> List[LinearMap]:
    """Basis of Z̄¹_RB, solved from the two linear conditions."""
    i_c = identity(com.base.space, com.field)
    tau_rho = _tau_rho(com)

    def coaction_condition(f: LinearMap) -> LinearMap:
        return kron(f, i_c) @ com.rho - kron(i_c, f) @ tau_rho - com.base.delta @ f

    def operator_condition(f: LinearMap) -> LinearMap:
        return f @ com.r_m - com.base.r @ f

    solution = affine_solution_space(
        com.space, com.base.space, com.field, [coaction_condition, operator_condition]
    )
    return [] if solution is None else list(solution.directions)


def reduced_coboundary_pair(f: LinearMap, com: RBComodule) -> Tuple[LinearMap, LinearMap]:
    """(μ, ν) = (½(f⊗I)ρ − ½(I⊗f)τρ − ½Δf, −½R_C f + ½f R_M)."""
    half = _half(com.field)
    i_c = identity(com.base.space, com.field)
    mu = (kron(f, i_c) @ com.rho - kron(i_c, f) @ _tau_rho(com) - com.base.delta @ f).scale(half)
    nu = (f @ com.r_m - com.base.r @ f).scale(half)
    return mu, nu


def reduced_z2_membership(f: Union[Cochain, LinearMap], g: Union[Cochain, LinearMap], com: RBComodule) -> bool:
    """Both expanded second-cocycle conditions of the reduced complex vanish."""
    fm, gm = _as_map(f), _as_map(g)
    base = com.base
    field_spec = com.field
    c = base.space
    i_c = identity(c, field_spec)
    swap_last = kron(i_c, flip(c, c, field_spec))
    tau = flip(c, c, field_spec)
    delta_first = kron(base.delta, i_c) @ fm
    f_rho = kron(fm, i_c) @ com.rho
    coassociator = (
        kron(i_c, base.delta) @ fm
        + swap_last @ delta_first
        - delta_first
        + swap_last @ f_rho
        - kron(i_c, fm) @ _tau_rho(com)
        - f_rho
    )
    if not coassociator.is_zero():
        return False
    delta_tilde = rb_pair_operator(base.r, base.r, base.lam) @ base.delta
    g_r = kron(gm, base.r) @ com.rho
    g_i = kron(gm, i_c) @ com.rho @ com.r_m
    operator_terms = (
        delta_tilde @ gm
        - g_r
        + tau @ g_r
        + g_i
        - tau @ g_i
        - kron(base.r, base.r) @ fm
        + rb_pair_operator(base.r, base.r, base.lam) @ fm @ com.r_m
    )
    return operator_terms.is_zero()


# -- long exact sequence ---------------------------------------------------


@dataclass(frozen=True)
class ExactnessNode:
    label: str
    dim_image: int
    dim_kernel: int
    contained: bool

    @property
    def exact(self) -> bool:
        return self.contained and self.dim_image == self.dim_kernel

    def to_dict(self) -> dict:
        return {
            "dim_image": self.dim_image,
            "dim_kernel": self.dim_kernel,
            "exact": self.exact,
            "node": self.label,
        }


@dataclass(frozen=True)
class SequenceReport:
    nodes: Tuple[ExactnessNode, ...]

    @property
    def exact(self) -> bool:
        return all(node.exact for node in self.nodes)

    @property
    def first_failure(self) -> Optional[ExactnessNode]:
        return next((node for node in self.nodes if not node.exact), None)

    def to_dict(self) -> dict:
        return {"exact": self.exact, "nodes": [node.to_dict() for node in self.nodes]}


def _exact_at(
    label: str,
    incoming: List[np.ndarray],
    cocycles: List[np.ndarray],
    coboundaries: List[np.ndarray],
    outgoing: Callable[[np.ndarray], np.ndarray],
    target_coboundaries: List[np.ndarray],
    length: int,
    target_length: int,
    field_spec: FieldSpec,
) -> ExactnessNode:
    """Compare im(incoming) + B with {z ∈ Z : outgoing(z) ∈ B_target}, modulo B."""
    rank_b = array_rank(_columns(coboundaries, length, field_spec), field_spec)
    image_span = _columns(incoming + coboundaries, length, field_spec)
    dim_image = array_rank(image_span, field_spec) - rank_b
    images = [outgoing(z) for z in cocycles]
    stacked = _columns(images + target_coboundaries, target_length, field_spec)
    relations = array_kernel(stacked, field_spec)
    kernel_vectors = []
    z_matrix = _columns(cocycles, length, field_spec)
    for relation in relations:
        x = relation[: len(cocycles)]
        kernel_vectors.append(field_spec.normalize(z_matrix @ x) if len(cocycles) else field_spec.zeros(length))
    kernel_span = _columns(kernel_vectors + coboundaries, length, field_spec)
    dim_kernel_space = array_rank(kernel_span, field_spec)
    joined = _columns(kernel_vectors + coboundaries + incoming, length, field_spec)
    contained = array_rank(joined, field_spec) == dim_kernel_space
    return ExactnessNode(label, dim_image, dim_kernel_space - rank_b, contained)


def long_exact_sequence_check(com: RBComodule, n_max: int) -> SequenceReport:
    """Exactness of … → H̃ⁿ⁻¹ → Hⁿ_RB → Hⁿ → H̃ⁿ → Hⁿ⁺¹_RB → … for n ≤ n_max."""
    field_spec = com.field
    guard_characteristic(field_spec, n_max)
    half = _half(field_spec)
    m, c = com.dim, com.base.dim

    def plain_len(n: int) -> int:
        return m * c**n

    def unflatten(vector: np.ndarray, n: int) -> LinearMap:
        return LinearMap.from_vector(com.space, _cochain_codomain(com, n), vector, field_spec)

    def include(n: int) -> Callable[[np.ndarray], np.ndarray]:
        # C̃ⁿ⁻¹ → Cⁿ_RB, g ↦ (0, g)
        return lambda v: np.concatenate([field_spec.zeros(plain_len(n)), v])

    def project(n: int) -> Callable[[np.ndarray], np.ndarray]:
        return lambda v: v[: plain_len(n)]

    def connect(n: int) -> Callable[[np.ndarray], np.ndarray]:
        return lambda v: chain_map_delta(n, unflatten(v, n), com).map.scale(field_spec.neg(half)).vec()

    levels = {}
    for kind in (ComplexKind.PLAIN, ComplexKind.TILDE, ComplexKind.RB):
        for n in range(n_max + 2):
            levels[kind, n] = _Level(kind, n, com)
    cache: dict = {}

    def z(kind: ComplexKind, n: int) -> List[np.ndarray]:
        if n < 0:
            return []
        if ("z", kind, n) not in cache:
            cache["z", kind, n] = levels[kind, n].cocycle_vectors()
        return cache["z", kind, n]

    def b(kind: ComplexKind, n: int) -> List[np.ndarray]:
        if n < 0:
            return []
        if ("b", kind, n) not in cache:
            cache["b", kind, n] = levels[kind, n].coboundary_vectors()
        return cache["b", kind, n]

    def rb_len(n: int) -> int:
        return levels[ComplexKind.RB, n].ambient

    nodes = []
    for n in range(n_max + 1):
        incoming = [include(n)(g) for g in z(ComplexKind.TILDE, n - 1)]
        nodes.append(
            _exact_at(
                f"H^{n}_RB",
                incoming,
                z(ComplexKind.RB, n),
                b(ComplexKind.RB, n),
                project(n),
                b(ComplexKind.PLAIN, n),
                rb_len(n),
                plain_len(n),
                field_spec,
            )
        )
        incoming = [project(n)(x) for x in z(ComplexKind.RB, n)]
        nodes.append(
            _exact_at(
                f"H^{n}",
                incoming,
                z(ComplexKind.PLAIN, n),
                b(ComplexKind.PLAIN, n),
                connect(n),
                b(ComplexKind.TILDE, n),
                plain_len(n),
                plain_len(n),
                field_spec,
            )
        )
        incoming = [connect(n)(f) for f in z(ComplexKind.PLAIN, n)]
        nodes.append(
            _exact_at(
                f"H~^{n}",
                incoming,
                z(ComplexKind.TILDE, n),
                b(ComplexKind.TILDE, n),
                include(n + 1),
                b(ComplexKind.RB, n + 1),
                plain_len(n),
                rb_len(n + 1),
                field_spec,
            )
        )
        logger.debug("long exact sequence checked through degree %d", n)
    report = SequenceReport(tuple(nodes))
    if not report.exact:
        logger.warning("long exact sequence fails at %s", report.first_failure)
    return report
