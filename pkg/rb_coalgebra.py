#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""λ-weighted Rota-Baxter Lie coalgebras (C, Δ_C, R_C).

Provides the three axiom checkers, the derived coalgebra with
Δ̃ = (I⊗R + R⊗I + λ)Δ, morphisms, and dualization to a Rota-Baxter Lie
algebra.  The algebra side is checked by its own loop-based routines that
share no code with the coalgebra checkers.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from engine_errors import InternalInconsistency, InvalidStructure, ShapeMismatch, StructureMismatch
from exact_linalg import (
    FieldSpec,
    LinearMap,
    Scalar,
    Signature,
    Space,
    flip,
    identity,
    kron,
)

__all__ = [
    "ANTISYMMETRY",
    "COJACOBI",
    "RB_IDENTITY",
    "RBLieCoalgebra",
    "CoalgebraMorphism",
    "RBLieAlgebra",
    "rb_pair_operator",
    "check_antisymmetry",
    "check_cojacobi",
    "check_rb",
    "coalgebra_report",
    "derived_coalgebra",
    "check_morphism",
    "dualize",
    "double_bracket",
    "check_algebra_antisymmetry",
    "check_jacobi",
    "check_algebra_rb",
    "algebra_report",
    "coalgebra_from_constants",
]

logger = logging.getLogger(__name__)

ANTISYMMETRY = "(1.1)"
COJACOBI = "(LC)"
RB_IDENTITY = "(R)"


def _carrier(delta: LinearMap) -> Space:
    if len(delta.domain) != 1 or len(delta.codomain) != 2:
        raise ShapeMismatch("Δ must map C to C⊗C")
    return delta.domain.factors[0]


@dataclass(frozen=True, eq=False)
class RBLieCoalgebra:
    """Carrier C, cobracket Δ: C → C⊗C, operator R: C → C and weight λ.

    The dataclass constructor is the raw, unchecked one; use :meth:`create`
    for verified construction.
    """

    space: Space
    delta: LinearMap
    r: LinearMap
    lam: Scalar

    def __post_init__(self) -> None:
        c = self.space
        field = self.delta.field
        if self.r.field != field or self.lam.field != field:
            raise StructureMismatch("Δ, R and λ must share one field")
        if self.delta.shape != (c.dim * c.dim, c.dim):
            raise ShapeMismatch(f"Δ has shape {self.delta.shape}, expected {(c.dim * c.dim, c.dim)}")
        if self.r.shape != (c.dim, c.dim):
            raise ShapeMismatch(f"R has shape {self.r.shape}, expected {(c.dim, c.dim)}")
        object.__setattr__(self, "delta", self.delta.relabel(Signature.of(c), Signature.of(c, c)))
        object.__setattr__(self, "r", self.r.relabel(c, c))

    @classmethod
    def create(cls, space: Space, delta: LinearMap, r: LinearMap, lam: Scalar) -> "RBLieCoalgebra":
        """Checked constructor: refuses data violating (1.1), (LC) or (R)."""
        coalg = cls(space, delta, r, lam)
        failed = [name for name, ok in coalgebra_report(coalg).items() if not ok]
        if failed:
            logger.debug("refused coalgebra on %s: %s", space.labels, failed)
            raise InvalidStructure("Rota-Baxter Lie coalgebra", failed)
        return coalg

    @property
    def field(self) -> FieldSpec:
        return self.delta.field

    @property
    def dim(self) -> int:
        return self.space.dim

    def identity(self) -> LinearMap:
        return identity(self.space, self.field)

    def is_abelian(self) -> bool:
        return self.delta.is_zero()

    def same_frame(self, other: "RBLieCoalgebra") -> bool:
        return self.field == other.field and self.lam == other.lam

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RBLieCoalgebra):
            return NotImplemented
        return (
            self.space == other.space
            and self.delta == other.delta
            and self.r == other.r
            and self.lam == other.lam
        )

    __hash__ = None  # type: ignore[assignment]


def rb_pair_operator(left: LinearMap, right: LinearMap, lam: Scalar) -> LinearMap:
    """left⊗I + I⊗right + λ·I⊗I on the tensor product of the two carriers."""
    field = left.field
    id_left = identity(left.domain, field)
    id_right = identity(right.domain, field)
    both = kron(id_left, id_right)
    return kron(left, id_right) + kron(id_left, right) + both.scale(lam)


def check_antisymmetry(delta: LinearMap) -> bool:
    """Δ = −τΔ."""
    c = _carrier(delta)
    return (delta + flip(c, c, delta.field) @ delta).is_zero()


def check_cojacobi(delta: LinearMap) -> bool:
    """(I⊗Δ)Δ − (Δ⊗I)Δ + (I⊗τ)(Δ⊗I)Δ = 0."""
    c = _carrier(delta)
    field = delta.field
    i_c = identity(c, field)
    right = kron(i_c, delta) @ delta
    left = kron(delta, i_c) @ delta
    swapped = kron(i_c, flip(c, c, field)) @ left
    return (right - left + swapped).is_zero()


def check_rb(coalg: RBLieCoalgebra) -> bool:
    """(R⊗R)Δ = (I⊗R + R⊗I + λ)ΔR."""
    lhs = kron(coalg.r, coalg.r) @ coalg.delta
    rhs = rb_pair_operator(coalg.r, coalg.r, coalg.lam) @ coalg.delta @ coalg.r
    return lhs == rhs


def coalgebra_report(coalg: RBLieCoalgebra) -> Dict[str, bool]:
    antisymmetric = check_antisymmetry(coalg.delta)
    return {
        ANTISYMMETRY: antisymmetric,
        COJACOBI: antisymmetric and check_cojacobi(coalg.delta),
        RB_IDENTITY: check_rb(coalg),
    }


def derived_coalgebra(coalg: RBLieCoalgebra) -> RBLieCoalgebra:
    """(C, Δ̃, R, λ) with Δ̃ = (I⊗R + R⊗I + λ)Δ."""
    tilde = rb_pair_operator(coalg.r, coalg.r, coalg.lam) @ coalg.delta
    try:
        return RBLieCoalgebra.create(coalg.space, tilde, coalg.r, coalg.lam)
    except InvalidStructure as exc:
        raise InternalInconsistency(f"derived coalgebra is invalid: {exc}") from exc


@dataclass(frozen=True, eq=False)
class CoalgebraMorphism:
    source: RBLieCoalgebra
    target: RBLieCoalgebra
    phi: LinearMap


def check_morphism(m: CoalgebraMorphism) -> bool:
    """(φ⊗φ)Δ_C = Δ_C′ φ and R_C′ φ = φ R_C."""
    phi = m.phi
    if phi.shape != (m.target.dim, m.source.dim):
        raise ShapeMismatch(f"φ has shape {phi.shape}, expected {(m.target.dim, m.source.dim)}")
    cobracket = kron(phi, phi) @ m.source.delta == m.target.delta @ phi
    return cobracket and m.target.r @ phi == phi @ m.source.r


# -- algebra side ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RBLieAlgebra:
    """Carrier A, bracket A⊗A → A, operator R and weight λ."""

    space: Space
    bracket: LinearMap
    r: LinearMap
    lam: Scalar

    @property
    def field(self) -> FieldSpec:
        return self.bracket.field

    def structure_constant(self, i: int, j: int, k: int) -> object:
        """Coefficient of e_k in [e_i, e_j]."""
        return self.bracket.matrix[k, i * self.space.dim + j]


def dualize(coalg: RBLieCoalgebra) -> RBLieAlgebra:
    """C* with [f, g] = (f⊗g)Δ and R*(f) = f R."""
    dual = Space(tuple(f"{label}*" for label in coalg.space.labels))
    bracket = coalg.delta.transpose().relabel(Signature.of(dual, dual), dual)
    return RBLieAlgebra(dual, bracket, coalg.r.transpose().relabel(dual, dual), coalg.lam)


def double_bracket(alg: RBLieAlgebra) -> RBLieAlgebra:
    """Bracket [Rx, y] + [x, Ry] + λ[x, y] with the same operator."""
    return RBLieAlgebra(alg.space, alg.bracket @ rb_pair_operator(alg.r, alg.r, alg.lam), alg.r, alg.lam)


def _table(alg: RBLieAlgebra) -> List[List[List[object]]]:
    n = alg.space.dim
    return [[[alg.structure_constant(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]


def _bracket(table: List[List[List[object]]], u: List[object], v: List[object], field: FieldSpec) -> List[object]:
    n = len(u)
    out = [field.zero()] * n
    for a in range(n):
        if u[a] == 0:
            continue
        for b in range(n):
            if v[b] == 0:
                continue
            weight = u[a] * v[b]
            for k in range(n):
                out[k] = field.coerce(out[k] + weight * table[a][b][k])
    return out


def _unit(n: int, i: int, field: FieldSpec) -> List[object]:
    return [field.one() if k == i else field.zero() for k in range(n)]


def _apply(r: LinearMap, u: List[object]) -> List[object]:
    field = r.field
    n = len(u)
    return [field.coerce(sum((r.matrix[k, a] * u[a] for a in range(n)), field.zero())) for k in range(n)]


def check_algebra_antisymmetry(alg: RBLieAlgebra) -> bool:
    n = alg.space.dim
    field = alg.field
    return all(
        field.coerce(alg.structure_constant(i, j, k) + alg.structure_constant(j, i, k)) == 0
        for i, j, k in itertools.product(range(n), repeat=3)
    )


def check_jacobi(alg: RBLieAlgebra) -> bool:
    """[[x,y],z] + [[y,z],x] + [[z,x],y] = 0 on all basis triples."""
    n = alg.space.dim
    field = alg.field
    table = _table(alg)
    for i, j, k in itertools.product(range(n), repeat=3):
        x, y, z = _unit(n, i, field), _unit(n, j, field), _unit(n, k, field)
        terms = [
            _bracket(table, _bracket(table, x, y, field), z, field),
            _bracket(table, _bracket(table, y, z, field), x, field),
            _bracket(table, _bracket(table, z, x, field), y, field),
        ]
        if any(field.coerce(sum(parts, field.zero())) != 0 for parts in zip(*terms)):
            return False
    return True


def check_algebra_rb(alg: RBLieAlgebra) -> bool:
    """[Rx, Ry] = R([Rx, y] + [x, Ry] + λ[x, y]) on all basis pairs."""
    n = alg.space.dim
    field = alg.field
    table = _table(alg)
    lam = alg.lam.value
    for i, j in itertools.product(range(n), repeat=2):
        x, y = _unit(n, i, field), _unit(n, j, field)
        rx, ry = _apply(alg.r, x), _apply(alg.r, y)
        lhs = _bracket(table, rx, ry, field)
        inner = [
            field.coerce(a + b + lam * c)
            for a, b, c in zip(_bracket(table, rx, y, field), _bracket(table, x, ry, field), _bracket(table, x, y, field))
        ]
        if lhs != _apply(alg.r, inner):
            return False
    return True


def algebra_report(alg: RBLieAlgebra) -> Dict[str, bool]:
    return {
        "antisymmetry": check_algebra_antisymmetry(alg),
        "jacobi": check_jacobi(alg),
        "rota-baxter": check_algebra_rb(alg),
    }


def coalgebra_from_constants(
    space: Space,
    triples: List[tuple],
    r_rows: Optional[List[List[object]]],
    lam: object,
    field: FieldSpec,
    checked: bool = True,
) -> RBLieCoalgebra:
    """Build from sparse triples (i, j, k, coeff): coefficient of e_i⊗e_j in Δ(e_k)."""
    n = space.dim
    matrix = field.zeros((n * n, n))
    for i, j, k, coeff in triples:
        matrix[i * n + j, k] = field.coerce(matrix[i * n + j, k] + field.coerce(coeff))
    delta = LinearMap(Signature.of(space), Signature.of(space, space), matrix, field)
    r = LinearMap.from_rows(space, space, r_rows, field) if r_rows is not None else LinearMap(
        Signature.of(space), Signature.of(space), field.zeros((n, n)), field
    )
    scalar = Scalar.of(lam, field)
    if checked:
        return RBLieCoalgebra.create(space, delta, r, scalar)
    return RBLieCoalgebra(space, delta, r, scalar)
