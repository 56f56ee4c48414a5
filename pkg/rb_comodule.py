#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Right Lie comodules (M, ρ, R_M) over a Rota-Baxter Lie coalgebra."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict

from engine_errors import InternalInconsistency, InvalidStructure, ShapeMismatch, StructureMismatch
from exact_linalg import FieldSpec, LinearMap, Signature, Space, flip, identity, kron
from rb_coalgebra import RBLieCoalgebra, derived_coalgebra, rb_pair_operator

__all__ = [
    "COACTION",
    "RB_COACTION",
    "RBComodule",
    "check_comodule",
    "check_rb_comodule",
    "comodule_report",
    "adjoint",
    "derived_comodule",
]

logger = logging.getLogger(__name__)

COACTION = "(com)"
RB_COACTION = "(rR)"


@dataclass(frozen=True, eq=False)
class RBComodule:
    """Coaction ρ: M → M⊗C and operator R_M over ``base``; raw constructor."""

    base: RBLieCoalgebra
    space: Space
    rho: LinearMap
    r_m: LinearMap

    def __post_init__(self) -> None:
        c, m = self.base.space, self.space
        if self.rho.field != self.base.field or self.r_m.field != self.base.field:
            raise StructureMismatch("comodule and coalgebra fields differ")
        if self.rho.shape != (m.dim * c.dim, m.dim):
            raise ShapeMismatch(f"ρ has shape {self.rho.shape}, expected {(m.dim * c.dim, m.dim)}")
        if self.r_m.shape != (m.dim, m.dim):
            raise ShapeMismatch(f"R_M has shape {self.r_m.shape}, expected {(m.dim, m.dim)}")
        object.__setattr__(self, "rho", self.rho.relabel(Signature.of(m), Signature.of(m, c)))
        object.__setattr__(self, "r_m", self.r_m.relabel(m, m))

    @classmethod
    def create(cls, base: RBLieCoalgebra, space: Space, rho: LinearMap, r_m: LinearMap) -> "RBComodule":
        com = cls(base, space, rho, r_m)
        failed = [name for name, ok in comodule_report(com).items() if not ok]
        if failed:
            logger.debug("refused comodule on %s: %s", space.labels, failed)
            raise InvalidStructure("Rota-Baxter Lie comodule", failed)
        return com

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @property
    def dim(self) -> int:
        return self.space.dim


def check_comodule(com: RBComodule) -> bool:
    """(I⊗Δ_C)ρ − (ρ⊗I)ρ + (I⊗τ)(ρ⊗I)ρ = 0, τ acting on the two C factors."""
    field = com.field
    c = com.base.space
    i_m, i_c = identity(com.space, field), identity(c, field)
    through_delta = kron(i_m, com.base.delta) @ com.rho
    twice = kron(com.rho, i_c) @ com.rho
    swapped = kron(i_m, flip(c, c, field)) @ twice
    return (through_delta - twice + swapped).is_zero()


def check_rb_comodule(com: RBComodule) -> bool:
    """(R_M⊗R_C)ρ = (R_M⊗I + I⊗R_C + λ)ρR_M."""
    lhs = kron(com.r_m, com.base.r) @ com.rho
    rhs = rb_pair_operator(com.r_m, com.base.r, com.base.lam) @ com.rho @ com.r_m
    return lhs == rhs


def comodule_report(com: RBComodule) -> Dict[str, bool]:
    return {COACTION: check_comodule(com), RB_COACTION: check_rb_comodule(com)}


def adjoint(coalg: RBLieCoalgebra) -> RBComodule:
    """C as a comodule over itself: ρ = Δ_C, R_M = R_C."""
    return RBComodule.create(coalg, coalg.space, coalg.delta, coalg.r)


def derived_comodule(com: RBComodule) -> RBComodule:
    """(M, ρ̃, R_M) over the derived coalgebra, ρ̃ = (I⊗R_C)ρ − ρR_M."""
    base = derived_coalgebra(com.base)
    rho_tilde = kron(identity(com.space, com.field), com.base.r) @ com.rho - com.rho @ com.r_m
    try:
        return RBComodule.create(base, com.space, rho_tilde, com.r_m)
    except InvalidStructure as exc:
        raise InternalInconsistency(f"derived comodule is invalid: {exc}") from exc
