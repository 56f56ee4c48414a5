#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Automorphism pairs, extensibility and the Wells map of a non-abelian extension.

For an extension 0 → C → E → M → 0 with retraction t and paired section s:

* a pair (α, β) ∈ Aut(C) × Aut(M) is extensible when some γ ∈ Aut(E) has
  f α = γ f and β g = g γ; this happens iff a map φ: M → C solves
  (AE1)–(AE3), and then γ(e) = f(α t e + φ g e) + s β g e;
* the Wells class of (α, β) is the class of the induced cocycle against the
  extension's own cocycle, and it is zero exactly on extensible pairs;
* K(γ) = (t γ f, g γ s) on automorphisms of E preserving f(C), with kernel
  isomorphic to the 1-cocycles Z¹_nab through χ(γ) = t γ s.

Group-level checks enumerate over 𝔽_p and refuse to run past the budget.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from engine_errors import (
    CocycleInvalid,
    InternalInconsistency,
    InvalidStructure,
    MembershipViolation,
    NotCPreserving,
    SearchBudgetExceeded,
    ShapeMismatch,
)
from exact_linalg import LinearMap, affine_solution_space, all_linear_maps, flip, identity, kron
from nonabelian_extension import (
    ExtensionSES,
    NonAbelianCocycle,
    Undecided,
    cocycle_from_extension,
    extracted_comodule,
    search_witness,
    solve_equivalence,
    splitting,
)
from rb_coalgebra import CoalgebraMorphism, RBLieCoalgebra, check_morphism
from rb_comodule import RBComodule

__all__ = [
    "EXTENSIBILITY_EQUATIONS",
    "AutPair",
    "ExtensibilityVerdict",
    "WellsClass",
    "GroupNode",
    "WellsSequenceReport",
    "is_automorphism",
    "induced_cocycle",
    "extensibility_residuals",
    "gamma_from_extensibility",
    "decide_extensible",
    "wells_map",
    "wells_classes_agree",
    "k_map",
    "z1_nab_residuals",
    "z1_nab_basis",
    "z1_nab_members",
    "chi_map",
    "gamma_from_phi",
    "compatible_pair_check",
    "enumerate_automorphisms",
    "enumerate_c_preserving",
    "wells_sequence_check",
]

logger = logging.getLogger(__name__)

EXTENSIBILITY_EQUATIONS = ("(AE1)", "(AE2)", "(AE3)")


def is_automorphism(coalg: RBLieCoalgebra, a: LinearMap) -> bool:
    return a.shape == (coalg.dim, coalg.dim) and a.is_invertible() and check_morphism(CoalgebraMorphism(coalg, coalg, a))


@dataclass(frozen=True, eq=False)
class AutPair:
    """(α, β) ∈ Aut(C) × Aut(M); the dataclass constructor is unchecked."""

    alpha: LinearMap
    beta: LinearMap

    @classmethod
    def create(cls, c: RBLieCoalgebra, m: RBLieCoalgebra, alpha: LinearMap, beta: LinearMap) -> "AutPair":
        failed = []
        if not is_automorphism(c, alpha):
            failed.append("α ∈ Aut(C)")
        if not is_automorphism(m, beta):
            failed.append("β ∈ Aut(M)")
        if failed:
            raise InvalidStructure("automorphism pair", failed)
        return cls(alpha.relabel(c.space, c.space), beta.relabel(m.space, m.space))

    @classmethod
    def identity_of(cls, c: RBLieCoalgebra, m: RBLieCoalgebra) -> "AutPair":
        return cls(c.identity(), m.identity())

    def compose(self, other: "AutPair") -> "AutPair":
        """(α α′, β β′)."""
        return AutPair(self.alpha @ other.alpha, self.beta @ other.beta)

    def inverse(self) -> "AutPair":
        alpha, beta = self.alpha.inverse(), self.beta.inverse()
        if alpha is None or beta is None:
            raise MembershipViolation("pair is not invertible")
        return AutPair(alpha, beta)

    def key(self) -> Tuple[tuple, tuple]:
        return tuple(self.alpha.matrix.flat), tuple(self.beta.matrix.flat)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AutPair):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class ExtensibilityVerdict:
    extensible: Union[bool, Undecided]
    witness: Optional[LinearMap] = None
    gamma: Optional[LinearMap] = None


def _beta_inverse(p: AutPair) -> LinearMap:
    beta_inv = p.beta.inverse()
    if beta_inv is None:
        raise MembershipViolation("β is not invertible")
    return beta_inv


def induced_cocycle(z: NonAbelianCocycle, p: AutPair) -> NonAbelianCocycle:
    """h' = (α⊗α)hβ⁻¹, ρ' = (β⊗α)ρβ⁻¹, φ' = αφβ⁻¹."""
    if p.alpha.shape != (z.c.dim, z.c.dim) or p.beta.shape != (z.m.dim, z.m.dim):
        raise ShapeMismatch("automorphism pair does not act on (C, M)")
    beta_inv = _beta_inverse(p)
    alpha, beta = p.alpha, p.beta
    try:
        return NonAbelianCocycle.create(
            z.c,
            z.m,
            kron(alpha, alpha) @ z.h @ beta_inv,
            kron(beta, alpha) @ z.rho @ beta_inv,
            alpha @ z.phi @ beta_inv,
        )
    except CocycleInvalid as exc:
        raise InternalInconsistency(f"induced cocycle fails {exc.failed}") from exc


def extensibility_residuals(z: NonAbelianCocycle, p: AutPair, phi: LinearMap) -> Dict[str, LinearMap]:
    """(AE1)–(AE3) with everything moved to one side."""
    field_spec = z.field
    c, m = z.c.space, z.m.space
    phi = phi.relabel(m, c)
    alpha, beta = p.alpha, p.beta
    twisted = kron(phi, alpha) @ z.rho
    return {
        "(AE1)": z.h @ beta
        - kron(alpha, alpha) @ z.h
        - twisted
        + flip(c, c, field_spec) @ twisted
        + z.c.delta @ phi
        - kron(phi, phi) @ z.m.delta,
        "(AE2)": z.rho @ beta - kron(beta, alpha) @ z.rho - kron(beta, phi) @ z.m.delta,
        "(AE3)": z.phi @ beta - alpha @ z.phi - phi @ z.m.r + z.c.r @ phi,
    }


def gamma_from_extensibility(x: ExtensionSES, p: AutPair, phi: LinearMap) -> LinearMap:
    """γ(e) = f(α t e + φ g e) + s β g e."""
    t, s = splitting(x)
    return x.f @ (p.alpha @ t + phi.relabel(x.m.space, x.c.space) @ x.g) + s @ p.beta @ x.g


def _lifts(x: ExtensionSES, p: AutPair, gamma: LinearMap) -> bool:
    return is_automorphism(x.e, gamma) and x.f @ p.alpha == gamma @ x.f and p.beta @ x.g == x.g @ gamma


def decide_extensible(
    x: ExtensionSES, p: AutPair, budget: int, candidate: Optional[LinearMap] = None
) -> ExtensibilityVerdict:
    """Decide whether (α, β) lifts to an automorphism of E.

    A caller-supplied ``candidate`` φ is tried first; this is the only way to
    obtain a positive answer over ℚ when the linear equations leave a family.
    """
    t, _ = splitting(x)
    z = cocycle_from_extension(x, t)

    def residual(name: str) -> Callable[[LinearMap], LinearMap]:
        return lambda phi: extensibility_residuals(z, p, phi)[name]

    found: Union[LinearMap, None, Undecided] = None
    if candidate is not None and all(r.is_zero() for r in extensibility_residuals(z, p, candidate).values()):
        found = candidate.relabel(x.m.space, x.c.space)
    else:
        found = search_witness(
            x.m.space,
            x.c.space,
            x.field,
            [residual("(AE2)"), residual("(AE3)")],
            residual("(AE1)"),
            x.m.is_abelian(),
            budget,
            "extensibility search",
        )
    if found is None:
        return ExtensibilityVerdict(False)
    if isinstance(found, Undecided):
        return ExtensibilityVerdict(found)
    gamma = gamma_from_extensibility(x, p, found)
    if not _lifts(x, p, gamma):
        raise InternalInconsistency("γ built from an extensibility witness is not a lift")
    return ExtensibilityVerdict(True, found, gamma)


@dataclass(frozen=True, eq=False)
class WellsClass:
    """Induced-minus-original difference of cocycles, with an is-zero query."""

    base: NonAbelianCocycle
    induced: NonAbelianCocycle
    budget: int
    h: LinearMap = field(init=False)
    rho: LinearMap = field(init=False)
    phi: LinearMap = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "h", self.induced.h - self.base.h)
        object.__setattr__(self, "rho", self.induced.rho - self.base.rho)
        object.__setattr__(self, "phi", self.induced.phi - self.base.phi)

    def witness(self) -> Union[LinearMap, None, Undecided]:
        """φ with induced ~ base, ``None`` or :class:`Undecided`."""
        verdict = solve_equivalence(self.induced, self.base, self.budget)
        if verdict is None or isinstance(verdict, Undecided):
            return verdict
        return verdict.varphi

    def is_zero(self) -> Union[bool, Undecided]:
        found = self.witness()
        if isinstance(found, Undecided):
            return found
        return found is not None


def wells_map(x: ExtensionSES, p: AutPair, budget: int, t: Optional[LinearMap] = None) -> WellsClass:
    z = cocycle_from_extension(x, t)
    return WellsClass(z, induced_cocycle(z, p), budget)


def wells_classes_agree(w1: WellsClass, w2: WellsClass) -> Union[bool, Undecided]:
    """Both the bases and the induced cocycles of the two classes are equivalent."""
    for a, b in ((w1.base, w2.base), (w1.induced, w2.induced)):
        verdict = solve_equivalence(a, b, min(w1.budget, w2.budget))
        if isinstance(verdict, Undecided):
            return verdict
        if verdict is None:
            return False
    return True


# -- K and χ ---------------------------------------------------------------


def _require_c_preserving(x: ExtensionSES, gamma: LinearMap) -> None:
    if gamma.shape != (x.e.dim, x.e.dim):
        raise ShapeMismatch(f"γ has shape {gamma.shape}, expected {(x.e.dim, x.e.dim)}")
    if not is_automorphism(x.e, gamma):
        raise MembershipViolation("γ is not an automorphism of E")
    if not (x.g @ gamma @ x.f).is_zero():
        raise NotCPreserving("γ does not map f(C) into f(C)")


def k_map(x: ExtensionSES, gamma: LinearMap) -> AutPair:
    """K(γ) = (t γ f, g γ s)."""
    _require_c_preserving(x, gamma)
    t, s = splitting(x)
    pair = AutPair(t @ gamma @ x.f, x.g @ gamma @ s)
    if not (is_automorphism(x.c, pair.alpha) and is_automorphism(x.m, pair.beta)):
        raise InternalInconsistency("K(γ) is not an automorphism pair")
    return pair


def z1_nab_residuals(z: NonAbelianCocycle, phi: LinearMap) -> Dict[str, LinearMap]:
    """The three 1-cocycle conditions; (φ⊗φ)Δ_M is dropped since it vanishes once (I⊗φ)Δ_M = 0."""
    field_spec = z.field
    c, m = z.c.space, z.m.space
    phi = phi.relabel(m, c)
    lifted = kron(phi, identity(c, field_spec)) @ z.rho
    return {
        "coaction": lifted - flip(c, c, field_spec) @ lifted - z.c.delta @ phi,
        "module": kron(identity(m, field_spec), phi) @ z.m.delta,
        "operator": phi @ z.m.r - z.c.r @ phi,
    }


def _z1_condition(z: NonAbelianCocycle, name: str) -> Callable[[LinearMap], LinearMap]:
    return lambda phi: z1_nab_residuals(z, phi)[name]


def _z1_nab_space(z: NonAbelianCocycle):
    constraints = [_z1_condition(z, name) for name in ("coaction", "module", "operator")]
    solution = affine_solution_space(z.m.space, z.c.space, z.field, constraints)
    if solution is None:
        raise InternalInconsistency("the zero map is not a 1-cocycle")
    return solution


def z1_nab_basis(z: NonAbelianCocycle) -> List[LinearMap]:
    return list(_z1_nab_space(z).directions)


def z1_nab_members(z: NonAbelianCocycle, budget: int) -> List[LinearMap]:
    """Every element of Z¹_nab over 𝔽_p."""
    solution = _z1_nab_space(z)
    count = z.field.characteristic**solution.dimension
    if count > budget:
        raise SearchBudgetExceeded(count, budget, "Z¹_nab enumeration")
    return list(solution.points())


def _in_z1_nab(z: NonAbelianCocycle, phi: LinearMap) -> bool:
    return all(r.is_zero() for r in z1_nab_residuals(z, phi).values())


def chi_map(x: ExtensionSES, gamma: LinearMap) -> LinearMap:
    """χ(γ) = t γ s on Ker K."""
    pair = k_map(x, gamma)
    if pair != AutPair.identity_of(x.c, x.m):
        raise MembershipViolation("γ is not in the kernel of K")
    t, s = splitting(x)
    return t @ gamma @ s


def gamma_from_phi(x: ExtensionSES, phi: LinearMap) -> LinearMap:
    """γ = f φ g + I_E for φ ∈ Z¹_nab."""
    if phi.shape != (x.c.dim, x.m.dim):
        raise ShapeMismatch(f"φ has shape {phi.shape}, expected {(x.c.dim, x.m.dim)}")
    if not _in_z1_nab(cocycle_from_extension(x), phi):
        raise MembershipViolation("φ is not a non-abelian 1-cocycle")
    return x.f @ phi.relabel(x.m.space, x.c.space) @ x.g + x.e.identity()


def compatible_pair_check(com: RBComodule, p: AutPair) -> bool:
    """ρβ = (β⊗α)ρ."""
    return com.rho @ p.beta == kron(p.beta, p.alpha) @ com.rho


# -- enumeration -----------------------------------------------------------


def enumerate_automorphisms(coalg: RBLieCoalgebra, budget: int) -> List[LinearMap]:
    """Aut of an RB Lie coalgebra over 𝔽_p, lexicographic."""
    return [a for a in all_linear_maps(coalg.space, coalg.space, coalg.field, budget) if is_automorphism(coalg, a)]


def enumerate_c_preserving(x: ExtensionSES, budget: int) -> List[LinearMap]:
    """Aut_C(E): γ = f a t + f b g + s d g with (a, b, d) block-triangular data."""
    field_spec = x.field
    c, m = x.c.space, x.m.space
    n_entries = c.dim * c.dim + c.dim * m.dim + m.dim * m.dim
    count = field_spec.characteristic**n_entries
    if count > budget:
        raise SearchBudgetExceeded(count, budget, "Aut_C(E) enumeration")
    t, s = splitting(x)
    found = []
    for entries in itertools.product(field_spec.elements(), repeat=n_entries):
        a_end = c.dim * c.dim
        b_end = a_end + c.dim * m.dim
        a = LinearMap(c, c, np.array(entries[:a_end], dtype=object).reshape(c.dim, c.dim), field_spec)
        b = LinearMap(m, c, np.array(entries[a_end:b_end], dtype=object).reshape(c.dim, m.dim), field_spec)
        d = LinearMap(m, m, np.array(entries[b_end:], dtype=object).reshape(m.dim, m.dim), field_spec)
        gamma = x.f @ a @ t + x.f @ b @ x.g + s @ d @ x.g
        if is_automorphism(x.e, gamma):
            found.append(gamma)
    logger.debug("Aut_C(E): %d of %d candidates", len(found), count)
    return found


# -- exact sequences -------------------------------------------------------


@dataclass(frozen=True)
class GroupNode:
    """Exactness at one group: the image of the incoming map against the kernel of the outgoing one."""

    label: str
    size_image: int
    size_kernel: int
    contained: bool

    @property
    def exact(self) -> bool:
        return self.contained and self.size_image == self.size_kernel

    def to_dict(self) -> dict:
        return {
            "exact": self.exact,
            "node": self.label,
            "size_image": self.size_image,
            "size_kernel": self.size_kernel,
        }


@dataclass(frozen=True)
class WellsSequenceReport:
    abelian: bool
    nodes: Tuple[GroupNode, ...]
    group_sizes: Tuple[Tuple[str, int], ...]
    disagreements: int

    @property
    def exact(self) -> bool:
        return self.disagreements == 0 and all(node.exact for node in self.nodes)

    def to_dict(self) -> dict:
        return {
            "abelian": self.abelian,
            "disagreements": self.disagreements,
            "exact": self.exact,
            "groups": dict(self.group_sizes),
            "nodes": [node.to_dict() for node in self.nodes],
        }


def _key(a: LinearMap) -> tuple:
    return tuple(a.matrix.flat)


def wells_sequence_check(x: ExtensionSES, budget: int) -> WellsSequenceReport:
    """Enumerate 0 → Z¹_nab → Aut_C(E) → Aut(C)×Aut(M) → classes and check exactness.

    With Δ_M = 0 the pairs are restricted to the compatible pairs C_ρ of the
    extracted comodule.
    """
    if not x.field.is_prime_field:
        raise ValueError("group enumeration needs a prime field")
    abelian = x.m.is_abelian()
    z = cocycle_from_extension(x)
    identity_pair = AutPair.identity_of(x.c, x.m)

    cocycles = z1_nab_members(z, budget)
    gammas = enumerate_c_preserving(x, budget)
    pairs = [
        AutPair(alpha, beta)
        for alpha in enumerate_automorphisms(x.c, budget)
        for beta in enumerate_automorphisms(x.m, budget)
    ]
    if abelian:
        com = extracted_comodule(x)
        pairs = [p for p in pairs if compatible_pair_check(com, p)]
    logger.info(
        "Wells sequence: |Z1_nab|=%d |Aut_C(E)|=%d |pairs|=%d", len(cocycles), len(gammas), len(pairs)
    )

    lifted = {_key(gamma_from_phi(x, phi)) for phi in cocycles}
    injective = GroupNode("Z1_nab", len(lifted), len(cocycles), len(lifted) == len(cocycles))

    images = {_key(gamma): k_map(x, gamma) for gamma in gammas}
    kernel = {key for key, pair in images.items() if pair == identity_pair}
    at_aut_e = GroupNode("Aut_C(E)", len(lifted), len(kernel), lifted <= kernel)

    image_keys = {pair.key() for pair in images.values()}
    zero_class = set()
    disagreements = 0
    for p in pairs:
        is_zero = wells_map(x, p, budget).is_zero()
        verdict = decide_extensible(x, p, budget).extensible
        if isinstance(is_zero, Undecided) or isinstance(verdict, Undecided):
            raise InternalInconsistency("undecided verdict over a prime field")
        if is_zero != verdict:
            disagreements += 1
            logger.warning("Wells class and extensibility disagree on %s", p.key())
        if is_zero:
            zero_class.add(p.key())
    pair_keys = {p.key() for p in pairs}
    contained = image_keys <= zero_class and image_keys <= pair_keys
    at_pairs = GroupNode("Aut(C)xAut(M)", len(image_keys), len(zero_class), contained)

    sizes = (("Z1_nab", len(cocycles)), ("Aut_C(E)", len(gammas)), ("pairs", len(pairs)))
    report = WellsSequenceReport(abelian, (injective, at_aut_e, at_pairs), sizes, disagreements)
    logger.info("Wells sequence exact: %s", report.exact)
    return report
