#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Non-abelian extensions 0 → C → E → M → 0 and their 2-cocycles (h, ρ, φ).

The semidirect coalgebra lives on C ⊕ M with the C-basis first, then the
M-basis.  An extension is turned into a cocycle through a retraction t
(t f = I_C) and the paired section s (g s = I_M, f t + s g = I_E).

Equivalence of cocycles is decided in three ways:

* Δ_M = 0: every equation is affine in φ and is solved exactly;
* Δ_M ≠ 0 over 𝔽_p: the linear equations are solved first, then the
  remaining affine set is searched exhaustively within the budget;
* Δ_M ≠ 0 over ℚ: decided only when the linear equations leave at most one
  candidate, otherwise :class:`Undecided`.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from engine_errors import (
    CocycleInvalid,
    ExactnessViolation,
    InternalInconsistency,
    InvalidStructure,
    NonAbelianModule,
    SearchBudgetExceeded,
    ShapeMismatch,
    StructureMismatch,
)
from exact_linalg import (
    LinearMap,
    Signature,
    Space,
    affine_solution_space,
    array_rank,
    flip,
    identity,
    kron,
    row_reduce,
)
from rb_coalgebra import CoalgebraMorphism, RBLieCoalgebra, check_morphism, coalgebra_report, rb_pair_operator
from rb_comodule import RBComodule

__all__ = [
    "COCYCLE_EQUATIONS",
    "EQUIVALENCE_EQUATIONS",
    "Undecided",
    "NonAbelianCocycle",
    "CocycleVerdict",
    "ExtensionSES",
    "extension_report",
    "EquivalenceWitness",
    "OrbitReport",
    "direct_sum_space",
    "check_cocycle",
    "semidirect_raw",
    "semidirect",
    "extension_of_cocycle",
    "transport_extension",
    "find_retraction",
    "paired_section",
    "splitting",
    "cocycle_from_extension",
    "extracted_comodule",
    "equivalence_report",
    "check_equivalence_witness",
    "apply_equivalence",
    "theta_from_witness",
    "search_witness",
    "solve_equivalence",
    "check_extension_equivalence",
    "classify_small",
]

logger = logging.getLogger(__name__)

COCYCLE_EQUATIONS = ("(n0)", "(n1)", "(n2)", "(n5)", "(n6)", "(n7)")
EQUIVALENCE_EQUATIONS = ("(eqc1)", "(eqc2)", "(eqc3)")


@dataclass(frozen=True)
class Undecided:
    """Third verdict: the question cannot be settled exactly here."""

    reason: str


@dataclass(frozen=True, eq=False)
class NonAbelianCocycle:
    """(h, ρ, φ) with h: M → C⊗C, ρ: M → M⊗C, φ: M → C; raw constructor."""

    c: RBLieCoalgebra
    m: RBLieCoalgebra
    h: LinearMap
    rho: LinearMap
    phi: LinearMap

    def __post_init__(self) -> None:
        if not self.c.same_frame(self.m):
            raise StructureMismatch("C and M must share field and λ")
        cd, md = self.c.dim, self.m.dim
        expected = {"h": (cd * cd, md), "rho": (md * cd, md), "phi": (cd, md)}
        for name, shape in expected.items():
            value: LinearMap = getattr(self, name)
            if value.field != self.c.field:
                raise StructureMismatch(f"{name} is over the wrong field")
            if value.shape != shape:
                raise ShapeMismatch(f"{name} has shape {value.shape}, expected {shape}")
        c, m = self.c.space, self.m.space
        object.__setattr__(self, "h", self.h.relabel(m, Signature.of(c, c)))
        object.__setattr__(self, "rho", self.rho.relabel(m, Signature.of(m, c)))
        object.__setattr__(self, "phi", self.phi.relabel(m, c))

    @classmethod
    def create(
        cls, c: RBLieCoalgebra, m: RBLieCoalgebra, h: LinearMap, rho: LinearMap, phi: LinearMap
    ) -> "NonAbelianCocycle":
        z = cls(c, m, h, rho, phi)
        verdict = check_cocycle(z)
        if not verdict.passed:
            raise CocycleInvalid(verdict.failed)
        return z

    @property
    def field(self):
        return self.c.field

    def same_frame(self, other: "NonAbelianCocycle") -> bool:
        return self.c == other.c and self.m == other.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NonAbelianCocycle):
            return NotImplemented
        return self.same_frame(other) and self.h == other.h and self.rho == other.rho and self.phi == other.phi

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class CocycleVerdict:
    equations: Tuple[Tuple[str, bool], ...]

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.equations)

    @property
    def failed(self) -> List[str]:
        return [name for name, ok in self.equations if not ok]

    def as_dict(self) -> Dict[str, bool]:
        return dict(self.equations)


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    varphi: LinearMap


@dataclass(frozen=True, eq=False)
class ExtensionSES:
    """f: C → E, g: E → M with optional retraction t and section s; raw constructor."""

    c: RBLieCoalgebra
    m: RBLieCoalgebra
    e: RBLieCoalgebra
    f: LinearMap
    g: LinearMap
    t: Optional[LinearMap] = None
    s: Optional[LinearMap] = None

    def __post_init__(self) -> None:
        if not (self.c.same_frame(self.e) and self.m.same_frame(self.e)):
            raise StructureMismatch("C, E and M must share field and λ")
        shapes = {"f": (self.e.dim, self.c.dim), "g": (self.m.dim, self.e.dim)}
        if self.t is not None:
            shapes["t"] = (self.c.dim, self.e.dim)
        if self.s is not None:
            shapes["s"] = (self.e.dim, self.m.dim)
        for name, shape in shapes.items():
            if getattr(self, name).shape != shape:
                raise ShapeMismatch(f"{name} has shape {getattr(self, name).shape}, expected {shape}")

    @classmethod
    def create(cls, *args, **kwargs) -> "ExtensionSES":
        x = cls(*args, **kwargs)
        failed = [name for name, ok in extension_report(x).items() if not ok]
        if failed:
            raise InvalidStructure("non-abelian extension", failed)
        return x

    @property
    def field(self):
        return self.e.field

    def t_is_retraction(self, t: LinearMap) -> bool:
        return t.shape == (self.c.dim, self.e.dim) and t @ self.f == identity(self.c.space, self.field)


def extension_report(x: ExtensionSES) -> Dict[str, bool]:
    """Morphism, exactness and splitting checks of an extension."""
    field_spec = x.field
    report = {
        "f morphism": check_morphism(CoalgebraMorphism(x.c, x.e, x.f)),
        "g morphism": check_morphism(CoalgebraMorphism(x.e, x.m, x.g)),
        "f injective": array_rank(x.f.matrix, field_spec) == x.c.dim,
        "g surjective": array_rank(x.g.matrix, field_spec) == x.m.dim,
        "im f = ker g": (x.g @ x.f).is_zero() and x.e.dim == x.c.dim + x.m.dim,
    }
    if x.t is not None:
        report["tf = I"] = x.t @ x.f == identity(x.c.space, field_spec)
    if x.s is not None:
        report["gs = I"] = x.g @ x.s == identity(x.m.space, field_spec)
    if x.t is not None and x.s is not None:
        report["ft + sg = I"] = x.f @ x.t + x.s @ x.g == identity(x.e.space, field_spec)
    return report


# -- cocycle equations -----------------------------------------------------


def _tau_rho(m: Space, c: Space, rho: LinearMap) -> LinearMap:
    return flip(m, c, rho.field) @ rho


def check_cocycle(z: NonAbelianCocycle) -> CocycleVerdict:
    """Per-equation verdict for (n0), (n1), (n2), (n5), (n6), (n7)."""
    field_spec = z.field
    c, m = z.c.space, z.m.space
    i_c, i_m = identity(c, field_spec), identity(m, field_spec)
    d_c, d_m, r_c, r_m = z.c.delta, z.m.delta, z.c.r, z.m.r
    h, rho, phi, lam = z.h, z.rho, z.phi, z.c.lam
    tau_cc = flip(c, c, field_spec)
    tau_rho = _tau_rho(m, c, rho)
    swap_cc = kron(i_c, tau_cc)

    n0 = (tau_cc @ h + h).is_zero()

    delta_h = kron(d_c, i_c) @ h
    h_rho = kron(h, i_c) @ rho
    n1 = kron(i_c, d_c) @ h - delta_h + swap_cc @ delta_h == h_rho + kron(i_c, h) @ tau_rho - swap_cc @ h_rho

    rho_rho = kron(rho, i_c) @ rho
    n2 = kron(i_m, d_c) @ rho + kron(i_m, h) @ d_m == rho_rho - kron(i_m, tau_cc) @ rho_rho

    n5 = kron(d_m, i_c) @ rho == kron(i_m, flip(c, m, field_spec)) @ kron(rho, i_m) @ d_m + kron(i_m, rho) @ d_m

    lhs6 = (
        kron(phi, r_c) @ rho
        - kron(r_c, phi) @ tau_rho
        - kron(phi, i_c) @ rho @ r_m
        + kron(i_c, phi) @ tau_rho @ r_m
        + kron(phi, phi) @ d_m
        - rb_pair_operator(r_c, r_c, lam) @ d_c @ phi
    )
    rhs6 = rb_pair_operator(r_c, r_c, lam) @ h @ r_m - kron(r_c, r_c) @ h
    n6 = lhs6 == rhs6

    n7 = kron(r_m, phi) @ d_m + kron(r_m, r_c) @ rho == (
        kron(i_m, phi) @ d_m @ r_m + rb_pair_operator(r_m, r_c, lam) @ rho @ r_m
    )
    return CocycleVerdict(tuple(zip(COCYCLE_EQUATIONS, (n0, n1, n2, n5, n6, n7))))


# -- semidirect coalgebra and extensions ----------------------------------


def direct_sum_space(c: Space, m: Space) -> Space:
    """Labels of C ⊕ M, C first; prefixed when the two label sets overlap."""
    if set(c.labels) & set(m.labels):
        return Space(tuple(f"c.{label}" for label in c.labels) + tuple(f"m.{label}" for label in m.labels))
    return Space(c.labels + m.labels)


@dataclass(frozen=True, eq=False)
class _Blocks:
    """Inclusions and projections of C ⊕ M."""

    e: Space
    inc_c: LinearMap
    inc_m: LinearMap
    proj_c: LinearMap
    proj_m: LinearMap


def _blocks(c: Space, m: Space, field_spec) -> _Blocks:
    e = direct_sum_space(c, m)
    inc = field_spec.eye(e.dim)
    inc_c = LinearMap(Signature.of(c), Signature.of(e), inc[:, : c.dim], field_spec)
    inc_m = LinearMap(Signature.of(m), Signature.of(e), inc[:, c.dim :], field_spec)
    return _Blocks(e, inc_c, inc_m, inc_c.transpose(), inc_m.transpose())


def semidirect_raw(z: NonAbelianCocycle) -> RBLieCoalgebra:
    """Δ(c+m) = Δ_C c + h m + Δ_M m + ρ m − τρ m and R(c+m) = R_C c + R_M m + φ m, unchecked."""
    b = _blocks(z.c.space, z.m.space, z.field)
    tau_rho = _tau_rho(z.m.space, z.c.space, z.rho)
    on_m = (
        kron(b.inc_c, b.inc_c) @ z.h
        + kron(b.inc_m, b.inc_m) @ z.m.delta
        + kron(b.inc_m, b.inc_c) @ z.rho
        - kron(b.inc_c, b.inc_m) @ tau_rho
    )
    delta = kron(b.inc_c, b.inc_c) @ z.c.delta @ b.proj_c + on_m @ b.proj_m
    r = b.inc_c @ z.c.r @ b.proj_c + (b.inc_m @ z.m.r + b.inc_c @ z.phi) @ b.proj_m
    return RBLieCoalgebra(b.e, delta, r, z.c.lam)


def semidirect(z: NonAbelianCocycle) -> RBLieCoalgebra:
    verdict = check_cocycle(z)
    if not verdict.passed:
        raise CocycleInvalid(verdict.failed)
    e = semidirect_raw(z)
    failed = [name for name, ok in coalgebra_report(e).items() if not ok]
    if failed:
        raise InternalInconsistency(f"semidirect coalgebra of a valid cocycle violates {failed}")
    return e


def extension_of_cocycle(z: NonAbelianCocycle) -> ExtensionSES:
    """C → C ⊕ M → M with the canonical projection retraction and inclusion section."""
    e = semidirect(z)
    b = _blocks(z.c.space, z.m.space, z.field)
    return ExtensionSES(z.c, z.m, e, b.inc_c, b.proj_m, b.proj_c, b.inc_m)


def transport_extension(x: ExtensionSES, p: LinearMap) -> ExtensionSES:
    """The same extension written in the basis of E changed by the invertible map p."""
    p_inv = p.inverse()
    if p_inv is None:
        raise ValueError("change of basis must be invertible")
    e = x.e
    delta = kron(p, p) @ e.delta @ p_inv
    moved = RBLieCoalgebra.create(e.space, delta, p @ e.r @ p_inv, e.lam)
    t = None if x.t is None else x.t @ p_inv
    s = None if x.s is None else p @ x.s
    return ExtensionSES.create(x.c, x.m, moved, p @ x.f, x.g @ p_inv, t, s)


def find_retraction(x: ExtensionSES) -> Tuple[LinearMap, LinearMap]:
    """(t, s) with t f = I_C, g s = I_M, f t + s g = I_E.

    The complement of im f is spanned by the standard basis vectors picked as
    pivots when f is extended by the identity of E.
    """
    field_spec = x.field
    exactness = extension_report(x)
    if not (exactness["f injective"] and exactness["g surjective"] and exactness["im f = ker g"]):
        raise ExactnessViolation("retractions exist only for exact sequences")
    n_e, n_c = x.e.dim, x.c.dim
    _, pivots = row_reduce(np.hstack([x.f.matrix, field_spec.eye(n_e)]), field_spec)
    complement = [p - n_c for p in pivots if p >= n_c]
    basis = np.hstack([x.f.matrix, field_spec.eye(n_e)[:, complement]])
    change = LinearMap(Signature.of(x.e.space), Signature.of(x.e.space), basis, field_spec).inverse()
    assert change is not None
    t = LinearMap(Signature.of(x.e.space), Signature.of(x.c.space), change.matrix[:n_c, :], field_spec)
    chosen = LinearMap(Signature.of(x.m.space), Signature.of(x.e.space), basis[:, n_c:], field_spec)
    squeeze = (x.g @ chosen).inverse()
    if squeeze is None:
        raise ExactnessViolation("complement of im f does not map onto M")
    return t, chosen @ squeeze


def paired_section(x: ExtensionSES, t: LinearMap) -> LinearMap:
    """The section s with f t + s g = I_E for a given retraction t."""
    if not x.t_is_retraction(t):
        raise ExactnessViolation("t f ≠ I_C")
    _, s0 = find_retraction(x)
    return (identity(x.e.space, x.field) - x.f @ t) @ s0


def splitting(x: ExtensionSES) -> Tuple[LinearMap, LinearMap]:
    """Retraction and paired section, completing whatever ``x`` carries."""
    if x.t is not None and x.s is not None:
        return x.t, x.s
    if x.t is not None:
        return x.t, paired_section(x, x.t)
    t0, s0 = find_retraction(x)
    if x.s is None:
        return t0, s0
    t = t0 @ (identity(x.e.space, x.field) - x.s @ x.g)
    return t, x.s


def cocycle_from_extension(x: ExtensionSES, t: Optional[LinearMap] = None) -> NonAbelianCocycle:
    """h_t = (t⊗t)Δ_E s − Δ_C t s, ρ_t = (g⊗t)Δ_E s, φ_t = t R_E s − R_C t s."""
    if t is None:
        t, s = splitting(x)
    else:
        s = paired_section(x, t)
    h = kron(t, t) @ x.e.delta @ s - x.c.delta @ t @ s
    rho = kron(x.g, t) @ x.e.delta @ s
    phi = t @ x.e.r @ s - x.c.r @ t @ s
    try:
        return NonAbelianCocycle.create(x.c, x.m, h, rho, phi)
    except CocycleInvalid as exc:
        raise InternalInconsistency(f"cocycle of a valid extension fails {exc.failed}") from exc


def extracted_comodule(x: ExtensionSES) -> RBComodule:
    """(M, ρ_t, R_M) over C; only meaningful when Δ_M = 0."""
    if not x.m.is_abelian():
        raise NonAbelianModule("ρ_t is a comodule only for abelian M")
    z = cocycle_from_extension(x)
    try:
        return RBComodule.create(x.c, x.m.space, z.rho, x.m.r)
    except InvalidStructure as exc:
        raise InternalInconsistency(f"extracted comodule is invalid: {exc}") from exc


# -- equivalence -----------------------------------------------------------


def _require_frame(z1: NonAbelianCocycle, z2: NonAbelianCocycle) -> None:
    if not z1.same_frame(z2):
        raise StructureMismatch("cocycles live over different (C, M, λ)")


def _equivalence_residuals(z1: NonAbelianCocycle, z2: NonAbelianCocycle, phi: LinearMap) -> Dict[str, LinearMap]:
    """Both sides of (eqc1)–(eqc3) moved to the left; zero iff satisfied."""
    field_spec = z1.field
    c, m = z1.c.space, z1.m.space
    phi = phi.relabel(m, c)
    i_c, i_m = identity(c, field_spec), identity(m, field_spec)
    phi_rho = kron(phi, i_c) @ z1.rho
    return {
        "(eqc1)": phi_rho
        - flip(c, c, field_spec) @ phi_rho
        + kron(phi, phi) @ z1.m.delta
        - z1.c.delta @ phi
        - (z2.h - z1.h),
        "(eqc2)": kron(i_m, phi) @ z1.m.delta - (z2.rho - z1.rho),
        "(eqc3)": phi @ z1.m.r - z1.c.r @ phi - (z2.phi - z1.phi),
    }


def equivalence_report(z1: NonAbelianCocycle, z2: NonAbelianCocycle, w: EquivalenceWitness) -> Dict[str, bool]:
    _require_frame(z1, z2)
    return {name: residual.is_zero() for name, residual in _equivalence_residuals(z1, z2, w.varphi).items()}


def check_equivalence_witness(z1: NonAbelianCocycle, z2: NonAbelianCocycle, w: EquivalenceWitness) -> bool:
    return all(equivalence_report(z1, z2, w).values())


def apply_equivalence(z: NonAbelianCocycle, phi: LinearMap) -> NonAbelianCocycle:
    """The cocycle z′ reached from z through φ by (eqc1)–(eqc3)."""
    field_spec = z.field
    c, m = z.c.space, z.m.space
    phi = phi.relabel(m, c)
    i_c, i_m = identity(c, field_spec), identity(m, field_spec)
    phi_rho = kron(phi, i_c) @ z.rho
    h = z.h + phi_rho - flip(c, c, field_spec) @ phi_rho + kron(phi, phi) @ z.m.delta - z.c.delta @ phi
    rho = z.rho + kron(i_m, phi) @ z.m.delta
    shifted = z.phi + phi @ z.m.r - z.c.r @ phi
    try:
        return NonAbelianCocycle.create(z.c, z.m, h, rho, shifted)
    except CocycleInvalid as exc:
        raise InternalInconsistency(f"equivalent triple fails {exc.failed}") from exc


def theta_from_witness(z1: NonAbelianCocycle, z2: NonAbelianCocycle, w: EquivalenceWitness) -> LinearMap:
    """θ(c + m) = c + φ(m) + m from the semidirect of z1 to that of z2."""
    _require_frame(z1, z2)
    b = _blocks(z1.c.space, z1.m.space, z1.field)
    return b.inc_c @ b.proj_c + (b.inc_c @ w.varphi.relabel(z1.m.space, z1.c.space) + b.inc_m) @ b.proj_m


def search_witness(
    m: Space,
    c: Space,
    field_spec,
    linear: List[Callable[[LinearMap], LinearMap]],
    quadratic: Callable[[LinearMap], LinearMap],
    quadratic_is_affine: bool,
    budget: int,
    what: str,
) -> Union[LinearMap, None, Undecided]:
    """Some φ: M → C annihilating every constraint, ``None``, or :class:`Undecided`.

    ``linear`` are affine in φ; ``quadratic`` is affine only when
    ``quadratic_is_affine`` (the Δ_M = 0 case).
    """
    if quadratic_is_affine:
        solution = affine_solution_space(m, c, field_spec, list(linear) + [quadratic])
        return None if solution is None else solution.particular
    candidates = affine_solution_space(m, c, field_spec, linear)
    if candidates is None:
        return None
    if candidates.dimension == 0:
        phi = candidates.particular
        return phi if quadratic(phi).is_zero() else None
    if not field_spec.is_prime_field:
        return Undecided(f"{what}: quadratic equation over QQ with a {candidates.dimension}-dimensional linear solution set")
    count = field_spec.characteristic**candidates.dimension
    if count > budget:
        raise SearchBudgetExceeded(count, budget, what)
    logger.debug("%s: searching %d candidates", what, count)
    for phi in candidates.points():
        if quadratic(phi).is_zero():
            return phi
    return None


def solve_equivalence(
    z1: NonAbelianCocycle, z2: NonAbelianCocycle, budget: int
) -> Union[EquivalenceWitness, None, Undecided]:
    """A witness φ for z1 ~ z2, ``None`` if none exists, or :class:`Undecided`."""
    _require_frame(z1, z2)

    def residual(name: str) -> Callable[[LinearMap], LinearMap]:
        return lambda phi: _equivalence_residuals(z1, z2, phi)[name]

    found = search_witness(
        z1.m.space,
        z1.c.space,
        z1.field,
        [residual("(eqc2)"), residual("(eqc3)")],
        residual("(eqc1)"),
        z1.m.is_abelian(),
        budget,
        "equivalence search",
    )
    return EquivalenceWitness(found) if isinstance(found, LinearMap) else found


def check_extension_equivalence(x1: ExtensionSES, x2: ExtensionSES, theta: LinearMap) -> bool:
    """θ is a bijective RB-coalgebra morphism with θ f1 = f2 and g2 θ = g1."""
    if not (x1.c == x2.c and x1.m == x2.m):
        raise StructureMismatch("extensions of different (C, M)")
    if theta.shape != (x2.e.dim, x1.e.dim):
        raise ShapeMismatch(f"θ has shape {theta.shape}, expected {(x2.e.dim, x1.e.dim)}")
    return (
        theta.is_invertible()
        and check_morphism(CoalgebraMorphism(x1.e, x2.e, theta))
        and theta @ x1.f == x2.f
        and x2.g @ theta == x1.g
    )


# -- classification --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OrbitReport:
    candidates: int
    cocycles: int
    representatives: Tuple[NonAbelianCocycle, ...]
    class_sizes: Tuple[int, ...]

    @property
    def class_count(self) -> int:
        return len(self.representatives)


def _maps_from(entries: Tuple[int, ...], domain: Space, codomain: Signature, field_spec) -> LinearMap:
    return LinearMap(
        Signature.of(domain), codomain, np.array(entries, dtype=object).reshape(codomain.dim, domain.dim), field_spec
    )


def classify_small(
    c: RBLieCoalgebra,
    m: RBLieCoalgebra,
    budget: int,
    fixed_rho: Optional[LinearMap] = None,
) -> OrbitReport:
    """Enumerate every triple over 𝔽_p, keep the cocycles, and group them into classes.

    With ``fixed_rho`` only triples with that ρ are enumerated.
    """
    field_spec = c.field
    if not field_spec.is_prime_field:
        raise ValueError("classification enumerates and needs a prime field")
    if not c.same_frame(m):
        raise StructureMismatch("C and M must share field and λ")
    sig_h = Signature.of(c.space, c.space)
    sig_rho = Signature.of(m.space, c.space)
    sig_phi = Signature.of(c.space)
    sizes = [sig_h.dim * m.dim, 0 if fixed_rho is not None else sig_rho.dim * m.dim, c.dim * m.dim]
    count = field_spec.characteristic ** sum(sizes)
    if count > budget:
        raise SearchBudgetExceeded(count, budget, "cocycle enumeration")
    logger.info("classifying %d candidate triples over %s", count, field_spec.describe())
    representatives: List[NonAbelianCocycle] = []
    members: List[int] = []
    n_cocycles = 0
    for entries in itertools.product(field_spec.elements(), repeat=sum(sizes)):
        h_part = entries[: sizes[0]]
        rho_part = entries[sizes[0] : sizes[0] + sizes[1]]
        phi_part = entries[sizes[0] + sizes[1] :]
        rho = fixed_rho if fixed_rho is not None else _maps_from(rho_part, m.space, sig_rho, field_spec)
        z = NonAbelianCocycle(
            c,
            m,
            _maps_from(h_part, m.space, sig_h, field_spec),
            rho,
            _maps_from(phi_part, m.space, sig_phi, field_spec),
        )
        if not check_cocycle(z).passed:
            continue
        n_cocycles += 1
        for index, rep in enumerate(representatives):
            verdict = solve_equivalence(rep, z, budget)
            if isinstance(verdict, EquivalenceWitness):
                members[index] += 1
                break
        else:
            representatives.append(z)
            members.append(1)
    logger.info("%d cocycles in %d classes", n_cocycles, len(representatives))
    return OrbitReport(count, n_cocycles, tuple(representatives), tuple(members))
