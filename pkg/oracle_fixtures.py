#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Hand-written fixtures, exhaustive enumerators and independent oracles.

The oracles do not use the matrix code of the engine:

* :func:`independent_rank` is fraction-free Bareiss elimination;
* :func:`independent_cocycle_check` expands the semidirect structure of a
  triple basis vector by basis vector on dictionaries and checks the three
  coalgebra axioms there;
* :func:`independent_class_count` counts orbits by conjugating the expanded
  semidirect structure with θ(c + m) = c + φ(m) + m.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from engine_errors import InvalidStructure, SearchBudgetExceeded
from exact_linalg import FieldSpec, LinearMap, Scalar, Signature, Space, zero_map
from nonabelian_extension import (
    ExtensionSES,
    NonAbelianCocycle,
    extension_of_cocycle,
    transport_extension,
)
from rb_coalgebra import RBLieCoalgebra, coalgebra_from_constants
from rb_comodule import RBComodule, adjoint

__all__ = [
    "STRUCTURE_KINDS",
    "FixtureEntry",
    "FixtureCatalog",
    "zero_structure",
    "dim2_coalgebra",
    "builtin_fixtures",
    "enumerate_structures",
    "independent_rank",
    "independent_cocycle_check",
    "independent_class_count",
]

logger = logging.getLogger(__name__)

STRUCTURE_KINDS = ("coalgebra", "linear_map", "rb_operator", "cocycle")

Fixture = Union[RBLieCoalgebra, RBComodule, NonAbelianCocycle, ExtensionSES]


@dataclass(frozen=True, eq=False)
class FixtureEntry:
    name: str
    kind: str
    value: Fixture
    note: str = ""


@dataclass
class FixtureCatalog:
    entries: Dict[str, FixtureEntry] = field(default_factory=dict)

    def add(self, name: str, value: Fixture, note: str = "") -> None:
        if name in self.entries:
            raise ValueError(f"duplicate fixture {name}")
        kind = {
            RBLieCoalgebra: "coalgebra",
            RBComodule: "comodule",
            NonAbelianCocycle: "cocycle",
            ExtensionSES: "extension",
        }[type(value)]
        self.entries[name] = FixtureEntry(name, kind, value, note)

    def __getitem__(self, name: str) -> Fixture:
        return self.entries[name].value

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def names(self, kind: Optional[str] = None) -> List[str]:
        return [name for name, entry in self.entries.items() if kind is None or entry.kind == kind]

    def values(self, kind: str) -> List[Fixture]:
        return [self.entries[name].value for name in self.names(kind)]


def zero_structure(field_spec: FieldSpec, dim: int = 1, lam: object = 0, prefix: str = "z") -> RBLieCoalgebra:
    """Δ = 0, R = 0; every axiom holds for any λ."""
    return coalgebra_from_constants(Space.standard(dim, prefix), [], None, lam, field_spec)


def dim2_coalgebra(field_spec: FieldSpec, r_rows: Optional[List[List[object]]], lam: object, labels=("x", "y")) -> RBLieCoalgebra:
    """Δ(x) = x⊗y − y⊗x, Δ(y) = 0."""
    return coalgebra_from_constants(Space(tuple(labels)), [(0, 1, 0, 1), (1, 0, 0, -1)], r_rows, lam, field_spec)


def _cocycle(c: RBLieCoalgebra, m: RBLieCoalgebra, h_rows, rho_rows, phi_rows) -> NonAbelianCocycle:
    field_spec = c.field
    sig_h = Signature.of(c.space, c.space)
    sig_rho = Signature.of(m.space, c.space)

    def build(rows, codomain):
        if rows is None:
            return zero_map(m.space, codomain, field_spec)
        return LinearMap.from_rows(m.space, codomain, rows, field_spec)

    return NonAbelianCocycle.create(c, m, build(h_rows, sig_h), build(rho_rows, sig_rho), build(phi_rows, Signature.of(c.space)))


def _abelian_extension_cocycle(field_spec: FieldSpec) -> NonAbelianCocycle:
    """C = span{y}, M = span{x} with R_M = 1 and ρ(x) = x⊗y at λ = −1."""
    c = coalgebra_from_constants(Space(("y",)), [], [[0]], -1, field_spec)
    m = coalgebra_from_constants(Space(("x",)), [], [[1]], -1, field_spec)
    return _cocycle(c, m, None, [[1]], None)


def _nonabelian_cocycle(field_spec: FieldSpec, p: int, q: int, phi: Sequence[int]) -> NonAbelianCocycle:
    """C = k, M the dim-2 coalgebra, ρ(m) = B m ⊗ c for the coderivation B(x) = p x + q y, B(y) = 0."""
    c = zero_structure(field_spec, 1, 0, prefix="c")
    m = dim2_coalgebra(field_spec, None, 0)
    return _cocycle(c, m, None, [[p, 0], [q, 0]], [list(phi)])


def builtin_fixtures() -> FixtureCatalog:
    """Every entry is built through a checked constructor."""
    qq, gf2, gf3, gf5 = FieldSpec.rationals(), FieldSpec.prime(2), FieldSpec.prime(3), FieldSpec.prime(5)
    catalog = FixtureCatalog()

    for fs in (qq, gf2, gf3, gf5):
        name = fs.describe()
        catalog.add(f"zero-{name}", zero_structure(fs, 1, 0), "Δ = 0, R = 0")
        catalog.add(f"zero2-{name}", zero_structure(fs, 2, 1), "Δ = 0, R = 0 on two generators, λ = 1")
    for fs in (qq, gf3, gf5):
        name = fs.describe()
        catalog.add(f"dim2-r0-{name}", dim2_coalgebra(fs, None, 1), "R = 0, λ = 1")
        catalog.add(f"dim2-neg-lambda-{name}", dim2_coalgebra(fs, [[-2, 0], [0, -2]], 2), "R = −λI, λ = 2")
        catalog.add(f"dim2-diag-{name}", dim2_coalgebra(fs, [[1, 0], [0, 0]], -1), "R = diag(1, 0), λ = −1")
        catalog.add(f"adjoint-dim2-diag-{name}", adjoint(dim2_coalgebra(fs, [[1, 0], [0, 0]], -1)), "adjoint comodule")
        catalog.add(f"adjoint-dim2-r0-{name}", adjoint(dim2_coalgebra(fs, None, 1)), "adjoint comodule")
        catalog.add(f"adjoint-zero2-{name}", adjoint(zero_structure(fs, 2, 1)), "adjoint comodule")

    for fs in (qq, gf3):
        name = fs.describe()
        direct = _cocycle(dim2_coalgebra(fs, None, 1), zero_structure(fs, 1, 1, prefix="m"), None, None, None)
        catalog.add(f"cocycle-direct-sum-{name}", direct, "h = ρ = φ = 0")
        catalog.add(f"extension-direct-sum-{name}", extension_of_cocycle(direct), "C ⊕ M with the product structure")

    for fs in (qq, gf3, gf5):
        z = _abelian_extension_cocycle(fs)
        catalog.add(f"cocycle-abelian-{fs.describe()}", z, "semidirect is the dim-2 coalgebra with R = diag(1, 0)")
        catalog.add(f"extension-abelian-{fs.describe()}", extension_of_cocycle(z))

    scramble = LinearMap.from_rows(Space(("y", "x")), Space(("y", "x")), [[1, 1], [1, 2]], qq)
    catalog.add(
        "extension-scrambled-QQ",
        transport_extension(catalog["extension-abelian-QQ"], scramble),  # type: ignore[arg-type]
        "abelian extension after a change of basis of E",
    )

    z3 = _nonabelian_cocycle(gf3, 1, 1, (1, 0))
    catalog.add("cocycle-nonabelian-GF(3)", z3, "non-abelian M, ρ from a coderivation")
    catalog.add("extension-nonabelian-GF(3)", extension_of_cocycle(z3))
    catalog.add("cocycle-nonabelian-plain-GF(3)", _nonabelian_cocycle(gf3, 0, 0, (0, 0)), "h = ρ = φ = 0")
    _verify_with_oracle(catalog)
    logger.debug("loaded %d fixtures", len(catalog.entries))
    return catalog


# -- enumeration -----------------------------------------------------------


def _maps(domain: Union[Space, Signature], codomain: Union[Space, Signature], field_spec: FieldSpec, entries) -> LinearMap:
    dom = domain if isinstance(domain, Signature) else Signature.of(domain)
    cod = codomain if isinstance(codomain, Signature) else Signature.of(codomain)
    return LinearMap(dom, cod, np.array(entries, dtype=object).reshape(cod.dim, dom.dim), field_spec)


def enumerate_structures(
    field_spec: FieldSpec,
    dims: Sequence[int],
    kind: str,
    budget: int,
    lam: object = 0,
    base: Optional[RBLieCoalgebra] = None,
    module: Optional[RBLieCoalgebra] = None,
) -> Iterator[object]:
    """Raw candidates in lexicographic order of their flattened entries.

    * ``coalgebra``: every Δ on a space of dimension ``dims[0]``, with R = 0;
    * ``linear_map``: every map of dimension ``dims[0]`` → ``dims[1]``;
    * ``rb_operator``: every R on ``base`` (default: Δ = 0 of dimension ``dims[0]``);
    * ``cocycle``: every (h, ρ, φ) on ``base``, ``module`` (default: zero structures of ``dims``).
    """
    if kind not in STRUCTURE_KINDS:
        raise ValueError(f"unknown structure kind {kind!r}")
    if not field_spec.is_prime_field:
        raise ValueError("enumeration needs a prime field")
    lam_scalar = Scalar.of(lam, field_spec)
    if kind in ("coalgebra", "rb_operator"):
        space = base.space if base is not None else Space.standard(dims[0])
        n = space.dim
        params = n**3 if kind == "coalgebra" else n * n
    elif kind == "linear_map":
        params = dims[0] * dims[1]
    else:
        base = base if base is not None else zero_structure(field_spec, dims[0], lam, prefix="c")
        module = module if module is not None else zero_structure(field_spec, dims[1], lam, prefix="m")
        c_dim, m_dim = base.dim, module.dim
        params = m_dim * (c_dim * c_dim + m_dim * c_dim + c_dim)
    count = field_spec.characteristic**params
    if count > budget:
        raise SearchBudgetExceeded(count, budget, f"{kind} enumeration")
    logger.debug("enumerating %d %s candidates", count, kind)

    for entries in itertools.product(field_spec.elements(), repeat=params):
        if kind == "coalgebra":
            delta = _maps(space, Signature.of(space, space), field_spec, entries)
            yield RBLieCoalgebra(space, delta, zero_map(space, space, field_spec), lam_scalar)
        elif kind == "rb_operator":
            delta = base.delta if base is not None else zero_map(space, Signature.of(space, space), field_spec)
            scalar = base.lam if base is not None else lam_scalar
            yield RBLieCoalgebra(space, delta, _maps(space, space, field_spec, entries), scalar)
        elif kind == "linear_map":
            yield _maps(Space.standard(dims[0], "u"), Space.standard(dims[1], "v"), field_spec, entries)
        else:
            assert base is not None and module is not None
            c, m = base.space, module.space
            n_h = c.dim * c.dim * m.dim
            n_rho = m.dim * c.dim * m.dim
            yield NonAbelianCocycle(
                base,
                module,
                _maps(m, Signature.of(c, c), field_spec, entries[:n_h]),
                _maps(m, Signature.of(m, c), field_spec, entries[n_h : n_h + n_rho]),
                _maps(m, c, field_spec, entries[n_h + n_rho :]),
            )


# -- Bareiss rank ----------------------------------------------------------


def independent_rank(matrix: np.ndarray, field_spec: FieldSpec) -> int:
    """Rank by fraction-free Bareiss elimination."""
    arr = np.asarray(matrix, dtype=object)
    if arr.size == 0:
        return 0
    p = field_spec.characteristic
    if p:
        rows = [[int(v) % p for v in row] for row in arr]
    else:
        rows = []
        for row in arr:
            fracs = [Fraction(v) for v in row]
            scale = 1
            for v in fracs:
                scale = math.lcm(scale, v.denominator)
            rows.append([int(v * scale) for v in fracs])
    n_rows, n_cols = len(rows), len(rows[0])
    rank, previous = 0, 1
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        lead = rows[rank][col]
        for i in range(rank + 1, n_rows):
            below = rows[i][col]
            for j in range(col + 1, n_cols):
                value = rows[i][j] * lead - below * rows[rank][j]
                if p:
                    rows[i][j] = value * pow(previous, -1, p) % p
                else:
                    rows[i][j] = value // previous
            rows[i][col] = 0
        previous = lead
        rank += 1
        if rank == n_rows:
            break
    return rank


# -- cocycle check by expansion --------------------------------------------

Token = Tuple[str, int]
Tensor = Dict[Tuple[Token, ...], object]


class _Expanded:
    """A coalgebra structure stored as basis-vector images on dictionaries."""

    def __init__(self, field_spec: FieldSpec, lam: object) -> None:
        self.field = field_spec
        self.lam = field_spec.coerce(lam)
        self.delta: Dict[Token, Tensor] = defaultdict(dict)
        self.r: Dict[Token, Tensor] = defaultdict(dict)
        self.tokens: List[Token] = []

    def add(self, table: Dict[Token, Tensor], source: Token, key: Tuple[Token, ...], coeff: object) -> None:
        if coeff == 0:
            return
        bucket = table[source]
        bucket[key] = self.field.coerce(bucket.get(key, 0) + coeff)

    def _clean(self, t: Tensor) -> Tensor:
        return {k: v for k, v in t.items() if self.field.coerce(v) != 0}

    def _combine(self, *parts: Tuple[object, Tensor]) -> Tensor:
        out: Tensor = {}
        for weight, t in parts:
            for key, value in t.items():
                out[key] = self.field.coerce(out.get(key, 0) + weight * value)
        return self._clean(out)

    def on_slot(self, table: Dict[Token, Tensor], t: Tensor, slot: int) -> Tensor:
        """Apply the map stored in ``table`` to one tensor factor."""
        out: Tensor = {}
        for key, value in t.items():
            for image, coeff in table[key[slot]].items():
                new_key = key[:slot] + image + key[slot + 1 :]
                out[new_key] = self.field.coerce(out.get(new_key, 0) + value * coeff)
        return self._clean(out)

    @staticmethod
    def swap(t: Tensor, i: int) -> Tensor:
        out: Tensor = {}
        for key, value in t.items():
            k = list(key)
            k[i], k[i + 1] = k[i + 1], k[i]
            out[tuple(k)] = value
        return out

    def axioms(self) -> bool:
        for token in self.tokens:
            d = self._clean(dict(self.delta[token]))
            if self._combine((1, d), (1, self.swap(d, 0))):
                return False
            right = self.on_slot(self.delta, d, 1)
            left = self.on_slot(self.delta, d, 0)
            if self._combine((1, right), (-1, left), (1, self.swap(left, 1))):
                return False
            rr = self.on_slot(self.r, self.on_slot(self.r, d, 0), 1)
            d_r = self.on_slot(self.delta, self._clean(dict(self.r[token])), 0)
            rhs = self._combine(
                (1, self.on_slot(self.r, d_r, 1)),
                (1, self.on_slot(self.r, d_r, 0)),
                (self.lam, d_r),
            )
            if self._combine((1, rr), (-1, rhs)):
                return False
        return True


def _expanded_semidirect(z: NonAbelianCocycle) -> _Expanded:
    fs = z.field
    cd, md = z.c.dim, z.m.dim
    ex = _Expanded(fs, z.c.lam.value)
    ex.tokens = [("c", i) for i in range(cd)] + [("m", j) for j in range(md)]
    dc, dm, rc, rm = z.c.delta.matrix, z.m.delta.matrix, z.c.r.matrix, z.m.r.matrix
    h, rho, phi = z.h.matrix, z.rho.matrix, z.phi.matrix
    for k in range(cd):
        for i, j in itertools.product(range(cd), repeat=2):
            ex.add(ex.delta, ("c", k), (("c", i), ("c", j)), dc[i * cd + j, k])
        for i in range(cd):
            ex.add(ex.r, ("c", k), (("c", i),), rc[i, k])
    for k in range(md):
        for i, j in itertools.product(range(cd), repeat=2):
            ex.add(ex.delta, ("m", k), (("c", i), ("c", j)), h[i * cd + j, k])
        for i, j in itertools.product(range(md), repeat=2):
            ex.add(ex.delta, ("m", k), (("m", i), ("m", j)), dm[i * md + j, k])
        for a, j in itertools.product(range(md), range(cd)):
            coeff = rho[a * cd + j, k]
            ex.add(ex.delta, ("m", k), (("m", a), ("c", j)), coeff)
            ex.add(ex.delta, ("m", k), (("c", j), ("m", a)), fs.neg(fs.coerce(coeff)))
        for i in range(md):
            ex.add(ex.r, ("m", k), (("m", i),), rm[i, k])
        for i in range(cd):
            ex.add(ex.r, ("m", k), (("c", i),), phi[i, k])
    return ex


def independent_cocycle_check(z: NonAbelianCocycle) -> bool:
    """True iff the expanded semidirect structure of (h, ρ, φ) is an RB Lie coalgebra."""
    return _expanded_semidirect(z).axioms()


# -- orbit count -----------------------------------------------------------


def _theta_image(ex: _Expanded, phi: np.ndarray, sign: int) -> Dict[Token, Tensor]:
    """θ(c) = c, θ(m) = m + sign·φ(m) as a basis table."""
    table: Dict[Token, Tensor] = defaultdict(dict)
    for token in ex.tokens:
        kind, k = token
        table[token][(token,)] = ex.field.one()
        if kind == "m":
            for i in range(phi.shape[0]):
                coeff = ex.field.coerce(sign * phi[i, k])
                if coeff != 0:
                    table[token][(("c", i),)] = coeff
    return table


def _conjugated_key(ex: _Expanded, phi: np.ndarray) -> tuple:
    """Canonical key of θΔθ⁻¹ and θRθ⁻¹ restricted to the M generators."""
    theta = _theta_image(ex, phi, 1)
    theta_inv = _theta_image(ex, phi, -1)
    parts = []
    for token in ex.tokens:
        if token[0] != "m":
            continue
        pre = theta_inv[token]
        d = ex.on_slot(ex.delta, pre, 0)
        d = ex.on_slot(theta, ex.on_slot(theta, d, 0), 1)
        r = ex.on_slot(theta, ex.on_slot(ex.r, pre, 0), 0)
        parts.append((tuple(sorted(d.items())), tuple(sorted(r.items()))))
    return tuple(parts)


def independent_class_count(c: RBLieCoalgebra, m: RBLieCoalgebra, budget: int) -> Tuple[int, int]:
    """(number of cocycles, number of classes) by orbits of θ-conjugation."""
    field_spec = c.field
    cocycles = [
        z
        for z in enumerate_structures(field_spec, (c.dim, m.dim), "cocycle", budget, base=c, module=m)
        if independent_cocycle_check(z)  # type: ignore[arg-type]
    ]
    phis = list(itertools.product(field_spec.elements(), repeat=c.dim * m.dim))
    if len(cocycles) * len(phis) > budget:
        raise SearchBudgetExceeded(len(cocycles) * len(phis), budget, "orbit count")
    zero_phi = np.zeros((c.dim, m.dim), dtype=object)
    keys = [_conjugated_key(_expanded_semidirect(z), zero_phi) for z in cocycles]  # type: ignore[arg-type]
    seen = set()
    classes = 0
    for z, key in zip(cocycles, keys):
        if key in seen:
            continue
        classes += 1
        ex = _expanded_semidirect(z)  # type: ignore[arg-type]
        for entries in phis:
            seen.add(_conjugated_key(ex, np.array(entries, dtype=object).reshape(c.dim, m.dim)))
    return len(cocycles), classes


def _verify_with_oracle(catalog: FixtureCatalog) -> None:
    for entry in catalog.entries.values():
        if entry.kind == "cocycle" and not independent_cocycle_check(entry.value):  # type: ignore[arg-type]
            raise InvalidStructure(f"fixture {entry.name}", ["expanded semidirect axioms"])
