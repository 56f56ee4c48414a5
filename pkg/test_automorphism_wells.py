from __future__ import annotations

import numpy as np
import pytest

from automorphism_wells import (
    AutPair,
    chi_map,
    compatible_pair_check,
    decide_extensible,
    enumerate_automorphisms,
    enumerate_c_preserving,
    extensibility_residuals,
    gamma_from_phi,
    induced_cocycle,
    k_map,
    wells_classes_agree,
    wells_map,
    wells_sequence_check,
    z1_nab_basis,
    z1_nab_members,
)
from cohomology import reduced_z1_basis
from engine_errors import InvalidStructure, MembershipViolation, NotCPreserving, SearchBudgetExceeded
from exact_linalg import FieldSpec, LinearMap, Signature, array_rank, zero_map
from nonabelian_extension import (
    EquivalenceWitness,
    NonAbelianCocycle,
    check_cocycle,
    check_equivalence_witness,
    cocycle_from_extension,
    extension_of_cocycle,
    extracted_comodule,
    solve_equivalence,
    splitting,
)
from oracle_fixtures import builtin_fixtures, dim2_coalgebra, zero_structure

QQ = FieldSpec.rationals()
GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)

CATALOG = builtin_fixtures()
BUDGET = 100_000


def build_pair(x, alpha: int, beta: int) -> AutPair:
    fs = x.field
    return AutPair.create(
        x.c,
        x.m,
        LinearMap.from_rows(x.c.space, x.c.space, [[alpha]], fs),
        LinearMap.from_rows(x.m.space, x.m.space, [[beta]], fs),
    )


def zero_cocycle(c, m) -> NonAbelianCocycle:
    fs = c.field
    return NonAbelianCocycle.create(
        c,
        m,
        zero_map(m.space, Signature.of(c.space, c.space), fs),
        zero_map(m.space, Signature.of(m.space, c.space), fs),
        zero_map(m.space, c.space, fs),
    )


def build_zero_extension(field_spec: FieldSpec = GF3):
    """C = M = k with every structure map zero."""
    c = zero_structure(field_spec, 1, 0, prefix="c")
    m = zero_structure(field_spec, 1, 0, prefix="m")
    return extension_of_cocycle(zero_cocycle(c, m))


def square(x, rows):
    return LinearMap.from_rows(x.e.space, x.e.space, rows, x.field)


def test_aut_pair_construction():
    x = CATALOG["extension-abelian-QQ"]
    with pytest.raises(InvalidStructure) as exc:
        build_pair(x, 0, 1)
    assert exc.value.failed == ("α ∈ Aut(C)",)
    p = build_pair(x, 2, 3)
    assert p.compose(p.inverse()) == AutPair.identity_of(x.c, x.m)
    assert p.key() == ((2,), (3,))


def test_extensible_pairs_of_the_abelian_extension():
    x = CATALOG["extension-abelian-QQ"]
    scenarios = [
        ("identity", 1, 1, True),
        ("scale M", 1, 2, True),
        ("scale both", 2, 2, False),
        ("scale C", 2, 1, False),
    ]
    for name, alpha, beta, expected in scenarios:
        verdict = decide_extensible(x, build_pair(x, alpha, beta), BUDGET)
        assert verdict.extensible is expected, name
        if expected:
            assert verdict.witness.is_zero()
            assert verdict.gamma.format_rows() == [["1", "0"], ["0", str(beta)]]
        assert wells_map(x, build_pair(x, alpha, beta), BUDGET).is_zero() is expected, name


def test_candidate_witness_is_tried_first():
    x = CATALOG["extension-abelian-QQ"]
    z = CATALOG["cocycle-abelian-QQ"]
    p = build_pair(x, 1, 2)
    candidate = zero_map(x.m.space, x.c.space, QQ)
    verdict = decide_extensible(x, p, BUDGET, candidate)
    assert verdict.extensible is True
    assert check_cocycle(induced_cocycle(z, p)).passed
    residuals = extensibility_residuals(z, p, candidate)
    assert set(residuals) == {"(AE1)", "(AE2)", "(AE3)"}
    assert all(r.is_zero() for r in residuals.values())


def test_wells_classes_agree():
    x = CATALOG["extension-abelian-QQ"]
    w12 = wells_map(x, build_pair(x, 1, 2), BUDGET)
    w13 = wells_map(x, build_pair(x, 1, 3), BUDGET)
    w22 = wells_map(x, build_pair(x, 2, 2), BUDGET)
    assert wells_classes_agree(w12, w13) is True
    assert wells_classes_agree(w12, w22) is False
    assert w22.rho.format_rows() == [["1"]]


def test_k_map_and_membership_guards():
    x = CATALOG["extension-abelian-QQ"]
    assert k_map(x, square(x, [[1, 0], [0, 2]])) == build_pair(x, 1, 2)
    with pytest.raises(MembershipViolation):
        k_map(x, square(x, [[0, 1], [1, 0]]))
    zx = build_zero_extension()
    with pytest.raises(NotCPreserving):
        k_map(zx, square(zx, [[0, 1], [1, 0]]))


def test_chi_inverts_gamma_from_phi():
    x = build_zero_extension()
    assert len(z1_nab_members(zero_cocycle(x.c, x.m), BUDGET)) == 3
    one = LinearMap.from_rows(x.m.space, x.c.space, [[1]], GF3)
    gamma = gamma_from_phi(x, one)
    assert gamma.format_rows() == [["1", "1"], ["0", "1"]]
    assert chi_map(x, gamma) == one
    with pytest.raises(MembershipViolation):
        chi_map(x, square(x, [[2, 0], [0, 1]]))


def test_one_cocycles():
    assert z1_nab_basis(CATALOG["cocycle-abelian-QQ"]) == []
    assert z1_nab_basis(CATALOG["cocycle-nonabelian-GF(3)"]) == []
    x = CATALOG["extension-abelian-QQ"]
    with pytest.raises(MembershipViolation):
        gamma_from_phi(x, LinearMap.from_rows(x.m.space, x.c.space, [[1]], QQ))


def test_compatible_pairs():
    x = CATALOG["extension-abelian-QQ"]
    com = extracted_comodule(x)
    assert compatible_pair_check(com, build_pair(x, 1, 2))
    assert not compatible_pair_check(com, build_pair(x, 2, 2))


def test_automorphism_enumeration():
    assert len(enumerate_automorphisms(zero_structure(GF5), BUDGET)) == 4
    # φ(x) = a x + b y, φ(y) = y with a ≠ 0
    assert len(enumerate_automorphisms(dim2_coalgebra(GF3, None, 1), BUDGET)) == 6
    with pytest.raises(SearchBudgetExceeded):
        enumerate_automorphisms(dim2_coalgebra(GF3, None, 1), 80)
    assert len(enumerate_c_preserving(CATALOG["extension-abelian-GF(5)"], BUDGET)) == 4


def all_pairs(x) -> list:
    return [
        AutPair(alpha, beta)
        for alpha in enumerate_automorphisms(x.c, BUDGET)
        for beta in enumerate_automorphisms(x.m, BUDGET)
    ]


def span_rank(maps, field_spec: FieldSpec) -> int:
    if not maps:
        return 0
    return array_rank(np.array([a.vec() for a in maps], dtype=object), field_spec)


def shifted_retraction(x):
    """t + u g for the all-ones u: M → C."""
    t, _ = splitting(x)
    u = LinearMap.from_rows(x.m.space, x.c.space, [[1] * x.m.dim for _ in range(x.c.dim)], x.field)
    return t + u @ x.g


def test_cocycle_class_does_not_depend_on_the_retraction():
    scenarios = [
        ("extension-abelian-QQ", [build_pair(CATALOG["extension-abelian-QQ"], 2, 2)], True),
        ("extension-direct-sum-QQ", [], True),
        ("extension-direct-sum-GF(3)", None, True),
        ("extension-nonabelian-GF(3)", None, False),
    ]
    for name, pairs, differs in scenarios:
        x = CATALOG[name]
        t2 = shifted_retraction(x)
        z1, z2 = cocycle_from_extension(x), cocycle_from_extension(x, t2)
        if differs:
            assert z1 != z2, name
        witness = solve_equivalence(z1, z2, BUDGET)
        assert isinstance(witness, EquivalenceWitness), name
        assert check_equivalence_witness(z1, z2, witness), name
        if pairs is None:
            pairs = all_pairs(x)
        for p in [AutPair.identity_of(x.c, x.m), *pairs]:
            w1, w2 = wells_map(x, p, BUDGET), wells_map(x, p, BUDGET, t2)
            assert wells_classes_agree(w1, w2) is True, (name, p.key())
            assert w1.is_zero() == w2.is_zero(), (name, p.key())


def test_extensible_exactly_when_the_wells_class_vanishes():
    extensions = [build_zero_extension(GF2), build_zero_extension(GF3)]
    extensions += [CATALOG[name] for name in CATALOG.names("extension") if CATALOG[name].field.is_prime_field]
    for x in extensions:
        for p in all_pairs(x):
            verdict = decide_extensible(x, p, BUDGET)
            assert verdict.extensible == wells_map(x, p, BUDGET).is_zero(), p.key()
            if verdict.extensible:
                assert k_map(x, verdict.gamma) == p


def test_one_cocycles_span_the_reduced_first_cocycles():
    scenarios = [
        ("extension-abelian-QQ", 0),
        ("extension-abelian-GF(3)", 0),
        ("extension-abelian-GF(5)", 0),
        ("extension-scrambled-QQ", 0),
        ("extension-direct-sum-QQ", 1),
        ("extension-direct-sum-GF(3)", 1),
    ]
    for name, expected in scenarios:
        x = CATALOG[name]
        nab = z1_nab_basis(cocycle_from_extension(x))
        reduced = reduced_z1_basis(extracted_comodule(x))
        ranks = (span_rank(nab, x.field), span_rank(reduced, x.field), span_rank(nab + reduced, x.field))
        assert ranks == (expected, expected, expected), name


def test_compatible_pairs_form_a_group():
    for name, expected in (("extension-abelian-GF(5)", 4), ("extension-abelian-GF(3)", 2), ("extension-direct-sum-GF(3)", 12)):
        x = CATALOG[name]
        com = extracted_comodule(x)
        compatible = [p for p in all_pairs(x) if compatible_pair_check(com, p)]
        assert len(compatible) == expected, name
        assert compatible_pair_check(com, AutPair.identity_of(x.c, x.m))
        for p in compatible:
            assert compatible_pair_check(com, p.inverse()), name
            for q in compatible:
                assert compatible_pair_check(com, p.compose(q)), name


def test_wells_sequence_abelian():
    report = wells_sequence_check(CATALOG["extension-abelian-GF(5)"], BUDGET)
    assert report.abelian
    assert report.exact, report.to_dict()
    assert report.to_dict()["groups"] == {"Z1_nab": 1, "Aut_C(E)": 4, "pairs": 4}


def test_wells_sequence_nonabelian():
    report = wells_sequence_check(CATALOG["extension-nonabelian-GF(3)"], BUDGET)
    assert not report.abelian
    assert report.disagreements == 0
    assert report.exact, report.to_dict()


def test_wells_sequence_with_nontrivial_one_cocycles():
    report = wells_sequence_check(CATALOG["extension-direct-sum-GF(3)"], BUDGET)
    assert report.abelian
    assert report.exact, report.to_dict()
    # Aut(C) has 6 elements, Aut(M) has 2, b ranges over Ker Δ_C
    assert report.to_dict()["groups"] == {"Z1_nab": 3, "Aut_C(E)": 36, "pairs": 12}


def test_wells_sequence_needs_a_prime_field():
    with pytest.raises(ValueError):
        wells_sequence_check(CATALOG["extension-abelian-QQ"], BUDGET)


def run_tests() -> None:
    scenarios = [
        ("automorphism pairs", test_aut_pair_construction),
        ("extensible pairs", test_extensible_pairs_of_the_abelian_extension),
        ("candidate witness", test_candidate_witness_is_tried_first),
        ("Wells classes", test_wells_classes_agree),
        ("K map", test_k_map_and_membership_guards),
        ("χ and γ", test_chi_inverts_gamma_from_phi),
        ("1-cocycles", test_one_cocycles),
        ("compatible pairs", test_compatible_pairs),
        ("automorphism enumeration", test_automorphism_enumeration),
        ("abelian Wells sequence", test_wells_sequence_abelian),
        ("non-abelian Wells sequence", test_wells_sequence_nonabelian),
        ("retraction independence", test_cocycle_class_does_not_depend_on_the_retraction),
        ("extensible iff Wells zero", test_extensible_exactly_when_the_wells_class_vanishes),
        ("Z¹_nab against reduced Z¹", test_one_cocycles_span_the_reduced_first_cocycles),
        ("compatible pairs form a group", test_compatible_pairs_form_a_group),
        ("Wells sequence with Z¹_nab ≠ 0", test_wells_sequence_with_nontrivial_one_cocycles),
        ("prime field guard", test_wells_sequence_needs_a_prime_field),
    ]
    for name, fn in scenarios:
        fn()
        print(f"[OK] {name}")


if __name__ == "__main__":
    print("Running automorphism and Wells self-tests...")
    run_tests()
    print("All Wells tests passed ✅")
