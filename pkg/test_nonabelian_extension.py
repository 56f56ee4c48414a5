from __future__ import annotations

import pytest

from engine_errors import (
    CocycleInvalid,
    ExactnessViolation,
    InvalidStructure,
    NonAbelianModule,
    SearchBudgetExceeded,
    StructureMismatch,
)
from exact_linalg import FieldSpec, LinearMap, Signature, Space, kron, zero_map
from nonabelian_extension import (
    EquivalenceWitness,
    ExtensionSES,
    NonAbelianCocycle,
    Undecided,
    apply_equivalence,
    check_cocycle,
    check_equivalence_witness,
    check_extension_equivalence,
    classify_small,
    cocycle_from_extension,
    equivalence_report,
    extension_of_cocycle,
    extension_report,
    extracted_comodule,
    find_retraction,
    paired_section,
    search_witness,
    semidirect,
    solve_equivalence,
    splitting,
    theta_from_witness,
    transport_extension,
)
from oracle_fixtures import builtin_fixtures, zero_structure
from rb_comodule import comodule_report

QQ = FieldSpec.rationals()
GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)

CATALOG = builtin_fixtures()
BUDGET = 100_000


def build_variant(z: NonAbelianCocycle, h_rows=None, rho_rows=None, phi_rows=None) -> NonAbelianCocycle:
    """Same (C, M) with some components replaced; unchecked."""
    c, m = z.c.space, z.m.space
    fs = z.field
    h = z.h if h_rows is None else LinearMap.from_rows(m, Signature.of(c, c), h_rows, fs)
    rho = z.rho if rho_rows is None else LinearMap.from_rows(m, Signature.of(m, c), rho_rows, fs)
    phi = z.phi if phi_rows is None else LinearMap.from_rows(m, c, phi_rows, fs)
    return NonAbelianCocycle(z.c, z.m, h, rho, phi)


def strip_splitting(x: ExtensionSES, t=None, s=None) -> ExtensionSES:
    return ExtensionSES(x.c, x.m, x.e, x.f, x.g, t, s)


def test_fixture_cocycles_pass_every_equation():
    for name in CATALOG.names("cocycle"):
        verdict = check_cocycle(CATALOG[name])
        assert verdict.passed, f"{name}: {verdict.failed}"
        assert list(verdict.as_dict()) == ["(n0)", "(n1)", "(n2)", "(n5)", "(n6)", "(n7)"]


def test_symmetric_h_fails_n0():
    z = build_variant(CATALOG["cocycle-abelian-QQ"], h_rows=[[1]])
    assert check_cocycle(z).failed[0] == "(n0)"
    with pytest.raises(CocycleInvalid):
        NonAbelianCocycle.create(z.c, z.m, z.h, z.rho, z.phi)


def test_extension_of_cocycle_round_trip():
    for name in ("cocycle-abelian-QQ", "cocycle-abelian-GF(5)", "cocycle-nonabelian-GF(3)", "cocycle-direct-sum-QQ"):
        z = CATALOG[name]
        x = extension_of_cocycle(z)
        assert all(extension_report(x).values()), name
        assert cocycle_from_extension(x) == z, name


def test_semidirect_of_abelian_cocycle():
    e = semidirect(CATALOG["cocycle-abelian-QQ"])
    assert e.space.labels == ("y", "x")
    assert e.r.format_rows() == [["0", "0"], ["0", "1"]]
    with pytest.raises(CocycleInvalid):
        semidirect(build_variant(CATALOG["cocycle-abelian-QQ"], h_rows=[[1]]))


def test_change_of_basis_keeps_the_cocycle_class():
    z = CATALOG["cocycle-abelian-QQ"]
    scrambled = CATALOG["extension-scrambled-QQ"]
    assert cocycle_from_extension(scrambled) == z
    bare = strip_splitting(scrambled)
    other = cocycle_from_extension(bare)
    found = solve_equivalence(z, other, BUDGET)
    assert isinstance(found, EquivalenceWitness)
    assert check_equivalence_witness(z, other, found)


def test_retraction_and_paired_section():
    x = strip_splitting(CATALOG["extension-scrambled-QQ"])
    t, s = find_retraction(x)
    i_e = x.e.identity()
    assert t @ x.f == x.c.identity()
    assert x.g @ s == x.m.identity()
    assert x.f @ t + s @ x.g == i_e
    assert paired_section(x, t) == s
    with pytest.raises(ExactnessViolation):
        paired_section(x, zero_map(x.e.space, x.c.space, QQ))


def test_splitting_from_a_section_alone():
    full = CATALOG["extension-scrambled-QQ"]
    t, s = splitting(strip_splitting(full, s=full.s))
    assert s == full.s
    assert t == full.t


def test_invalid_extension_is_refused():
    x = CATALOG["extension-abelian-QQ"]
    bad_g = zero_map(x.e.space, x.m.space, QQ)
    with pytest.raises(InvalidStructure) as exc:
        ExtensionSES.create(x.c, x.m, x.e, x.f, bad_g)
    assert exc.value.failed == ("g surjective",)
    with pytest.raises(ExactnessViolation):
        find_retraction(ExtensionSES(x.c, x.m, x.e, x.f, bad_g))


def test_extracted_comodule():
    com = extracted_comodule(CATALOG["extension-abelian-QQ"])
    assert all(comodule_report(com).values())
    assert com.rho.format_rows() == [["1"]]
    with pytest.raises(NonAbelianModule):
        extracted_comodule(CATALOG["extension-nonabelian-GF(3)"])


def test_equivalence_through_a_witness():
    z = CATALOG["cocycle-abelian-QQ"]
    two = LinearMap.from_rows(z.m.space, z.c.space, [[2]], QQ)
    moved = apply_equivalence(z, two)
    assert moved.phi.format_rows() == [["2"]]
    found = solve_equivalence(z, moved, BUDGET)
    assert isinstance(found, EquivalenceWitness)
    assert found.varphi == two
    assert equivalence_report(z, moved, found) == {"(eqc1)": True, "(eqc2)": True, "(eqc3)": True}
    theta = theta_from_witness(z, moved, found)
    assert check_extension_equivalence(extension_of_cocycle(z), extension_of_cocycle(moved), theta)


def test_different_coactions_are_not_equivalent():
    z = CATALOG["cocycle-abelian-QQ"]
    plain = build_variant(z, rho_rows=[[0]])
    assert check_cocycle(plain).passed
    assert solve_equivalence(z, plain, BUDGET) is None


def test_frames_must_agree():
    with pytest.raises(StructureMismatch):
        solve_equivalence(CATALOG["cocycle-abelian-QQ"], CATALOG["cocycle-direct-sum-QQ"], BUDGET)


def test_nonabelian_equivalence_over_gf3():
    z = CATALOG["cocycle-nonabelian-GF(3)"]
    phi = LinearMap.from_rows(z.m.space, z.c.space, [[1, 2]], GF3)
    moved = apply_equivalence(z, phi)
    assert moved.rho.is_zero()
    found = solve_equivalence(z, moved, BUDGET)
    assert isinstance(found, EquivalenceWitness) and found.varphi == phi
    # ρ can be cancelled but φ = (1, 0) cannot be reached from φ = 0
    assert solve_equivalence(z, CATALOG["cocycle-nonabelian-plain-GF(3)"], BUDGET) is None


def test_search_witness_quadratic_cases():
    k_m, k_c = Space(("m",)), Space(("c",))
    one = LinearMap.from_rows(Signature.of(k_m, k_m), Signature.of(k_c, k_c), [[1]], GF3)

    def square_minus_one(phi: LinearMap) -> LinearMap:
        return kron(phi, phi) - one

    assert search_witness(k_m, k_c, GF3, [], square_minus_one, False, 10, "square root").format_rows() == [["1"]]
    with pytest.raises(SearchBudgetExceeded):
        search_witness(k_m, k_c, GF3, [], square_minus_one, False, 2, "square root")
    one_qq = LinearMap.from_rows(Signature.of(k_m, k_m), Signature.of(k_c, k_c), [[1]], QQ)
    verdict = search_witness(k_m, k_c, QQ, [], lambda phi: kron(phi, phi) - one_qq, False, 10, "square root")
    assert isinstance(verdict, Undecided)
    assert "QQ" in verdict.reason


def test_transport_needs_an_invertible_map():
    x = CATALOG["extension-abelian-QQ"]
    with pytest.raises(ValueError):
        transport_extension(x, zero_map(x.e.space, x.e.space, QQ))


@pytest.mark.parametrize("field_spec, candidates, classes", [(GF2, 8, 6), (GF3, 27, 9)])
def test_classify_zero_structures(field_spec, candidates, classes):
    c = zero_structure(field_spec, 1, 0, prefix="c")
    m = zero_structure(field_spec, 1, 0, prefix="m")
    report = classify_small(c, m, BUDGET)
    assert report.candidates == candidates
    assert report.cocycles == classes
    assert report.class_count == classes
    assert set(report.class_sizes) == {1}


def test_classify_with_fixed_coaction():
    c = zero_structure(GF5, 1, 0, prefix="c")
    m = zero_structure(GF5, 1, 0, prefix="m")
    rho = zero_map(m.space, Signature.of(m.space, c.space), GF5)
    report = classify_small(c, m, BUDGET, fixed_rho=rho)
    assert report.candidates == 25
    assert report.class_count == 5


def test_classify_refuses_rationals_and_large_searches():
    with pytest.raises(ValueError):
        classify_small(zero_structure(QQ), zero_structure(QQ, prefix="m"), BUDGET)
    with pytest.raises(SearchBudgetExceeded):
        classify_small(zero_structure(GF3), zero_structure(GF3, prefix="m"), 26)


def run_tests() -> None:
    scenarios = [
        ("fixture cocycles", test_fixture_cocycles_pass_every_equation),
        ("(n0) failure", test_symmetric_h_fails_n0),
        ("extension round trip", test_extension_of_cocycle_round_trip),
        ("semidirect", test_semidirect_of_abelian_cocycle),
        ("change of basis", test_change_of_basis_keeps_the_cocycle_class),
        ("retraction and section", test_retraction_and_paired_section),
        ("splitting from s", test_splitting_from_a_section_alone),
        ("invalid extension", test_invalid_extension_is_refused),
        ("extracted comodule", test_extracted_comodule),
        ("equivalence witness", test_equivalence_through_a_witness),
        ("inequivalent coactions", test_different_coactions_are_not_equivalent),
        ("frame mismatch", test_frames_must_agree),
        ("non-abelian equivalence", test_nonabelian_equivalence_over_gf3),
        ("quadratic search", test_search_witness_quadratic_cases),
        ("transport", test_transport_needs_an_invertible_map),
        ("fixed coaction classification", test_classify_with_fixed_coaction),
        ("classification guards", test_classify_refuses_rationals_and_large_searches),
    ]
    for name, fn in scenarios:
        fn()
        print(f"[OK] {name}")
    for fs, candidates, classes in [(GF2, 8, 6), (GF3, 27, 9)]:
        test_classify_zero_structures(fs, candidates, classes)
        print(f"[OK] {classes} classes over {fs.describe()}")


if __name__ == "__main__":
    print("Running non-abelian extension self-tests...")
    run_tests()
    print("All extension tests passed ✅")
