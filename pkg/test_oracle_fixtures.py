from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from engine_errors import SearchBudgetExceeded
from exact_linalg import FieldSpec, array_rank
from nonabelian_extension import check_cocycle, classify_small
from oracle_fixtures import (
    builtin_fixtures,
    enumerate_structures,
    independent_class_count,
    independent_cocycle_check,
    independent_rank,
    zero_structure,
)
from rb_coalgebra import coalgebra_report
from rb_comodule import comodule_report

QQ = FieldSpec.rationals()
GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)

CATALOG = builtin_fixtures()
BUDGET = 100_000


def build_zero_pair(field_spec: FieldSpec):
    return zero_structure(field_spec, 1, 0, prefix="c"), zero_structure(field_spec, 1, 0, prefix="m")


def test_catalog_kinds_and_checks():
    kinds = {CATALOG.entries[name].kind for name in CATALOG.names()}
    assert kinds == {"coalgebra", "comodule", "cocycle", "extension"}
    for coalg in CATALOG.values("coalgebra"):
        assert all(coalgebra_report(coalg).values())
    for com in CATALOG.values("comodule"):
        assert all(comodule_report(com).values())
    assert "cocycle-nonabelian-GF(3)" in CATALOG
    assert "dim2-diag-GF(2)" not in CATALOG


def test_catalog_refuses_duplicates():
    with pytest.raises(ValueError):
        CATALOG.add("zero-QQ", zero_structure(QQ))


def test_enumeration_counts_and_order():
    maps = list(enumerate_structures(GF3, (1, 2), "linear_map", BUDGET))
    assert len(maps) == 9
    assert maps[0].is_zero()
    assert maps[1].format_rows() == [["0"], ["1"]]
    assert maps[-1].format_rows() == [["2"], ["2"]]
    deltas = [c.delta.matrix[0, 0] for c in enumerate_structures(GF2, (1,), "coalgebra", BUDGET)]
    assert deltas == [0, 1]
    assert len(list(enumerate_structures(GF2, (2,), "rb_operator", BUDGET))) == 16
    assert len(list(enumerate_structures(GF3, (1, 1), "cocycle", BUDGET))) == 27


def test_enumeration_guards():
    with pytest.raises(SearchBudgetExceeded):
        list(enumerate_structures(GF3, (1, 2), "linear_map", 8))
    with pytest.raises(ValueError):
        list(enumerate_structures(QQ, (1, 1), "linear_map", BUDGET))
    with pytest.raises(ValueError):
        list(enumerate_structures(GF2, (1,), "lattice", BUDGET))


def test_bareiss_rank_matches_row_reduction():
    scenarios = [
        (QQ, [[Fraction(1, 2), 1], [1, 2]], 1),
        (QQ, [[1, 2], [3, 4]], 2),
        (QQ, [[0, 0, 1], [0, 2, 0], [3, 0, 0], [1, 1, 1]], 3),
        (GF2, [[1, 2], [3, 4]], 1),
        (GF5, [[1, 2], [2, 4]], 1),
        (GF5, [[1, 2, 3], [4, 0, 1]], 2),
    ]
    for field_spec, rows, expected in scenarios:
        assert independent_rank(np.array(rows, dtype=object), field_spec) == expected
        assert array_rank(field_spec.array(rows), field_spec) == expected
    assert independent_rank(np.empty((0, 3), dtype=object), QQ) == 0


def test_expanded_check_agrees_with_cocycle_equations():
    for field_spec in (GF2, GF3):
        c, m = build_zero_pair(field_spec)
        for z in enumerate_structures(field_spec, (1, 1), "cocycle", BUDGET, base=c, module=m):
            assert independent_cocycle_check(z) == check_cocycle(z).passed


def test_expanded_check_on_fixtures():
    for z in CATALOG.values("cocycle"):
        assert independent_cocycle_check(z)


@pytest.mark.parametrize("field_spec, expected", [(GF2, (6, 6)), (GF3, (9, 9))])
def test_orbit_count_matches_classification(field_spec, expected):
    c, m = build_zero_pair(field_spec)
    assert independent_class_count(c, m, BUDGET) == expected
    report = classify_small(c, m, BUDGET)
    assert (report.cocycles, report.class_count) == expected


def run_tests() -> None:
    scenarios = [
        ("catalog", test_catalog_kinds_and_checks),
        ("duplicate names", test_catalog_refuses_duplicates),
        ("enumeration order", test_enumeration_counts_and_order),
        ("enumeration guards", test_enumeration_guards),
        ("Bareiss rank", test_bareiss_rank_matches_row_reduction),
        ("expanded cocycle check", test_expanded_check_agrees_with_cocycle_equations),
        ("fixture cocycles", test_expanded_check_on_fixtures),
    ]
    for name, fn in scenarios:
        fn()
        print(f"[OK] {name}")
    for fs, expected in [(GF2, (6, 6)), (GF3, (9, 9))]:
        test_orbit_count_matches_classification(fs, expected)
        print(f"[OK] orbit count over {fs.describe()}")


if __name__ == "__main__":
    print("Running oracle self-tests...")
    run_tests()
    print("All oracle tests passed ✅")
