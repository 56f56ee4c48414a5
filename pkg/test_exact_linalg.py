from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from engine_errors import FieldMismatch, NonInvertibleFactorial, SearchBudgetExceeded, ShapeMismatch
from exact_linalg import (
    FieldSpec,
    LinearMap,
    Scalar,
    Signature,
    Space,
    affine_solution_space,
    all_linear_maps,
    alt,
    array_kernel,
    flip,
    identity,
    kron,
    perm_action,
    rank,
    solve,
)

QQ = FieldSpec.rationals()
GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)
GF5 = FieldSpec.prime(5)


def build_map(rows, field_spec: FieldSpec = QQ, dom: str = "v", cod: str = "w") -> LinearMap:
    n_rows, n_cols = len(rows), len(rows[0])
    return LinearMap.from_rows(Space.standard(n_cols, dom), Space.standard(n_rows, cod), rows, field_spec)


def unit(n: int, i: int, field_spec: FieldSpec = QQ):
    v = field_spec.zeros(n)
    v[i] = field_spec.one()
    return v


def test_field_spec_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        FieldSpec.prime(4)
    assert GF2.describe() == "GF(2)"
    assert QQ.describe() == "QQ"


def test_coerce_is_exact():
    assert QQ.coerce("1/2") == Fraction(1, 2)
    assert GF5.coerce("1/2") == 3
    assert GF5.coerce(-1) == 4
    with pytest.raises(ZeroDivisionError):
        GF5.coerce("1/5")


def test_scalar_arithmetic_and_field_mismatch():
    two = Scalar.of(2, GF5)
    assert two * 3 == 1
    assert two / 2 == 1
    assert two ** -1 == 3
    assert str(-two) == "3"
    with pytest.raises(FieldMismatch):
        two + Scalar.of(1, GF3)


def test_kron_is_row_major_and_flip_swaps_factors():
    a = build_map([[1, 2], [3, 4]], dom="a", cod="a")
    b = build_map([[0, 1], [5, 0]], dom="b", cod="b")
    ab = kron(a, b)
    # e0 ⊗ e1 has index 1; its image has a[i,0] b[j,1] at row i*2 + j
    assert list(ab.apply(unit(4, 1))) == [1, 0, 3, 0]
    va, vb = Space.standard(2, "a"), Space.standard(2, "b")
    assert flip(va, vb, QQ) @ ab == kron(b, a) @ flip(va, vb, QQ)


@pytest.mark.parametrize("seed", [7, 11])
def test_kron_matches_per_basis_evaluation(seed):
    rng = np.random.default_rng(seed)
    a = build_map(rng.integers(0, 3, size=(2, 2)).tolist(), GF3, "a", "a")
    b = build_map(rng.integers(0, 3, size=(2, 2)).tolist(), GF3, "b", "b")
    ab = kron(a, b)
    for i in range(2):
        for j in range(2):
            expected = GF3.normalize(np.kron(a.apply(unit(2, i, GF3)), b.apply(unit(2, j, GF3))))
            assert list(ab.apply(unit(4, i * 2 + j, GF3))) == list(expected)


def test_perm_action_is_active():
    c = Space.standard(2, "e")
    psi = perm_action((1, 2, 0), c, QQ)
    # e0 ⊗ e1 ⊗ e1 (index 3) becomes e1 ⊗ e0 ⊗ e1 (index 5)
    assert psi.matrix[5, 3] == 1
    sigma, pi = (1, 0, 2), (0, 2, 1)
    composed = tuple(sigma[pi[j]] for j in range(3))
    assert perm_action(sigma, c, QQ) @ perm_action(pi, c, QQ) == perm_action(composed, c, QQ)
    with pytest.raises(ValueError):
        perm_action((0, 0), c, QQ)


@pytest.mark.parametrize("n, field_spec", [(2, QQ), (3, QQ), (2, GF3), (3, GF5)])
def test_alt_is_idempotent(n, field_spec):
    a = alt(n, Space.standard(2, "e"), field_spec)
    assert a @ a == a


@pytest.mark.parametrize("n, field_spec", [(2, GF2), (3, GF3), (3, GF2)])
def test_alt_refuses_small_characteristic(n, field_spec):
    with pytest.raises(NonInvertibleFactorial):
        alt(n, Space.standard(2, "e"), field_spec)


def test_rank_kernel_and_solve():
    m = build_map([[1, 2], [2, 4]])
    assert rank(m) == 1
    assert [list(v) for v in array_kernel(m.matrix, QQ)] == [[-2, 1]]
    assert [list(v) for v in array_kernel(build_map([[1, 2], [2, 4]], GF5).matrix, GF5)] == [[3, 1]]
    assert solve(m, [3, 6]) is not None
    assert solve(m, [3, 7]) is None
    with pytest.raises(ShapeMismatch):
        solve(m, [1, 2, 3])


def test_inverse_and_format_rows():
    m = build_map([[1, 1], [0, 1]], dom="v", cod="v")
    assert m.inverse().format_rows() == [["1", "-1"], ["0", "1"]]
    assert build_map([[1, 1], [0, 1]], GF5, "v", "v").inverse().format_rows() == [["1", "4"], ["0", "1"]]
    assert build_map([[1, 2], [2, 4]]).inverse() is None
    assert identity(Space.standard(3), QQ).is_invertible()


def test_affine_solution_space():
    k = Space.standard(1, "k")
    three = LinearMap.from_rows(k, k, [[3]], QQ)
    solution = affine_solution_space(k, k, QQ, [lambda x: x - three])
    assert solution is not None and solution.dimension == 0
    assert solution.particular == three
    assert affine_solution_space(k, k, QQ, [lambda x: x - three, lambda x: x]) is None
    free = affine_solution_space(k, Space.standard(2, "w"), GF3, [])
    assert free.dimension == 2
    assert len(list(free.points())) == 9


def test_all_linear_maps_is_lexicographic_and_budgeted():
    maps = list(all_linear_maps(Space.standard(1), Space.standard(2), GF2, budget=4))
    assert len(maps) == 4
    assert maps[0].is_zero()
    assert maps[1].format_rows() == [["0"], ["1"]]
    with pytest.raises(SearchBudgetExceeded):
        list(all_linear_maps(Space.standard(1), Space.standard(2), GF2, budget=3))


def test_signature_dimensions():
    sig = Signature.of(Space.standard(2), Space.standard(3))
    assert sig.dim == 6 and sig.dims == (2, 3)
    assert Signature().dim == 1


def run_tests() -> None:
    scenarios = [
        ("field spec", test_field_spec_rejects_composite_characteristic),
        ("exact coercion", test_coerce_is_exact),
        ("scalar arithmetic", test_scalar_arithmetic_and_field_mismatch),
        ("kron and flip", test_kron_is_row_major_and_flip_swaps_factors),
        ("active permutation action", test_perm_action_is_active),
        ("rank, kernel, solve", test_rank_kernel_and_solve),
        ("inverse", test_inverse_and_format_rows),
        ("affine systems", test_affine_solution_space),
        ("map enumeration", test_all_linear_maps_is_lexicographic_and_budgeted),
        ("signatures", test_signature_dimensions),
    ]
    for name, fn in scenarios:
        fn()
        print(f"[OK] {name}")
    for n, fs in [(2, QQ), (3, QQ), (2, GF3), (3, GF5)]:
        test_alt_is_idempotent(n, fs)
        print(f"[OK] Alt({n}) idempotent over {fs.describe()}")
    test_kron_matches_per_basis_evaluation(7)
    print("[OK] kron against per-basis evaluation")


if __name__ == "__main__":
    print("Running exact linear algebra self-tests...")
    run_tests()
    print("All exact linear algebra tests passed ✅")
