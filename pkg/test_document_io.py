from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import pytest

from document_io import (
    emit_document,
    parse_document,
    parse_field,
    read_document,
    report_document,
    write_document,
)
from engine_errors import DocumentError, InvalidStructure
from exact_linalg import FieldSpec, LinearMap, Space
from nonabelian_extension import EquivalenceWitness
from oracle_fixtures import builtin_fixtures
from rb_coalgebra import coalgebra_report

FIXTURES = Path(__file__).parent / "fixtures"

CATALOG = builtin_fixtures()

CATALOG_FILES = [
    ("zero_qq.json", "zero-QQ"),
    ("dim2_diag_qq.json", "dim2-diag-QQ"),
    ("cocycle_abelian_qq.json", "cocycle-abelian-QQ"),
    ("extension_abelian_qq.json", "extension-abelian-QQ"),
]


def load_fixture(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text(encoding="utf-8"))


def build_text(data: dict) -> str:
    return json.dumps(data)


def test_fixture_files_round_trip_byte_for_byte():
    for path in sorted(FIXTURES.glob("*.json")):
        text = path.read_text(encoding="utf-8")
        doc = parse_document(text)
        assert emit_document(doc.payload, doc.lam) == text, path.name


def test_fixture_files_match_the_catalog():
    for file_name, entry in CATALOG_FILES:
        assert emit_document(CATALOG[entry]) == (FIXTURES / file_name).read_text(encoding="utf-8"), file_name


def test_parse_field():
    assert parse_field("QQ") == FieldSpec.rationals()
    assert parse_field("GF(7)") == FieldSpec.prime(7)
    for bad in ("GF(4)", "F5", 5, "gf(5)"):
        with pytest.raises(DocumentError) as exc:
            parse_field(bad)
        assert exc.value.path == "$.field"


def _tamper(data: dict, change) -> dict:
    change(data)
    return data


@pytest.mark.parametrize(
    "change, path",
    [
        (lambda d: d.update(format_version="2"), "$.format_version"),
        (lambda d: d.update(kind="lattice"), "$.kind"),
        (lambda d: d.update(field="GF(6)"), "$.field"),
        (lambda d: d.update(**{"lambda": "x"}), "$.lambda"),
        (lambda d: d["body"].update(extra=[]), "$.body"),
        (lambda d: d["body"].pop("r"), "$.body"),
        (lambda d: d["body"]["delta"].append([5, 0, 0, "1"]), "$.body.delta[2]"),
        (lambda d: d["body"]["r"].pop(), "$.body.r"),
        (lambda d: d["body"]["r"][0].__setitem__(0, 1.5), "$.body.r[0][0]"),
    ],
)
def test_document_errors_name_the_offending_path(change, path):
    text = build_text(_tamper(load_fixture("dim2_diag_qq.json"), change))
    with pytest.raises(DocumentError) as exc:
        parse_document(text)
    assert exc.value.path == path


def test_malformed_json_and_missing_files(tmp_path):
    with pytest.raises(DocumentError):
        parse_document("{")
    with pytest.raises(DocumentError):
        parse_document("[]")
    with pytest.raises(DocumentError):
        read_document(tmp_path / "missing.json")


def test_checked_and_raw_parsing():
    data = load_fixture("dim2_diag_qq.json")
    data["body"]["r"] = [["1", "0"], ["0", "1"]]
    data["lambda"] = "0"
    with pytest.raises(InvalidStructure) as exc:
        parse_document(build_text(data))
    assert exc.value.failed == ("(R)",)
    doc = parse_document(build_text(data), raw=True)
    assert coalgebra_report(doc.payload)["(R)"] is False


def test_prime_field_scalars_are_reduced():
    data = load_fixture("zero_qq.json")
    data["field"] = "GF(3)"
    data["body"]["r"] = [["4"]]
    data["lambda"] = "1/2"
    doc = parse_document(build_text(data))
    assert doc.payload.r.format_rows() == [["1"]]
    assert str(doc.lam) == "2"
    emitted = json.loads(emit_document(doc.payload))
    assert emitted["lambda"] == "2"
    assert emitted["body"]["r"] == [["1"]]


def test_witness_documents(tmp_path):
    phi = LinearMap.from_rows(Space(("x",)), Space(("y",)), [["1/2"]], FieldSpec.rationals())
    path = tmp_path / "out" / "witness.json"
    write_document(path, EquivalenceWitness(phi))
    doc = read_document(path)
    assert doc.kind == "witness"
    assert str(doc.lam) == "0"
    assert doc.payload.varphi.format_rows() == [["1/2"]]


def test_report_envelope():
    text = report_document("verify", FieldSpec.prime(5), {"checks": {"Δ antisymmetric": True}})
    data = json.loads(text)
    assert sorted(data) == ["body", "field", "format_version", "kind"]
    assert data["field"] == "GF(5)"
    assert "Δ antisymmetric" in text
    assert text.endswith("}\n")


def test_documents_are_frozen_values():
    text = (FIXTURES / "zero_qq.json").read_text(encoding="utf-8")
    doc = parse_document(text)
    assert doc == parse_document(text)
    with pytest.raises(dataclasses.FrozenInstanceError):
        doc.kind = "comodule"  # type: ignore[misc]


def run_tests(tmp_path: Path) -> None:
    scenarios = [
        ("round trip", test_fixture_files_round_trip_byte_for_byte),
        ("catalog files", test_fixture_files_match_the_catalog),
        ("field strings", test_parse_field),
        ("checked and raw parsing", test_checked_and_raw_parsing),
        ("prime field scalars", test_prime_field_scalars_are_reduced),
        ("report envelope", test_report_envelope),
        ("frozen documents", test_documents_are_frozen_values),
    ]
    for name, fn in scenarios:
        fn()
        print(f"[OK] {name}")
    test_malformed_json_and_missing_files(tmp_path)
    print("[OK] malformed input")
    test_witness_documents(tmp_path)
    print("[OK] witness documents")


if __name__ == "__main__":
    import tempfile

    print("Running document self-tests...")
    with tempfile.TemporaryDirectory() as tmp:
        run_tests(Path(tmp))
    print("All document tests passed ✅")
