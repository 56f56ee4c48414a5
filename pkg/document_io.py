#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""JSON documents for every structure the engine reads or writes.

Envelope::

    {"body": {...}, "field": "QQ" | "GF(p)", "format_version": "1",
     "kind": "...", "lambda": "<scalar>"}

Scalars are strings: ``"a/b"`` or ``"a"`` over ℚ, the residue over 𝔽_p.
Tensor-valued maps V → A⊗B are sparse triples ``[i, j, k, "coeff"]`` giving
the coefficient of a_i⊗b_j in the image of v_k; plain maps are dense
row-major arrays (one row per codomain basis vector).  Keys are sorted on
output, so emitting a parsed document reproduces it byte for byte.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from automorphism_wells import AutPair
from engine_errors import DocumentError
from exact_linalg import FieldSpec, LinearMap, Scalar, Signature, Space
from nonabelian_extension import EquivalenceWitness, ExtensionSES, NonAbelianCocycle
from rb_coalgebra import RBLieAlgebra, RBLieCoalgebra
from rb_comodule import RBComodule

__all__ = [
    "FORMAT_VERSION",
    "DOCUMENT_KINDS",
    "Document",
    "format_field",
    "parse_field",
    "parse_document",
    "emit_document",
    "read_document",
    "write_document",
    "report_document",
    "dumps",
]

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1"
DOCUMENT_KINDS = ("coalgebra", "comodule", "cocycle", "extension", "autpair", "witness", "algebra")

Payload = Union[RBLieCoalgebra, RBComodule, NonAbelianCocycle, ExtensionSES, AutPair, EquivalenceWitness, RBLieAlgebra]

_FIELD_RE = re.compile(r"^GF\((\d+)\)$")


@dataclass(frozen=True)
class Document:
    """A parsed envelope: its kind, field, λ and payload."""

    kind: str
    field: FieldSpec
    lam: Scalar
    payload: Payload


def dumps(data: Any, indent: Optional[int] = 2) -> str:
    return json.dumps(data, sort_keys=True, indent=indent, ensure_ascii=False) + "\n"


def format_field(field_spec: FieldSpec) -> str:
    return field_spec.describe()


def parse_field(text: object, path: str = "$.field") -> FieldSpec:
    if text == "QQ":
        return FieldSpec.rationals()
    match = _FIELD_RE.match(text) if isinstance(text, str) else None
    if match is None:
        raise DocumentError(f"field must be 'QQ' or 'GF(p)', got {text!r}", path)
    try:
        return FieldSpec.prime(int(match.group(1)))
    except ValueError as exc:
        raise DocumentError(str(exc), path) from exc


# -- primitives ------------------------------------------------------------


class _Reader:
    def __init__(self, field_spec: FieldSpec) -> None:
        self.field = field_spec

    def scalar(self, value: object, path: str) -> object:
        if isinstance(value, bool) or not isinstance(value, (str, int)):
            raise DocumentError("scalar must be a string or integer", path)
        try:
            return self.field.coerce(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(str(exc), path) from exc

    def obj(self, data: object, path: str, keys: Tuple[str, ...], optional: Tuple[str, ...] = ()) -> Dict[str, Any]:
        if not isinstance(data, dict):
            raise DocumentError("expected an object", path)
        for key in keys:
            if key not in data:
                raise DocumentError(f"missing key {key!r}", path)
        unknown = set(data) - set(keys) - set(optional)
        if unknown:
            raise DocumentError(f"unknown keys {sorted(unknown)}", path)
        return data

    def basis(self, data: object, path: str) -> Space:
        if not isinstance(data, list) or not all(isinstance(label, str) for label in data):
            raise DocumentError("basis must be a list of strings", path)
        try:
            return Space(tuple(data))
        except ValueError as exc:
            raise DocumentError(str(exc), path) from exc

    def dense(self, data: object, domain: Space, codomain: Space, path: str) -> LinearMap:
        if not isinstance(data, list) or len(data) != codomain.dim:
            raise DocumentError(f"expected {codomain.dim} rows", path)
        matrix = self.field.zeros((codomain.dim, domain.dim))
        for i, row in enumerate(data):
            if not isinstance(row, list) or len(row) != domain.dim:
                raise DocumentError(f"expected {domain.dim} entries", f"{path}[{i}]")
            for j, value in enumerate(row):
                matrix[i, j] = self.scalar(value, f"{path}[{i}][{j}]")
        return LinearMap(Signature.of(domain), Signature.of(codomain), matrix, self.field)

    def sparse(self, data: object, domain: Space, left: Space, right: Space, path: str) -> LinearMap:
        if not isinstance(data, list):
            raise DocumentError("expected a list of [i, j, k, coeff] triples", path)
        matrix = self.field.zeros((left.dim * right.dim, domain.dim))
        for n, entry in enumerate(data):
            where = f"{path}[{n}]"
            if not isinstance(entry, list) or len(entry) != 4:
                raise DocumentError("expected [i, j, k, coeff]", where)
            i, j, k, coeff = entry
            bounds = ((i, left.dim), (j, right.dim), (k, domain.dim))
            if not all(isinstance(idx, int) and not isinstance(idx, bool) and 0 <= idx < dim for idx, dim in bounds):
                raise DocumentError("index out of range", where)
            row = i * right.dim + j
            matrix[row, k] = self.field.coerce(matrix[row, k] + self.scalar(coeff, f"{where}[3]"))
        return LinearMap(Signature.of(domain), Signature.of(left, right), matrix, self.field)


def _dense_out(m: LinearMap) -> List[List[str]]:
    return m.format_rows()


def _sparse_out(m: LinearMap, right_dim: int) -> List[list]:
    triples = []
    rows, cols = m.shape
    for k in range(cols):
        for row in range(rows):
            value = m.matrix[row, k]
            if value != 0:
                i, j = divmod(row, right_dim)
                triples.append([i, j, k, m.field.format(value)])
    return triples


# -- bodies ----------------------------------------------------------------


def _coalgebra_out(c: RBLieCoalgebra) -> dict:
    return {"basis": list(c.space.labels), "delta": _sparse_out(c.delta, c.dim), "r": _dense_out(c.r)}


def _coalgebra_in(reader: _Reader, data: object, lam: Scalar, raw: bool, path: str) -> RBLieCoalgebra:
    body = reader.obj(data, path, ("basis", "delta", "r"))
    space = reader.basis(body["basis"], f"{path}.basis")
    delta = reader.sparse(body["delta"], space, space, space, f"{path}.delta")
    r = reader.dense(body["r"], space, space, f"{path}.r")
    return RBLieCoalgebra(space, delta, r, lam) if raw else RBLieCoalgebra.create(space, delta, r, lam)


def _body_out(value: Payload) -> Tuple[str, dict]:
    if isinstance(value, RBLieCoalgebra):
        return "coalgebra", _coalgebra_out(value)
    if isinstance(value, RBComodule):
        return "comodule", {
            "basis": list(value.space.labels),
            "coalgebra": _coalgebra_out(value.base),
            "r": _dense_out(value.r_m),
            "rho": _sparse_out(value.rho, value.base.dim),
        }
    if isinstance(value, NonAbelianCocycle):
        return "cocycle", {
            "c": _coalgebra_out(value.c),
            "h": _sparse_out(value.h, value.c.dim),
            "m": _coalgebra_out(value.m),
            "phi": _dense_out(value.phi),
            "rho": _sparse_out(value.rho, value.c.dim),
        }
    if isinstance(value, ExtensionSES):
        body = {
            "c": _coalgebra_out(value.c),
            "e": _coalgebra_out(value.e),
            "f": _dense_out(value.f),
            "g": _dense_out(value.g),
            "m": _coalgebra_out(value.m),
        }
        if value.t is not None:
            body["t"] = _dense_out(value.t)
        if value.s is not None:
            body["s"] = _dense_out(value.s)
        return "extension", body
    if isinstance(value, AutPair):
        return "autpair", {"alpha": _dense_out(value.alpha), "beta": _dense_out(value.beta)}
    if isinstance(value, EquivalenceWitness):
        return "witness", {"varphi": _dense_out(value.varphi)}
    if isinstance(value, RBLieAlgebra):
        # bracket triples [i, j, k, c]: c is the coefficient of e_k in [e_i, e_j]
        n = value.space.dim
        triples = [
            [i, j, k, value.field.format(value.structure_constant(i, j, k))]
            for i in range(n)
            for j in range(n)
            for k in range(n)
            if value.structure_constant(i, j, k) != 0
        ]
        return "algebra", {"basis": list(value.space.labels), "bracket": triples, "r": _dense_out(value.r)}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _payload_frame(value: Payload) -> Optional[Tuple[FieldSpec, Scalar]]:
    for attr in ("c", "base"):
        inner = getattr(value, attr, None)
        if isinstance(inner, RBLieCoalgebra):
            return inner.field, inner.lam
    if isinstance(value, (RBLieCoalgebra, RBLieAlgebra)):
        return value.field, value.lam
    return None


def emit_document(value: Payload, lam: Optional[Scalar] = None, indent: Optional[int] = 2) -> str:
    """Serialize ``value``; ``lam`` is only needed for matrices-only payloads."""
    kind, body = _body_out(value)
    frame = _payload_frame(value)
    if frame is None:
        matrix = value.alpha if isinstance(value, AutPair) else value.varphi  # type: ignore[union-attr]
        field_spec = matrix.field
        scalar = lam if lam is not None else Scalar.of(0, field_spec)
    else:
        field_spec, scalar = frame
    envelope = {
        "body": body,
        "field": format_field(field_spec),
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "lambda": str(scalar),
    }
    return dumps(envelope, indent)


def _payload_in(reader: _Reader, kind: str, body: object, lam: Scalar, raw: bool) -> Payload:
    path = "$.body"
    if kind == "coalgebra":
        return _coalgebra_in(reader, body, lam, raw, path)
    if kind == "comodule":
        data = reader.obj(body, path, ("basis", "coalgebra", "r", "rho"))
        base = _coalgebra_in(reader, data["coalgebra"], lam, raw, f"{path}.coalgebra")
        space = reader.basis(data["basis"], f"{path}.basis")
        rho = reader.sparse(data["rho"], space, space, base.space, f"{path}.rho")
        r_m = reader.dense(data["r"], space, space, f"{path}.r")
        return RBComodule(base, space, rho, r_m) if raw else RBComodule.create(base, space, rho, r_m)
    if kind == "cocycle":
        data = reader.obj(body, path, ("c", "h", "m", "phi", "rho"))
        c = _coalgebra_in(reader, data["c"], lam, raw, f"{path}.c")
        m = _coalgebra_in(reader, data["m"], lam, raw, f"{path}.m")
        h = reader.sparse(data["h"], m.space, c.space, c.space, f"{path}.h")
        rho = reader.sparse(data["rho"], m.space, m.space, c.space, f"{path}.rho")
        phi = reader.dense(data["phi"], m.space, c.space, f"{path}.phi")
        return NonAbelianCocycle(c, m, h, rho, phi) if raw else NonAbelianCocycle.create(c, m, h, rho, phi)
    if kind == "extension":
        data = reader.obj(body, path, ("c", "e", "f", "g", "m"), ("s", "t"))
        c = _coalgebra_in(reader, data["c"], lam, raw, f"{path}.c")
        m = _coalgebra_in(reader, data["m"], lam, raw, f"{path}.m")
        e = _coalgebra_in(reader, data["e"], lam, raw, f"{path}.e")
        f = reader.dense(data["f"], c.space, e.space, f"{path}.f")
        g = reader.dense(data["g"], e.space, m.space, f"{path}.g")
        t = reader.dense(data["t"], e.space, c.space, f"{path}.t") if "t" in data else None
        s = reader.dense(data["s"], m.space, e.space, f"{path}.s") if "s" in data else None
        return ExtensionSES(c, m, e, f, g, t, s) if raw else ExtensionSES.create(c, m, e, f, g, t, s)
    if kind == "autpair":
        data = reader.obj(body, path, ("alpha", "beta"))
        return AutPair(_square(reader, data["alpha"], f"{path}.alpha"), _square(reader, data["beta"], f"{path}.beta"))
    if kind == "witness":
        data = reader.obj(body, path, ("varphi",))
        rows = data["varphi"]
        if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
            raise DocumentError("varphi must be a list of rows", f"{path}.varphi")
        n_cols = len(rows[0]) if rows else 0
        domain, codomain = Space.standard(n_cols, "m"), Space.standard(len(rows), "c")
        return EquivalenceWitness(reader.dense(rows, domain, codomain, f"{path}.varphi"))
    if kind == "algebra":
        data = reader.obj(body, path, ("basis", "bracket", "r"))
        space = reader.basis(data["basis"], f"{path}.basis")
        table = reader.sparse(data["bracket"], space, space, space, f"{path}.bracket")
        bracket = table.transpose()
        return RBLieAlgebra(space, bracket, reader.dense(data["r"], space, space, f"{path}.r"), lam)
    raise DocumentError(f"unknown kind {kind!r}", "$.kind")


def _square(reader: _Reader, rows: object, path: str) -> LinearMap:
    if not isinstance(rows, list):
        raise DocumentError("expected a square matrix", path)
    space = Space.standard(len(rows), "e")
    return reader.dense(rows, space, space, path)


def parse_document(text: str, raw: bool = False) -> Document:
    """Parse and, unless ``raw``, verify the payload with its checked constructor."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    reader_obj = _Reader(FieldSpec.rationals()).obj(
        data, "$", ("body", "field", "format_version", "kind", "lambda")
    )
    if reader_obj["format_version"] != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {reader_obj['format_version']!r}", "$.format_version")
    kind = reader_obj["kind"]
    if kind not in DOCUMENT_KINDS:
        raise DocumentError(f"unknown kind {kind!r}", "$.kind")
    field_spec = parse_field(reader_obj["field"])
    reader = _Reader(field_spec)
    lam = Scalar(reader.scalar(reader_obj["lambda"], "$.lambda"), field_spec)
    payload = _payload_in(reader, kind, reader_obj["body"], lam, raw)
    logger.debug("parsed %s document over %s", kind, field_spec.describe())
    return Document(kind, field_spec, lam, payload)


def read_document(path: Path, raw: bool = False) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_document(text, raw)


def write_document(path: Path, value: Payload, lam: Optional[Scalar] = None, indent: Optional[int] = 2) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit_document(value, lam, indent), encoding="utf-8")


def report_document(kind: str, field_spec: FieldSpec, body: dict, indent: Optional[int] = 2) -> str:
    """Reports carry the format version and the exact field like every document."""
    return dumps({"body": body, "field": format_field(field_spec), "format_version": FORMAT_VERSION, "kind": kind}, indent)
