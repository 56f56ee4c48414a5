#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Command line surface of the engine.

Exit codes: 0 pass, 1 check failed or invalid structure, 2 unreadable
document or bad arguments, 3 characteristic too small, 4 undecided (including
searches that would exceed the budget).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from app_config import EngineConfig, load_config
from automorphism_wells import AutPair, decide_extensible, wells_map, wells_sequence_check
from cohomology import ComplexKind, cohomology_dims
from document_io import Document, emit_document, parse_field, read_document, report_document, write_document
from engine_errors import (
    CharacteristicGuard,
    DocumentError,
    EngineError,
    InvalidStructure,
    SearchBudgetExceeded,
    StructureMismatch,
)
from exact_linalg import FieldSpec, LinearMap, Scalar
from nonabelian_extension import (
    EquivalenceWitness,
    ExtensionSES,
    NonAbelianCocycle,
    Undecided,
    check_cocycle,
    classify_small,
    cocycle_from_extension,
    extension_of_cocycle,
    extension_report,
    solve_equivalence,
)
from oracle_fixtures import zero_structure
from rb_coalgebra import RBLieAlgebra, RBLieCoalgebra, algebra_report, coalgebra_report, dualize
from rb_comodule import RBComodule, adjoint, comodule_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_DOCUMENT = 2
EXIT_CHARACTERISTIC = 3
EXIT_UNDECIDED = 4

logger = logging.getLogger("rbcoalg")


def configure_logging(config: EngineConfig) -> None:
    """Console handler on stderr plus an optional UTF-8 log file."""

    root = logging.getLogger()
    root.setLevel(config.logging.level.upper())
    formatter = logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s")
    if not any(getattr(h, "_rbcoalg", False) for h in root.handlers):
        console = logging.StreamHandler(sys.stderr)
        console.setFormatter(formatter)
        console._rbcoalg = True  # type: ignore[attr-defined]
        root.addHandler(console)
        if config.logging.log_path:
            log_path = Path(config.logging.log_path)
            log_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(log_path, encoding="utf-8")
            file_handler.setFormatter(formatter)
            file_handler._rbcoalg = True  # type: ignore[attr-defined]
            root.addHandler(file_handler)


class _Session:
    """Parsed arguments, configuration and output helpers for one command."""

    def __init__(self, args: argparse.Namespace, config: EngineConfig) -> None:
        self.args = args
        self.config = config
        self.budget = args.budget if args.budget is not None else config.search.budget

    def read(self, path: str, kind: Optional[str] = None) -> Document:
        doc = read_document(Path(path), raw=self.args.raw)
        if kind is not None and doc.kind != kind:
            raise DocumentError(f"expected a {kind} document, got {doc.kind}", "$.kind")
        if self.args.field is not None and _field_arg(self.args.field) != doc.field:
            raise DocumentError(f"{path} is over {doc.field.describe()}, not {self.args.field}", "--field")
        if self.args.lam is not None and _lambda_arg(self.args.lam, doc.field) != doc.lam.value:
            raise DocumentError(f"{path} has λ = {doc.lam.value}, not {self.args.lam}", "--lambda")
        return doc

    def report(self, kind: str, field_spec: FieldSpec, body: dict) -> None:
        if self.args.seed is not None:
            body = dict(body, seed=self.args.seed)
        if self.args.pretty:
            print(f"[{kind}] {field_spec.describe()}")
            for line in _pretty_lines(body):
                print(line)
        else:
            sys.stdout.write(report_document(kind, field_spec, body, self.config.output_indent))

    def emit(self, value, lam: Optional[Scalar] = None) -> None:
        """Write a document to --output, or to stdout."""
        if self.args.output:
            write_document(Path(self.args.output), value, lam, self.config.output_indent)
            logger.info("wrote %s", self.args.output)
        else:
            sys.stdout.write(emit_document(value, lam, self.config.output_indent))


def _pretty_lines(body: dict, prefix: str = "") -> List[str]:
    lines = []
    for key in sorted(body):
        value = body[key]
        if isinstance(value, dict):
            lines.extend(_pretty_lines(value, f"{prefix}{key} "))
        elif isinstance(value, bool):
            lines.append(f"  {prefix}{key}: {'ok' if value else 'FAILED'}")
        else:
            lines.append(f"  {prefix}{key}: {value}")
    return lines


def _prefixed(prefix: str, checks: Dict[str, bool]) -> Dict[str, bool]:
    return {f"{prefix} {name}": ok for name, ok in checks.items()}


def _verify_checks(doc: Document) -> Dict[str, bool]:
    value = doc.payload
    if isinstance(value, RBLieCoalgebra):
        return coalgebra_report(value)
    if isinstance(value, RBComodule):
        return {**_prefixed("C", coalgebra_report(value.base)), **comodule_report(value)}
    if isinstance(value, NonAbelianCocycle):
        return {
            **_prefixed("C", coalgebra_report(value.c)),
            **_prefixed("M", coalgebra_report(value.m)),
            **check_cocycle(value).as_dict(),
        }
    if isinstance(value, ExtensionSES):
        return {
            **_prefixed("C", coalgebra_report(value.c)),
            **_prefixed("M", coalgebra_report(value.m)),
            **_prefixed("E", coalgebra_report(value.e)),
            **extension_report(value),
        }
    if isinstance(value, RBLieAlgebra):
        return algebra_report(value)
    return {}


# -- commands --------------------------------------------------------------


def cmd_verify(session: _Session) -> int:
    session.args.raw = True
    doc = session.read(session.args.file)
    checks = _verify_checks(doc)
    passed = all(checks.values())
    session.report("verify", doc.field, {"checks": checks, "document": doc.kind, "passed": passed})
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_cohomology(session: _Session) -> int:
    args = session.args
    if args.n < 0 or args.n > session.config.cohomology.n_max:
        raise DocumentError(f"--n must lie in 0..{session.config.cohomology.n_max}", "--n")
    docs = [session.read(path) for path in args.files]
    if len(docs) == 1 and docs[0].kind == "coalgebra":
        com = adjoint(docs[0].payload)  # type: ignore[arg-type]
    elif len(docs) == 1 and docs[0].kind == "comodule":
        com = docs[0].payload
    elif len(docs) == 2 and (docs[0].kind, docs[1].kind) == ("coalgebra", "comodule"):
        com = docs[1].payload
        if com.base != docs[0].payload:  # type: ignore[union-attr]
            raise StructureMismatch("comodule is over a different coalgebra")
    else:
        raise DocumentError("expected a coalgebra, a comodule, or a coalgebra and a comodule", "$.kind")
    report = cohomology_dims(args.n, ComplexKind(args.complex), com)  # type: ignore[arg-type]
    session.report("cohomology", docs[0].field, report.to_dict())
    return EXIT_OK


def cmd_dualize(session: _Session) -> int:
    doc = session.read(session.args.file, "coalgebra")
    session.emit(dualize(doc.payload))  # type: ignore[arg-type]
    return EXIT_OK


def cmd_extend(session: _Session) -> int:
    doc = session.read(session.args.file, "cocycle")
    session.emit(extension_of_cocycle(doc.payload))  # type: ignore[arg-type]
    return EXIT_OK


def cmd_cocycle_of(session: _Session) -> int:
    doc = session.read(session.args.file, "extension")
    session.emit(cocycle_from_extension(doc.payload))  # type: ignore[arg-type]
    return EXIT_OK


def _rows(m: Optional[LinearMap]):
    return None if m is None else m.format_rows()


def cmd_equivalent(session: _Session) -> int:
    first = session.read(session.args.first, "cocycle")
    second = session.read(session.args.second, "cocycle")
    verdict = solve_equivalence(first.payload, second.payload, session.budget)  # type: ignore[arg-type]
    if isinstance(verdict, Undecided):
        session.report("equivalent", first.field, {"equivalent": "undecided", "reason": verdict.reason})
        return EXIT_UNDECIDED
    body = {"equivalent": verdict is not None}
    if verdict is not None:
        body["witness"] = _rows(verdict.varphi)
        if session.args.output:
            write_document(Path(session.args.output), verdict, first.lam, session.config.output_indent)
    session.report("equivalent", first.field, body)
    return EXIT_OK


def _pair(session: _Session, x: ExtensionSES) -> AutPair:
    doc = session.read(session.args.autpair, "autpair")
    pair: AutPair = doc.payload  # type: ignore[assignment]
    if session.args.raw:
        return pair
    return AutPair.create(x.c, x.m, pair.alpha, pair.beta)


def cmd_extensible(session: _Session) -> int:
    doc = session.read(session.args.extension, "extension")
    x: ExtensionSES = doc.payload  # type: ignore[assignment]
    pair = _pair(session, x)
    candidate = None
    if session.args.candidate:
        witness: EquivalenceWitness = session.read(session.args.candidate, "witness").payload  # type: ignore[assignment]
        candidate = witness.varphi
    verdict = decide_extensible(x, pair, session.budget, candidate)
    if isinstance(verdict.extensible, Undecided):
        session.report("extensible", doc.field, {"extensible": "undecided", "reason": verdict.extensible.reason})
        return EXIT_UNDECIDED
    body = {"extensible": verdict.extensible, "gamma": _rows(verdict.gamma), "witness": _rows(verdict.witness)}
    if verdict.witness is not None and session.args.output:
        write_document(Path(session.args.output), EquivalenceWitness(verdict.witness), doc.lam, session.config.output_indent)
    session.report("extensible", doc.field, body)
    return EXIT_OK


def cmd_wells(session: _Session) -> int:
    doc = session.read(session.args.extension, "extension")
    x: ExtensionSES = doc.payload  # type: ignore[assignment]
    w = wells_map(x, _pair(session, x), session.budget)
    zero = w.is_zero()
    difference = {"h": _rows(w.h), "phi": _rows(w.phi), "rho": _rows(w.rho)}
    if isinstance(zero, Undecided):
        session.report("wells", doc.field, {"difference": difference, "reason": zero.reason, "zero": "undecided"})
        return EXIT_UNDECIDED
    session.report("wells", doc.field, {"difference": difference, "zero": zero})
    return EXIT_OK


def cmd_classify(session: _Session) -> int:
    args = session.args
    c = session.read(args.c_file, "coalgebra").payload if args.c_file else None
    if c is not None:
        field_spec, lam = c.field, c.lam  # type: ignore[union-attr]
    elif args.field is not None:
        field_spec = _field_arg(args.field)
        lam = _lambda_arg(args.lam if args.lam is not None else "0", field_spec)
    else:
        raise DocumentError("classify needs --field or --c-file", "--field")
    if not field_spec.is_prime_field:
        raise DocumentError(f"classify enumerates over GF(p), got {field_spec.describe()}", "--field")
    if c is None:
        c = zero_structure(field_spec, args.dim_c, lam, prefix="c")
    if args.m_file:
        m = session.read(args.m_file, "coalgebra").payload
    else:
        m = zero_structure(field_spec, args.dim_m, lam, prefix="m")
    report = classify_small(c, m, session.budget)  # type: ignore[arg-type]
    body = {
        "candidates": report.candidates,
        "class_sizes": list(report.class_sizes),
        "classes": report.class_count,
        "cocycles": report.cocycles,
        "dims": [c.dim, m.dim],  # type: ignore[union-attr]
    }
    session.report("classify", c.field, body)  # type: ignore[union-attr]
    return EXIT_OK


def cmd_wells_sequence(session: _Session) -> int:
    doc = session.read(session.args.extension, "extension")
    report = wells_sequence_check(doc.payload, session.budget)  # type: ignore[arg-type]
    session.report("wells-sequence", doc.field, report.to_dict())
    return EXIT_OK if report.exact else EXIT_CHECK_FAILED


def _field_arg(text: str) -> FieldSpec:
    """``QQ``, ``GF(p)`` or a bare prime ``p``."""
    if text.isdigit():
        try:
            return FieldSpec.prime(int(text))
        except ValueError as exc:
            raise DocumentError(str(exc), "--field") from exc
    return parse_field(text, "--field")


def _lambda_arg(text: str, field_spec: FieldSpec) -> object:
    try:
        return field_spec.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(str(exc), "--lambda") from exc


COMMANDS: Dict[str, Callable[[_Session], int]] = {
    "verify": cmd_verify,
    "cohomology": cmd_cohomology,
    "dualize": cmd_dualize,
    "extend": cmd_extend,
    "cocycle-of": cmd_cocycle_of,
    "equivalent": cmd_equivalent,
    "extensible": cmd_extensible,
    "wells": cmd_wells,
    "classify": cmd_classify,
    "wells-sequence": cmd_wells_sequence,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="search budget (default from config / RBCOALG_BUDGET)")
    common.add_argument("--raw", action="store_true", help="skip checked construction when parsing")
    common.add_argument("--pretty", action="store_true", help="human-readable report")
    common.add_argument("--seed", type=int, default=None, help="echoed into reports")
    common.add_argument("--output", default=None, help="write the produced document here")
    common.add_argument("--config", default=None, help="configuration file")
    common.add_argument("--field", default=None, help="QQ, GF(p) or p; input documents must match")
    common.add_argument("--lambda", dest="lam", default=None, help="weight λ; input documents must match")

    parser = argparse.ArgumentParser(prog="rbcoalg", description="Exact engine for Rota-Baxter Lie coalgebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run every checker on a document")
    p.add_argument("file")

    p = sub.add_parser("cohomology", parents=[common], help="dimensions of Z, B and H")
    p.add_argument("files", nargs="+")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--complex", choices=[kind.value for kind in ComplexKind], default=ComplexKind.PLAIN.value)

    for name in ("dualize", "extend", "cocycle-of"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")

    p = sub.add_parser("equivalent", parents=[common], help="decide whether two cocycles are equivalent")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("extensible", parents=[common], help="decide whether a pair lifts to Aut(E)")
    p.add_argument("extension")
    p.add_argument("autpair")
    p.add_argument("--candidate", default=None, help="witness document to try first")

    p = sub.add_parser("wells", parents=[common], help="Wells class of a pair")
    p.add_argument("extension")
    p.add_argument("autpair")

    p = sub.add_parser("classify", parents=[common], help="count cocycle classes over a prime field")
    p.add_argument("--dim-c", type=int, default=1)
    p.add_argument("--dim-m", type=int, default=1)
    p.add_argument("--c-file", default=None)
    p.add_argument("--m-file", default=None)

    p = sub.add_parser("wells-sequence", parents=[common], help="check the Wells exact sequence")
    p.add_argument("extension")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(Path(args.config) if args.config else None)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOCUMENT
    configure_logging(config)
    session = _Session(args, config)
    try:
        return COMMANDS[args.command](session)
    except DocumentError as exc:
        logger.error("document error: %s", exc)
        return EXIT_DOCUMENT
    except CharacteristicGuard as exc:
        logger.error("%s", exc)
        return EXIT_CHARACTERISTIC
    except SearchBudgetExceeded as exc:
        logger.error("%s", exc)
        return EXIT_UNDECIDED
    except InvalidStructure as exc:
        logger.error("%s", exc)
        return EXIT_CHECK_FAILED
    except (EngineError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
