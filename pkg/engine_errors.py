#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Exception hierarchy shared by every engine module.

All engine failures derive from :class:`EngineError` so that the command line
layer can map them to its stable exit codes in one place.
"""

from __future__ import annotations

from typing import Sequence

__all__ = [
    "EngineError",
    "FieldMismatch",
    "ShapeMismatch",
    "StructureMismatch",
    "NonInvertibleFactorial",
    "CharacteristicGuard",
    "InvalidStructure",
    "CocycleInvalid",
    "ExactnessViolation",
    "NotCPreserving",
    "MembershipViolation",
    "NonAbelianModule",
    "SearchBudgetExceeded",
    "InternalInconsistency",
    "DocumentError",
]


class EngineError(Exception):
    """Base class of all engine errors."""


class FieldMismatch(EngineError):
    """Two values over different fields were combined."""


class ShapeMismatch(EngineError):
    """Matrix or signature dimensions do not fit together."""


class StructureMismatch(EngineError):
    """Structures with different λ, field or carrier spaces were combined."""


class CharacteristicGuard(EngineError):
    """The field characteristic is too small for the requested degree."""


class NonInvertibleFactorial(CharacteristicGuard):
    """n! is zero in the field, so Alt(n) does not exist."""

    def __init__(self, n: int, characteristic: int) -> None:
        super().__init__(f"{n}! is not invertible in characteristic {characteristic}")
        self.n = n
        self.characteristic = characteristic


class InvalidStructure(EngineError):
    """A checked constructor refused data violating its axioms."""

    def __init__(self, what: str, failed: Sequence[str]) -> None:
        names = ", ".join(failed)
        super().__init__(f"{what} violates {names}")
        self.what = what
        self.failed = tuple(failed)


class CocycleInvalid(InvalidStructure):
    """A triple (h, ρ, φ) fails one of the cocycle equations."""

    def __init__(self, failed: Sequence[str]) -> None:
        super().__init__("non-abelian 2-cocycle", failed)


class ExactnessViolation(EngineError):
    """A short sequence is not exact, or a splitting identity fails."""


class NotCPreserving(EngineError):
    """An automorphism of E does not map f(C) into f(C)."""


class MembershipViolation(EngineError):
    """An argument is outside the subgroup the operation is defined on."""


class NonAbelianModule(EngineError):
    """Comodule extraction requested for an extension with Δ_M ≠ 0."""


class SearchBudgetExceeded(EngineError):
    """An exhaustive search would visit more candidates than allowed."""

    def __init__(self, requested: int, budget: int, what: str = "search") -> None:
        super().__init__(f"{what} needs {requested} candidates, budget is {budget}")
        self.requested = requested
        self.budget = budget


class InternalInconsistency(EngineError):
    """A check guaranteed by theory failed; indicates an implementation bug."""


class DocumentError(EngineError):
    """A JSON document could not be parsed into a structure."""

    def __init__(self, message: str, path: str = "$") -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
