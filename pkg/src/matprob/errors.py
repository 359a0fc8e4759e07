"""Structured errors shared across the engine."""

from __future__ import annotations


class MatprobError(Exception):
    """Base class; carries a JSON-friendly payload for the CLI."""

    code = "error"

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


class NonSplitSpectrum(MatprobError):
    """An eigenvalue of a square matrix is irrational."""

    code = "non-split-spectrum"

    def __init__(self, factor_render: str):
        super().__init__(f"spectrum does not split over Q; residual factor {factor_render}")
        self.factor_render = factor_render

    def payload(self) -> dict:
        d = super().payload()
        d["factor"] = self.factor_render
        return d


class NotRegularizable(MatprobError):
    """No invertible pivot in the linear part of the first differential."""

    code = "not-regularizable"

    def __init__(self, message: str, detail=None):
        super().__init__(message)
        self.detail = detail or {}

    def payload(self) -> dict:
        d = super().payload()
        d.update(self.detail)
        return d


class NotFiniteDimensional(MatprobError):
    code = "not-finite-dimensional"


class NotAdmissible(MatprobError):
    code = "not-admissible"


class ClosureFailure(MatprobError):
    code = "closure-failure"


class ParseError(MatprobError):
    code = "parse-error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = f" at line {line}" if line is not None else ""
        if column is not None:
            loc += f", column {column}"
        super().__init__(message + loc)
        self.line = line
        self.column = column
