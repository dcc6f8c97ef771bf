"""Exception families shared across the package.

Every error carries a ``family`` tag so the CLI can map error classes to
stable exit codes without importing half the package.
"""

from __future__ import annotations


class ForgeError(Exception):
    family = "generic"


# --- polynomial / context construction -------------------------------------

class PolynomialInputError(ForgeError):
    family = "polynomial"


class NotMonic(PolynomialInputError):
    pass


class NotSquareFree(PolynomialInputError):
    pass


class ReducibleInput(PolynomialInputError):
    """Monic input with an integer root of degree >= 2 (obvious reducibility)."""


class NoPositiveRealRoot(PolynomialInputError):
    pass


class DegreeCapExceeded(PolynomialInputError):
    pass


# --- certified numerics -----------------------------------------------------

class PrecisionExhausted(ForgeError):
    family = "precision"


class UndecidedAtPrecision(ForgeError):
    family = "precision"


class NoPerronPower(ForgeError):
    family = "search"


# --- cone machinery ----------------------------------------------------------

class ConeSearchFailed(ForgeError):
    family = "search"


class EnumerationCapExceeded(ForgeError):
    family = "search"


class DecompositionFailed(ForgeError):
    family = "search"


class RecipeSearchExhausted(ForgeError):
    family = "search"


# --- graphs and maps ---------------------------------------------------------

class GraphStructureError(ForgeError):
    family = "graph"


class CollapsedEdge(GraphStructureError):
    pass


class NotBipartite(GraphStructureError):
    pass


class EvenImageLength(GraphStructureError):
    pass


class EvenOrNonpositive(GraphStructureError):
    pass


class PathLengthExceeded(GraphStructureError):
    pass


class ExpansionViolation(ForgeError):
    family = "verify"

    def __init__(self, message: str, edge: str | None = None):
        super().__init__(message)
        self.edge = edge


class NonConvergence(ForgeError):
    family = "numeric"

    def __init__(self, message: str, best_estimate: float):
        super().__init__(message)
        self.best_estimate = best_estimate


class PipelineError(ForgeError):
    """A pipeline stage failed; carries the partial bundle assembled so far."""

    family = "verify"

    def __init__(self, message: str, partial_bundle=None, cause: Exception | None = None):
        super().__init__(message)
        self.partial_bundle = partial_bundle
        self.cause = cause


class SchemaError(ForgeError):
    family = "schema"


EXIT_CODES = {
    "generic": 1,
    "schema": 2,
    "polynomial": 3,
    "precision": 4,
    "search": 5,
    "graph": 6,
    "verify": 7,
    "numeric": 8,
}


def exit_code(err: BaseException) -> int:
    if isinstance(err, ForgeError):
        return EXIT_CODES.get(err.family, 1)
    return 1
