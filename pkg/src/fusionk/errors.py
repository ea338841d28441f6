"""Exception hierarchy shared by all fusionk modules."""

from __future__ import annotations


class FusionError(Exception):
    """Base class for every error raised by fusionk."""

    code = "fusion_error"


class UnknownLabelError(FusionError):
    """A label is not recognised by the backend it was handed to."""

    code = "unknown_label"


class MissingProductError(UnknownLabelError):
    """A (truncated) fusion table has no entry for the requested pair."""

    code = "missing_product"


class SchemaError(FusionError):
    """A JSON document does not match the expected schema."""

    code = "schema_error"


class ValidationFailed(FusionError):
    """An ingested fusion table violates one of the semiring axioms."""

    code = "validation_failed"

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class GateError(FusionError):
    """A precondition of a computation (e.g. the containment condition) is not established."""

    code = "gate_failure"

    def __init__(self, message: str, status=None):
        super().__init__(message)
        self.status = status
