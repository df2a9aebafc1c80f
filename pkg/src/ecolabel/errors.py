"""Exception hierarchy shared by all ecolabel modules.

Every error carries a stable machine-readable ``code`` slug; the API layer
maps these onto HTTP statuses and error envelopes.
"""

from __future__ import annotations


class EcoLabelError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_envelope(self) -> dict:
        envelope: dict = {"code": self.code, "message": self.message}
        if self.details:
            envelope["details"] = self.details
        return envelope


# --- label engine ---------------------------------------------------------

class InvalidConfig(EcoLabelError):
    code = "invalid_config"

    def __init__(self, violations: list[str]):
        super().__init__(
            "configuration is invalid: " + "; ".join(violations),
            details={"violations": violations},
        )
        self.violations = violations


class NonFiniteInput(EcoLabelError):
    code = "non_finite_input"


class NoRatableMetrics(EcoLabelError):
    code = "no_ratable_metrics"


class PhaseMismatch(EcoLabelError):
    code = "phase_mismatch"


class DerivationDivisionByZero(EcoLabelError):
    code = "derivation_division_by_zero"


class EmptyPopulation(EcoLabelError):
    code = "empty_population"


# --- ingest ---------------------------------------------------------------

class MalformedFile(EcoLabelError):
    code = "malformed_file"


class MissingColumn(EcoLabelError):
    code = "missing_column"


class NonNumericValue(EcoLabelError):
    code = "non_numeric_value"


class EmptyRows(EcoLabelError):
    code = "empty_rows"


class NegativeValue(EcoLabelError):
    code = "negative_value"


class NonFiniteValue(EcoLabelError):
    code = "non_finite_value"


# --- connectors -----------------------------------------------------------

class ModelNotFound(EcoLabelError):
    code = "model_not_found"


class ProviderUnavailable(EcoLabelError):
    code = "provider_unavailable"


class MalformedProviderResponse(EcoLabelError):
    code = "malformed_provider_response"


class UnknownProvider(EcoLabelError):
    code = "unknown_provider"


class SyncAlreadyRunning(EcoLabelError):
    code = "sync_already_running"


# --- repository -----------------------------------------------------------

class StorageFailure(EcoLabelError):
    code = "storage_failure"


class NotFound(EcoLabelError):
    code = "not_found"


# --- api ------------------------------------------------------------------

class Unauthorized(EcoLabelError):
    code = "unauthorized"


class Forbidden(EcoLabelError):
    code = "forbidden"


# --- inference probe ------------------------------------------------------

class InvalidSpec(EcoLabelError):
    code = "invalid_spec"


class EndpointUnreachable(EcoLabelError):
    code = "endpoint_unreachable"


class NoSuccessfulCalls(EcoLabelError):
    code = "no_successful_calls"
