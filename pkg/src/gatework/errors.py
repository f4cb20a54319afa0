"""Exception hierarchy shared across the package.

Every domain error derives from ``GateworkError`` so the service layer can
map them to wire-level error codes in one place.
"""

from __future__ import annotations


class GateworkError(Exception):
    """Base class for all domain errors."""

    #: short machine-readable code used in API envelopes
    code = "error"


# --- task_core ---------------------------------------------------------


class IllegalTransition(GateworkError):
    """Event kind is not legal from the current phase/state."""

    code = "illegal_transition"


class TerminalState(IllegalTransition):
    """Event applied to a task already in Finalized or Declined."""

    code = "terminal_state"


class SequenceGap(GateworkError):
    """Appended event's seq does not continue the log."""

    code = "sequence_gap"


# --- orchestrator ------------------------------------------------------


class NoTemplate(GateworkError):
    """Unknown category and the template library has no generic fallback."""

    code = "no_template"


class TerminalTask(GateworkError):
    """next_action called on a finished task."""

    code = "terminal_task"


class NotExecutable(GateworkError):
    """next_action called before the task reached the execution loop."""

    code = "not_executable"


class NoMatch(GateworkError):
    """No worker in the pool covers the required skills."""

    code = "no_match"


class NoPendingGate(GateworkError):
    """Gate decision references a step without a pending gate."""

    code = "no_pending_gate"


# --- qa_layer ----------------------------------------------------------


class MalformedTable(GateworkError):
    """Tabular data could not be parsed into a rectangular table."""

    code = "malformed_table"


class TooFewSamples(GateworkError):
    """Self-consistency called with fewer than two samples."""

    code = "too_few_samples"


# --- workers -----------------------------------------------------------


class WorkerUnavailable(GateworkError):
    """Worker cannot take the step (no script, closed handle, ...)."""

    code = "worker_unavailable"


class SkillMismatch(GateworkError):
    """Worker skills do not cover the step's required skills."""

    code = "skill_mismatch"


class NoAcceptableBid(GateworkError):
    """No bid passes the job-success / newcomer filter."""

    code = "no_acceptable_bid"


# --- sim_engine --------------------------------------------------------


class EmptyQueue(GateworkError):
    """advance() called on an empty event queue."""

    code = "empty_queue"


class ConfigInvalid(GateworkError):
    """Simulation config failed validation."""

    code = "config_invalid"


# --- evalstats ---------------------------------------------------------


class ManifestInvalid(GateworkError):
    """Benchmark manifest missing, empty, or unparseable."""

    code = "manifest_invalid"


class DistributionMismatch(GateworkError):
    """Dataset area/category counts differ from the released distribution."""

    code = "distribution_mismatch"

    def __init__(self, mismatches: list[str]):
        self.mismatches = list(mismatches)
        super().__init__("; ".join(self.mismatches))


class NoRecords(GateworkError):
    """No labeled results for the requested system."""

    code = "no_records"


class InvalidCounts(GateworkError):
    """z-test counts violate 0 <= x <= n, n >= 1."""

    code = "invalid_counts"


class EmptyValues(GateworkError):
    """Bootstrap called on an empty value list."""

    code = "empty_values"


class SystemMismatch(GateworkError):
    """Frontier inputs do not cover the same set of systems."""

    code = "system_mismatch"


# --- service_cli -------------------------------------------------------


class ValidationFailed(GateworkError):
    """Submitted brief failed validation."""

    code = "validation_failed"


class NotFound(GateworkError):
    """Unknown task or resource id."""

    code = "not_found"


class Conflict(GateworkError):
    """Concurrent mutation lost the first-writer-wins race."""

    code = "conflict"
