"""Observability: stderr logging, Prometheus textfile metrics and run tracing.

Example:
    >>> from conformal_rigidity.observability import configure_logging, metrics, run_context
    >>> configure_logging(level="INFO", log_format="json")
    >>> with run_context() as run_id:
    ...     metrics.increment_solve(kind="green", status="success")
"""

from conformal_rigidity.observability.logging import (
    JSONFormatter,
    TextFormatter,
    configure_logging,
)
from conformal_rigidity.observability.metrics import MetricsCollector, metrics
from conformal_rigidity.observability.tracing import (
    generate_run_id,
    get_operation,
    get_run_id,
    install_record_factory,
    run_context,
    trace_sync,
)

__all__ = [
    # Metrics
    "MetricsCollector",
    "metrics",
    # Logging
    "JSONFormatter",
    "TextFormatter",
    "configure_logging",
    # Tracing
    "generate_run_id",
    "get_operation",
    "get_run_id",
    "install_record_factory",
    "run_context",
    "trace_sync",
]
