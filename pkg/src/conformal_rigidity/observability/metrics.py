"""Prometheus metrics for solver runs.

Metrics live in a dedicated registry and are written to a text file at the
end of a CLI run (node-exporter textfile format); nothing listens on the network.
"""

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile


class MetricsCollector:
    """Centralized metrics collector using Prometheus client.

    Metrics Categories:
    - Solver metrics: solve counts, durations, residuals, condition numbers
    - Chain metrics: ordering violations
    - Cache metrics: Green model cache hits and misses

    Example:
        >>> metrics = MetricsCollector()
        >>> metrics.increment_solve(kind="green", status="success")
        >>> metrics.observe_solve_duration(kind="green", duration=0.12)
    """

    _instance: "MetricsCollector | None" = None

    def __new__(cls) -> "MetricsCollector":
        """Ensure singleton instance."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialize_metrics()
        return cls._instance

    def _initialize_metrics(self) -> None:
        self.registry = CollectorRegistry()

        self.solves: Counter = Counter(
            "conformal_solves_total",
            "Total number of solver invocations",
            labelnames=["kind", "status"],
            registry=self.registry,
        )
        self.solve_duration: Histogram = Histogram(
            "conformal_solve_duration_seconds",
            "Solver wall time in seconds",
            labelnames=["kind"],
            buckets=(0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0),
            registry=self.registry,
        )
        self.green_residual: Histogram = Histogram(
            "conformal_green_residual",
            "Boundary residual of Green solves",
            buckets=(1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2),
            registry=self.registry,
        )
        self.last_condition: Gauge = Gauge(
            "conformal_last_condition_number",
            "Condition number of the most recent Gram solve",
            labelnames=["kind"],
            registry=self.registry,
        )
        self.chain_violations: Counter = Counter(
            "conformal_chain_violations_total",
            "Chain ordering violations detected",
            registry=self.registry,
        )
        self.cache_events: Counter = Counter(
            "conformal_cache_events_total",
            "Green model cache events",
            labelnames=["event"],
            registry=self.registry,
        )

    def increment_solve(self, kind: str, status: str) -> None:
        """Increment the solve counter.

        Args:
            kind: Solver kind (green, bergman, higher_bergman, szego).
            status: Outcome (success, error).
        """
        self.solves.labels(kind=kind, status=status).inc()

    def observe_solve_duration(self, kind: str, duration: float) -> None:
        """Record a solve duration in seconds."""
        self.solve_duration.labels(kind=kind).observe(duration)

    def observe_green_residual(self, residual: float) -> None:
        """Record the boundary residual of a Green solve."""
        self.green_residual.observe(residual)

    def set_condition(self, kind: str, condition: float) -> None:
        """Set the condition number of the latest Gram solve."""
        self.last_condition.labels(kind=kind).set(condition)

    def increment_chain_violations(self, count: int = 1) -> None:
        """Count chain ordering violations."""
        self.chain_violations.inc(count)

    def increment_cache_event(self, event: str) -> None:
        """Count a cache hit, miss or eviction."""
        self.cache_events.labels(event=event).inc()

    def write_textfile(self, path: Path) -> None:
        """Write the registry in Prometheus text format.

        Args:
            path: Destination file (written atomically by prometheus_client).
        """
        write_to_textfile(str(path), self.registry)

    def reset_all_metrics(self) -> None:
        """Replace every metric with a fresh one. Useful for testing."""
        self._initialize_metrics()


# Singleton instance
metrics = MetricsCollector()
