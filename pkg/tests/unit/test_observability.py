"""Unit tests for logging, metrics and run tracing."""

import contextvars
import json
import logging
import threading
from collections.abc import Iterator
from pathlib import Path

import pytest

from conformal_rigidity.observability.logging import (
    JSONFormatter,
    TextFormatter,
    configure_logging,
)
from conformal_rigidity.observability.metrics import MetricsCollector, metrics
from conformal_rigidity.observability.tracing import (
    get_operation,
    get_run_id,
    run_context,
    trace_sync,
)


def make_record(**extra: object) -> logging.LogRecord:
    """Build a record as ``logger.info("Solved", extra=...)`` would."""
    record = logging.LogRecord(
        name="conformal_rigidity.services.green",
        level=logging.INFO,
        pathname=__file__,
        lineno=1,
        msg="Solved Green function",
        args=(),
        exc_info=None,
        func="solve_green",
    )
    for key, value in extra.items():
        setattr(record, key, value)
    return record


class TestFormatters:
    """Tests for JSON and text formatters."""

    @pytest.fixture
    def restore_root_logger(self) -> Iterator[None]:
        """Put back the root handlers and level after reconfiguring."""
        root = logging.getLogger()
        handlers, level = root.handlers[:], root.level
        yield
        for handler in root.handlers[:]:
            root.removeHandler(handler)
        for handler in handlers:
            root.addHandler(handler)
        root.setLevel(level)

    def test_json_extra_fields(self) -> None:
        """Test that extra fields are nested under "extra"."""
        payload = json.loads(JSONFormatter().format(make_record(residual=1e-13, basis_size=97)))
        assert payload["message"] == "Solved Green function"
        assert payload["level"] == "INFO"
        assert payload["function"] == "solve_green"
        assert payload["extra"] == {"residual": 1e-13, "basis_size": 97}
        assert "run_id" not in payload

    def test_json_run_fields(self) -> None:
        """Test that run id and operation are top-level keys."""
        record = make_record(run_id="abc", operation="compute_chain")
        payload = json.loads(JSONFormatter().format(record))
        assert payload["run_id"] == "abc"
        assert payload["operation"] == "compute_chain"
        assert "extra" not in payload

    def test_json_complex_values(self) -> None:
        """Test that non-JSON values are written as strings."""
        payload = json.loads(JSONFormatter().format(make_record(pole=0.5j)))
        assert payload["extra"]["pole"] == "0.5j"

    def test_text_format(self) -> None:
        """Test key=value pairs and the run id suffix."""
        line = TextFormatter().format(make_record(residual=0.5, run_id="abc"))
        assert "[INFO] conformal_rigidity.services.green - Solved Green function" in line
        assert "residual=0.5" in line
        assert line.endswith("[run_id=abc]")

    def test_configure_logging(self, restore_root_logger: None) -> None:
        """Test that one stderr handler with the chosen formatter is installed."""
        configure_logging(level="DEBUG", log_format="json")
        root = logging.getLogger()
        assert root.level == logging.DEBUG
        assert len(root.handlers) == 1
        assert isinstance(root.handlers[0].formatter, JSONFormatter)
        assert logging.getLogger("matplotlib").level == logging.WARNING
        configure_logging()
        assert isinstance(root.handlers[0].formatter, TextFormatter)


class TestMetrics:
    """Tests for the metrics collector."""

    def test_singleton(self) -> None:
        """Test that the collector is a singleton."""
        assert MetricsCollector() is metrics

    def test_solve_counter(self) -> None:
        """Test labeled solve counts."""
        metrics.increment_solve(kind="green", status="success")
        metrics.increment_solve(kind="green", status="success")
        value = metrics.registry.get_sample_value(
            "conformal_solves_total", {"kind": "green", "status": "success"}
        )
        assert value == 2.0

    def test_reset(self) -> None:
        """Test that a reset drops recorded values."""
        metrics.increment_chain_violations(3)
        metrics.reset_all_metrics()
        assert metrics.registry.get_sample_value("conformal_chain_violations_total") == 0.0

    def test_write_textfile(self, tmp_path: Path) -> None:
        """Test the Prometheus text file."""
        metrics.set_condition(kind="szego", condition=12.5)
        metrics.observe_green_residual(1e-13)
        path = tmp_path / "metrics.prom"
        metrics.write_textfile(path)
        text = path.read_text()
        assert 'conformal_last_condition_number{kind="szego"} 12.5' in text
        assert "conformal_green_residual_count 1.0" in text


class TestTracing:
    """Tests for run ids and traced operations."""

    def test_run_context(self) -> None:
        """Test binding and unbinding of the run id."""
        assert get_run_id() is None
        with run_context("fixed") as run_id:
            assert run_id == "fixed"
            assert get_run_id() == "fixed"
        assert get_run_id() is None

    def test_generated_run_id(self) -> None:
        """Test that a run id is generated when none is given."""
        with run_context() as run_id:
            assert len(run_id) == 36

    def test_trace_sync_stamps_records(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test that traced functions tag their records."""
        logger = logging.getLogger("conformal_rigidity.test")

        @trace_sync(operation="level_scan")
        def traced() -> int:
            logger.warning("inside")
            return 7

        with caplog.at_level(logging.WARNING), run_context("abc"):
            assert traced() == 7
        record = caplog.records[-1]
        assert record.run_id == "abc"  # type: ignore[attr-defined]
        assert record.operation == "level_scan"  # type: ignore[attr-defined]

    def test_trace_sync_outside_run(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test that records outside a run are left alone."""
        logger = logging.getLogger("conformal_rigidity.test")

        @trace_sync()
        def traced() -> None:
            logger.warning("outside")

        with caplog.at_level(logging.WARNING):
            traced()
        assert not hasattr(caplog.records[-1], "run_id")

    def test_nested_operations(self) -> None:
        """Test that the innermost traced call names the operation."""

        @trace_sync(operation="inner")
        def inner() -> str | None:
            return get_operation()

        @trace_sync(operation="outer")
        def outer() -> tuple[str | None, str | None]:
            return inner(), get_operation()

        assert outer() == ("inner", "outer")
        assert get_operation() is None

    def test_overlapping_threads_leave_logging_intact(
        self, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test traced calls that enter and leave out of order on two threads."""
        logger = logging.getLogger("conformal_rigidity.test")
        entered = [threading.Event(), threading.Event()]
        first_left = threading.Event()

        @trace_sync(operation="level")
        def traced(index: int) -> None:
            entered[index].set()
            # thread 0 enters first and leaves first, while thread 1 is still inside
            if index == 0:
                assert entered[1].wait(timeout=5)
            else:
                assert first_left.wait(timeout=5)
            logger.warning("level %d", index)

        def worker(index: int) -> None:
            if index == 1:
                assert entered[0].wait(timeout=5)
            traced(index)
            if index == 0:
                first_left.set()

        factory = logging.getLogRecordFactory()
        with caplog.at_level(logging.WARNING):
            with run_context("overlap"):
                threads = [
                    threading.Thread(target=contextvars.copy_context().run, args=(worker, i))
                    for i in (0, 1)
                ]
                for thread in threads:
                    thread.start()
                for thread in threads:
                    thread.join(timeout=10)
            logger.warning("after the run")

        assert logging.getLogRecordFactory() is factory
        inside = [r for r in caplog.records if r.getMessage().startswith("level")]
        assert sorted(r.getMessage() for r in inside) == ["level 0", "level 1"]
        assert all(r.run_id == "overlap" for r in inside)  # type: ignore[attr-defined]
        assert all(r.operation == "level" for r in inside)  # type: ignore[attr-defined]
        assert not hasattr(caplog.records[-1], "run_id")
