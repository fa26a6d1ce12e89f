"""Run context propagation.

Each CLI invocation runs inside ``run_context()``; functions decorated with
``trace_sync`` bind their operation name for the duration of the call. One
record factory, installed once per process, stamps the run id and operation
from context variables, so worker threads started with
``contextvars.copy_context().run`` tag their records without touching global
logging state. Run ids appear in logs only, never in reports.
"""

import contextvars
import logging
import threading
import uuid
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from functools import wraps
from typing import Any, ParamSpec, TypeVar

_run_id_var: contextvars.ContextVar[str | None] = contextvars.ContextVar("run_id", default=None)
_operation_var: contextvars.ContextVar[str | None] = contextvars.ContextVar(
    "operation", default=None
)

_factory_lock = threading.Lock()
_base_factory: Callable[..., logging.LogRecord] | None = None

P = ParamSpec("P")
R = TypeVar("R")


def generate_run_id() -> str:
    """Generate a unique run id."""
    return str(uuid.uuid4())


def get_run_id() -> str | None:
    """Get the current run id, or None outside a run context."""
    return _run_id_var.get()


def get_operation() -> str | None:
    """Get the innermost traced operation, or None outside traced calls."""
    return _operation_var.get()


def _record_factory(*args: Any, **kwargs: Any) -> logging.LogRecord:
    record = (_base_factory or logging.LogRecord)(*args, **kwargs)
    run_id = _run_id_var.get()
    if run_id:
        record.run_id = run_id
        record.operation = _operation_var.get()
    return record


def install_record_factory() -> None:
    """Install the context-reading record factory (idempotent, thread-safe)."""
    global _base_factory
    with _factory_lock:
        if _base_factory is not None:
            return
        _base_factory = logging.getLogRecordFactory()
        logging.setLogRecordFactory(_record_factory)


@contextmanager
def run_context(run_id: str | None = None) -> Iterator[str]:
    """Context manager binding a run id for the duration of a run.

    Args:
        run_id: Optional run id. If not provided, a new one is generated.

    Yields:
        The run id for this context.
    """
    install_record_factory()
    if run_id is None:
        run_id = generate_run_id()
    token = _run_id_var.set(run_id)
    try:
        yield run_id
    finally:
        _run_id_var.reset(token)


def trace_sync(operation: str | None = None) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Decorator that tags log records with the run id and operation name.

    Args:
        operation: Optional operation name. If not provided, uses function name.

    Returns:
        Decorated function.

    Example:
        >>> @trace_sync(operation="solve_green")
        ... def solve(spec): ...
    """

    def decorator(func: Callable[P, R]) -> Callable[P, R]:
        op_name = operation or func.__name__
        install_record_factory()

        @wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            token = _operation_var.set(op_name)
            try:
                return func(*args, **kwargs)
            finally:
                _operation_var.reset(token)

        return wrapper

    return decorator
