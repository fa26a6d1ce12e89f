"""Solved Green model cache.

One Green solve feeds the logarithmic capacity, the delta check, the Moebius
defect, the sublevel sweep and the co-area flux, so chains, sweeps and corpus
runs share solved models through this cache.
"""

import logging
import threading
from collections import OrderedDict
from collections.abc import Callable

from conformal_rigidity.config.settings import CacheConfig, QuadratureConfig, SolverConfig
from conformal_rigidity.models.domain import DomainSpec, spec_key
from conformal_rigidity.models.results import GreenModel
from conformal_rigidity.observability.metrics import metrics

logger = logging.getLogger(__name__)

CacheKey = tuple[str, float, float, str, str]


def green_key(
    spec: DomainSpec, pole: complex, solver: SolverConfig, quadrature: QuadratureConfig
) -> CacheKey:
    """Build the cache key of a Green solve.

    Args:
        spec: Domain specification.
        pole: Pole z0.
        solver: Solver settings (basis sizes, cutoffs).
        quadrature: Quadrature settings (node counts, grading).

    Returns:
        CacheKey: Hashable key; equal keys give identical models.
    """
    return (
        spec_key(spec),
        pole.real,
        pole.imag,
        solver.model_dump_json(),
        quadrature.model_dump_json(),
    )


class ModelCache:
    """Thread-safe LRU cache of solved Green models.

    Attributes:
        config: Cache configuration.

    Example:
        >>> cache = ModelCache(CacheConfig(max_size=16))
        >>> model = cache.get_or_solve(key, lambda: solve_green(spec, 0j))
        >>> cache.get(key) is model
        True
    """

    def __init__(self, config: CacheConfig):
        """Initialize the cache.

        Args:
            config: Cache configuration with size limit and enable flag.
        """
        self.config = config
        self._cache: OrderedDict[CacheKey, GreenModel] = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: CacheKey) -> GreenModel | None:
        """Return a cached model and mark it most recently used.

        Args:
            key: Cache key from ``green_key``.

        Returns:
            GreenModel | None: The cached model, None on a miss or when disabled.
        """
        if not self.config.enabled:
            return None
        with self._lock:
            model = self._cache.get(key)
            if model is None:
                metrics.increment_cache_event("miss")
                return None
            self._cache.move_to_end(key)
        metrics.increment_cache_event("hit")
        return model

    def put(self, key: CacheKey, model: GreenModel) -> None:
        """Store a model, evicting the least recently used entry when full."""
        if not self.config.enabled:
            return
        with self._lock:
            self._cache[key] = model
            self._cache.move_to_end(key)
            while len(self._cache) > self.config.max_size:
                evicted, _ = self._cache.popitem(last=False)
                metrics.increment_cache_event("eviction")
                logger.debug("Evicted Green model", extra={"domain": evicted[0][:80]})

    def get_or_solve(self, key: CacheKey, solve: Callable[[], GreenModel]) -> GreenModel:
        """Return the cached model or solve, store and return it.

        Concurrent misses on the same key may both solve; the results are identical.
        """
        model = self.get(key)
        if model is not None:
            return model
        model = solve()
        self.put(key, model)
        return model

    def clear(self) -> None:
        """Drop every cached model."""
        with self._lock:
            self._cache.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)


_model_cache: ModelCache | None = None


def get_model_cache(config: CacheConfig | None = None) -> ModelCache:
    """Get or create the process-wide model cache.

    Args:
        config: Configuration used on first creation.

    Returns:
        ModelCache: The shared cache.
    """
    global _model_cache
    if _model_cache is None:
        _model_cache = ModelCache(config or CacheConfig())
    return _model_cache


def reset_model_cache() -> None:
    """Drop the shared cache. Useful for testing."""
    global _model_cache
    _model_cache = None
