"""Caching module for solved models."""

from conformal_rigidity.cache.model_cache import (
    ModelCache,
    get_model_cache,
    green_key,
    reset_model_cache,
)

__all__ = ["ModelCache", "get_model_cache", "green_key", "reset_model_cache"]
