"""
Process-wide cache for topology-only artefacts.

Grid graphs, dual graphs (with their spectra) and DCT scan tables depend only
on the block geometry, so they are built once per process and shared by every
block, on both the encoder and the decoder side.

file: gtcodec/gtcodec/cache/cache_manager.py
"""

import threading

from typing import (
    Any,
    Callable,
    Hashable,
    Optional,
)
from cachetools import LRUCache

# Logger
from gtcodec.logger import logger


class CacheManager:
    """
    Thread-safe wrapper around a cachetools LRU cache.

    `get_or_create` holds the lock while the factory runs, so each key is
    initialised exactly once even when several threads ask for it together.
    """

    def __init__(self, max_size: int = 32) -> None:
        """
        Initialize the cache manager.

        Args:
            max_size: Maximum number of geometries kept alive.
        """
        self.max_size = max_size
        self.lock = threading.RLock()
        self.cache: Optional[LRUCache] = LRUCache(maxsize=max_size)
        logger.debug(f"CacheManager initialized: max_size={max_size}")

    def get(self, key: Hashable) -> Optional[Any]:
        """
        Retrieve a value from the cache.

        Args:
            key: Cache key

        Returns:
            Cached value or None if not found
        """
        with self.lock:
            return self.cache.get(key)

    def set(self, key: Hashable, value: Any) -> None:
        """Store a value in the cache."""
        with self.lock:
            self.cache[key] = value
            logger.debug(f"Cache SET: key={key}, value_type={type(value).__name__}, cache_size={len(self.cache)}/{self.max_size}")

    def get_or_create(self, key: Hashable, factory: Callable[[], Any]) -> Any:
        """
        Get a value from the cache or build it with `factory`.

        Args:
            key: Cache key
            factory: Zero-argument callable producing the value on a miss

        Returns:
            The cached or freshly built value
        """
        with self.lock:
            value = self.get(key)
            if value is None:
                logger.debug(f"Cache MISS: key={key}, building")
                value = factory()
                self.set(key, value)
            return value

    def close(self) -> None:
        """Close/cleanup the cache."""
        with self.lock:
            if self.cache is not None:
                self.cache.clear()
                self.cache = None


# Global cache manager instance
_cache_manager: Optional[CacheManager] = None
_init_lock = threading.Lock()


def get_cache_manager() -> CacheManager:
    """
    Get the global cache manager instance, creating it on first use.

    Returns:
        The process-wide cache manager
    """
    global _cache_manager
    if _cache_manager is None:
        with _init_lock:
            if _cache_manager is None:
                _cache_manager = CacheManager()
    return _cache_manager


def close_cache_manager() -> None:
    """Close the global cache manager."""
    global _cache_manager
    with _init_lock:
        if _cache_manager:
            _cache_manager.close()
            _cache_manager = None
