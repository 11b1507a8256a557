"""
Cache module for topology-only artefacts.

file: gtcodec/gtcodec/cache/__init__.py
"""

from gtcodec.cache.cache_manager import (
    CacheManager,
    get_cache_manager,
    close_cache_manager,
)

__all__ = [
    "CacheManager",
    "get_cache_manager",
    "close_cache_manager",
]
