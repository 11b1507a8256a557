"""
The process-wide topology cache.

file: gtcodec/tests/test_cache.py
"""

from gtcodec.cache import (
    CacheManager,
    close_cache_manager,
    get_cache_manager,
)


class TestCacheManager:
    def test_factory_runs_once_per_key(self):
        cache = CacheManager(max_size=4)
        calls = []

        def factory():
            calls.append(1)
            return ("grid", 8)

        first = cache.get_or_create(("grid", 8), factory)
        second = cache.get_or_create(("grid", 8), factory)
        assert first is second
        assert len(calls) == 1
        assert cache.get(("grid", 8)) is first

    def test_set_value_is_not_rebuilt(self):
        cache = CacheManager()
        cache.set("dual", [1, 2])
        assert cache.get_or_create("dual", lambda: [3]) == [1, 2]
        assert cache.get("missing") is None

    def test_least_recently_used_entry_is_evicted(self):
        cache = CacheManager(max_size=2)
        for key in ("a", "b", "c"):
            cache.set(key, key.upper())
        assert cache.get("a") is None
        assert cache.get("c") == "C"

    def test_global_instance(self):
        manager = get_cache_manager()
        assert get_cache_manager() is manager
        close_cache_manager()
        assert get_cache_manager() is not manager
