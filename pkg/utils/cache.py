import hashlib
import logging
from typing import Any, Optional

from django.conf import settings
from django.core.cache import cache

logger = logging.getLogger(__name__)


class CacheManager:
    """
    Centralized cache access for computed flex data.

    The backend is Redis when REDIS_URL is configured, local memory
    otherwise; a failing backend degrades to "not cached".
    """

    # Cache key prefixes
    PREFIXES = {
        'rho': 'flex:rho',
    }

    @classmethod
    def generate_key(cls, prefix: str, *args) -> str:
        key_parts = [cls.PREFIXES.get(prefix, prefix)]
        key_parts.extend(str(arg) for arg in args)
        return ":".join(key_parts)

    @classmethod
    def get(cls, key: str, default=None) -> Any:
        try:
            return cache.get(key, default)
        except Exception as e:
            logger.debug(f"Cache get skipped for key '{key}': {e}")
            return default

    @classmethod
    def set(cls, key: str, value: Any, timeout: Optional[int] = None) -> bool:
        try:
            cache.set(key, value, settings.CACHE_TTL if timeout is None else timeout)
            return True
        except Exception as e:
            logger.debug(f"Cache set skipped for key '{key}': {e}")
            return False


class CacheKeys:
    """
    Standardized cache key generators
    """

    @staticmethod
    def digest(*parts) -> str:
        return hashlib.sha256("\x1f".join(str(p) for p in parts).encode()).hexdigest()

    @staticmethod
    def flex_polynomial(form_text, field_spec, seed, ell_text=''):
        """Key of a flex polynomial: canonical f text, field, seed and forced linear form."""
        return CacheManager.generate_key('rho', CacheKeys.digest(form_text, field_spec, seed, ell_text))
