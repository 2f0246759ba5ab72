"""
Signals of the flex app.
Freshly computed flex polynomials are written to the cache.
"""

import logging

from django.dispatch import Signal, receiver

from utils.cache import CacheManager

logger = logging.getLogger(__name__)
cache_manager = CacheManager()

# Sent by flex_polynomial with ``flex`` (a FlexPolynomial) and ``key``.
flex_polynomial_computed = Signal()


@receiver(flex_polynomial_computed)
def cache_flex_polynomial(sender, flex, key, **kwargs):
    if cache_manager.set(key, flex.as_payload()):
        logger.debug(f"cached flex polynomial of degree {flex.degree} under {key}")
