"""
Finite domains for exhaustive search.

Elements of F_p and F_{p^2} are both pairs (a, b) meaning a + b*t with
t^2 = r, r the smallest quadratic non-residue mod p. Over F_p the second
component is always 0, so one evaluation routine serves both domains.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

from django.conf import settings

from polycore.fields import prime_field
from polycore.operations import projective_point_count
from utils.exceptions import EnumerationTooLarge, HypothesisViolation

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticExtension:
    """F_p[t] / (t^2 - r)."""
    prime: int

    @cached_property
    def non_residue(self):
        p = self.prime
        return next(r for r in range(2, p) if pow(r, (p - 1) // 2, p) == p - 1)

    def add(self, u, v):
        p = self.prime
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p)

    def mul(self, u, v):
        p = self.prime
        return (
            (u[0] * v[0] + self.non_residue * u[1] * v[1]) % p,
            (u[0] * v[1] + u[1] * v[0]) % p,
        )

    def inverse(self, u):
        p = self.prime
        norm = (u[0] * u[0] - self.non_residue * u[1] * u[1]) % p
        if not norm:
            raise ZeroDivisionError("zero has no inverse")
        scale = pow(norm, -1, p)
        return (u[0] * scale % p, -u[1] * scale % p)

    def embed(self, value):
        return (int(value) % self.prime, 0)

    def elements(self, degree):
        """All elements of F_{p^degree} as pairs, degree in {1, 2}."""
        p = self.prime
        if degree == 1:
            return [(a, 0) for a in range(p)]
        return [(a, b) for b in range(p) for a in range(p)]


@dataclass(frozen=True)
class EnumerationDomain:
    """
    P^{nvars-1}(F_{p^degree}), each point once, first nonzero coordinate 1.

    Points are ordered by the position of that leading 1, then by the
    remaining coordinates in the order of ``QuadraticExtension.elements``.
    """
    prime: int
    degree: int
    nvars: int

    def __post_init__(self):
        if self.degree not in (1, 2):
            raise HypothesisViolation(f"extension degree must be 1 or 2, got {self.degree}", code='degree')
        prime_field(self.prime)

    @property
    def order(self):
        return self.prime ** self.degree

    @cached_property
    def arithmetic(self):
        return QuadraticExtension(self.prime)

    @property
    def base_field(self):
        return prime_field(self.prime)

    @property
    def point_count(self):
        return projective_point_count(self.order, self.nvars)

    def __str__(self):
        return f'P^{self.nvars - 1}(F_{self.order})'

    def check_size(self):
        limit = settings.FLEXLOCUS['ENUMERATION_LIMIT']
        if self.point_count > limit:
            raise EnumerationTooLarge(
                f"{self} has {self.point_count} points, above the enumeration limit {limit}",
                code='enumeration_limit',
            )

    def shard(self, lead):
        """Points whose first nonzero coordinate sits at position ``lead``."""
        one, zero = (1, 0), (0, 0)
        elements = self.arithmetic.elements(self.degree)
        prefix = (zero,) * lead + (one,)
        for tail in itertools.product(elements, repeat=self.nvars - lead - 1):
            yield prefix + tail

    def points(self):
        self.check_size()
        for lead in range(self.nvars):
            yield from self.shard(lead)

    def normalize(self, point):
        arithmetic = self.arithmetic
        lead = next(c for c in point if c != (0, 0))
        inverse = arithmetic.inverse(lead)
        return tuple(arithmetic.mul(c, inverse) for c in point)
