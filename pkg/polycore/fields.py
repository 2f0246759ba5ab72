"""
Exact coefficient fields: the rationals and prime fields F_p.

Scalars handed around the toolkit are elements of the sympy domain of the
ambient field (``QQ`` or ``GF(p)`` with canonical residues in [0, p)).
The elimination kernels work on a lighter "kernel" representation:
plain Python ints reduced mod p, or the ``QQ`` dtype itself.
"""

import logging
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Optional

from sympy import isprime
from sympy.polys.domains import GF, QQ

from utils.exceptions import HypothesisViolation, UsageError

logger = logging.getLogger(__name__)

# An element of ExactField.domain (QQ dtype or a canonical GF(p) residue).
ExactScalar = Any


@dataclass(frozen=True)
class ExactField:
    """
    Field context shared by every scalar of one computation.

    ``modulus`` is None for the rationals, an odd prime otherwise.
    """
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is None:
            return
        if not isinstance(self.modulus, int) or self.modulus < 3 or not isprime(self.modulus):
            raise HypothesisViolation(
                f"field modulus must be an odd prime, got {self.modulus!r}",
                code='bad_modulus',
            )

    def __str__(self):
        return 'Q' if self.modulus is None else f'F_{self.modulus}'

    @property
    def spec(self):
        """The ``--field`` spelling of this field."""
        return 'q' if self.modulus is None else f'fp:{self.modulus}'

    @property
    def is_prime_field(self):
        return self.modulus is not None

    @property
    def characteristic(self):
        return self.modulus or 0

    @cached_property
    def domain(self):
        if self.modulus is None:
            return QQ
        return GF(self.modulus, symmetric=False)

    @property
    def zero(self):
        return self.domain.zero

    @property
    def one(self):
        return self.domain.one

    def __call__(self, value):
        """Coerce an int, a domain element or an ``a/b`` string into the field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if self.modulus is not None and isinstance(value, int):
            return self.domain(value % self.modulus)
        try:
            return self.domain.convert(value)
        except Exception as e:
            raise UsageError(f"cannot coerce {value!r} into {self}: {e}", code='coercion')

    def parse_scalar(self, text):
        text = text.strip()
        try:
            if '/' in text:
                num, den = (int(part) for part in text.split('/', 1))
            else:
                num, den = int(text), 1
        except ValueError:
            raise HypothesisViolation(f"malformed coefficient {text!r}", code='syntax')
        if den == 0 or (self.modulus is not None and den % self.modulus == 0):
            raise HypothesisViolation(
                f"coefficient {text!r} has a denominator that vanishes in {self}",
                code='zero_denominator',
            )
        if self.modulus is None:
            return QQ(num, den)
        return self.lift(num * pow(den, -1, self.modulus))

    def format_scalar(self, value):
        """Canonical text: residues in [0, p), rationals as ``a`` or ``a/b``."""
        if self.modulus is not None:
            return str(int(value) % self.modulus)
        value = QQ.convert(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f'{value.numerator}/{value.denominator}'

    # Kernel representation used by the elimination loops.

    def kernel(self, value):
        if self.modulus is not None:
            return int(value) % self.modulus
        return QQ.convert(value)

    def kernel_reduce(self, value):
        if self.modulus is not None:
            return value % self.modulus
        return value

    def kernel_inverse(self, value):
        if self.modulus is not None:
            return pow(int(value), -1, self.modulus)
        return QQ.one / value

    def lift(self, value):
        if self.modulus is not None:
            return self.domain(int(value) % self.modulus)
        return QQ.convert(value)

    def random_element(self, rng: random.Random, nonzero=False, bound=9):
        """
        A random scalar: uniform residue mod p, or an integer in
        [-bound, bound] over Q.
        """
        while True:
            if self.modulus is not None:
                value = rng.randrange(self.modulus)
            else:
                value = rng.randint(-bound, bound)
            if value or not nonzero:
                return self.lift(value)

    def distinct_nodes(self, count, rng: Optional[random.Random] = None):
        """
        ``count`` pairwise distinct kernel values for interpolation.

        Over Q these are 0, 1, -1, 2, -2, ...; over F_p a seeded random
        subset when ``rng`` is given, else 0, 1, ..., count-1.
        """
        if self.modulus is None:
            return [QQ((i + 1) // 2 if i % 2 else -(i // 2)) for i in range(count)]
        if count > self.modulus:
            raise HypothesisViolation(
                f"{self} has fewer than {count} elements; interpolation needs a larger prime",
                code='field_too_small',
            )
        if rng is None:
            return list(range(count))
        return rng.sample(range(self.modulus), count)


RATIONALS = ExactField(None)


@lru_cache(maxsize=None)
def prime_field(modulus):
    return ExactField(int(modulus))


def field_from_spec(spec):
    """Parse ``q`` or ``fp:P``."""
    spec = (spec or 'q').strip().lower()
    if spec in ('q', 'qq', 'rationals'):
        return RATIONALS
    if spec.startswith('fp:'):
        try:
            modulus = int(spec[3:])
        except ValueError:
            raise HypothesisViolation(f"malformed field spec {spec!r}", code='bad_field')
        return prime_field(modulus)
    raise HypothesisViolation(f"unknown field spec {spec!r}; use q or fp:P", code='bad_field')
