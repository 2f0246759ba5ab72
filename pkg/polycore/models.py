"""
Value types of the polynomial core.

``MultiPoly`` wraps a sympy ``PolyElement`` (a sparse map from exponent
tuples to domain elements) in a ring with graded reverse lexicographic
order, and adds the bookkeeping the rest of the toolkit relies on: the
field context and an optional homogeneity grade.
"""

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple, Union

from sympy.polys.orderings import grevlex
from sympy.polys.rings import PolyElement, PolyRing

from utils.exceptions import HypothesisViolation, UsageError
from .fields import ExactField, ExactScalar

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Grade = Union[int, Tuple[int, int], None]


def x_names(count):
    return tuple(f'x{i}' for i in range(count))


def y_names(count):
    return tuple(f'y{i}' for i in range(count))


def xy_names(count):
    """Variables of a bihomogeneous ring: x0..x{count-1} then y0..y{count-1}."""
    return x_names(count) + y_names(count)


@lru_cache(maxsize=None)
def poly_ring(field: ExactField, names: Tuple[str, ...]):
    return PolyRing(names, field.domain, grevlex)


def monomial_grade(monomial: Monomial, bihomogeneous: bool):
    if not bihomogeneous:
        return sum(monomial)
    half = len(monomial) // 2
    return (sum(monomial[:half]), sum(monomial[half:]))


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """
    Sparse exact polynomial with a declared variable set.

    ``grade`` is an int for homogeneous data, a pair for bihomogeneous data
    in ``xy_names`` rings, or None. A declared grade is checked against every
    stored monomial.
    """
    field: ExactField
    element: PolyElement
    grade: Grade = None

    def __post_init__(self):
        if self.grade is None:
            return
        bihomogeneous = isinstance(self.grade, tuple)
        if bihomogeneous and self.nvars % 2:
            raise UsageError("bidegree declared on a ring with an odd number of variables")
        for monomial in self.element.keys():
            if monomial_grade(monomial, bihomogeneous) != self.grade:
                raise HypothesisViolation(
                    f"monomial {monomial} does not have declared grade {self.grade}",
                    code='grade',
                )

    # Constructors

    @classmethod
    def from_terms(cls, field, names, terms: Dict[Monomial, ExactScalar], grade: Grade = None):
        ring = poly_ring(field, tuple(names))
        element = ring.from_dict({m: field(c) for m, c in terms.items()})
        return cls(field, element, grade)

    @classmethod
    def zero(cls, field, names, grade: Grade = None):
        return cls(field, poly_ring(field, tuple(names)).zero, grade)

    @classmethod
    def constant(cls, field, names, value):
        ring = poly_ring(field, tuple(names))
        return cls(field, ring.ground_new(field(value)), 0)

    @classmethod
    def variable(cls, field, names, index):
        ring = poly_ring(field, tuple(names))
        return cls(field, ring.gens[index], 1)

    def new(self, element, grade: Grade = None):
        return MultiPoly(self.field, element, grade)

    # Introspection

    @property
    def ring(self):
        return self.element.ring

    @property
    def names(self):
        return tuple(str(s) for s in self.ring.symbols)

    @property
    def nvars(self):
        return self.ring.ngens

    @property
    def is_zero(self):
        return not self.element

    @property
    def total_degree(self):
        """Maximal total degree; -1 for the zero polynomial."""
        if not self.element:
            return -1
        return max(sum(m) for m in self.element.keys())

    @property
    def homogeneous_degree(self):
        """The common total degree of all monomials, or None."""
        if isinstance(self.grade, int):
            return self.grade
        degrees = {sum(m) for m in self.element.keys()}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def is_homogeneous(self):
        return self.is_zero or self.homogeneous_degree is not None

    def terms(self):
        """(monomial, coefficient) pairs in descending grevlex order."""
        return self.element.terms()

    def kernel_terms(self):
        """Monomial -> kernel scalar (see ExactField.kernel)."""
        kernel = self.field.kernel
        return {m: kernel(c) for m, c in self.element.items()}

    def coefficient(self, monomial: Monomial):
        return self.element.get(tuple(monomial), self.field.zero)

    def with_grade(self, grade: Grade):
        return MultiPoly(self.field, self.element, grade)

    def in_ring(self, names):
        """The same polynomial viewed in a ring with other variable names."""
        ring = poly_ring(self.field, tuple(names))
        if ring.ngens != self.nvars:
            raise UsageError(f"cannot rename {self.nvars} variables to {len(names)}")
        return MultiPoly(self.field, ring.from_dict(dict(self.element)), self.grade)

    # Arithmetic

    def _check_compatible(self, other):
        if other.field != self.field:
            raise UsageError(f"field mismatch: {self.field} vs {other.field}", code='field_mismatch')
        if other.ring != self.ring:
            raise UsageError(
                f"variable mismatch: {self.names} vs {other.names}", code='ring_mismatch'
            )

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check_compatible(other)
            return other
        return MultiPoly.constant(self.field, self.names, other)

    def __add__(self, other):
        other = self._coerce(other)
        grade = self.grade if self.grade == other.grade or other.is_zero else None
        if self.is_zero:
            grade = other.grade
        return self.new(self.element + other.element, grade)

    __radd__ = __add__

    def __neg__(self):
        return self.new(-self.element, self.grade)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check_compatible(other)
        grade = None
        if self.grade is not None and other.grade is not None:
            if isinstance(self.grade, tuple) and isinstance(other.grade, tuple):
                grade = (self.grade[0] + other.grade[0], self.grade[1] + other.grade[1])
            elif isinstance(self.grade, int) and isinstance(other.grade, int):
                grade = self.grade + other.grade
        return self.new(self.element * other.element, grade)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar):
        return self.new(self.element * self.field(scalar), self.grade)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise UsageError(f"exponent must be a nonnegative integer, got {exponent!r}")
        grade = None
        if isinstance(self.grade, int):
            grade = self.grade * exponent
        elif isinstance(self.grade, tuple):
            grade = (self.grade[0] * exponent, self.grade[1] * exponent)
        return self.new(self.element ** exponent, grade)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.field == other.field and self.ring == other.ring and self.element == other.element

    def __hash__(self):
        return hash((self.field, self.names, frozenset(self.element.items())))

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        from .grammar import format_poly
        return format_poly(self)

    def __repr__(self):
        return f'MultiPoly({self}, field={self.field}, grade={self.grade})'


@dataclass(frozen=True)
class Hypersurface:
    """
    A validated hypersurface V = Z(f) in P^n.

    ``taylor[k-1]`` is f_k, bihomogeneous of bidegree (d-k, k) in the ring
    x0..xn, y0..yn, such that f(x+ty) = f(x) + sum_k f_k(x, y) t^k / k!.
    """
    f: MultiPoly
    n: int
    d: int
    taylor: Tuple[MultiPoly, ...]

    @property
    def field(self):
        return self.f.field

    @property
    def nvars(self):
        return self.n + 1

    @classmethod
    def from_form(cls, f: MultiPoly, seed=None, rng=None, check_squarefree=True):
        """
        Validate ``f`` and build its Taylor system.

        Raises HypothesisViolation for non-homogeneous, constant or
        non-squarefree input.
        """
        from django.conf import settings

        from .operations import is_squarefree, taylor_system, verify_taylor_identity

        if f.is_zero or not f.is_homogeneous():
            raise HypothesisViolation("input must be a nonzero homogeneous polynomial", code='homogeneous')
        d = f.homogeneous_degree
        if d < 1:
            raise HypothesisViolation("input must have degree at least 1", code='degree')
        if f.nvars < 2:
            raise HypothesisViolation("a hypersurface needs at least two variables", code='nvars')
        if rng is None:
            rng = random.Random(settings.FLEXLOCUS['DEFAULT_SEED'] if seed is None else seed)
        f = f.with_grade(d)
        if check_squarefree and not is_squarefree(f, rng=rng):
            raise HypothesisViolation("input must be squarefree", code='squarefree')
        taylor = taylor_system(f)
        verify_taylor_identity(f, taylor, rng, settings.FLEXLOCUS['TAYLOR_SPOT_CHECKS'])
        logger.debug(f"hypersurface of degree {d} in P^{f.nvars - 1} over {f.field} validated")
        return cls(f=f, n=f.nvars - 1, d=d, taylor=tuple(taylor))
