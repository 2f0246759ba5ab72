"""
Value types for Macaulay resultants.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import prod
from typing import Dict, List, Optional, Tuple

from polycore.fields import ExactField
from polycore.models import Monomial, MultiPoly
from polycore.operations import monomials_of_degree
from utils.exceptions import HypothesisViolation, UsageError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeVector:
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if not self.degrees or any(not isinstance(d, int) or d < 1 for d in self.degrees):
            raise HypothesisViolation(
                f"degree vector entries must be positive integers, got {self.degrees}",
                code='degrees',
            )

    def __iter__(self):
        return iter(self.degrees)

    def __len__(self):
        return len(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    @property
    def nvars(self):
        return len(self.degrees)

    @cached_property
    def critical_degree(self):
        """delta = sum(d_i - 1) + 1."""
        return sum(d - 1 for d in self.degrees) + 1

    def slot_weight(self, i):
        """Degree of the resultant in the coefficients of slot i."""
        return prod(d for j, d in enumerate(self.degrees) if j != i)

    @cached_property
    def total_weight(self):
        return sum(self.slot_weight(i) for i in range(self.nvars))


@dataclass(frozen=True)
class MacaulayPlan:
    """
    Degree-only scaffolding of the Macaulay matrix.

    Rows and columns are both indexed by the monomials of the critical
    degree, in the same order. The row of monomial alpha belongs to the
    first slot i with alpha_i >= d_i and holds y^(alpha - d_i e_i) * F_i.
    ``minor`` lists the non-reduced monomials (divisible by at least two
    y_i^d_i); they index the rows and columns of M'.
    """
    degrees: DegreeVector
    monomials: Tuple[Monomial, ...]
    row_slot: Tuple[int, ...]
    row_columns: Tuple[Tuple[int, ...], ...]
    slot_monomials: Tuple[Tuple[Monomial, ...], ...]
    minor: Tuple[int, ...]

    @property
    def size(self):
        return len(self.monomials)

    @property
    def nvars(self):
        return self.degrees.nvars

    def pure_power_position(self, slot):
        """Position of y_slot^d_slot within slot_monomials[slot]."""
        target = tuple(self.degrees[slot] if j == slot else 0 for j in range(self.nvars))
        return self.slot_monomials[slot].index(target)

    @classmethod
    def for_degrees(cls, degrees: DegreeVector):
        return _build_plan(degrees)


@lru_cache(maxsize=64)
def _build_plan(degrees: DegreeVector):
    nvars = degrees.nvars
    delta = degrees.critical_degree
    monomials = tuple(monomials_of_degree(nvars, delta))
    index = {m: k for k, m in enumerate(monomials)}
    slot_monomials = tuple(tuple(monomials_of_degree(nvars, d)) for d in degrees)

    row_slot, row_columns, minor = [], [], []
    for k, alpha in enumerate(monomials):
        big = [i for i in range(nvars) if alpha[i] >= degrees[i]]
        slot = big[0]
        if len(big) >= 2:
            minor.append(k)
        shift = tuple(a - (degrees[slot] if j == slot else 0) for j, a in enumerate(alpha))
        columns = tuple(
            index[tuple(s + e for s, e in zip(shift, mono))] for mono in slot_monomials[slot]
        )
        row_slot.append(slot)
        row_columns.append(columns)

    logger.debug(
        f"Macaulay plan for degrees {degrees.degrees}: size {len(monomials)}, minor {len(minor)}"
    )
    return MacaulayPlan(
        degrees=degrees,
        monomials=monomials,
        row_slot=tuple(row_slot),
        row_columns=tuple(row_columns),
        slot_monomials=slot_monomials,
        minor=tuple(minor),
    )


@dataclass(frozen=True)
class MacaulaySystem:
    """n+1 forms in n+1 variables with their declared degrees."""
    polys: Tuple[MultiPoly, ...]
    degrees: DegreeVector

    @property
    def field(self) -> ExactField:
        return self.polys[0].field

    @property
    def nvars(self):
        return self.degrees.nvars

    @cached_property
    def plan(self) -> MacaulayPlan:
        return MacaulayPlan.for_degrees(self.degrees)

    @property
    def has_zero_slot(self):
        return any(p.is_zero for p in self.polys)

    def coefficient_vectors(self) -> List[list]:
        """Kernel coefficients of each slot, aligned with plan.slot_monomials."""
        vectors = []
        for poly, monomials in zip(self.polys, self.plan.slot_monomials):
            terms = poly.kernel_terms()
            vectors.append([terms.get(m, 0) for m in monomials])
        return vectors

    @classmethod
    def from_polys(cls, polys, degrees=None):
        polys = tuple(polys)
        if not polys:
            raise UsageError("a resultant needs at least one polynomial")
        nvars = polys[0].nvars
        for poly in polys[1:]:
            polys[0]._check_compatible(poly)
        if len(polys) != nvars:
            raise UsageError(f"{len(polys)} polynomials in {nvars} variables; need exactly {nvars}")
        if degrees is None:
            if any(p.is_zero for p in polys):
                raise UsageError("degrees must be given when a slot is the zero polynomial")
            degrees = [p.homogeneous_degree for p in polys]
            if None in degrees:
                raise HypothesisViolation("resultant inputs must be homogeneous", code='homogeneous')
        degrees = degrees if isinstance(degrees, DegreeVector) else DegreeVector(tuple(degrees))
        if len(degrees) != nvars:
            raise UsageError(f"degree vector {degrees.degrees} does not match {nvars} polynomials")
        for i, (poly, d) in enumerate(zip(polys, degrees)):
            if not poly.is_zero and poly.homogeneous_degree != d:
                raise HypothesisViolation(
                    f"polynomial {i} is not homogeneous of degree {d}", code='homogeneous'
                )
        return cls(polys=polys, degrees=degrees)


@dataclass(frozen=True)
class DualScalar:
    """
    a + b*eps with eps^2 = 0, over the kernel representation of ``field``.
    """
    real: object
    eps: object
    field: ExactField

    def _wrap(self, real, eps):
        red = self.field.kernel_reduce
        return DualScalar(red(real), red(eps), self.field)

    def _coerce(self, other):
        if isinstance(other, DualScalar):
            return other
        return DualScalar(self.field.kernel(self.field(other)), 0, self.field)

    def __add__(self, other):
        other = self._coerce(other)
        return self._wrap(self.real + other.real, self.eps + other.eps)

    def __sub__(self, other):
        other = self._coerce(other)
        return self._wrap(self.real - other.real, self.eps - other.eps)

    def __neg__(self):
        return self._wrap(-self.real, -self.eps)

    def __mul__(self, other):
        other = self._coerce(other)
        return self._wrap(self.real * other.real, self.real * other.eps + self.eps * other.real)

    __rmul__ = __mul__

    def inverse(self):
        if not self.real:
            raise ZeroDivisionError("dual number with zero real part has no inverse")
        inv = self.field.kernel_inverse(self.real)
        return self._wrap(inv, -self.eps * inv * inv)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        return self.real == other.real and self.eps == other.eps

    def __hash__(self):
        return hash((self.real, self.eps))

    def __repr__(self):
        return f'{self.real} + {self.eps}ε'


@dataclass(frozen=True)
class ResultantGradient:
    """Partial derivatives of Res with respect to the coefficients of one slot."""
    slot: int
    degree: int
    values: Dict[Monomial, object]
    field: ExactField

    @property
    def is_zero(self):
        return not any(self.values.values())

    def common_zero(self) -> Optional[tuple]:
        """
        Recover eta from values proportional to (eta^a)_{|a| = degree}.
        Returns None when the gradient vanishes.
        """
        if self.is_zero:
            return None
        nvars = len(next(iter(self.values)))
        k = self.degree

        def unit(j, power):
            return tuple(power if i == j else 0 for i in range(nvars))

        if k == 1:
            return tuple(self.values[unit(i, 1)] for i in range(nvars))
        for j in range(nvars):
            base = self.values[unit(j, k)]
            if not base:
                continue
            inverse = self.field.one / base
            point = []
            for i in range(nvars):
                if i == j:
                    point.append(self.field.one)
                else:
                    mono = tuple((k - 1 if t == j else 0) + (1 if t == i else 0) for t in range(nvars))
                    point.append(self.values[mono] * inverse)
            return tuple(point)
        return None
