"""
Value types of flex computations.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from django.db import models

from polycore.fields import ExactField, field_from_spec
from polycore.grammar import format_poly, parse_poly
from polycore.models import MultiPoly, x_names
from utils.exceptions import InternalInconsistency

logger = logging.getLogger(__name__)


class Trilean(models.TextChoices):
    YES = 'yes', 'Unique flex line'
    NO_EVIDENCE = 'no-evidence', 'No flex line found'
    INCONCLUSIVE = 'inconclusive', 'Resultant gradient vanished'


class OsculationVerdict(models.TextChoices):
    WITHIN_BOUND = 'within-bound', 'No sampled direction exceeds the bound'
    LINE_FOUND = 'line-found', 'A line through the point lies on the hypersurface'


@dataclass(frozen=True)
class FlexPolynomial:
    """
    rho together with the data that certifies it.

    ``resultant`` is R_{V,ell} and ``sigma`` the cofactor with
    R = ell^(n!) * rho + f * sigma exactly.
    """
    f: MultiPoly
    rho: MultiPoly
    ell: MultiPoly
    sigma: MultiPoly
    resultant: MultiPoly
    expected_degree: int
    normal_form: bool = True
    seed: Optional[int] = None

    @property
    def field(self) -> ExactField:
        return self.f.field

    @property
    def n(self):
        return self.f.nvars - 1

    @property
    def d(self):
        return self.f.homogeneous_degree

    @property
    def is_ruled(self):
        """rho in (f): every point of V is a flex."""
        return self.rho.is_zero

    @property
    def degree(self):
        return self.expected_degree if self.rho.is_zero else self.rho.homogeneous_degree

    def as_payload(self):
        """Plain-text form used for caching."""
        return {
            'field': self.field.spec,
            'nvars': self.f.nvars,
            'f': format_poly(self.f),
            'rho': format_poly(self.rho),
            'ell': format_poly(self.ell),
            'sigma': format_poly(self.sigma),
            'resultant': format_poly(self.resultant),
            'expected_degree': self.expected_degree,
            'normal_form': self.normal_form,
            'seed': self.seed,
        }

    @classmethod
    def from_payload(cls, payload):
        exact = field_from_spec(payload['field'])
        names = x_names(payload['nvars'])
        f = parse_poly(payload['f'], exact, names=names)

        def read(key, grade):
            return parse_poly(payload[key], exact, names=names).with_grade(grade)

        d = f.homogeneous_degree
        expected = payload['expected_degree']
        resultant = read('resultant', None)
        return cls(
            f=f.with_grade(d),
            rho=read('rho', expected),
            ell=read('ell', 1),
            sigma=read('sigma', None),
            resultant=resultant.with_grade(resultant.homogeneous_degree),
            expected_degree=expected,
            normal_form=payload['normal_form'],
            seed=payload['seed'],
        )


@dataclass(frozen=True)
class FlexCertificate:
    """Outcome of a flexness query at one point."""
    point: Tuple
    on_hypersurface: bool
    is_flex: bool
    line_direction: Optional[Tuple] = None
    unique_line: Trilean = Trilean.NO_EVIDENCE
    contact_order: Optional[float] = None
    n: int = 0

    def __post_init__(self):
        if self.is_flex and not self.on_hypersurface:
            raise InternalInconsistency("certificate claims a flex off the hypersurface")
        if self.line_direction is not None and (
            self.contact_order is None or self.contact_order < self.n + 1
        ):
            raise InternalInconsistency(
                f"flex line certificate has contact order {self.contact_order} below {self.n + 1}"
            )

    @property
    def line_in_hypersurface(self):
        return self.contact_order == math.inf


def harmonic_sum(start, stop):
    """sum_{k=start}^{stop} 1/k as an exact fraction."""
    return sum((Fraction(1, k) for k in range(start, stop + 1)), Fraction(0))


@dataclass(frozen=True)
class DegreeReport:
    n: int
    d: int
    deg_rho: int
    deg_flex_locus: int
    max_equation_degree: int
    deg_line_locus: Optional[int] = None
    deg_line_equation: Optional[int] = None
    inflexion_bound: Optional[int] = None

    def as_lines(self):
        lines = [
            f"n = {self.n}, d = {self.d}",
            f"deg rho = {self.deg_rho}",
            f"deg flex locus = {self.deg_flex_locus}",
            f"max equation degree = {self.max_equation_degree}",
        ]
        if self.deg_line_locus is not None:
            lines.append(f"deg line locus = {self.deg_line_locus}")
            lines.append(f"deg line equation = {self.deg_line_equation}")
        if self.inflexion_bound is not None:
            lines.append(f"inflexion bound = {self.inflexion_bound}")
        return lines


@dataclass(frozen=True)
class OsculationReport:
    verdict: OsculationVerdict
    max_order: float
    samples: int
    direction: Optional[Tuple] = None
