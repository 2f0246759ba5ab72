"""
Rational points of the flex scheme {f = rho = 0} over a prime field.

The scheme has dimension n - 2, so a random plane (the span of three
random points) meets it in finitely many points. On the plane, with
coordinates (1, s, z), the eliminant E(s) = Res_z(f, rho) is interpolated
and its F_p-roots s are lifted back through gcd(f, rho) in z.
"""

import logging
import random
from dataclasses import dataclass
from typing import List, Tuple

from django.conf import settings
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor_sqf, gf_gcd, gf_pow_mod, gf_sub

from polycore.grammar import normalize_point
from polycore.models import Hypersurface, MultiPoly, x_names, y_names
from polycore.operations import (
    evaluate,
    evaluate_kernel,
    interpolate_univariate,
    partial_derivative,
    random_point,
    substitute_line,
    univariate_coefficients,
)
from resultant.interpolation import interpolate_homogeneous, sample_nodes
from resultant.linalg import rank
from resultant.operations import resultant_scalar
from utils.exceptions import PreconditionError
from .models import FlexPolynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlexSlice:
    """Flex points found on one random plane."""
    points: Tuple[tuple, ...]
    eliminant_degree: int
    root_count: int


def _roots(coefficients, p):
    """Distinct roots in F_p of a polynomial given by low-to-high residues."""
    f = [int(c) % p for c in reversed(coefficients)]
    while f and not f[0]:
        f.pop(0)
    if len(f) <= 1:
        return []
    x = [1, 0]
    split = gf_gcd(f, gf_sub(gf_pow_mod(x, p, f, p, ZZ), x, p, ZZ), p, ZZ)
    if len(split) <= 1:
        return []
    _, factors = gf_factor_sqf(split, p, ZZ)
    return sorted(-int(factor[1]) * pow(int(factor[0]), -1, p) % p for factor in factors)


def _restrict(poly: MultiPoly, frame, degree, rng):
    """poly(a*z0 + b*z1 + c*z2) as a ternary form, by interpolation."""
    field = poly.field
    kernel_terms = poly.kernel_terms()
    red = field.kernel_reduce

    def value(z):
        point = [red(sum(column[i] * z[k] for k, column in enumerate(frame))) for i in range(len(frame[0]))]
        return evaluate_kernel(kernel_terms, point, field)

    nodes = sample_nodes(field, degree, rng)
    return interpolate_homogeneous(value, x_names(3), degree, field, nodes)


def _binary_form(coefficients, degree, field):
    """sum_k c_k * y1^k * y0^(degree - k) from low-to-high coefficients."""
    terms = {(degree - k, k): c for k, c in enumerate(coefficients) if c}
    return MultiPoly.from_terms(field, y_names(2), terms, degree)


def slice_flex_scheme(V: Hypersurface, flex: FlexPolynomial, rng) -> FlexSlice:
    field = V.field
    p = field.modulus
    d, e = V.d, flex.degree
    frame = [[field.kernel(c) for c in random_point(field, V.nvars, rng)] for _ in range(3)]
    f_plane = _restrict(V.f, frame, d, rng)
    rho_plane = _restrict(flex.rho, frame, e, rng)
    if f_plane.is_zero or rho_plane.is_zero:
        return FlexSlice((), 0, 0)

    def restricted(form, degree, s):
        u = substitute_line(form, (1, s, 0), (0, 0, 1))
        coefficients = univariate_coefficients(u)
        return coefficients + [field.zero] * (degree + 1 - len(coefficients))

    def eliminant(s):
        pair = [
            _binary_form(restricted(f_plane, d, s), d, field),
            _binary_form(restricted(rho_plane, e, s), e, field),
        ]
        if any(form.is_zero for form in pair):
            return field.zero
        return resultant_scalar(pair, degrees=[d, e], rng=rng)

    bound = d * e
    nodes = [field(v) for v in sample_nodes(field, bound, rng)]
    E = univariate_coefficients(interpolate_univariate(nodes, [eliminant(s) for s in nodes], field))
    if not E:
        logger.debug("eliminant vanishes identically on this plane")
        return FlexSlice((), bound, 0)

    points = []
    roots = _roots(E, p)
    for s in roots:
        u = [int(c) for c in restricted(f_plane, d, field(s))]
        v = [int(c) for c in restricted(rho_plane, e, field(s))]
        common = gf_gcd([c % p for c in reversed(u)], [c % p for c in reversed(v)], p, ZZ)
        for z in _roots(list(reversed(common)), p):
            x = [field.lift(sum(column[i] * w for column, w in zip(frame, (1, s, z))) % p) for i in range(V.nvars)]
            if any(x) and not evaluate(V.f, x) and not evaluate(flex.rho, x):
                points.append(normalize_point(tuple(x), field))
    return FlexSlice(tuple(points), len(E) - 1, len(roots))


def sample_flex_points(V: Hypersurface, flex: FlexPolynomial, count, rng=None, seed=None, smooth=True) -> List[tuple]:
    """
    Up to ``count`` distinct flex points over F_p, from random plane slices.
    With ``smooth`` only points where grad f does not vanish are kept.
    """
    if not V.field.is_prime_field:
        raise PreconditionError("flex point sampling needs a prime field", code='field')
    if flex.is_ruled:
        raise PreconditionError("rho vanishes on V; every point is a flex", code='ruled')
    rng = rng or random.Random(settings.FLEXLOCUS['DEFAULT_SEED'] if seed is None else seed)
    found = []
    for attempt in range(settings.FLEXLOCUS['FLEX_SAMPLING_ATTEMPTS']):
        piece = slice_flex_scheme(V, flex, rng)
        for point in piece.points:
            if point in found:
                continue
            if smooth and not any(evaluate(partial_derivative(V.f, i), point) for i in range(V.nvars)):
                continue
            found.append(point)
            if len(found) == count:
                logger.info(f"sampled {count} flex points in {attempt + 1} slices")
                return found
    logger.warning(f"only {len(found)} of {count} flex points found")
    return found


def flex_scheme_jacobian_rank(V: Hypersurface, flex: FlexPolynomial, p):
    """Rank of the Jacobian of (f, rho) at p; 2 means a smooth point of the flex scheme."""
    rows = [
        [evaluate(partial_derivative(poly, i), p) for i in range(V.nvars)]
        for poly in (V.f, flex.rho)
    ]
    return rank(rows, V.field)
