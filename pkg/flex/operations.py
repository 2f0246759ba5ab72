"""
Flex computations on a hypersurface V = Z(f) in P^n.

The flex polynomial rho is defined through R_{V,ell}, the resultant in y
of the Taylor system f_1(x, y), ..., f_n(x, y) together with ell(y):

    R_{V,ell} = ell^(n!) * rho + f * sigma.

rho is recovered by dividing R by f in an order where the leading term of
f is a pure power x_m^d and ell = x_j with j != m. The remainder is then
exactly ell^(n!) times the reduction of rho, and the quotient by ell^(n!)
is read off the exponents. A final grevlex normal form modulo f fixes the
representative.
"""

import logging
import math
import random
import time
from dataclasses import dataclass
from typing import Optional

from django.conf import settings
from sympy import factorial
from sympy.polys.matrices import DomainMatrix

from polycore.grammar import format_poly, normalize_point
from polycore.models import Hypersurface, MultiPoly, xy_names
from polycore.operations import (
    evaluate,
    exact_quotient,
    iter_projective_points,
    linear_substitution,
    normal_form,
    partial_derivative,
    polynomial_division,
    projective_point_count,
    random_point,
    specialize,
    substitute_line,
    valuation,
)
from resultant.operations import resultant_poly, resultant_scalar, unique_common_zero
from utils.cache import CacheKeys, CacheManager
from utils.exceptions import HypothesisViolation, InternalInconsistency, PreconditionError, UsageError
from .models import (
    DegreeReport,
    FlexCertificate,
    FlexPolynomial,
    OsculationReport,
    OsculationVerdict,
    Trilean,
    harmonic_sum,
)
from .signals import flex_polynomial_computed

logger = logging.getLogger(__name__)

RULED_BELOW_N = "every hypersurface of degree below n is ruled, so its flex locus is all of V"

FRAME_ATTEMPTS = 50


def _rng(rng=None, seed=None):
    if rng is not None:
        return rng
    return random.Random(settings.FLEXLOCUS['DEFAULT_SEED'] if seed is None else seed)


def _unit(i, size, power=1):
    return tuple(power if k == i else 0 for k in range(size))


# Points

def coerce_point(V: Hypersurface, p):
    if len(p) != V.nvars:
        raise UsageError(f"point has {len(p)} coordinates, expected {V.nvars}")
    point = tuple(V.field(c) for c in p)
    if not any(point):
        raise PreconditionError("the zero vector is not a projective point", code='zero_point')
    return point


def require_on_hypersurface(V: Hypersurface, p):
    if evaluate(V.f, p):
        raise PreconditionError(
            f"point ({','.join(V.field.format_scalar(c) for c in p)}) does not lie on the hypersurface",
            code='not_on_hypersurface',
        )


def proportional(p, q):
    return all(p[i] * q[j] == p[j] * q[i] for i in range(len(p)) for j in range(i + 1, len(p)))


def gradient_at(V: Hypersurface, p):
    return tuple(evaluate(partial_derivative(V.f, i), p) for i in range(V.nvars))


def is_singular(V: Hypersurface, p):
    return not any(gradient_at(V, p))


# Contact orders and cones

def contact_order(V: Hypersurface, p, q):
    """Order of vanishing at t = 0 of f(p + t*q); math.inf if the line lies in V."""
    p, q = coerce_point(V, p), coerce_point(V, q)
    require_on_hypersurface(V, p)
    if proportional(p, q):
        raise PreconditionError("direction is proportional to the point; no line is spanned", code='proportional')
    return valuation(substitute_line(V.f, p, q))


def zero_cone_system(V: Hypersurface, p, k):
    """[f_1(p, y), ..., f_k(p, y)], homogeneous in y of degrees 1..k."""
    if not 1 <= k <= V.d:
        raise UsageError(f"cone order k must lie in [1, {V.d}], got {k}")
    p = coerce_point(V, p)
    return [specialize(f_k, p) for f_k in V.taylor[:k]]


def _cone_slots(V: Hypersurface, p):
    """The n cone equations at p; those of order above d are zero."""
    cone = zero_cone_system(V, p, min(V.n, V.d))
    names = cone[0].names
    return cone + [MultiPoly.zero(V.field, names) for _ in range(V.n - len(cone))]


# R_{V,g}

def _lift_to_y(V: Hypersurface, g: MultiPoly):
    e = g.homogeneous_degree
    if g.field != V.field or g.nvars != V.nvars:
        raise UsageError(f"{g} does not live in the ring of the hypersurface")
    if g.is_zero or e is None or e < 1:
        raise HypothesisViolation("g must be a nonconstant homogeneous form", code='degree')
    padding = (0,) * V.nvars
    terms = {padding + m: c for m, c in g.element.items()}
    return MultiPoly.from_terms(V.field, xy_names(V.nvars), terms, (0, e)), e


def r_poly_degree(n, d, e=1):
    """deg_x R_{V,g} = sum_k (d - k) * n! * e / k."""
    N = int(factorial(n))
    return sum((d - k) * N * e // k for k in range(1, n + 1))


def rho_degree(n, d):
    """d * sum_k n!/k - (n+1)!."""
    N = int(factorial(n))
    return d * sum(N // k for k in range(1, n + 1)) - (n + 1) * N


def r_poly(V: Hypersurface, g: MultiPoly, rng=None, seed=None):
    """R_{V,g} = Res^y(f_1, ..., f_n, g(y)) as a form in x."""
    g_y, e = _lift_to_y(V, g)
    names = xy_names(V.nvars)
    slots = [
        V.taylor[k - 1] if k <= V.d else MultiPoly.zero(V.field, names)
        for k in range(1, V.n + 1)
    ]
    degrees = list(range(1, V.n + 1)) + [e]
    return resultant_poly(slots + [g_y], degrees=degrees, rng=_rng(rng, seed))


# Flex polynomial

@dataclass(frozen=True)
class ExtractionFrame:
    """
    Coordinates z with x = T z in which ell(T z) = z_slot and f(T z) has a
    nonzero z_lead^d coefficient. T is None for the identity.
    """
    ell: MultiPoly
    slot: int
    lead: int
    T: Optional[list] = None
    T_inverse: Optional[list] = None


def _coordinate_frame(V: Hypersurface):
    f, d, size = V.f, V.d, V.nvars
    pure = [m for m in range(size) if f.coefficient(_unit(m, size, d))]
    for j in range(size):
        if all(monomial[j] for monomial in f.element.keys()):
            continue
        lead = next((m for m in pure if m != j), None)
        if lead is not None:
            return ExtractionFrame(MultiPoly.variable(V.field, f.names, j), j, lead)
    return None


def _adapted_frame(V: Hypersurface, ell: MultiPoly, rng):
    field, size = V.field, V.nvars
    a = [ell.coefficient(_unit(k, size)) for k in range(size)]
    j = next(k for k in range(size) if a[k])
    m = next(k for k in range(size) if k != j)
    inv_a = field.one / a[j]

    def kernel_basis(k):
        column = [field.zero] * size
        column[k] = field.one
        column[j] = -a[k] * inv_a
        return column

    for _ in range(FRAME_ATTEMPTS):
        weights = {k: field.random_element(rng, bound=9) for k in range(size) if k != j}
        weights[m] = field.random_element(rng, nonzero=True, bound=9)
        lead_column = [field.zero] * size
        for k, w in weights.items():
            for i, c in enumerate(kernel_basis(k)):
                lead_column[i] += w * c
        if evaluate(V.f, lead_column):
            break
    else:
        raise PreconditionError(f"the linear form {ell} divides f", code='zero_divisor')

    columns = []
    for k in range(size):
        if k == j:
            column = [field.zero] * size
            column[j] = inv_a
        elif k == m:
            column = lead_column
        else:
            column = kernel_basis(k)
        columns.append(column)
    T = [[columns[k][i] for k in range(size)] for i in range(size)]
    T_inverse = DomainMatrix(T, (size, size), field.domain).inv().to_list()
    return ExtractionFrame(ell, j, m, T, T_inverse)


def _random_linear_form(V: Hypersurface, rng):
    size = V.nvars
    terms = {_unit(k, size): V.field.random_element(rng, bound=9) for k in range(size)}
    return MultiPoly.from_terms(V.field, V.f.names, terms, 1)


def choose_frame(V: Hypersurface, ell: Optional[MultiPoly], rng):
    """A linear form ell that is not a zero divisor modulo f, with its frame."""
    if ell is None:
        frame = _coordinate_frame(V)
        if frame is not None:
            return frame
        coordinate = next(
            (j for j in range(V.nvars) if not all(m[j] for m in V.f.element.keys())), None
        )
        if coordinate is not None:
            ell = MultiPoly.variable(V.field, V.f.names, coordinate)
        else:
            logger.warning("every coordinate divides f; using a random linear form")
            for _ in range(FRAME_ATTEMPTS):
                ell = _random_linear_form(V, rng)
                if ell.is_zero:
                    continue
                try:
                    return _adapted_frame(V, ell, rng)
                except PreconditionError:
                    logger.debug(f"random linear form {ell} divides f; drawing another")
            logger.error(f"no random linear form out of {FRAME_ATTEMPTS} is a nonzero divisor modulo f")
            raise InternalInconsistency("could not find a linear form that does not divide f")
        return _adapted_frame(V, ell, rng)

    if ell.homogeneous_degree != 1 or ell.field != V.field or ell.nvars != V.nvars:
        raise HypothesisViolation("ell must be a linear form in the variables of f", code='degree')
    ell = ell.in_ring(V.f.names).with_grade(1)
    support = [k for k in range(V.nvars) if ell.coefficient(_unit(k, V.nvars))]
    if len(support) == 1:
        j = support[0]
        if not all(m[j] for m in V.f.element.keys()):
            lead = next((m for m in range(V.nvars) if m != j and V.f.coefficient(_unit(m, V.nvars, V.d))), None)
            if lead is not None:
                return ExtractionFrame(ell, j, lead)
    return _adapted_frame(V, ell, rng)


def _extract_rho(V: Hypersurface, R: MultiPoly, frame: ExtractionFrame, degree):
    N = int(factorial(V.n))
    if frame.T is None:
        R_z, f_z = R, V.f
    else:
        R_z, f_z = linear_substitution(R, frame.T), linear_substitution(V.f, frame.T)
    _, remainder = polynomial_division(R_z, f_z, ('lex', frame.lead))
    j = frame.slot
    terms = {}
    for monomial, coefficient in remainder.element.items():
        if monomial[j] < N:
            logger.error(f"remainder term {monomial} is not divisible by ell^{N}")
            raise InternalInconsistency("R_{V,ell} is not congruent to a multiple of ell^(n!) modulo f")
        terms[monomial[:j] + (monomial[j] - N,) + monomial[j + 1:]] = coefficient
    rho = MultiPoly.from_terms(V.field, V.f.names, terms, degree)
    if frame.T_inverse is not None:
        rho = linear_substitution(rho, frame.T_inverse)
    return rho


def _cache_key(V: Hypersurface, ell, seed):
    return CacheKeys.flex_polynomial(
        format_poly(V.f), V.field.spec, seed, format_poly(ell) if ell is not None else ''
    )


def require_flex_hypotheses(n, d):
    if n < 2:
        raise HypothesisViolation("flex loci are studied in P^n for n >= 2", code='dimension')
    if d < n:
        raise HypothesisViolation(RULED_BELOW_N, code='ruled')


def flex_polynomial(V: Hypersurface, ell: Optional[MultiPoly] = None, seed=None, rng=None, use_cache=True):
    """
    The flex polynomial rho of V, reduced modulo f.

    Raises HypothesisViolation when d < n. The returned FlexPolynomial
    satisfies R = ell^(n!) * rho + f * sigma exactly.
    """
    require_flex_hypotheses(V.n, V.d)
    seed = settings.FLEXLOCUS['DEFAULT_SEED'] if seed is None else seed
    key = _cache_key(V, ell, seed)
    cacheable = use_cache and rng is None
    if cacheable:
        payload = CacheManager.get(key)
        if payload is not None:
            logger.debug(f"flex polynomial served from cache ({key})")
            return FlexPolynomial.from_payload(payload)

    started = time.perf_counter()
    rng = _rng(rng, seed)
    expected = rho_degree(V.n, V.d)
    frame = choose_frame(V, ell, rng)
    R = r_poly(V, frame.ell, rng=rng)

    rho = normal_form(_extract_rho(V, R, frame, expected), V.f).with_grade(expected)
    ell_power = frame.ell ** int(factorial(V.n))
    sigma = exact_quotient(R - ell_power * rho, V.f)
    if ell_power * rho + V.f * sigma != R:
        raise InternalInconsistency("stored cofactor does not reproduce R_(V,ell)")

    flex = FlexPolynomial(
        f=V.f, rho=rho, ell=frame.ell, sigma=sigma, resultant=R,
        expected_degree=expected, normal_form=True, seed=seed,
    )
    logger.info(
        f"flex polynomial of degree {expected} for n={V.n}, d={V.d} over {V.field}: "
        f"{len(rho.element)} terms, ell={format_poly(frame.ell)}, {time.perf_counter() - started:.2f}s"
    )
    if cacheable:
        flex_polynomial_computed.send(sender=FlexPolynomial, flex=flex, key=key)
    return flex


# Flexness

def is_flex(V: Hypersurface, p, flex: Optional[FlexPolynomial] = None, rng=None, seed=None):
    """
    True iff p is a flex of V.

    Singular points are flexes. Otherwise, with ``flex`` given, rho(p) is
    tested; without it Res^y(f_1(p, y), ..., f_n(p, y), y_j) with p_j != 0
    is evaluated, which vanishes exactly at flexes.
    """
    p = coerce_point(V, p)
    require_on_hypersurface(V, p)
    if is_singular(V, p):
        logger.debug(f"{p} is singular, hence a flex")
        return True
    if flex is not None:
        return not evaluate(flex.rho, p)
    j = next(i for i, c in enumerate(p) if c)
    slots = _cone_slots(V, p)
    ell = MultiPoly.variable(V.field, slots[0].names, j)
    degrees = list(range(1, V.n + 1)) + [1]
    return not resultant_scalar(slots + [ell], degrees=degrees, rng=_rng(rng, seed))


def flex_line(V: Hypersurface, p, rng=None, seed=None) -> FlexCertificate:
    """
    Certificate for the flex line at a flex point p.

    The line is spanned by p and the unique common zero eta of the cone
    equations on ell = 0, recovered from the resultant gradient. A
    vanishing gradient gives an inconclusive certificate.
    """
    rng = _rng(rng, seed)
    p = coerce_point(V, p)
    if not is_flex(V, p, rng=rng):
        raise PreconditionError("point is not a flex of the hypersurface", code='not_flex')
    point = normalize_point(p, V.field)
    if is_singular(V, p):
        return FlexCertificate(point, True, True, unique_line=Trilean.INCONCLUSIVE, n=V.n)

    j = next(i for i, c in enumerate(p) if c)
    slots = _cone_slots(V, p)
    ell = MultiPoly.variable(V.field, slots[0].names, j)
    degrees = list(range(1, V.n + 1)) + [1]
    eta, gradient = unique_common_zero(slots + [ell], degrees=degrees, rng=rng)
    if eta is None:
        logger.info(f"resultant gradient vanishes on every slot at {point}")
        return FlexCertificate(point, True, True, unique_line=Trilean.INCONCLUSIVE, n=V.n)

    direction = normalize_point(eta, V.field)
    order = contact_order(V, p, direction)
    logger.debug(f"flex line at {point} through {direction} from slot {gradient.slot}, contact {order}")
    return FlexCertificate(
        point, True, True,
        line_direction=direction, unique_line=Trilean.YES, contact_order=order, n=V.n,
    )


def certify(V: Hypersurface, p, rng=None, seed=None) -> FlexCertificate:
    """FlexCertificate for any point: off V, non-flex, or flex with its line."""
    p = coerce_point(V, p)
    point = normalize_point(p, V.field)
    if evaluate(V.f, p):
        return FlexCertificate(point, False, False, n=V.n)
    rng = _rng(rng, seed)
    if not is_flex(V, p, rng=rng):
        return FlexCertificate(point, True, False, n=V.n)
    return flex_line(V, p, rng=rng)


# Degree formulas

def degree_report(n, d) -> DegreeReport:
    require_flex_hypotheses(n, d)
    deg_rho = rho_degree(n, d)
    line_locus = line_equation = None
    if d == n:
        weight = harmonic_sum(2, n - 1) * int(factorial(n - 1))
        line_locus, line_equation = n ** 3 * weight, n ** 2 * weight
        if line_locus.denominator != 1 or line_equation.denominator != 1:
            raise InternalInconsistency(f"line locus degree {line_locus} is not an integer")
        line_locus, line_equation = int(line_locus), int(line_equation)
    return DegreeReport(
        n=n,
        d=d,
        deg_rho=deg_rho,
        deg_flex_locus=d * deg_rho,
        max_equation_degree=max(d, deg_rho),
        deg_line_locus=line_locus,
        deg_line_equation=line_equation,
        inflexion_bound=3 * d * d - 6 * d if n == 2 else None,
    )


# Identities

def swap_identity_check(V: Hypersurface, g: MultiPoly, h: MultiPoly, rng=None, seed=None):
    """h^(n!) * R_{V,g} == g^(n!) * R_{V,h} modulo f."""
    if g.homogeneous_degree != h.homogeneous_degree:
        raise UsageError("g and h must have the same degree")
    rng = _rng(rng, seed)
    N = int(factorial(V.n))
    lhs = h ** N * r_poly(V, g, rng=rng)
    rhs = g ** N * r_poly(V, h, rng=rng)
    return normal_form(lhs - rhs, V.f).is_zero


def hessian_determinant(f: MultiPoly):
    """det of the 3x3 Hessian of a ternary form, by cofactor expansion."""
    if f.nvars != 3:
        raise UsageError("the Hessian determinant is computed for plane curves")
    H = [[partial_derivative(partial_derivative(f, i), j) for j in range(3)] for i in range(3)]
    return (
        H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1])
        - H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0])
        + H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0])
    )


def hessian_identity_check(V: Hypersurface, flex: Optional[FlexPolynomial] = None, rng=None, seed=None):
    """-(d-1)^2 * R_{C,ell} == ell^2 * det H(f) modulo f, for a plane curve."""
    if V.n != 2:
        raise HypothesisViolation("the Hessian identity holds for plane curves", code='dimension')
    flex = flex or flex_polynomial(V, rng=rng, seed=seed, use_cache=rng is None)
    difference = flex.resultant.scale(-(V.d - 1) ** 2) - flex.ell ** 2 * hessian_determinant(V.f)
    return normal_form(difference, V.f).is_zero


# Osculation sampling

def _directions(V: Hypersurface, p, rng, samples, exhaustive):
    if exhaustive:
        if not V.field.is_prime_field:
            raise UsageError("an exhaustive direction sweep needs a prime field")
        count = projective_point_count(V.field.modulus, V.nvars)
        if count > settings.FLEXLOCUS['ENUMERATION_LIMIT']:
            raise HypothesisViolation(f"{count} directions exceed the enumeration limit", code='enumeration_limit')
        yield from iter_projective_points(V.field, V.nvars)
        return
    gradient = gradient_at(V, p)
    pivot = next((i for i, c in enumerate(gradient) if c), None)
    for k in range(samples):
        q = list(random_point(V.field, V.nvars, rng, bound=50))
        # Every other sample is moved into the tangent hyperplane.
        if pivot is not None and k % 2:
            shift = sum(g * c for g, c in zip(gradient, q)) / gradient[pivot]
            q[pivot] -= shift
        yield tuple(q)


def osculation_bound_check(V: Hypersurface, p, samples=None, exhaustive=False, rng=None, seed=None):
    """
    Sample lines through p and report the largest contact order seen.

    A direction of infinite order means a line through p lies in V. Any
    finite order above d is impossible and raises InternalInconsistency.
    """
    p = coerce_point(V, p)
    require_on_hypersurface(V, p)
    rng = _rng(rng, seed)
    samples = samples or settings.FLEXLOCUS['OSCULATION_SAMPLES']
    best, tried = 0, 0
    for q in _directions(V, p, rng, samples, exhaustive):
        if not any(q) or proportional(p, q):
            continue
        tried += 1
        order = valuation(substitute_line(V.f, p, q))
        if order == math.inf:
            return OsculationReport(OsculationVerdict.LINE_FOUND, order, tried, normalize_point(q, V.field))
        if order > V.d:
            raise InternalInconsistency(f"contact order {order} exceeds the degree {V.d}")
        best = max(best, order)
    return OsculationReport(OsculationVerdict.WITHIN_BOUND, best, tried)

