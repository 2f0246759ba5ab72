"""
Independent oracles: classical formulas and exhaustive search.

Nothing here touches the Macaulay machinery; only the polynomial core is
shared with the main path.
"""

import logging
import time

from sympy import Matrix, hessian

from polycore.models import Hypersurface, MultiPoly
from polycore.operations import change_field, specialize
from utils.exceptions import HypothesisViolation, PreconditionError, UsageError
from .models import EnumerationDomain

logger = logging.getLogger(__name__)


def _binary_coefficients(form: MultiPoly):
    """Coefficients of a binary form by descending powers of the first variable."""
    degree = form.homogeneous_degree
    if form.nvars != 2 or degree is None:
        raise HypothesisViolation("expected a homogeneous binary form", code='binary')
    return degree, [form.coefficient((degree - k, k)) for k in range(degree + 1)]


def sylvester_resultant(u: MultiPoly, v: MultiPoly):
    """
    Determinant of the Sylvester matrix of two binary forms.

    Rows carry the coefficients of u shifted b times, then those of v
    shifted a times, so that (y0^a, y1^b) gives the identity matrix.
    """
    u._check_compatible(v)
    field = u.field
    if u.is_zero or v.is_zero:
        return field.zero
    a, cu = _binary_coefficients(u)
    b, cv = _binary_coefficients(v)
    size = a + b
    if size == 0:
        return field.one
    to_sympy = field.domain.to_sympy
    rows = []
    for shift in range(b):
        rows.append([to_sympy(cu[j - shift]) if 0 <= j - shift <= a else 0 for j in range(size)])
    for shift in range(a):
        rows.append([to_sympy(cv[j - shift]) if 0 <= j - shift <= b else 0 for j in range(size)])
    return field.domain.from_sympy(Matrix(rows).det(method='berkowitz'))


def hessian_flex_oracle(f: MultiPoly) -> MultiPoly:
    """det of the Hessian matrix of a plane curve, a form of degree 3(d-2)."""
    d = f.homogeneous_degree
    if f.nvars != 3 or d is None or d < 2:
        raise HypothesisViolation("the Hessian oracle needs a plane curve of degree at least 2", code='degree')
    symbols = f.ring.symbols
    determinant = hessian(f.element.as_expr(), symbols).det(method='berkowitz').expand()
    return f.new(f.ring.from_expr(determinant), 3 * (d - 2))


def _evaluator(poly: MultiPoly, domain: EnumerationDomain):
    arithmetic = domain.arithmetic
    terms = [(m, arithmetic.embed(c)) for m, c in poly.kernel_terms().items()]

    def value(point):
        total = (0, 0)
        for monomial, coefficient in terms:
            term = coefficient
            for coordinate, e in zip(point, monomial):
                for _ in range(e):
                    term = arithmetic.mul(term, coordinate)
            total = arithmetic.add(total, term)
        return total

    return value


def _canonical_key(point):
    lead = next(i for i, c in enumerate(point) if c != (0, 0))
    return (lead, point)


def brute_force_cone(V: Hypersurface, p, k, domain: EnumerationDomain):
    """
    Every q != p in ``domain`` with f_1(p, q) = ... = f_k(p, q) = 0.

    ``p`` has coordinates in the prime field; a rational V is reduced mod
    the domain's prime first. Points are pairs (a, b) = a + b*t per
    coordinate, sorted canonically.
    """
    if not 1 <= k <= V.d:
        raise UsageError(f"cone order k must lie in [1, {V.d}], got {k}")
    if domain.nvars != V.nvars:
        raise UsageError(f"{domain} does not match a hypersurface in P^{V.n}")
    domain.check_size()
    base = domain.base_field
    if V.field != base:
        V = Hypersurface.from_form(change_field(V.f, base), check_squarefree=False)
    p = tuple(base(c) for c in p)
    if not any(p):
        raise PreconditionError("the zero vector is not a projective point", code='zero_point')
    started = time.perf_counter()

    equations = [_evaluator(specialize(f_k, p), domain) for f_k in V.taylor[:k]]
    origin = domain.normalize(tuple(domain.arithmetic.embed(c) for c in p))
    zero = (0, 0)
    found = []
    for lead in range(domain.nvars):
        for q in domain.shard(lead):
            if q != origin and all(equation(q) == zero for equation in equations):
                found.append(q)
    found.sort(key=_canonical_key)
    logger.debug(
        f"cone of order {k} at {p}: {len(found)} points in {domain} "
        f"({time.perf_counter() - started:.2f}s)"
    )
    return found


def brute_force_common_zeros(polys, domain: EnumerationDomain):
    """
    Every point of ``domain`` where all the forms vanish, in enumeration
    order. Rational forms are reduced mod the domain's prime first.
    """
    polys = list(polys)
    if any(p.nvars != domain.nvars for p in polys):
        raise UsageError(f"forms do not live on {domain}")
    domain.check_size()
    base = domain.base_field
    equations = [_evaluator(change_field(p, base), domain) for p in polys]
    zero = (0, 0)
    return [q for q in domain.points() if all(equation(q) == zero for equation in equations)]
