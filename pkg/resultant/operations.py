"""
Macaulay resultants over a field and over a polynomial coefficient ring.

Res = det(M) / det(M') where M is the Macaulay matrix in the critical
degree and M' its reduced minor. A singular M' is handled first by
unimodular changes of the y-coordinates (which leave Res unchanged) and
then through the system F - s * (y_0^d_0, ..., y_n^d_n). Each pure power
sits on the diagonal of M, so that system has matrix M - s*I, and Res(F)
is the constant term of the exact quotient of characteristic polynomials.
"""

import logging
import random
import time
from functools import lru_cache

from django.conf import settings
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from polycore.models import MultiPoly, monomial_grade, x_names, y_names
from polycore.operations import (
    evaluate,
    evaluate_kernel,
    linear_substitution,
    max_exponents,
    power_tables,
)
from utils.exceptions import HypothesisViolation, InternalInconsistency, PreconditionError, UsageError
from .interpolation import interpolate_homogeneous, random_kernel_points, sample_nodes
from .linalg import characteristic_quotient, dual_det, kernel_det, matmul, nullspace, rank, submatrix
from .models import DegreeVector, MacaulayPlan, MacaulaySystem, ResultantGradient

logger = logging.getLogger(__name__)


def _rng(rng=None, seed=None):
    if rng is not None:
        return rng
    return random.Random(settings.FLEXLOCUS['DEFAULT_SEED'] if seed is None else seed)


# Matrix assembly

def build_matrix(plan: MacaulayPlan, vectors):
    size = plan.size
    rows = []
    for slot, columns in zip(plan.row_slot, plan.row_columns):
        row = [0] * size
        for column, value in zip(columns, vectors[slot]):
            row[column] = value
        rows.append(row)
    return rows


def _quotient(plan, vectors, field):
    """det(M) / det(M'), or None when M' is singular."""
    rows = build_matrix(plan, vectors)
    denominator = kernel_det(submatrix(rows, plan.minor), field)
    if not denominator:
        return None
    numerator = kernel_det(rows, field)
    return field.kernel_reduce(numerator * field.kernel_inverse(denominator))


def _dual_quotient(plan, real_vectors, eps_vectors, field):
    real_rows = build_matrix(plan, real_vectors)
    eps_rows = build_matrix(plan, eps_vectors)
    denominator = dual_det(submatrix(real_rows, plan.minor), submatrix(eps_rows, plan.minor), field)
    if not denominator.real:
        return None
    return dual_det(real_rows, eps_rows, field) / denominator


def random_unimodular(field, size, rng):
    """A random kernel matrix L*U with unit diagonals, hence determinant 1."""
    one = field.kernel(field.one)

    def entry():
        return field.kernel(field.random_element(rng, bound=5))

    lower = [[one if i == j else (entry() if j < i else 0) for j in range(size)] for i in range(size)]
    upper = [[one if i == j else (entry() if j > i else 0) for j in range(size)] for i in range(size)]
    return matmul(lower, upper, field)


def _moved(system: MacaulaySystem, T):
    return MacaulaySystem(tuple(linear_substitution(p, T) for p in system.polys), system.degrees)


@lru_cache(maxsize=None)
def _eps_ring(field):
    return PolyRing(('eps',), field.domain, lex)


def _characteristic_value(plan, vectors, field, eps_vectors=None):
    """
    Res at s = 0 of F - s * (y_0^d_0, ..., y_n^d_n), exactly.

    With ``eps_vectors`` the entries live in K[eps] and the result is the
    eps-coefficient, i.e. the derivative of Res in that direction.
    """
    rows = build_matrix(plan, vectors)
    if eps_vectors is None:
        entries = [[field(c) for c in row] for row in rows]
        return field.kernel(characteristic_quotient(entries, plan.minor, field.domain))

    ring = _eps_ring(field)
    eps_rows = build_matrix(plan, eps_vectors)
    entries = [
        [ring.from_dict({(0,): field(a), (1,): field(b)}) for a, b in zip(real, eps)]
        for real, eps in zip(rows, eps_rows)
    ]
    value = characteristic_quotient(entries, plan.minor, ring.to_domain())
    return field.kernel(value.get((1,), field.zero))


# Resultants over a field

def _resultant_kernel(system: MacaulaySystem, rng):
    field = system.field
    if system.has_zero_slot:
        return field.kernel(field.zero)
    plan = system.plan
    if system.nvars == 1:
        return system.coefficient_vectors()[0][0]
    value = _quotient(plan, system.coefficient_vectors(), field)
    if value is not None:
        return value

    for attempt in range(1, settings.FLEXLOCUS['MINOR_RETRIES'] + 1):
        T = random_unimodular(field, system.nvars, rng)
        value = _quotient(plan, _moved(system, T).coefficient_vectors(), field)
        if value is not None:
            logger.debug(f"reduced minor regular after {attempt} unimodular change(s)")
            return value

    logger.debug(f"reduced minor singular for degrees {system.degrees.degrees}; characteristic fallback")
    return _characteristic_value(plan, system.coefficient_vectors(), field)


def resultant_scalar(polys, degrees=None, rng=None, seed=None):
    """
    Res of n+1 forms in n+1 variables over a field, normalized so that
    Res(y_0^d_0, ..., y_n^d_n) = 1. Zero polynomials give 0.
    """
    system = MacaulaySystem.from_polys(polys, degrees)
    return system.field.lift(_resultant_kernel(system, _rng(rng, seed)))


# Gradient with respect to the coefficients of one slot

def _perturbation(system: MacaulaySystem, slot, monomial, T):
    plan = system.plan
    field = system.field
    vectors = [[0] * len(monomials) for monomials in plan.slot_monomials]
    if T is None:
        vectors[slot][plan.slot_monomials[slot].index(monomial)] = field.kernel(field.one)
        return vectors
    names = system.polys[0].names
    y_power = MultiPoly.from_terms(field, names, {monomial: field.one}, system.degrees[slot])
    terms = linear_substitution(y_power, T).kernel_terms()
    vectors[slot] = [terms.get(m, 0) for m in plan.slot_monomials[slot]]
    return vectors


def _gradient(system: MacaulaySystem, slot, rng):
    field = system.field
    plan = system.plan
    degree = system.degrees[slot]
    monomials = plan.slot_monomials[slot]
    zero = field.zero

    if any(p.is_zero for i, p in enumerate(system.polys) if i != slot):
        return ResultantGradient(slot, degree, {m: zero for m in monomials}, field)
    if system.nvars == 1:
        return ResultantGradient(slot, degree, {monomials[0]: field.one}, field)

    frames = [None] + [
        random_unimodular(field, system.nvars, rng) for _ in range(settings.FLEXLOCUS['MINOR_RETRIES'])
    ]
    for T in frames:
        moved = system if T is None else _moved(system, T)
        real = moved.coefficient_vectors()
        if not kernel_det(submatrix(build_matrix(plan, real), plan.minor), field):
            continue
        values = {}
        for monomial in monomials:
            quotient = _dual_quotient(plan, real, _perturbation(system, slot, monomial, T), field)
            values[monomial] = field.lift(quotient.eps)
        return ResultantGradient(slot, degree, values, field)

    logger.debug(f"gradient of slot {slot}: reduced minor singular; characteristic fallback")
    real = system.coefficient_vectors()
    values = {}
    for monomial in monomials:
        eps = _perturbation(system, slot, monomial, None)
        values[monomial] = field.lift(_characteristic_value(plan, real, field, eps))
    return ResultantGradient(slot, degree, values, field)


def resultant_gradient(polys, slot, degrees=None, rng=None, seed=None):
    """
    (dRes / dc_{slot,a})(F) for every monomial a of degree d_slot.

    Requires Res(F) = 0. A nonzero gradient is proportional to
    (eta^a)_a for the unique common zero eta.
    """
    system = MacaulaySystem.from_polys(polys, degrees)
    if not 0 <= slot < system.nvars:
        raise UsageError(f"slot {slot} out of range for {system.nvars} polynomials")
    rng = _rng(rng, seed)
    if _resultant_kernel(system, rng):
        raise PreconditionError(
            "the resultant gradient is only defined here for systems with a common zero (Res = 0)",
            code='nonzero_resultant',
        )
    return _gradient(system, slot, rng)


def unique_common_zero(polys, degrees=None, rng=None, seed=None):
    """
    Try slots in order of increasing degree; return (eta, gradient) from
    the first slot with a nonzero gradient, or (None, None).
    """
    system = MacaulaySystem.from_polys(polys, degrees)
    rng = _rng(rng, seed)
    if _resultant_kernel(system, rng):
        raise PreconditionError("the system has no common zero", code='nonzero_resultant')
    for slot in sorted(range(system.nvars), key=lambda i: (system.degrees[i], i)):
        gradient = _gradient(system, slot, rng)
        eta = gradient.common_zero()
        if eta is None:
            continue
        if any(evaluate(p, eta) for p in system.polys):
            logger.error(f"gradient of slot {slot} produced {eta}, which is not a common zero")
            raise InternalInconsistency("recovered point is not a common zero of the system")
        return eta, gradient
    return None, None


# Classical identities

def _unit(j, size):
    return tuple(1 if i == j else 0 for i in range(size))


def poisson_check(g0, g0_prime, linear_forms, rng=None, seed=None):
    """
    Res(g0, l) * g0'(eta) == Res(g0', l) * g0(eta), where eta is the common
    zero of the independent linear forms l_1..l_n.
    """
    forms = list(linear_forms)
    size = len(forms) + 1
    if g0.homogeneous_degree != g0_prime.homogeneous_degree:
        raise UsageError("both forms must have the same degree")
    for form in forms:
        if form.homogeneous_degree != 1:
            raise HypothesisViolation("expected linear forms", code='degree')
    matrix = [[form.coefficient(_unit(j, size)) for j in range(size)] for form in forms]
    if rank(matrix, g0.field) < len(forms):
        raise PreconditionError("the linear forms are dependent", code='dependent')
    eta = tuple(nullspace(matrix, g0.field)[0])
    rng = _rng(rng, seed)
    lhs = resultant_scalar([g0] + forms, rng=rng) * evaluate(g0_prime, eta)
    rhs = resultant_scalar([g0_prime] + forms, rng=rng) * evaluate(g0, eta)
    return lhs == rhs


def restrict_last_variable(poly: MultiPoly, names=None):
    """poly with its last variable set to 0, in a ring with one variable fewer."""
    names = tuple(names or poly.names[:-1])
    terms = {m[:-1]: c for m, c in poly.element.items() if m[-1] == 0}
    grade = poly.grade if isinstance(poly.grade, int) else None
    return MultiPoly.from_terms(poly.field, names, terms, grade)


def descent_check(polys, last_degree, degrees=None, rng=None, seed=None):
    """
    Res(F_0, ..., F_{n-1}, y_n^e) == Res(F_0|_{y_n=0}, ..., F_{n-1}|_{y_n=0})^e.
    """
    polys = list(polys)
    if not polys or len(polys) != polys[0].nvars - 1:
        raise UsageError("descent needs n forms in n+1 variables")
    if degrees is None:
        degrees = [p.homogeneous_degree for p in polys]
    field = polys[0].field
    names = polys[0].names
    rng = _rng(rng, seed)
    last = MultiPoly.variable(field, names, len(names) - 1) ** last_degree
    lhs = resultant_scalar(polys + [last], degrees=list(degrees) + [last_degree], rng=rng)
    restricted = [restrict_last_variable(p) for p in polys]
    rhs = resultant_scalar(restricted, degrees=degrees, rng=rng) ** last_degree
    return lhs == rhs


# Resultants over K[x]

def bigrade(poly: MultiPoly):
    if isinstance(poly.grade, tuple):
        return poly.grade
    grades = {monomial_grade(m, True) for m in poly.element.keys()}
    if len(grades) != 1:
        raise HypothesisViolation("expected a bihomogeneous polynomial in (x, y)", code='bihomogeneous')
    return grades.pop()


def resultant_x_degree(bigrades, degrees: DegreeVector):
    """deg_x Res = sum_i e_i * prod_{j != i} d_j for x-degrees e_i."""
    return sum(e * degrees.slot_weight(i) for i, (e, _) in enumerate(bigrades))


def resultant_poly(polys, degrees=None, bound=None, rng=None, seed=None):
    """
    Res^y of n+1 polynomials, bihomogeneous in (x0..xn, y0..yn), as a form
    in x, by evaluation at x-points and lower-set interpolation.

    ``bound`` is an upper bound for deg_x supplied by the caller; it must
    not be below the exact degree implied by the bidegrees.
    """
    started = time.perf_counter()
    polys = tuple(polys)
    if not polys:
        raise UsageError("resultant_poly needs at least one polynomial")
    field = polys[0].field
    for poly in polys[1:]:
        polys[0]._check_compatible(poly)
    total = polys[0].nvars
    if total % 2 or len(polys) != total // 2:
        raise UsageError(f"{len(polys)} polynomials do not match a ring of {total} x/y variables")
    half = total // 2

    if degrees is None:
        if any(p.is_zero for p in polys):
            raise UsageError("degrees must be given when a slot is the zero polynomial")
        degrees = [bigrade(p)[1] for p in polys]
    degrees = degrees if isinstance(degrees, DegreeVector) else DegreeVector(tuple(degrees))
    bigrades = []
    for i, poly in enumerate(polys):
        if poly.is_zero:
            bigrades.append((0, degrees[i]))
            continue
        e, d = bigrade(poly)
        if d != degrees[i]:
            raise HypothesisViolation(f"polynomial {i} has y-degree {d}, expected {degrees[i]}", code='degree')
        bigrades.append((e, d))

    x_degree = resultant_x_degree(bigrades, degrees)
    if bound is not None and bound < x_degree:
        raise UsageError(f"degree bound {bound} is below deg_x = {x_degree} of the resultant")
    names = x_names(half)
    if any(p.is_zero for p in polys):
        return MultiPoly.zero(field, names, x_degree)

    rng = _rng(rng, seed)
    plan = MacaulayPlan.for_degrees(degrees)

    # tables[slot][k] lists (x-exponents, coefficient) of the y-monomial slot_monomials[slot][k].
    tables = []
    for poly, monomials in zip(polys, plan.slot_monomials):
        by_y = {}
        for monomial, coefficient in poly.kernel_terms().items():
            by_y.setdefault(monomial[half:], []).append((monomial[:half], coefficient))
        tables.append([by_y.get(m, []) for m in monomials])
    tops = max_exponents((m[:half] for p in polys for m in p.element.keys()), half)
    red = field.kernel_reduce

    def value_at(point):
        powers = power_tables(point, tops, field)
        vectors = []
        for table in tables:
            vector = []
            for entries in table:
                total_value = 0
                for exponents, coefficient in entries:
                    term = coefficient
                    for i, e in enumerate(exponents):
                        if e:
                            term = term * powers[i][e]
                    total_value += term
                vector.append(red(total_value))
            vectors.append(vector)
        if any(not any(vector) for vector in vectors):
            return 0
        value = _quotient(plan, vectors, field)
        if value is not None:
            return value
        specialized = tuple(
            MultiPoly.from_terms(
                field, y_names(half),
                {m: field.lift(c) for m, c in zip(plan.slot_monomials[i], vector) if c},
                degrees[i],
            )
            for i, vector in enumerate(vectors)
        )
        return _resultant_kernel(MacaulaySystem(specialized, degrees), rng)

    nodes = sample_nodes(field, x_degree, rng)
    result = interpolate_homogeneous(value_at, names, x_degree, field, nodes)

    kernel_terms = result.kernel_terms()
    for point in random_kernel_points(field, half, settings.FLEXLOCUS['INTERPOLATION_CHECKS'], rng):
        if evaluate_kernel(kernel_terms, point, field) != value_at(point):
            logger.error(f"interpolated resultant of x-degree {x_degree} disagrees with a direct evaluation")
            raise InternalInconsistency(
                f"interpolation inconsistency at x-degree {x_degree}: wrong bound or field too small"
            )

    logger.info(
        f"resultant over K[x]: degrees {degrees.degrees}, deg_x {x_degree}, "
        f"{len(result.element)} terms in {time.perf_counter() - started:.2f}s"
    )
    return result
