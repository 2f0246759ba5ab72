"""
Operations on exact sparse polynomials.

Everything here is a pure function of its arguments. Hot loops convert
coefficients to the field's kernel representation (see ``ExactField``)
and lift results back into ``MultiPoly`` at the end.
"""

import itertools
import logging
import math
import random
from functools import lru_cache
from typing import List, Sequence

from django.conf import settings
from sympy import factorial
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from utils.exceptions import HypothesisViolation, InternalInconsistency, UsageError
from .fields import ExactField
from .models import MultiPoly, xy_names, y_names

logger = logging.getLogger(__name__)

# Ring arithmetic

def add(a: MultiPoly, b):
    return a + b


def mul(a: MultiPoly, b):
    return a * b


def scale(a: MultiPoly, scalar):
    return a.scale(scalar)


def power(a: MultiPoly, exponent: int):
    return a ** exponent


def monomials_of_degree(nvars, degree):
    """All exponent tuples of total ``degree``, first variable descending."""
    if nvars == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for tail in monomials_of_degree(nvars - 1, degree - head):
            yield (head,) + tail


def change_field(f: MultiPoly, field: ExactField):
    """Reinterpret ``f`` over another field (e.g. reduce a rational form mod p)."""
    if f.field == field:
        return f
    terms = {}
    for monomial, coefficient in f.element.items():
        if field.is_prime_field and not f.field.is_prime_field:
            coefficient = field.parse_scalar(f.field.format_scalar(coefficient))
        terms[monomial] = field(coefficient)
    return MultiPoly.from_terms(field, f.names, terms, f.grade)


def lift_to_xy(f: MultiPoly):
    """View a form in x0..xn as a polynomial of bidegree (d, 0) in x0..xn, y0..yn."""
    padding = (0,) * f.nvars
    terms = {monomial + padding: c for monomial, c in f.element.items()}
    d = f.homogeneous_degree
    grade = (d, 0) if d is not None else None
    return MultiPoly.from_terms(f.field, xy_names(f.nvars), terms, grade)


def partial_derivative(f: MultiPoly, i: int):
    if not 0 <= i < f.nvars:
        raise UsageError(f"variable index {i} out of range for {f.nvars} variables")
    grade = None
    if isinstance(f.grade, int) and f.grade > 0:
        grade = f.grade - 1
    elif isinstance(f.grade, tuple):
        half = f.nvars // 2
        a, b = f.grade
        grade = (a - 1, b) if i < half else (a, b - 1)
        if min(grade) < 0:
            grade = None
    return f.new(f.element.diff(f.ring.gens[i]), grade)


# Evaluation

def power_tables(point, max_exponents, field: ExactField):
    red = field.kernel_reduce
    tables = []
    for value, top in zip(point, max_exponents):
        row = [field.kernel(field.one)]
        for _ in range(top):
            row.append(red(row[-1] * value))
        tables.append(row)
    return tables


def max_exponents(monomials, nvars):
    tops = [0] * nvars
    for monomial in monomials:
        for i, e in enumerate(monomial):
            if e > tops[i]:
                tops[i] = e
    return tops


def evaluate_kernel(kernel_terms, point, field: ExactField):
    """Evaluate a {monomial: kernel scalar} map at a kernel-valued point."""
    if not kernel_terms:
        return field.kernel(field.zero)
    red = field.kernel_reduce
    tables = power_tables(point, max_exponents(kernel_terms, len(point)), field)
    total = 0
    for monomial, coefficient in kernel_terms.items():
        value = coefficient
        for i, e in enumerate(monomial):
            if e:
                value = value * tables[i][e]
        total = red(total + value)
    return red(total)


def evaluate(f: MultiPoly, point: Sequence):
    if len(point) != f.nvars:
        raise UsageError(f"point has {len(point)} coordinates, polynomial has {f.nvars} variables")
    field = f.field
    kernel_point = [field.kernel(field(c)) for c in point]
    return field.lift(evaluate_kernel(f.kernel_terms(), kernel_point, field))


def random_point(field: ExactField, nvars, rng: random.Random, bound=9):
    while True:
        point = tuple(field.random_element(rng, bound=bound) for _ in range(nvars))
        if any(point):
            return point


# Univariate helpers

def univariate(field: ExactField, coefficients, name='t'):
    """Build a polynomial in one variable from low-to-high coefficients."""
    terms = {(k,): c for k, c in enumerate(coefficients) if c}
    return MultiPoly.from_terms(field, (name,), {m: field.lift(c) for m, c in terms.items()})


def univariate_coefficients(u: MultiPoly):
    """Low-to-high coefficients of a univariate polynomial (as field elements)."""
    if u.nvars != 1:
        raise UsageError("expected a univariate polynomial")
    if u.is_zero:
        return []
    top = max(m[0] for m in u.element.keys())
    return [u.coefficient((k,)) for k in range(top + 1)]


def valuation(u: MultiPoly):
    """t-adic valuation; infinity for the zero polynomial."""
    if u.is_zero:
        return math.inf
    return min(m[0] for m in u.element.keys())


def _convolve(a, b, red):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = red(out[i + j] + x * y)
    return out


def substitute_line(f: MultiPoly, p: Sequence, q: Sequence):
    """The univariate polynomial f(p + t*q)."""
    if len(p) != f.nvars or len(q) != f.nvars:
        raise UsageError("line endpoints must have one coordinate per variable")
    field = f.field
    red = field.kernel_reduce
    p = [field.kernel(field(c)) for c in p]
    q = [field.kernel(field(c)) for c in q]
    kernel_terms = f.kernel_terms()
    tops = max_exponents(kernel_terms, f.nvars)

    # linear_powers[i][e] holds the coefficients of (p_i + t*q_i)^e.
    linear_powers = []
    for i, top in enumerate(tops):
        rows = [[field.kernel(field.one)]]
        for _ in range(top):
            rows.append(_convolve(rows[-1], [p[i], q[i]], red))
        linear_powers.append(rows)

    degree = max((sum(m) for m in kernel_terms), default=0)
    total = [0] * (degree + 1)
    for monomial, coefficient in kernel_terms.items():
        acc = [coefficient]
        for i, e in enumerate(monomial):
            if e:
                acc = _convolve(acc, linear_powers[i][e], red)
        for k, c in enumerate(acc):
            total[k] = red(total[k] + c)
    return univariate(field, total)


# Taylor system

def taylor_system(f: MultiPoly) -> List[MultiPoly]:
    """
    [f_1, ..., f_d] with f_{k+1} = sum_i y_i * d(f_k)/dx_i, so that
    f(x + t*y) = f(x) + sum_k f_k(x, y) t^k / k!.
    """
    d = f.homogeneous_degree
    if d is None:
        raise HypothesisViolation("the Taylor system needs a homogeneous form", code='homogeneous')
    n1 = f.nvars
    current = lift_to_xy(f).element
    gens = current.ring.gens
    system = []
    for k in range(1, d + 1):
        step = current.ring.zero
        for i in range(n1):
            step += gens[n1 + i] * current.diff(gens[i])
        system.append(MultiPoly(f.field, step, (d - k, k)))
        current = step
    return system


def verify_taylor_identity(f: MultiPoly, taylor, rng: random.Random, checks=3):
    """Spot-check f(p+tq) = f(p) + sum f_k(p,q) t^k/k! at random (p, q)."""
    field = f.field
    for _ in range(checks):
        p = random_point(field, f.nvars, rng)
        q = random_point(field, f.nvars, rng)
        coefficients = univariate_coefficients(substitute_line(f, p, q))
        coefficients += [field.zero] * (len(taylor) + 1 - len(coefficients))
        if coefficients[0] != evaluate(f, p):
            raise InternalInconsistency("Taylor identity failed at t^0")
        for k, f_k in enumerate(taylor, start=1):
            if coefficients[k] * field(int(factorial(k))) != evaluate(f_k, p + q):
                logger.error(f"Taylor identity failed at t^{k} for p={p}, q={q}")
                raise InternalInconsistency(f"Taylor identity failed at t^{k}")


# Squarefreeness

def is_squarefree(f: MultiPoly, rng: random.Random = None, lines: int = None):
    """
    Probabilistic squarefree test by restriction to random lines.

    A repeated factor g^2 | f survives on every line that meets Z(f) in
    the expected number of points, so one squarefree restriction of full
    degree proves f squarefree. False is returned when every sampled
    restriction has a repeated root.
    """
    d = f.homogeneous_degree
    if f.is_zero or d is None:
        raise HypothesisViolation("squarefree test needs a nonzero form", code='homogeneous')
    field = f.field
    if field.is_prime_field and field.modulus <= d:
        raise HypothesisViolation(
            f"characteristic {field.modulus} is not larger than the degree {d}; "
            "derivatives may vanish spuriously",
            code='characteristic',
        )
    if d <= 1:
        return True
    rng = rng or random.Random(settings.FLEXLOCUS['DEFAULT_SEED'])
    lines = lines or settings.FLEXLOCUS['SQUAREFREE_LINES']
    tested = 0
    for _ in range(4 * lines):
        if tested == lines:
            break
        p = random_point(field, f.nvars, rng, bound=50)
        q = random_point(field, f.nvars, rng, bound=50)
        u = substitute_line(f, p, q)
        if u.total_degree != d:
            continue
        tested += 1
        g = u.element.gcd(u.element.diff(u.ring.gens[0]))
        if g.degree() <= 0:
            return True
    if not tested:
        raise HypothesisViolation("no line of full degree found for the squarefree test", code='squarefree')
    logger.debug(f"all {tested} restrictions of a degree {d} form have repeated roots")
    return False


# Substitutions

def specialize(F: MultiPoly, values: Sequence, names=None):
    """
    Substitute ``values`` for the leading variables of ``F``.

    For a bihomogeneous F(x, y) and a point p this is F(p, y), returned in
    the ring y0..yn with grade equal to the y-degree.
    """
    field = F.field
    k = len(values)
    rest = F.nvars - k
    if rest < 1:
        raise UsageError("specialize must leave at least one variable")
    names = tuple(names or y_names(rest))
    red = field.kernel_reduce
    kernel_values = [field.kernel(field(v)) for v in values]
    kernel_terms = F.kernel_terms()
    tables = power_tables(kernel_values, max_exponents((m[:k] for m in kernel_terms), k), field)
    accumulated = {}
    for monomial, coefficient in kernel_terms.items():
        value = coefficient
        for i in range(k):
            if monomial[i]:
                value = value * tables[i][monomial[i]]
        tail = monomial[k:]
        accumulated[tail] = red(accumulated.get(tail, 0) + value)
    grade = F.grade[1] if isinstance(F.grade, tuple) else None
    terms = {m: field.lift(c) for m, c in accumulated.items() if c}
    return MultiPoly.from_terms(field, names, terms, grade)


def linear_substitution(f: MultiPoly, T):
    """f(T x): every x_i becomes sum_j T[i][j] x_j."""
    size = f.nvars
    if len(T) != size or any(len(row) != size for row in T):
        raise UsageError(f"substitution matrix must be {size}x{size}")
    field = f.field
    ring = f.ring
    images = [sum((ring.gens[j] * field(T[i][j]) for j in range(size)), ring.zero) for i in range(size)]
    tops = max_exponents(f.element.keys(), size)
    cached = []
    for i, top in enumerate(tops):
        row = [ring.one]
        for _ in range(top):
            row.append(row[-1] * images[i])
        cached.append(row)
    result = ring.zero
    for monomial, coefficient in f.element.items():
        term = ring.ground_new(coefficient)
        for i, e in enumerate(monomial):
            if e:
                term = term * cached[i][e]
        result += term
    return f.new(result, f.grade)


# Division by a single polynomial

@lru_cache(maxsize=None)
def _lex_ring(field: ExactField, names, first):
    """Ring over ``names`` in lex order with names[first] ranked first."""
    ordered = (names[first],) + names[:first] + names[first + 1:]
    return PolyRing(ordered, field.domain, lex)


def polynomial_division(g: MultiPoly, f: MultiPoly, order='grevlex'):
    """
    Divide ``g`` by ``f``; returns (quotient, remainder) with no monomial
    of the remainder divisible by the leading monomial of ``f``.

    ``order`` is 'grevlex' or ('lex', i) for lex with x_i ranked first.
    """
    g._check_compatible(f)
    if f.is_zero:
        raise UsageError("division by the zero polynomial")
    if order == 'grevlex':
        ring = g.ring
    elif isinstance(order, tuple) and order[0] == 'lex':
        ring = _lex_ring(f.field, g.names, order[1])
    else:
        raise UsageError(f"unknown monomial order {order!r}")

    quotient, remainder = g.element.set_ring(ring).div(f.element.set_ring(ring))

    q_grade = r_grade = None
    if isinstance(g.grade, int) and isinstance(f.grade, int):
        q_grade, r_grade = g.grade - f.grade, g.grade
    return g.new(quotient.set_ring(g.ring), q_grade), g.new(remainder.set_ring(g.ring), r_grade)


def normal_form(g: MultiPoly, f: MultiPoly):
    """Remainder of g modulo (f) under graded reverse lexicographic order."""
    return polynomial_division(g, f, 'grevlex')[1]


def exact_quotient(g: MultiPoly, f: MultiPoly):
    quotient, remainder = polynomial_division(g, f)
    if not remainder.is_zero:
        raise InternalInconsistency("expected an exact division but a remainder is left")
    return quotient


# Interpolation

def divided_differences(nodes, values, field: ExactField):
    """Newton coefficients c_k with P(t) = sum_k c_k prod_{j<k} (t - nodes[j])."""
    red = field.kernel_reduce
    inverse = field.kernel_inverse
    coefficients = list(values)
    count = len(nodes)
    for level in range(1, count):
        for i in range(count - 1, level - 1, -1):
            numerator = coefficients[i] - coefficients[i - 1]
            coefficients[i] = red(numerator * inverse(red(nodes[i] - nodes[i - level])))
    return coefficients


def newton_to_monomial(nodes, coefficients, field: ExactField):
    """Low-to-high monomial coefficients of a Newton-form polynomial."""
    red = field.kernel_reduce
    if not coefficients:
        return []
    result = [coefficients[-1]]
    for k in range(len(coefficients) - 2, -1, -1):
        # result <- result * (t - nodes[k]) + coefficients[k]
        shifted = [0] + result
        for i, c in enumerate(result):
            shifted[i] = red(shifted[i] - nodes[k] * c)
        shifted[0] = red(shifted[0] + coefficients[k])
        result = shifted
    return result


def interpolate_univariate(nodes, values, field: ExactField, name='t'):
    """The unique polynomial of degree < len(nodes) through (nodes, values)."""
    if len(set(nodes)) != len(nodes):
        raise UsageError("interpolation nodes must be distinct")
    kernel_nodes = [field.kernel(field(v)) for v in nodes]
    kernel_values = [field.kernel(field(v)) for v in values]
    newton = divided_differences(kernel_nodes, kernel_values, field)
    return univariate(field, newton_to_monomial(kernel_nodes, newton, field), name)


# Random data and enumeration

def random_form(field: ExactField, nvars, degree, rng: random.Random, names=None, density=1.0, bound=9):
    """A random homogeneous form; each monomial is kept with probability ``density``."""
    names = tuple(names or tuple(f'x{i}' for i in range(nvars)))
    while True:
        terms = {}
        for monomial in monomials_of_degree(nvars, degree):
            if density < 1.0 and rng.random() > density:
                continue
            value = field.random_element(rng, bound=bound)
            if value:
                terms[monomial] = value
        if terms:
            return MultiPoly.from_terms(field, names, terms, degree)


def iter_projective_points(field: ExactField, nvars):
    """
    P^{nvars-1}(F_p) in canonical order: first nonzero coordinate equal to 1,
    leading position ascending, the remaining coordinates in lexicographic
    order of residues.
    """
    if not field.is_prime_field:
        raise UsageError("projective enumeration needs a prime field")
    p = field.modulus
    lift = field.lift
    for lead in range(nvars):
        prefix = (0,) * lead + (1,)
        for tail in itertools.product(range(p), repeat=nvars - lead - 1):
            yield tuple(lift(v) for v in prefix + tail)


def projective_point_count(q, nvars):
    return (q ** nvars - 1) // (q - 1)

