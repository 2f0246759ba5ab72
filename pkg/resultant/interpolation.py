"""
Recovery of a homogeneous polynomial from point values.

The form of degree D in x0..xm is dehomogenized at x0 = 1 and sampled on
the lower set {(nodes[i1], ..., nodes[im]) : i1 + ... + im <= D}, which has
exactly as many points as there are monomials of degree <= D. Axis-wise
divided differences give the Newton coefficients; axis-wise Newton to
monomial conversion gives the ordinary coefficients.
"""

import logging
from collections import defaultdict

from polycore.fields import ExactField
from polycore.models import MultiPoly
from polycore.operations import divided_differences, newton_to_monomial

logger = logging.getLogger(__name__)


def lower_set(dimension, degree):
    """Index tuples of the given dimension with sum <= degree."""
    if dimension == 0:
        yield ()
        return
    for head in range(degree + 1):
        for tail in lower_set(dimension - 1, degree - head):
            yield (head,) + tail


def _along_axes(table, dimension, nodes, transform):
    for axis in range(dimension):
        lines = defaultdict(list)
        for index in table:
            lines[index[:axis] + index[axis + 1:]].append(index)
        for indices in lines.values():
            indices.sort(key=lambda index: index[axis])
            values = [table[index] for index in indices]
            for index, value in zip(indices, transform(nodes[:len(values)], values)):
                table[index] = value


def interpolate_homogeneous(evaluate, names, degree, field: ExactField, nodes):
    """
    Interpolate a form of the given degree in the variables ``names``.

    ``evaluate(point)`` receives kernel coordinates (x0 = 1 first) and
    returns a kernel value; ``nodes`` are degree + 1 distinct kernel values.
    Returns the MultiPoly in ``names`` with grade ``degree``.
    """
    dimension = len(names) - 1
    one = field.kernel(field.one)
    table = {}
    for index in lower_set(dimension, degree):
        point = [one] + [nodes[i] for i in index]
        table[index] = evaluate(point)
    logger.debug(f"interpolating degree {degree} in {len(names)} variables from {len(table)} values")

    _along_axes(table, dimension, nodes, lambda xs, vs: divided_differences(xs, vs, field))
    _along_axes(table, dimension, nodes, lambda xs, cs: newton_to_monomial(xs, cs, field))

    terms = {}
    for index, coefficient in table.items():
        if coefficient:
            terms[(degree - sum(index),) + index] = field.lift(coefficient)
    return MultiPoly.from_terms(field, names, terms, degree)


def sample_nodes(field: ExactField, degree, rng):
    return field.distinct_nodes(degree + 1, rng if field.is_prime_field else None)


def random_kernel_points(field: ExactField, nvars, count, rng):
    for _ in range(count):
        yield [field.kernel(field.random_element(rng, bound=50)) for _ in range(nvars)]

