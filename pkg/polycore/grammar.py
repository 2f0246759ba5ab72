"""
Text grammar for polynomials and projective points.

A polynomial is a sum of terms separated by ``+``/``-``; a term is
``coeff``, ``coeff*mono`` or ``mono``; a monomial is a ``*``-product of
``x3``, ``y0^2`` style factors. Coefficients are integers or ``a/b``.
"""

import re

from utils.exceptions import HypothesisViolation
from .models import MultiPoly, x_names, xy_names, y_names

TERM_RE = re.compile(r'([+-]?)([^+-]+)')
NUMBER_RE = re.compile(r'^\d+(/\d+)?$')
VARIABLE_RE = re.compile(r'^([xyt])(\d*)(?:\^(\d+))?$')


def _syntax_error(text, detail):
    return HypothesisViolation(f"cannot parse polynomial {text!r}: {detail}", code='syntax')


def _tokenize(text):
    """Yield (sign, [factor, ...]) per term."""
    compact = re.sub(r'\s+', '', text).replace('**', '^')
    if not compact:
        raise _syntax_error(text, 'empty input')
    consumed = 0
    for match in TERM_RE.finditer(compact):
        if match.start() != consumed:
            raise _syntax_error(text, f'unexpected character at {consumed}')
        consumed = match.end()
        sign, body = match.groups()
        factors = body.split('*')
        if any(not factor for factor in factors):
            raise _syntax_error(text, f'dangling "*" in {body!r}')
        yield (-1 if sign == '-' else 1), factors
    if consumed != len(compact):
        raise _syntax_error(text, 'trailing sign')


def _scan_variables(terms):
    seen = {'x': -1, 'y': -1, 't': -1}
    for _, factors in terms:
        for factor in factors:
            match = VARIABLE_RE.match(factor)
            if match:
                letter, index = match.group(1), match.group(2)
                seen[letter] = max(seen[letter], int(index) if index else 0)
    return seen


def default_names(seen, nvars=None):
    if seen['t'] >= 0:
        return ('t',)
    if seen['y'] >= 0 and seen['x'] >= 0:
        count = max(seen['x'], seen['y']) + 1
        return xy_names(max(count, nvars or 0))
    if seen['y'] >= 0:
        return y_names(max(seen['y'] + 1, nvars or 0))
    return x_names(max(seen['x'] + 1, nvars or 1))


def parse_poly(text, field, names=None, nvars=None, grade=None):
    """
    Parse ``text`` into a MultiPoly over ``field``.

    Without ``names`` the ring is inferred: x-variables only, y-variables
    only, or the bihomogeneous x/y ring when both letters occur. ``nvars``
    widens an inferred x- or y-ring.
    """
    terms = list(_tokenize(text))
    if names is None:
        names = default_names(_scan_variables(terms), nvars)
    names = tuple(names)
    position = {name: i for i, name in enumerate(names)}

    accumulated = {}
    for sign, factors in terms:
        coefficient = field(sign)
        exponents = [0] * len(names)
        for factor in factors:
            if NUMBER_RE.match(factor):
                coefficient = coefficient * field.parse_scalar(factor)
                continue
            match = VARIABLE_RE.match(factor)
            if not match:
                raise _syntax_error(text, f'bad factor {factor!r}')
            name = match.group(1) + match.group(2)
            if name not in position:
                raise _syntax_error(text, f'variable {name} is not among {", ".join(names)}')
            exponents[position[name]] += int(match.group(3) or 1)
        monomial = tuple(exponents)
        accumulated[monomial] = accumulated.get(monomial, field.zero) + coefficient

    terms_map = {m: c for m, c in accumulated.items() if c}
    return MultiPoly.from_terms(field, names, terms_map, grade)


def _format_monomial(monomial, names):
    factors = []
    for name, exponent in zip(names, monomial):
        if exponent == 1:
            factors.append(name)
        elif exponent > 1:
            factors.append(f'{name}^{exponent}')
    return '*'.join(factors)


def format_poly(poly: MultiPoly):
    """Canonical text in descending graded reverse lexicographic order."""
    if poly.is_zero:
        return '0'
    field = poly.field
    names = poly.names
    pieces = []
    for monomial, coefficient in poly.terms():
        text = field.format_scalar(coefficient)
        negative = text.startswith('-')
        if negative:
            text = text[1:]
        mono = _format_monomial(monomial, names)
        if mono:
            text = mono if text == '1' else f'{text}*{mono}'
        if negative:
            pieces.append(f'-{text}')
        else:
            pieces.append(f'+{text}' if pieces else text)
    return ''.join(pieces)


def parse_point(text, field, nvars=None):
    """Comma-separated coordinates; spaces are ignored."""
    parts = [part for part in re.sub(r'\s+', '', text or '').split(',')]
    if not parts or any(not part for part in parts):
        raise HypothesisViolation(f"malformed point {text!r}", code='point')
    point = tuple(field.parse_scalar(part) for part in parts)
    if nvars is not None and len(point) != nvars:
        raise HypothesisViolation(
            f"point {text!r} has {len(point)} coordinates, expected {nvars}", code='point'
        )
    return point


def normalize_point(point, field):
    """Scale so the first nonzero coordinate is 1."""
    point = tuple(field(c) for c in point)
    for coordinate in point:
        if coordinate:
            inverse = field.one / coordinate
            return tuple(c * inverse for c in point)
    raise HypothesisViolation("the zero vector is not a projective point", code='zero_point')


def format_point(point, field):
    return ','.join(field.format_scalar(c) for c in point)
