"""
Exact linear algebra on kernel-valued dense matrices.

Determinants, kernels and characteristic polynomials come from sympy's
DomainMatrix over the field's domain. Dual matrices (real part plus eps
part) are eliminated in parallel here.
"""

import logging

from sympy.polys.densearith import dup_div
from sympy.polys.matrices import DomainMatrix

from polycore.fields import ExactField
from utils.exceptions import InternalInconsistency
from .models import DualScalar

logger = logging.getLogger(__name__)


def submatrix(rows, indices):
    return [[rows[i][j] for j in indices] for i in indices]


def domain_matrix(rows, field: ExactField):
    return DomainMatrix([[field(c) for c in row] for row in rows], (len(rows), len(rows[0])), field.domain)


def kernel_det(rows, field: ExactField):
    if not rows:
        return field.kernel(field.one)
    return field.kernel(domain_matrix(rows, field).det())


def characteristic_quotient(entries, minor, domain):
    """
    Constant term in s of det(M - s*I) / det(M' - s*I), where M' is the
    principal submatrix on ``minor``. ``entries`` are elements of ``domain``.
    """
    size = len(entries)
    full = DomainMatrix(entries, (size, size), domain).charpoly()
    if minor:
        reduced = DomainMatrix(submatrix(entries, minor), (len(minor), len(minor)), domain).charpoly()
    else:
        reduced = [domain.one]
    quotient, remainder = dup_div(full, reduced, domain)
    if remainder:
        logger.error(f"characteristic polynomial of a {size}x{size} Macaulay matrix is not divisible by its minor's")
        raise InternalInconsistency("the reduced minor does not divide the Macaulay determinant")
    constant = quotient[-1] if quotient else domain.zero
    return -constant if (size - len(minor)) % 2 else constant


def dual_det(real_rows, eps_rows, field: ExactField) -> DualScalar:
    """
    det(A + eps*B) with eps^2 = 0.

    Pivots must have a nonzero real part. When a column has no such pivot
    left, the remaining block is eps times the determinant of the real
    block with that column replaced by its eps parts.
    """
    red = field.kernel_reduce
    inverse = field.kernel_inverse
    A = [list(row) for row in real_rows]
    B = [list(row) for row in eps_rows]
    n = len(A)
    accumulated = DualScalar(field.kernel(field.one), 0, field)
    for k in range(n):
        pivot = next((i for i in range(k, n) if A[i][k]), None)
        if pivot is None:
            block = [[B[i][k]] + A[i][k + 1:] for i in range(k, n)]
            return DualScalar(0, red(accumulated.real * kernel_det(block, field)), field)
        if pivot != k:
            A[k], A[pivot] = A[pivot], A[k]
            B[k], B[pivot] = B[pivot], B[k]
            accumulated = -accumulated
        a, b = A[k][k], B[k][k]
        accumulated = accumulated * DualScalar(a, b, field)
        inv_a = inverse(a)
        inv_b = red(-b * inv_a * inv_a)
        top_a, top_b = A[k], B[k]
        for i in range(k + 1, n):
            row_a, row_b = A[i], B[i]
            ra, rb = row_a[k], row_b[k]
            if not ra and not rb:
                continue
            # factor = (ra + rb eps) / (a + b eps)
            fa = red(ra * inv_a)
            fb = red(ra * inv_b + rb * inv_a)
            for j in range(k + 1, n):
                row_b[j] = red(row_b[j] - fa * top_b[j] - fb * top_a[j])
                row_a[j] = red(row_a[j] - fa * top_a[j])
            row_a[k] = 0
            row_b[k] = 0
    return accumulated


def nullspace(rows, field: ExactField):
    """Basis of the right kernel, as lists of field elements."""
    return domain_matrix(rows, field).nullspace().to_list()


def rank(rows, field: ExactField):
    return domain_matrix(rows, field).rank()


def matmul(left, right, field: ExactField):
    product = domain_matrix(left, field) * domain_matrix(right, field)
    return [[field.kernel(c) for c in row] for row in product.to_list()]
