"""Dense nonnegative matrix kernels used by the multiplicative-update solvers.

Matrices are plain 2-D ``float64`` numpy arrays in C (row-major) order.
The helpers here validate shapes and nonnegativity and otherwise defer to
numpy for the arithmetic.
"""
import numpy as np

from .errors import InputError, ShapeError

DEFAULT_EPS = 1e-10


def as_nonneg(a, name="matrix"):
    """Return `a` as a C-contiguous float64 2-D array, checking the invariants.

    Raises
    ------
    InputError
        If `a` is not 2-D, has an empty dimension, or holds a negative or
        non-finite entry.
    """
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InputError(f"{name} must have at least one row and one column, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        raise InputError(f"{name} contains negative entries")
    return arr


def _check_same_shape(a, b, op):
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


def matmul(a, b):
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: cannot multiply {a.shape} by {b.shape}")
    return a @ b


def transpose(a):
    # copy so the result is row-major again rather than a strided view
    return np.ascontiguousarray(a.T)


def hadamard(a, b):
    _check_same_shape(a, b, "hadamard")
    return a * b


def safe_divide(num, den, eps=DEFAULT_EPS):
    """Entrywise ``num / (den + eps)``.

    The guard is added to the denominator only, so exact zeros in `num`
    stay exactly zero.
    """
    _check_same_shape(num, den, "safe_divide")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return num / (den + eps)


def frobenius_norm_sq(a):
    """Sum of squared entries of `a`."""
    flat = np.ravel(a)
    return float(np.dot(flat, flat))
