"""Small input validation helpers, in the spirit of ``sklearn.utils.validation``."""

import math
import numbers

import numpy as np

from .exceptions import ValidationError


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_open_unit(value, name):
    if not isinstance(value, numbers.Real) or not 0.0 < value < 1.0:
        raise ValidationError(f"{name} must lie strictly inside (0, 1), got {value!r}")
    return float(value)


def check_count(value, name, minimum=1):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < minimum:
        raise ValidationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def as_float_array(x):
    """Coerce to a float ndarray; infinities are allowed, NaN is not."""
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise ValidationError("NaN is not a valid extended real")
    return arr


def check_strictly_increasing(points, name="grid"):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ValidationError(f"{name} needs at least two points")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} points must be finite")
    if np.any(np.diff(arr) <= 0):
        raise ValidationError(f"{name} points must be strictly increasing")
    return arr


def check_pairs(X):
    """Validate an (n, 2) array of observed extreme pairs."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"expected an (n, 2) array of pairs, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValidationError("empty sample batch")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("sample pairs must be finite")
    return arr
