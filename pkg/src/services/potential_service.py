"""Double-well potential and optimal interface profile.

W(s) = s^2 (1 - s)^2 / 2 with wells at 0 and 1. The optimal profile
q(s) = 1 / (1 + e^s) solves q' = -sqrt(2 W(q)), so q'' = W'(q); it equals
(1 - tanh(s/2)) / 2. All functions accept floats or numpy arrays.
"""

from typing import Union

import numpy as np
from scipy.special import expit

ArrayLike = Union[float, np.ndarray]

C_W = 1.0 / 6.0


def _out(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def w(s: ArrayLike) -> ArrayLike:
    """Double-well potential s^2 (1 - s)^2 / 2."""
    s = np.asarray(s, dtype=float)
    return _out(0.5 * s ** 2 * (1.0 - s) ** 2)


def w_prime(s: ArrayLike) -> ArrayLike:
    """W'(s) = s (1 - s)(1 - 2 s)."""
    s = np.asarray(s, dtype=float)
    return _out(s * (1.0 - s) * (1.0 - 2.0 * s))


def w_second(s: ArrayLike) -> ArrayLike:
    """W''(s) = 1 - 6 s + 6 s^2."""
    s = np.asarray(s, dtype=float)
    return _out(1.0 - 6.0 * s + 6.0 * s ** 2)


def sqrt_2w(s: ArrayLike) -> ArrayLike:
    """sqrt(2 W(s)) in the closed form |s (1 - s)|.

    Stays exact and nonnegative for values slightly outside [0, 1].
    """
    s = np.asarray(s, dtype=float)
    return _out(np.abs(s * (1.0 - s)))


def profile(s: ArrayLike) -> ArrayLike:
    """Optimal profile q(s) = 1 / (1 + e^s), decreasing from 1 to 0."""
    return _out(expit(-np.asarray(s, dtype=float)))


def profile_derivative(s: ArrayLike) -> ArrayLike:
    """q'(s) = -e^s / (1 + e^s)^2, written as -q(s) q(-s) to avoid overflow."""
    s = np.asarray(s, dtype=float)
    return _out(-expit(-s) * expit(s))


def c_w() -> float:
    """c_W = integral of sqrt(2 W) over [0, 1] = 1/6."""
    return C_W


def stabilization_bound(lower: float = 0.0, upper: float = 1.0) -> float:
    """Largest W'' on [lower, upper].

    The explicit part W'(s) - alpha s is the derivative of a concave
    function on that range as soon as alpha exceeds this bound.

    Args:
        lower: Smallest value the fields visit
        upper: Largest value the fields visit

    Returns:
        max W'' over the interval (W'' is convex, so an endpoint)
    """
    if upper < lower:
        raise ValueError(f"Empty interval [{lower}, {upper}]")
    return float(max(w_second(lower), w_second(upper)))
