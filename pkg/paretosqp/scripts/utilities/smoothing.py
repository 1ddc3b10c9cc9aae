"""
Low-order penalty kernel and its smooth approximation

The kernel h^k(t) = max(0, t)^k with 0 < k < 1 is not differentiable at the
origin. The smoothed kernel h_eps^k replaces it by three branches:

    0                                           t < -eps
    eps^(k(1-b)) * b^(-k) * (t + eps)^(kb)      -eps <= t < 0
    (t + eps/b)^k                               t >= 0

which is continuous for any k, b, eps > 0 and continuously differentiable
when 1/b < k. All functions accept scalars or numpy arrays.
"""

import logging
from dataclasses import dataclass
from typing import Union

import numpy as np

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SmoothingConfig:
    """Shape parameters of the smoothed kernel"""

    k: float
    b: float
    eps: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"Exponent k must be positive, got {self.k}")
        if not self.b > 0:
            raise ValueError(f"Shape parameter b must be positive, got {self.b}")
        if not self.eps > 0:
            raise ValueError(f"Smoothing width eps must be positive, got {self.eps}")

    @property
    def is_differentiable(self) -> bool:
        """True when 1/b < k, the condition for a C1 kernel"""
        return 1.0 / self.b < self.k

    def require_differentiable(self):
        if not self.is_differentiable:
            raise ValueError(
                f"Kernel is not differentiable for k={self.k}, b={self.b}: need 1/b < k"
            )

    def require_low_order(self):
        """Merit kernels need 1/b < k <= 1"""
        self.require_differentiable()
        if self.k > 1:
            raise ValueError(f"Low-order merit kernel needs k <= 1, got k={self.k}")

    def with_eps(self, eps: float) -> "SmoothingConfig":
        return SmoothingConfig(k=self.k, b=self.b, eps=eps)


def _as_array(t: ArrayLike):
    arr = np.asarray(t, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _restore(out: np.ndarray, scalar: bool) -> ArrayLike:
    return float(out[0]) if scalar else out


def h_plus(t: ArrayLike, k: float) -> ArrayLike:
    """Unsmoothed kernel max(0, t)^k"""
    if not k > 0:
        raise ValueError(f"Exponent k must be positive, got {k}")
    arr, scalar = _as_array(t)
    out = np.zeros_like(arr)
    pos = arr > 0
    out[pos] = arr[pos] ** k
    return _restore(out, scalar)


def smooth_h(t: ArrayLike, cfg: SmoothingConfig) -> ArrayLike:
    """Smoothed kernel h_eps^k(t)"""
    arr, scalar = _as_array(t)
    k, b, eps = cfg.k, cfg.b, cfg.eps
    out = np.zeros_like(arr)

    mid = (arr >= -eps) & (arr < 0)
    right = arr >= 0

    shifted = arr[mid] + eps
    assert np.all(shifted >= 0), "middle branch base must be nonnegative"
    out[mid] = eps ** (k * (1.0 - b)) * b ** (-k) * shifted ** (k * b)

    base = arr[right] + eps / b
    assert np.all(base > 0), "right branch base must be positive"
    out[right] = base**k

    return _restore(out, scalar)


def smooth_h_deriv(t: ArrayLike, cfg: SmoothingConfig) -> ArrayLike:
    """Derivative of smooth_h with respect to t

    The middle branch is the exact derivative of the implemented middle
    branch, k * eps^(k(1-b)) * b^(1-k) * (t + eps)^(kb-1). It meets the right
    branch at t = 0 with the common value k * (eps/b)^(k-1).
    """
    cfg.require_differentiable()
    arr, scalar = _as_array(t)
    k, b, eps = cfg.k, cfg.b, cfg.eps
    out = np.zeros_like(arr)

    mid = (arr > -eps) & (arr <= 0)
    right = arr > 0

    shifted = arr[mid] + eps
    assert np.all(shifted > 0), "middle branch base must be positive"
    out[mid] = k * eps ** (k * (1.0 - b)) * b ** (1.0 - k) * shifted ** (k * b - 1.0)

    base = arr[right] + eps / b
    assert np.all(base > 0), "right branch base must be positive"
    out[right] = k * base ** (k - 1.0)

    return _restore(out, scalar)
