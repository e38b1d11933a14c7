"""Weight laws and sure-inequality couplings.

A :class:`WeightSpec` describes a non-negative weight whose q-th power is
either Uniform(0, 1) or Exponential(1).  Both laws satisfy a splitting
property: a draw X can be coupled to two independent copies (Y, Y') of itself
so that

    X <= min(Y / (1 - s)^(1/q), Y' / s^(1/q))    surely, for any s in (0, 1).

The construction works in q-power space.  Let V = Y^q and V' = Y'^q, and set
W = min(V / (1 - s), V' / s).  For the exponential base, W is again
Exponential(1) (min-stability), so X = W^(1/q) directly.  For the uniform
base, X^q = F_W(W) where

    F_W(w) = 1 - max(0, 1 - (1 - s) w) * max(0, 1 - s w),

the exact CDF of W; the probability-integral transform restores the uniform
marginal, and F_W(w) <= w gives the sure inequality.  On the interior the
product expands to w - s(1-s)w^2, which is the numerically stable form.

Iterating the split k - 1 times with the equal schedule s_i = 1/k couples one
draw to k independent copies with X <= k^(1/q) * min_i Y_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "BaseLaw",
    "WeightSpec",
    "CoupledTriple",
    "IteratedSplit",
    "sample",
    "cdf",
    "quantile",
    "split_coupling",
    "split_coupling_batch",
    "iterated_coupling",
    "iterated_coupling_batch",
    "coupling_violations",
]


class BaseLaw(Enum):
    """Law of the q-th power of a weight."""

    UNIFORM_POWER = "uniform"
    EXPONENTIAL_POWER = "exponential"


@dataclass(frozen=True)
class WeightSpec:
    """Weight distribution: the q-th power of a draw follows `base`.

    q > 0.  Uniform base gives samples in (0, 1]; exponential base in (0, inf).
    """

    q: float
    base: BaseLaw = BaseLaw.UNIFORM_POWER

    def __post_init__(self) -> None:
        if not (self.q > 0 and np.isfinite(self.q)):
            raise ValueError(f"q must be a positive finite number, got {self.q}")
        if not isinstance(self.base, BaseLaw):
            raise ValueError(f"base must be a BaseLaw, got {self.base!r}")


def _check_s(s: float) -> float:
    s = float(s)
    if not 0.0 < s < 1.0:
        raise ValueError(f"split fraction s must lie in (0, 1), got {s}")
    return s


def _power(values: np.ndarray, expo: float) -> np.ndarray:
    if expo == 1.0:
        return values
    return values ** expo


def _base_sample(spec: WeightSpec, rng: np.random.Generator, size) -> np.ndarray:
    if spec.base is BaseLaw.UNIFORM_POWER:
        # 1 - U keeps draws inside (0, 1]; rng.random() can return 0.0.
        return 1.0 - rng.random(size)
    return rng.exponential(size=size)


def sample(spec: WeightSpec, rng: np.random.Generator, size=None):
    """Draw weights from `spec`; scalar when size is None, else an array."""
    values = _power(_base_sample(spec, rng, size), 1.0 / spec.q)
    if size is None:
        return float(values)
    return values


def cdf(spec: WeightSpec, x):
    """Distribution function of the weight law, vectorized over x."""
    arr = np.asarray(x, dtype=float)
    xq = np.where(arr > 0, arr, 0.0) ** spec.q
    if spec.base is BaseLaw.UNIFORM_POWER:
        out = np.clip(xq, 0.0, 1.0)
    else:
        out = -np.expm1(-xq)
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def quantile(spec: WeightSpec, p):
    """Inverse of :func:`cdf` on [0, 1]."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("quantile argument must lie in [0, 1]")
    if spec.base is BaseLaw.UNIFORM_POWER:
        out = arr ** (1.0 / spec.q)
    else:
        with np.errstate(divide="ignore"):
            out = (-np.log1p(-arr)) ** (1.0 / spec.q)
    if np.isscalar(p) or arr.ndim == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CoupledTriple:
    """One coupled draw x and the two independent copies it is dominated by.

    Invariant (checked on construction):
    x <= min(y / (1-s)^(1/q), y_prime / s^(1/q)), with exact float comparison.
    """

    x: float
    y: float
    y_prime: float
    s: float
    q: float

    def __post_init__(self) -> None:
        bound = min(
            self.y * (1.0 - self.s) ** (-1.0 / self.q),
            self.y_prime * self.s ** (-1.0 / self.q),
        )
        if not self.x <= bound:
            raise ValueError(
                f"coupling inequality violated: x={self.x!r} > bound={bound!r}"
            )


@dataclass(frozen=True)
class IteratedSplit:
    """One draw coupled to k i.i.d. copies: x <= k^(1/q) * min(copies)."""

    x: float
    copies: tuple[float, ...]
    k: int
    q: float

    def __post_init__(self) -> None:
        if self.k != len(self.copies) or self.k < 1:
            raise ValueError("k must equal the number of copies and be >= 1")
        bound = self.k ** (1.0 / self.q) * min(self.copies)
        if not self.x <= bound:
            raise ValueError(
                f"iterated coupling violated: x={self.x!r} > bound={bound!r}"
            )


def _couple_base(
    g: np.ndarray, r: np.ndarray, s: float, base: BaseLaw
) -> np.ndarray:
    """Couple in q-power space: given independent base draws (g, r), return a
    base-law draw wx with wx <= min(g / (1-s), r / s) surely."""
    w = np.minimum(g / (1.0 - s), r / s)
    if base is BaseLaw.EXPONENTIAL_POWER:
        return w
    interior = w * max(s, 1.0 - s) < 1.0
    return np.where(interior, w - s * (1.0 - s) * w * w, 1.0)


def split_coupling_batch(
    spec: WeightSpec, s: float, rng: np.random.Generator, size: int
):
    """Vectorized coupling: arrays (x, y, y_prime) of length `size`.

    y and y_prime are i.i.d. `spec` draws, x is a `spec` draw, and
    x <= min(y/(1-s)^(1/q), y_prime/s^(1/q)) holds elementwise with exact
    float comparison (the bound itself is the clamp).
    """
    s = _check_s(s)
    g = _base_sample(spec, rng, size)
    r = _base_sample(spec, rng, size)
    inv_q = 1.0 / spec.q
    y = _power(g, inv_q)
    y_prime = _power(r, inv_q)
    bound = np.minimum(
        y * (1.0 - s) ** (-inv_q), y_prime * s ** (-inv_q)
    )
    if spec.base is BaseLaw.EXPONENTIAL_POWER:
        x = bound
    else:
        x = np.minimum(_power(_couple_base(g, r, s, spec.base), inv_q), bound)
    return x, y, y_prime


def split_coupling(
    spec: WeightSpec, s: float, rng: np.random.Generator
) -> CoupledTriple:
    """Draw one coupled triple (x, y, y_prime) for split fraction s."""
    x, y, y_prime = split_coupling_batch(spec, s, rng, 1)
    return CoupledTriple(
        x=float(x[0]), y=float(y[0]), y_prime=float(y_prime[0]), s=s, q=spec.q
    )


def iterated_coupling_batch(
    spec: WeightSpec, k: int, rng: np.random.Generator, size: int
):
    """Vectorized iterated split with the equal schedule s_i = 1/k.

    Returns (x, copies) with copies of shape (k, size); elementwise
    x <= k^(1/q) * copies.min(axis=0) holds with exact float comparison.

    Built by k - 1 nested couplings: at stage j the split fraction is the
    remaining-mass share 1/(k - j + 1), so copy j ends up with overall mass
    1/k.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    base_draws = _base_sample(spec, rng, (k, size))
    g = base_draws[k - 1]
    for j in range(k - 1, 0, -1):
        # Stage j couples the running green draw to copy j-1 (0-based).
        g = _couple_base(g, base_draws[j - 1], 1.0 / (k - j + 1), spec.base)
    inv_q = 1.0 / spec.q
    copies = _power(base_draws, inv_q)
    bound = k ** inv_q * copies.min(axis=0)
    x = np.minimum(_power(g, inv_q), bound)
    return x, copies


def iterated_coupling(
    spec: WeightSpec, k: int, rng: np.random.Generator
) -> IteratedSplit:
    """Draw one iterated split of order k."""
    x, copies = iterated_coupling_batch(spec, k, rng, 1)
    return IteratedSplit(
        x=float(x[0]), copies=tuple(float(c) for c in copies[:, 0]), k=k, q=spec.q
    )


def coupling_violations(x, y, y_prime, s: float, q: float) -> int:
    """Count elementwise failures of the sure inequality (exact comparison)."""
    s = _check_s(s)
    inv_q = 1.0 / q
    bound = np.minimum(
        np.asarray(y) * (1.0 - s) ** (-inv_q),
        np.asarray(y_prime) * s ** (-inv_q),
    )
    return int(np.count_nonzero(~(np.asarray(x) <= bound)))
