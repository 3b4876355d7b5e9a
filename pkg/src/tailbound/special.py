"""Numerically stable scalar kernels: Lambert W, the Bennett function,
Poisson and Gaussian survival functions, and truncated exponential remainders.

Every routine here is a pure function of its arguments and is safe to call
concurrently.  Accuracy targets are set by :data:`DEFAULT_TOL`, which leaves
about two orders of magnitude of headroom over what the bound calculators in
:mod:`tailbound.bounds` actually need.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, NumericalError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "lambert_w0",
    "lambert_w0_log",
    "bennett_psi",
    "poisson_tail",
    "poisson_log_tail",
    "normal_tail",
    "exp_remainder",
]

# Relative step below which Halley/Newton iterations are considered converged.
_STEP_TOL = 1e-14


@dataclass(frozen=True, slots=True)
class Tolerance:
    """Accuracy budget threaded through the iterative routines.

    rel and abs are the relative and absolute error targets, max_iter caps
    iteration counts of root finders and series summations.
    """

    rel: float = 1e-10
    abs: float = 1e-300
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not (0.0 < self.rel < 1.0) or not math.isfinite(self.rel):
            raise DomainError(f"rel must lie in (0, 1), got {self.rel}")
        if not (0.0 < self.abs < 1.0):
            raise DomainError(f"abs must lie in (0, 1), got {self.abs}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_TOL = Tolerance()


def _halley_wexp(w: float, z: float, max_iter: int) -> float:
    """Polish a seed w with Halley steps on f(w) = w e^w - z."""
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        w1 = w + 1.0
        denom = ew * w1 - (w + 2.0) * f / (2.0 * w1)
        step = f / denom
        w -= step
        if abs(step) <= _STEP_TOL * (abs(w) + 1e-300):
            return w
    raise NumericalError("Lambert W iteration did not converge", estimate=w)


def lambert_w0(z: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Principal branch of the Lambert W function for z >= 0.

    Returns the unique w >= 0 with w * exp(w) = z.  A Halley iteration is
    seeded with w ~ z(1 - z) near the origin and with the asymptotic
    w ~ ln z - ln ln z for z > e; convergence is quadratic or better and
    five steps typically suffice.
    """
    if not math.isfinite(z) or z < 0.0:
        raise DomainError(f"lambert_w0 requires finite z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    if z < 0.5:
        w = z * (1.0 - z)
        if w <= 0.0:
            w = z
    elif z <= math.e:
        w = 0.8 * math.log1p(z)
    else:
        lz = math.log(z)
        w = lz - math.log(lz)
    return _halley_wexp(w, z, tol.max_iter)


def lambert_w0_log(log_z: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Evaluate lambert_w0(exp(log_z)) without overflowing exp.

    For moderate log_z this simply exponentiates and defers to
    :func:`lambert_w0`.  For large log_z the defining relation is rewritten
    as w + ln w = log_z, which Newton's method solves from the seed
    w ~ log_z - ln log_z; the exponential never has to be formed, so
    arguments like log_z = 1000 (w ~ 993.1) are exact to full precision.
    """
    if not math.isfinite(log_z):
        raise DomainError(f"lambert_w0_log requires finite log_z, got {log_z}")
    if log_z <= 500.0:
        return lambert_w0(math.exp(log_z), tol)
    w = log_z - math.log(log_z)
    for _ in range(tol.max_iter):
        step = (w + math.log(w) - log_z) / (1.0 + 1.0 / w)
        w -= step
        if abs(step) <= _STEP_TOL * w:
            return w
    raise NumericalError("lambert_w0_log iteration did not converge", estimate=w)


def bennett_psi(u: float) -> float:
    """The Bennett function psi(u) = (1 + u) ln(1 + u) - u, for u > -1.

    Nonnegative and convex with psi(0) = 0.  For |u| < 1e-4 the alternating
    series u^2/2 - u^3/6 + u^4/12 - ... is used to avoid the cancellation in
    the direct expression.
    """
    if not math.isfinite(u) or u <= -1.0:
        raise DomainError(f"bennett_psi requires u > -1, got {u}")
    if abs(u) < 1e-4:
        # psi(u) = sum_{k>=2} (-1)^k u^k / (k (k-1)); five terms give
        # relative error below 1e-21 on this range.
        u2 = u * u
        return (u2 / 2.0 - u2 * u / 6.0 + u2 * u2 / 12.0
                - u2 * u2 * u / 20.0 + u2 * u2 * u2 / 30.0)
    return (1.0 + u) * math.log1p(u) - u


def _poisson_logpmf(k: int, theta: float) -> float:
    return -theta + k * math.log(theta) - math.lgamma(k + 1.0)


def poisson_tail(theta: float, u: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Survival function P(Pois(theta) >= u) of a Poisson random variable.

    Exactly 1 for u <= 0 and, when theta = 0, the indicator of u <= 0.
    In the right tail (ceil(u) > theta) the series is summed upward from
    ceil(u) in log space, which keeps full relative accuracy for
    probabilities far below machine epsilon; otherwise the complementary
    head is summed, where the result is of order one and absolute accuracy
    is what matters.
    """
    if not math.isfinite(theta) or theta < 0.0:
        raise DomainError(f"poisson_tail requires theta >= 0, got {theta}")
    if not math.isfinite(u):
        raise DomainError(f"poisson_tail requires finite u, got {u}")
    if u <= 0.0:
        return 1.0
    if theta == 0.0:
        return 0.0
    k0 = int(math.ceil(u))
    if k0 <= theta:
        head = 0.0
        for k in range(k0):
            head += math.exp(_poisson_logpmf(k, theta))
        return min(1.0, max(0.0, 1.0 - head))
    # Upward sum from k0.  Terms decay at least geometrically with ratio
    # theta / (k + 1) < 1, so the remainder after k is below
    # term * r / (1 - r); stop once that certified bound is negligible.
    total = 0.0
    term = math.exp(_poisson_logpmf(k0, theta))
    k = k0
    for _ in range(max(tol.max_iter, 100_000)):
        total += term
        r = theta / (k + 1.0)
        bound = term * r / (1.0 - r) if r < 1.0 else math.inf
        if bound <= tol.abs + 1e-18 * total:
            return total
        k += 1
        term *= theta / k
    raise NumericalError("poisson_tail series did not converge", estimate=total)


def poisson_log_tail(theta: float, u: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """log P(Pois(theta) >= u), finite even where the tail itself underflows."""
    if u <= 0.0:
        return 0.0
    if theta <= 0.0:
        return -math.inf
    k0 = int(math.ceil(u))
    if k0 <= theta:
        return math.log(poisson_tail(theta, u, tol))
    # log-space upward sum: factor out the first term.
    lead = _poisson_logpmf(k0, theta)
    rest = 0.0
    factor = 1.0
    k = k0
    for _ in range(max(tol.max_iter, 100_000)):
        r = theta / (k + 1.0)
        factor *= r
        if factor <= 1e-20 * (1.0 + rest):
            break
        rest += factor
        k += 1
    return lead + math.log1p(rest)


def normal_tail(v: float, x: float) -> float:
    """P(G >= x) for G ~ N(0, v); the degenerate case v = 0 is the
    indicator of x <= 0.

    Uses the complementary error function, never 1 minus the CDF, so the
    relative error stays near machine precision down to values of 1e-300.
    """
    if not math.isfinite(v) or v < 0.0:
        raise DomainError(f"normal_tail requires v >= 0, got {v}")
    if v == 0.0:
        return 1.0 if x <= 0.0 else 0.0
    return 0.5 * math.erfc(x / math.sqrt(2.0 * v))


_SUPPORTED_J = (-1, 0, 1, 2, 3)


def exp_remainder(j: int, u: complex) -> complex:
    """The truncated exponential remainder e_j(u) = e^u - sum_{m<=j} u^m / m!.

    e_{-1} is exp itself.  For |u| < 1e-2 the Taylor tail starting at order
    j + 1 is summed directly, avoiding the cancellation of subtracting
    near-equal quantities; the result always satisfies
    |e_j(u)| <= |u|^{j+1} e^{|u|} / (j+1)!.

    Accepts real or complex u and returns a value of matching type.
    """
    if j not in _SUPPORTED_J:
        raise DomainError(f"exp_remainder supports j in {_SUPPORTED_J}, got {j}")
    is_real = not isinstance(u, complex)
    z = complex(u)
    if j == -1:
        out = cmath.exp(z)
    elif abs(z) < 1e-2:
        # Tail of the Taylor series; with |u| < 1e-2 twelve terms push the
        # truncation error below 1e-30 relative to the leading term.
        out = 0j
        term = z ** (j + 1) / math.factorial(j + 1)
        for m in range(j + 1, j + 13):
            out += term
            term *= z / (m + 1)
    else:
        partial = 0j
        term = 1.0 + 0j
        for m in range(j + 1):
            partial += term
            term *= z / (m + 1)
        out = cmath.exp(z) - partial
    if is_real:
        return out.real
    return out
