"""Closed-form bounds for bootstrap percolation on random geometric graphs.

Entropy-like exponents ``H`` and ``J``, their branch inverses, Poisson tail
bounds and the Bahadur-Rao style Poisson tail approximation, plus the lower
and upper bounds ``p'`` and ``p''`` on the critical initial-activation
probability.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, NumericError

FIVE_PI = 5.0 * math.pi

# bisection controls for branch inverses
INVERT_TOL = 1e-12
INVERT_MAX_ITER = 300
MAX_EXPANSIONS = 200


class Branch(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class Side(str, Enum):
    UPPER = "upper"
    LOWER = "lower"


def H(x: float) -> float:
    """``x ln x - x + 1`` on ``[0, inf)`` with ``H(0) = 1``."""
    if x < 0 or math.isnan(x):
        raise DomainError(f"H is defined on [0, inf), got {x}")
    if x == 0:
        return 1.0
    return x * math.log(x) - x + 1.0


def J(x: float) -> float:
    """``H(x) / x = ln x - 1 + 1/x`` on ``(0, inf)``."""
    if not x > 0:
        raise DomainError(f"J is defined on (0, inf), got {x}")
    return math.log(x) - 1.0 + 1.0 / x


def rate_I(alpha: float) -> float:
    """Large-deviation rate ``(1+alpha) ln(1+alpha) - alpha`` of the Poisson upper tail."""
    if not alpha > -1:
        raise DomainError(f"rate_I requires alpha > -1, got {alpha}")
    if alpha < 0:
        warnings.warn("rate_I evaluated below alpha=0, outside the upper-tail range", stacklevel=2)
    return (1.0 + alpha) * math.log1p(alpha) - alpha


_FUNCS = {"H": H, "J": J}


def _bisect(f, y: float, lo: float, hi: float, increasing: bool) -> float:
    for _ in range(INVERT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm - y) <= INVERT_TOL:
            return mid
        if mid in (lo, hi):
            break
        if (fm < y) == increasing:
            lo = mid
        else:
            hi = mid
    # interval collapsed to adjacent floats; pick the closer endpoint
    return min((lo, hi), key=lambda x: abs(f(x) - y))


def invert(function: str, branch: Branch | str, y: float) -> float:
    """Inverse of ``H`` or ``J`` restricted to the branch left or right of 1.

    Left branches return values in ``[0, 1]`` (``(0, 1]`` for ``J``), right
    branches values in ``[1, inf)``. Solved by bisection, with the bracket
    doubled (right) or halved (left, ``J`` only) until it contains ``y``.
    """
    if function not in _FUNCS:
        raise DomainError(f"unknown function {function!r}; expected 'H' or 'J'")
    f = _FUNCS[function]
    branch = Branch(branch)
    if math.isnan(y) or y < 0:
        raise DomainError(f"{function} inverse needs y >= 0, got {y}")
    if y == 0:
        return 1.0

    if branch is Branch.RIGHT:
        if math.isinf(y):
            raise DomainError("right-branch inverse of y=inf is unbounded")
        lo, hi = 1.0, 2.0
        for _ in range(MAX_EXPANSIONS):
            if f(hi) >= y:
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise NumericError(f"could not bracket {function}_R^-1({y})")
        return _bisect(f, y, lo, hi, increasing=True)

    if function == "H":
        if y > 1:
            raise DomainError(f"H left-branch inverse needs y in [0, 1], got {y}")
        if y == 1:
            return 0.0
        return _bisect(f, y, 0.0, 1.0, increasing=False)

    if math.isinf(y):
        return 0.0
    lo, hi = 0.5, 1.0
    for _ in range(MAX_EXPANSIONS):
        if f(lo) >= y:
            break
        lo, hi = 0.5 * lo, lo
    else:
        raise NumericError(f"could not bracket J_L^-1({y})")
    return _bisect(f, y, lo, hi, increasing=False)


def _check_a_gamma(a: float, gamma: float) -> None:
    if not a > 1:
        raise DomainError(f"density parameter a must exceed 1, got {a}")
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")


def p_prime(a: float, gamma: float) -> float:
    """Lower bound below which the initial configuration is stable whp."""
    _check_a_gamma(a, gamma)
    return gamma / invert("J", Branch.RIGHT, 1.0 / (a * gamma))


def log_p_prime(a: float, gamma: float) -> float:
    """``ln p'`` written as ``-ln a - ln(x J_R^-1(x))`` with ``x = 1/(a gamma)``."""
    _check_a_gamma(a, gamma)
    x = 1.0 / (a * gamma)
    return -math.log(a) - math.log(x * invert("J", Branch.RIGHT, x))


@dataclass(frozen=True)
class ThresholdBounds:
    a: float
    gamma: float
    p_prime: float
    p_scaled: float
    p_double_prime: float
    feasible: bool
    nontrivial: bool


def is_feasible(a: float, gamma: float) -> bool:
    """Whether ``a >= 5 pi / H(5 pi gamma)`` and ``gamma < 1/(5 pi)``."""
    if not 0 < gamma < 1.0 / FIVE_PI:
        return False
    h = H(FIVE_PI * gamma)
    return h > 0 and a >= FIVE_PI / h


def nontriviality_limit() -> float:
    """Largest ``a * gamma`` with ``p'' <= gamma``, i.e. ``1 / J(5 pi)``."""
    return 1.0 / J(FIVE_PI)


def p_double_prime(a: float, gamma: float) -> ThresholdBounds:
    """Both bounds for ``(a, gamma)``; feasibility is reported, not enforced."""
    _check_a_gamma(a, gamma)
    pp = p_prime(a, gamma)
    scaled = FIVE_PI * pp
    return ThresholdBounds(
        a=a,
        gamma=gamma,
        p_prime=pp,
        p_scaled=scaled,
        p_double_prime=min(gamma, scaled),
        feasible=is_feasible(a, gamma),
        nontrivial=a * gamma <= nontriviality_limit(),
    )


def feasible_gamma_range(a: float, tightened: bool = True) -> tuple[float, float]:
    """Published closed-form interval for ``gamma`` given ``a``.

    ``[0, H_R^-1(5 pi/a) / 5 pi]`` for ``a < 5 pi`` and
    ``[H_L^-1(5 pi/a) / 5 pi, H_R^-1(5 pi/a) / 5 pi]`` otherwise; with
    ``tightened`` the upper end becomes ``1 / (a J(5 pi))``.

    This interval does not coincide with the set where
    ``a >= 5 pi / H(5 pi gamma)`` holds; see :func:`condition_gamma_interval`
    and :func:`is_feasible` for that set.
    """
    if not a > 1:
        raise DomainError(f"density parameter a must exceed 1, got {a}")
    y = FIVE_PI / a
    lower = 0.0 if a < FIVE_PI else invert("H", Branch.LEFT, y) / FIVE_PI
    if tightened:
        upper = 1.0 / (a * J(FIVE_PI))
    else:
        upper = invert("H", Branch.RIGHT, y) / FIVE_PI
    return lower, upper


def condition_gamma_interval(a: float) -> tuple[float, float] | None:
    """Set of ``gamma`` in ``(0, 1/(5 pi))`` with ``a >= 5 pi / H(5 pi gamma)``.

    ``H`` is at most 1 on ``[0, 1]``, so the set is empty for ``a < 5 pi``;
    otherwise it is ``(0, H_L^-1(5 pi/a) / 5 pi]``.
    """
    if not a > 1:
        raise DomainError(f"density parameter a must exceed 1, got {a}")
    if a < FIVE_PI:
        return None
    return 0.0, invert("H", Branch.LEFT, FIVE_PI / a) / FIVE_PI


@dataclass(frozen=True)
class TailBound:
    lam: float
    k: float
    bound: float
    side: Side


def poisson_tail(lam: float, k: float, side: Side | str) -> TailBound:
    """Chernoff bound ``exp(-lam H(k/lam))`` on ``P(Po(lam) >= k)`` or ``P(Po(lam) <= k)``."""
    side = Side(side)
    if not lam > 0:
        raise DomainError(f"Poisson mean must be positive, got {lam}")
    if side is Side.UPPER and k < lam:
        raise DomainError(f"upper tail bound needs k >= lambda ({k} < {lam})")
    if side is Side.LOWER and (k > lam or k < 0):
        raise DomainError(f"lower tail bound needs 0 <= k <= lambda, got k={k}, lambda={lam}")
    return TailBound(lam, k, math.exp(-lam * H(k / lam)), side)


def bahadur_rao_poisson_tail(N: float, alpha: float) -> float:
    """Approximate ``P(Po(N) >= N(1+alpha))`` by its sharp large-deviation asymptotic."""
    if not N > 0:
        raise DomainError(f"N must be positive, got {N}")
    if not alpha > 0:
        raise DomainError(f"alpha must be positive (prefactor diverges at 0), got {alpha}")
    prefactor = math.sqrt(1.0 + alpha) / (alpha * math.sqrt(2.0 * math.pi))
    return prefactor / math.sqrt(N) * math.exp(-N * rate_I(alpha))


def stable_config_bound(n: float, a: float, gamma: float, p: float) -> float:
    """Heuristic finite-n lower bound on P(initial configuration is stable).

    Evaluates ``1 - exp(ln n - p a ln n H(gamma/p))`` with the o(1) term
    dropped, clamped to ``[0, 1]``.
    """
    if p >= gamma:
        raise DomainError(
            f"p={p} >= gamma={gamma}: for p > gamma the configuration activates at the next step, "
            "so the stability bound does not apply"
        )
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    if not n > 1:
        raise DomainError(f"n must exceed 1, got {n}")
    ln_n = math.log(n)
    exponent = ln_n - p * a * ln_n * H(gamma / p)
    if exponent > 700:
        return 0.0
    return min(1.0, max(0.0, 1.0 - math.exp(exponent)))


def theta_for(gamma: float, n: float, a: float) -> int:
    """Integer threshold ``ceil(gamma * a ln n)``."""
    return max(1, math.ceil(gamma * a * math.log(n)))


def expected_degree(n: float, a: float) -> float:
    return a * math.log(n)
