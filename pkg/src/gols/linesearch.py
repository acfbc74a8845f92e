"""Step-size resolvers: two function-value and two gradient-only line searches.

All four resolvers consume a :class:`~gols.probe.DirectionalProbe` and return
a :class:`LineSearchOutcome`.  The exact searches (golden section and the
bisecting gradient-only search) bracket by exponential advance with the same
constants and then refine; the inexact pair (Armijo's rule and the
doubling/halving gradient-only search) accept the first step that satisfies
their condition, growing or shrinking by a fixed factor.

Every accepted step is clamped into ``[alpha_min, alpha_max]``.  Callers that
resolve steps for steepest descent should pass
``alpha_max=effective_alpha_max(norm(g))`` so that unbounded descent
directions cannot produce runaway steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "ALPHA_MIN",
    "ALPHA_CAP",
    "RESOLVER_NAMES",
    "GoldenSectionConfig",
    "ArmijoConfig",
    "BisectionConfig",
    "InexactConfig",
    "LineSearchOutcome",
    "effective_alpha_max",
    "golden_section",
    "armijo",
    "bisection_gols",
    "inexact_gols",
    "make_resolver",
]

ALPHA_MIN = 1e-8
ALPHA_CAP = 1e7

_GOLDEN = (math.sqrt(5.0) + 1.0) / 2.0


@dataclass(frozen=True)
class GoldenSectionConfig:
    delta: float = 5.0             # first bracketing step
    ratio: float = _GOLDEN         # bracket growth and interval reduction ratio
    tol: float = 1e-12             # refinement stops at this interval length
    max_info_calls: int = 1000


@dataclass(frozen=True)
class ArmijoConfig:
    decrease_fraction: float = 0.2  # fraction of the origin slope to beat
    factor: float = 2.0             # advance/backtrack multiplier

    def __post_init__(self):
        if not 0.0 <= self.decrease_fraction <= 1.0:
            raise ValueError("decrease_fraction must lie in [0, 1]")


@dataclass(frozen=True)
class BisectionConfig:
    delta: float = 5.0
    ratio: float = _GOLDEN
    tol: float = 1e-12
    max_info_calls: int = 1000


@dataclass(frozen=True)
class InexactConfig:
    eta: float = 2.0               # doubling/halving factor
    relaxation: float = 0.0        # 0 accepts any slope-magnitude reduction
    max_info_calls: int = 1000

    def __post_init__(self):
        if self.eta <= 1.0:
            raise ValueError("eta must exceed 1")
        if not 0.0 <= self.relaxation <= 1.0:
            raise ValueError("relaxation must lie in [0, 1]")


@dataclass
class LineSearchOutcome:
    """Accepted step plus the evaluations this search spent.

    ``reason`` is one of ``tolerance`` (condition met), ``cap_min`` /
    ``cap_max`` (step clamped at a bound), or ``budget`` (information-call
    limit hit, best step so far returned).  ``intervals`` records the
    bracketed interval length after each refinement step of the exact
    searches; inexact searches leave it empty.
    """

    alpha: float
    function_evals: int
    gradient_evals: int
    reason: str
    intervals: list = field(default_factory=list)

    @property
    def cost(self) -> int:
        return self.function_evals + 2 * self.gradient_evals

    @property
    def info_calls(self) -> int:
        return self.function_evals + self.gradient_evals


def effective_alpha_max(gradient_norm: float, cap: float = ALPHA_CAP) -> float:
    """Largest permissible step along a descent direction of this steepness.

    Returns ``min(1 / gradient_norm, cap)``; a vanishing gradient norm keeps
    the plain cap.
    """
    if gradient_norm < 0:
        raise ValueError("gradient norm cannot be negative")
    if gradient_norm == 0.0:
        return cap
    return min(1.0 / gradient_norm, cap)


def _finish(probe, before, alpha, reason, alpha_min, alpha_max, intervals=None):
    if alpha > alpha_max:
        alpha, reason = alpha_max, "cap_max"
    if alpha < alpha_min:
        alpha, reason = alpha_min, "cap_min"
    f0, g0 = before
    return LineSearchOutcome(
        alpha=alpha,
        function_evals=probe.counter.functions - f0,
        gradient_evals=probe.counter.gradients - g0,
        reason=reason,
        intervals=intervals if intervals is not None else [],
    )


def golden_section(probe, config: GoldenSectionConfig | None = None, *,
                   alpha_max: float = ALPHA_CAP,
                   alpha_min: float = ALPHA_MIN) -> LineSearchOutcome:
    """Exact function-value search: bracket a minimizer, then golden section.

    Bracketing advances from ``delta`` by growing steps ``ratio**j * delta``
    while the newest value keeps decreasing; refinement then shrinks the
    bracket by the factor ``1/ratio`` (about 38% off) per iteration until its
    length falls below ``tol``.  The accepted step is the final interval
    midpoint.  Uses only loss evaluations, never the slope.
    """
    cfg = config or GoldenSectionConfig()
    before = probe.counter.snapshot()
    budget = cfg.max_info_calls
    intervals: list[float] = []

    k = 1
    f0 = probe.value(0.0)
    best_alpha, best_f = 0.0, f0

    low, f_low = 0.0, f0
    mid = cfg.delta
    high = mid + cfg.ratio * cfg.delta
    f_mid = probe.value(mid)
    k += 1
    f_high = probe.value(high)
    k += 1
    if f_mid < best_f:
        best_alpha, best_f = mid, f_mid
    if high > alpha_max:
        # Same re-midpointing as the bisecting search when the initial
        # bracket overshoots the step cap.
        high = alpha_max
        mid = low + 0.5 * (high - low)
        f_mid = probe.value(mid)
        k += 1
        f_high = probe.value(high)
        k += 1
    if f_high < best_f:
        best_alpha, best_f = high, f_high
    if f_mid < best_f:
        best_alpha, best_f = mid, f_mid

    if f_mid >= f_low:
        # First probe already increased: a minimizer sits below mid.
        bracket = (low, mid)
    else:
        j = 1
        while f_high < f_mid:
            if k >= budget:
                return _finish(probe, before, best_alpha, "budget",
                               alpha_min, alpha_max, intervals)
            low, f_low = mid, f_mid
            mid, f_mid = high, f_high
            high = mid + cfg.ratio**j * cfg.delta
            j += 1
            if high > alpha_max:
                return _finish(probe, before, alpha_max, "cap_max",
                               alpha_min, alpha_max, intervals)
            f_high = probe.value(high)
            k += 1
            if f_high < best_f:
                best_alpha, best_f = high, f_high
        bracket = (low, high)

    a, b = bracket
    inner_low = b - (b - a) / cfg.ratio
    inner_high = a + (b - a) / cfg.ratio
    f_il = probe.value(inner_low)
    k += 1
    f_ih = probe.value(inner_high)
    k += 1
    while b - a > cfg.tol and k < budget:
        if f_il < f_ih:
            b = inner_high
            inner_high, f_ih = inner_low, f_il
            inner_low = b - (b - a) / cfg.ratio
            f_il = probe.value(inner_low)
        else:
            a = inner_low
            inner_low, f_il = inner_high, f_ih
            inner_high = a + (b - a) / cfg.ratio
            f_ih = probe.value(inner_high)
        k += 1
        intervals.append(b - a)

    reason = "tolerance" if b - a <= cfg.tol else "budget"
    return _finish(probe, before, 0.5 * (a + b), reason,
                   alpha_min, alpha_max, intervals)


def armijo(probe, alpha_init: float, config: ArmijoConfig | None = None, *,
           alpha_max: float = ALPHA_CAP,
           alpha_min: float = ALPHA_MIN) -> LineSearchOutcome:
    """Inexact function-value search enforcing a sufficient-decrease bound.

    A step is acceptable when ``F(alpha) < F(0) + alpha * p * F'(0)`` with
    ``p = decrease_fraction``.  If the initial step passes, the step is grown
    by ``factor`` until the first failure and the last passing step returned
    (largest feasible step); otherwise it is shrunk until the first pass.
    Spends exactly one gradient evaluation, at the origin.
    """
    cfg = config or ArmijoConfig()
    before = probe.counter.snapshot()
    f0 = probe.value(0.0)
    slope0 = probe.deriv(0.0)

    def acceptable(alpha, value):
        return value < f0 + alpha * cfg.decrease_fraction * slope0

    alpha = min(max(alpha_init, alpha_min), alpha_max)
    if acceptable(alpha, probe.value(alpha)):
        while alpha < alpha_max:
            bigger = min(alpha * cfg.factor, alpha_max)
            if acceptable(bigger, probe.value(bigger)):
                alpha = bigger
            else:
                return _finish(probe, before, alpha, "tolerance",
                               alpha_min, alpha_max)
        return _finish(probe, before, alpha, "cap_max", alpha_min, alpha_max)

    while True:
        alpha = alpha / cfg.factor
        if alpha < alpha_min:
            return _finish(probe, before, alpha_min, "cap_min",
                           alpha_min, alpha_max)
        if acceptable(alpha, probe.value(alpha)):
            return _finish(probe, before, alpha, "tolerance",
                           alpha_min, alpha_max)


def bisection_gols(probe, config: BisectionConfig | None = None, *,
                   alpha_max: float = ALPHA_CAP,
                   alpha_min: float = ALPHA_MIN) -> LineSearchOutcome:
    """Exact gradient-only search: bisect the slope's negative-to-positive
    sign change.

    Brackets with growing steps like the golden section search, but watches
    only the sign of the directional derivative; a zero slope counts as
    non-negative, so the sign change is considered found.  Refinement keeps
    a three-point pattern and halves the interval per iteration.  Uses only
    gradient evaluations.
    """
    cfg = config or BisectionConfig()
    before = probe.counter.snapshot()
    budget = cfg.max_info_calls
    intervals: list[float] = []

    low = 0.0
    mid = cfg.delta
    high = mid + cfg.ratio * cfg.delta
    k = 0
    mid_slope = probe.deriv(mid)
    k += 1
    high_slope = probe.deriv(high)
    k += 1
    if high > alpha_max:
        high = alpha_max
        mid = low + 0.5 * (high - low)
        mid_slope = probe.deriv(mid)
        k += 1
        high_slope = probe.deriv(high)
        k += 1

    bracketed = True
    j = 1
    while high_slope < 0 and bracketed and k < budget:
        mid, mid_slope = high, high_slope
        high = mid + cfg.ratio**j * cfg.delta
        j += 1
        high_slope = probe.deriv(high)
        k += 1
        if high > alpha_max:
            bracketed = False

    if not bracketed:
        return _finish(probe, before, alpha_max, "cap_max",
                       alpha_min, alpha_max, intervals)

    length = high - low
    while length > cfg.tol and high > alpha_min and k < budget:
        if mid_slope < 0 and high_slope >= 0:
            low = mid
        elif mid_slope >= 0:
            high, high_slope = mid, mid_slope
        length = high - low
        mid = low + 0.5 * length
        mid_slope = probe.deriv(mid)
        k += 1
        intervals.append(length)

    if length <= cfg.tol:
        reason = "tolerance"
    elif high <= alpha_min:
        reason = "cap_min"
    else:
        reason = "budget"
    return _finish(probe, before, 0.5 * (high + low), reason,
                   alpha_min, alpha_max, intervals)


def inexact_gols(probe, alpha_init: float, config: InexactConfig | None = None, *,
                 alpha_max: float = ALPHA_CAP,
                 alpha_min: float = ALPHA_MIN) -> LineSearchOutcome:
    """Inexact gradient-only search by doubling or halving the step.

    The acceptance band is ``|(1 - relaxation) * F'(0)|``: a slope above it
    triggers halving until the slope drops below the band; a slope below it
    triggers doubling until the slope first exceeds the band, after which the
    step is pulled back one factor.  A slope exactly on the band keeps the
    current behaviour (and accepts the initial step immediately).  Uses only
    gradient evaluations.
    """
    cfg = config or InexactConfig()
    before = probe.counter.snapshot()
    budget = cfg.max_info_calls

    k = 1
    slope0 = probe.deriv(0.0)
    alpha = min(max(alpha_init, alpha_min), alpha_max)
    slope = probe.deriv(alpha)
    k += 1
    band = abs((1.0 - cfg.relaxation) * slope0)

    if slope > band:
        mode = "halve"
    elif slope < band:
        mode = "grow"
    else:
        mode = None

    reason = "tolerance"
    while mode is not None and k < budget:
        if mode == "halve":
            alpha = alpha / cfg.eta
            slope = probe.deriv(alpha)
            k += 1
            if slope < band:
                mode = None
        else:
            alpha = alpha * cfg.eta
            slope = probe.deriv(alpha)
            k += 1
            if slope > band:
                alpha = alpha / cfg.eta
                mode = None
        if alpha < alpha_min:
            mode, alpha, reason = None, alpha_min, "cap_min"
        if alpha > alpha_max:
            mode, alpha, reason = None, alpha_max, "cap_max"

    if mode is not None:
        reason = "budget"
    return _finish(probe, before, alpha, reason, alpha_min, alpha_max)


RESOLVER_NAMES = ("gs", "arls", "bgols", "igols")


def make_resolver(name: str):
    """Map a resolver name to a uniform ``(probe, alpha_init, alpha_max)``
    callable.

    Accepted names: ``gs``, ``arls``, ``bgols``, ``igols`` and
    ``fixed:<alpha>``.  The fixed resolver is a zero-cost oracle that returns
    the given constant step unconditionally, bypassing the step caps.
    """
    if name == "gs":
        return lambda probe, alpha_init, alpha_max: golden_section(
            probe, alpha_max=alpha_max)
    if name == "arls":
        return lambda probe, alpha_init, alpha_max: armijo(
            probe, alpha_init, alpha_max=alpha_max)
    if name == "bgols":
        return lambda probe, alpha_init, alpha_max: bisection_gols(
            probe, alpha_max=alpha_max)
    if name == "igols":
        return lambda probe, alpha_init, alpha_max: inexact_gols(
            probe, alpha_init, alpha_max=alpha_max)
    if name.startswith("fixed:"):
        try:
            value = float(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad fixed step size in resolver {name!r}") from None
        if not math.isfinite(value):
            raise ValueError("fixed step size must be finite")
        return lambda probe, alpha_init, alpha_max: LineSearchOutcome(
            alpha=value, function_evals=0, gradient_evals=0, reason="tolerance")
    raise ValueError(
        f"unknown resolver {name!r}; choose one of {RESOLVER_NAMES} or fixed:<alpha>"
    )
