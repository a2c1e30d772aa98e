"""Model primitives: parameters, routing choice functions, and the fluid drift.

The system is a set of N parallel multi-server queues. Customers route using
queue-length information that is ``delta`` time units old: queue i advertises
the offset of its (delayed) p-th power queue length from the empirical mean of
all queues' p-th powers, and a decreasing choice function f maps that offset
to an arrival weight. Each queue serves at rate mu per customer up to c busy
servers and loses waiting customers to abandonment at rate beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_INV_SQRT_2 = 1.0 / math.sqrt(2.0)

# kernel dispatch codes (see _jit / dde / stochastic)
CHOICE_LOGISTIC = 0
CHOICE_GAUSSIAN_TAIL = 1


@dataclass(frozen=True)
class ModelParams:
    """All scalar parameters of the queue network.

    n_queues : number of parallel queues (N >= 1)
    lam      : total possible arrival rate per queue (>= 0, per unit time)
    mu       : per-customer service rate (> 0)
    beta     : abandonment rate for waiting customers (> 0)
    c        : server count per queue; real-valued so sweeps can move it
               continuously through the regime boundary c = lam*f(0)/mu
    p        : interaction exponent (>= 0); p = 0 removes all coupling
    delta    : information lag (>= 0, time units)
    """

    n_queues: int
    lam: float
    mu: float
    beta: float
    c: float
    p: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        if self.n_queues < 1:
            raise ValueError(f"n_queues must be >= 1, got {self.n_queues}")
        # lam == 0 is admitted as the degenerate no-arrivals model; several
        # surface contracts (empty sample paths, q* = 0) rely on it.
        if not (self.lam >= 0.0) or not math.isfinite(self.lam):
            raise ValueError(f"lam must be finite and >= 0, got {self.lam}")
        if not (self.mu > 0.0) or not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite and > 0, got {self.mu}")
        if not (self.beta > 0.0) or not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite and > 0, got {self.beta}")
        if not (self.c > 0.0) or not math.isfinite(self.c):
            raise ValueError(f"c must be finite and > 0, got {self.c}")
        if not (self.p >= 0.0) or not math.isfinite(self.p):
            raise ValueError(f"p must be finite and >= 0, got {self.p}")
        if not (self.delta >= 0.0) or not math.isfinite(self.delta):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta}")

    def with_c(self, c: float) -> "ModelParams":
        return replace(self, c=c)

    def with_delta(self, delta: float) -> "ModelParams":
        return replace(self, delta=delta)


@dataclass(frozen=True)
class ChoiceFunction:
    """Routing weight f applied to the delayed mean-field offset.

    Construct through :func:`logistic`, :func:`gaussian_tail` or
    :func:`custom`. The closed-form stability analysis only ever needs f(0)
    and f'(0), so custom functions must carry both explicitly; slopes are
    never estimated numerically.
    """

    kind: str  # "logistic" | "gaussian_tail" | "custom"
    gamma: float = 1.0
    theta: float = 1.0
    _f0: float = 0.5
    _slope0: float = -0.25
    evaluator: Optional[Callable[[float], float]] = None

    @property
    def value_at_zero(self) -> float:
        return self._f0

    @property
    def slope_at_zero(self) -> float:
        return self._slope0

    @property
    def kernel_code(self) -> Optional[int]:
        """Dispatch code for compiled kernels; None forces the fallback path."""
        if self.kind == "logistic":
            return CHOICE_LOGISTIC
        if self.kind == "gaussian_tail":
            return CHOICE_GAUSSIAN_TAIL
        return None

    def __call__(self, x):
        """Evaluate f at a scalar or ndarray of offsets."""
        if self.kind == "logistic":
            with np.errstate(over="ignore"):
                return 1.0 / (self.gamma + np.exp(self.theta * np.asarray(x, dtype=float)))
        if self.kind == "gaussian_tail":
            xs = np.asarray(x, dtype=float)
            out = np.empty(xs.shape, dtype=float)
            flat = out.reshape(-1)
            for i, v in enumerate(xs.reshape(-1)):
                flat[i] = 0.5 * math.erfc(v * _INV_SQRT_2)
            return out if xs.ndim else float(out)
        xs = np.asarray(x, dtype=float)
        if xs.ndim == 0:
            return float(self.evaluator(float(xs)))
        return np.array([self.evaluator(float(v)) for v in xs.reshape(-1)]).reshape(xs.shape)


def logistic(gamma: float = 1.0, theta: float = 1.0) -> ChoiceFunction:
    """f(x) = 1 / (gamma + exp(theta*x)); f(0) = 1/(gamma+1), f'(0) = -theta/(gamma+1)^2."""
    if not (gamma > 0.0):
        raise ValueError(f"gamma must be > 0, got {gamma}")
    if not (theta > 0.0):
        raise ValueError(f"theta must be > 0, got {theta}")
    f0 = 1.0 / (gamma + 1.0)
    slope = -theta / (gamma + 1.0) ** 2
    return ChoiceFunction("logistic", gamma=gamma, theta=theta, _f0=f0, _slope0=slope)


def gaussian_tail() -> ChoiceFunction:
    """Upper tail of the standard Gaussian, f(x) = erfc(x/sqrt(2))/2."""
    return ChoiceFunction("gaussian_tail", _f0=0.5, _slope0=-_INV_SQRT_2PI)


def custom(value_at_zero: float, slope_at_zero: float,
           evaluator: Callable[[float], float]) -> ChoiceFunction:
    """Arbitrary choice function with explicit f(0) and f'(0).

    Custom functions always run on the fallback (non-compiled) paths.
    """
    if not math.isfinite(value_at_zero) or not math.isfinite(slope_at_zero):
        raise ValueError("value_at_zero and slope_at_zero must be finite")
    return ChoiceFunction("custom", _f0=float(value_at_zero),
                          _slope0=float(slope_at_zero), evaluator=evaluator)


def choice_eval(f: ChoiceFunction, x: float) -> float:
    """Evaluate the routing weight f at a finite offset x."""
    if not math.isfinite(x):
        raise ValueError(f"offset must be finite, got {x}")
    return float(f(x))


def choice_slope_at_zero(f: ChoiceFunction) -> float:
    """Exact f'(0): closed form for the built-ins, stored value for custom."""
    return f.slope_at_zero


def as_state(values, n_queues: int) -> np.ndarray:
    """Validate and coerce a queue-length vector (length N, entries >= 0)."""
    q = np.asarray(values, dtype=float)
    if q.shape != (n_queues,):
        raise ValueError(f"expected state of shape ({n_queues},), got {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("state entries must be finite")
    if np.any(q < 0.0):
        raise ValueError("state entries must be nonnegative")
    return q


def mean_field_offsets(q, p: float) -> np.ndarray:
    """Per-queue routing signal: q_i^p minus the mean of all q_j^p.

    Uses the convention 0**0 = 1 so that p = 0 yields exactly zero offsets
    (the information-free model). Offsets always sum to zero up to rounding.
    """
    q = np.asarray(q, dtype=float)
    if np.any(q < 0.0):
        raise ValueError("queue lengths must be nonnegative")
    if p == 0.0:
        return np.zeros_like(q)
    if p == 1.0:
        qp = q
    else:
        qp = q ** p
    return qp - qp.mean()


def drift(params: ModelParams, f: ChoiceFunction, q_now, q_delayed) -> np.ndarray:
    """Right-hand side of the fluid system.

    dq_i/dt = lam * f(x_i) - mu * min(q_i, c) - beta * max(q_i - c, 0),
    where x_i is the delayed mean-field offset computed from ``q_delayed``.
    """
    q_now = np.asarray(q_now, dtype=float)
    q_delayed = np.asarray(q_delayed, dtype=float)
    n = params.n_queues
    if q_now.shape != (n,) or q_delayed.shape != (n,):
        raise ValueError(
            f"state shapes {q_now.shape}, {q_delayed.shape} do not match N={n}")
    x = mean_field_offsets(q_delayed, params.p)
    arrivals = params.lam * np.asarray(f(x), dtype=float)
    served = params.mu * np.minimum(q_now, params.c)
    abandoned = params.beta * np.maximum(q_now - params.c, 0.0)
    return arrivals - served - abandoned
