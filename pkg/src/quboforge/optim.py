"""Optimization machinery for the gradient-based solvers.

Contains bias-corrected Adam with optional decoupled weight decay (AdamW),
box clamping, a reduce-on-plateau learning-rate schedule, the two-window
moving-average early-stopping controller, and a projected limited-memory
BFGS minimizer with Armijo backtracking for the box-constrained relaxed
loss.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .model import QuboMatrix
from .relaxation import DEFAULT_SLOPE, relaxed_loss_and_grad

# Stop reasons shared by every solver backend.
CONVERGED = "converged"
MAX_STEPS = "max_steps"
NUMERIC_FAILURE = "numeric-failure"

PARAM_LO = -5.0
PARAM_HI = 5.0


class NumericFailure(RuntimeError):
    """A non-finite loss or gradient aborted the run."""


def clamp_box(params, lo: float = PARAM_LO, hi: float = PARAM_HI) -> np.ndarray:
    """Elementwise projection onto the box ``[lo, hi]``."""
    if lo > hi:
        raise ValueError(f"lo must be <= hi, got lo={lo}, hi={hi}")
    return np.clip(np.asarray(params, dtype=np.float64), lo, hi)


@dataclass
class AdamState:
    """Adam/AdamW moment estimates and hyperparameters.

    ``weight_decay == 0`` is plain Adam; ``> 0`` applies decoupled decay
    (``params -= lr * weight_decay * params``) in addition to the Adam
    update, i.e. AdamW.
    """

    lr: float = 0.01
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.0
    t: int = 0
    m: np.ndarray | None = None
    v: np.ndarray | None = None


def adam_step(state: AdamState, params, grad, lo: float = PARAM_LO, hi: float = PARAM_HI) -> np.ndarray:
    """One bias-corrected Adam(W) update followed by box clamping.

    Mutates ``state`` in place and returns the new parameter vector.
    Raises :class:`NumericFailure` on a non-finite gradient.
    """
    p = np.asarray(params, dtype=np.float64)
    g = np.asarray(grad, dtype=np.float64)
    if g.shape != p.shape:
        raise ValueError(f"gradient shape {g.shape} does not match params shape {p.shape}")
    if not np.all(np.isfinite(g)):
        raise NumericFailure("non-finite gradient in Adam step")
    if state.m is None:
        state.m = np.zeros_like(p)
        state.v = np.zeros_like(p)
    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * g
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * g * g
    m_hat = state.m / (1.0 - state.beta1 ** state.t)
    v_hat = state.v / (1.0 - state.beta2 ** state.t)
    new = p - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    if state.weight_decay > 0.0:
        new = new - state.lr * state.weight_decay * p
    return clamp_box(new, lo, hi)


@dataclass
class PlateauSchedulerState:
    """Reduce-on-plateau bookkeeping: lr is cut by ``factor`` after
    ``plateau_patience`` observations without improvement, floored at
    ``min_lr``."""

    factor: float = 0.5
    plateau_patience: int = 1000
    min_lr: float = 1e-5
    improvement_eps: float = 1e-8
    best_loss: float = math.inf
    steps_since_improve: int = 0


def scheduler_observe(state: PlateauSchedulerState, loss: float, lr: float) -> float:
    """Record one loss observation and return the (possibly reduced) lr."""
    if loss < state.best_loss - state.improvement_eps:
        state.best_loss = loss
        state.steps_since_improve = 0
        return lr
    state.steps_since_improve += 1
    if state.steps_since_improve >= state.plateau_patience:
        state.steps_since_improve = 0
        return max(state.min_lr, lr * state.factor)
    return lr


@dataclass
class StopState:
    """Two-window moving-average convergence test.

    The last ``2 * window`` observed losses are kept; once that history is
    full, each new observation compares the mean of the newest ``window``
    losses against the mean of the preceding non-overlapping window.  When
    the relative change stays below ``threshold`` for ``patience``
    consecutive checks the run is converged.  The current observation
    enters the history after the check, so the first check happens on the
    (2*window + 1)-th call.
    """

    threshold: float
    window: int = 100
    patience: int = 10
    max_steps: int = 1_000_000
    consecutive_hits: int = 0
    history: deque = field(default_factory=deque)
    _sum_prev: float = 0.0
    _sum_now: float = 0.0

    def __post_init__(self) -> None:
        if self.threshold <= 0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")
        if self.window < 1 or self.patience < 1 or self.max_steps < 1:
            raise ValueError("window, patience, and max_steps must be positive")
        self.history = deque(self.history, maxlen=2 * self.window)


def stop_observe(state: StopState, loss: float, step: int) -> str | None:
    """Feed one loss; return a stop reason or None to continue.

    ``step`` is the 0-indexed observation counter.  Reasons: ``converged``
    when the relative two-window change stayed below the threshold for
    ``patience`` consecutive checks, ``max_steps`` when ``step`` reaches
    the cap, ``numeric-failure`` on a non-finite loss.
    """
    if not math.isfinite(loss):
        return NUMERIC_FAILURE
    w = state.window
    if len(state.history) == 2 * w:
        ma_prev = state._sum_prev / w
        ma_now = state._sum_now / w
        r = abs(ma_now - ma_prev) / max(abs(ma_prev), 1e-12)
        if r < state.threshold:
            state.consecutive_hits += 1
        else:
            state.consecutive_hits = 0
        # Slide both windows: the oldest loss leaves, the loss at the
        # window boundary moves from "now" to "prev", the new loss enters.
        evicted = state.history[0]
        mover = state.history[w]
        state._sum_prev += mover - evicted
        state._sum_now += loss - mover
        state.history.append(loss)
    else:
        state.history.append(loss)
        if len(state.history) <= w:
            state._sum_prev += loss
        else:
            state._sum_now += loss
    if state.consecutive_hits >= state.patience:
        return CONVERGED
    if step >= state.max_steps:
        return MAX_STEPS
    return None


@dataclass
class LbfgsState:
    """Configuration for the projected L-BFGS minimizer."""

    ftol: float
    memory_size: int = 10
    lo: float = PARAM_LO
    hi: float = PARAM_HI


@dataclass
class LbfgsResult:
    params: np.ndarray
    loss: float
    iterations: int
    status: str


def _two_loop_direction(grad: np.ndarray, s_list: deque, y_list: deque) -> np.ndarray:
    """Two-loop recursion: apply the implicit inverse Hessian to -grad."""
    q = grad.copy()
    alphas = []
    for s, y in zip(reversed(s_list), reversed(y_list)):
        rho = 1.0 / float(y @ s)
        a = rho * float(s @ q)
        alphas.append(a)
        q -= a * y
    if s_list:
        s, y = s_list[-1], y_list[-1]
        gamma = float(s @ y) / float(y @ y)
        q *= gamma
    for (s, y), a in zip(zip(s_list, y_list), reversed(alphas)):
        rho = 1.0 / float(y @ s)
        b = rho * float(y @ q)
        q += (a - b) * s
    return -q


def _backtracking_search(q, x, f, g, d, alpha, lo, hi, slope):
    """Armijo backtracking along ``d`` with projection onto the box.

    Returns ``(x_trial, f_trial, g_trial)`` or None if no projected trial
    point strictly decreases the loss.
    """
    c1 = 1e-4
    while alpha >= 1e-20:
        x_trial = np.clip(x + alpha * d, lo, hi)
        step_vec = x_trial - x
        if not np.any(step_vec):
            return None
        f_trial, g_trial = relaxed_loss_and_grad(q, x_trial, slope)
        if (
            math.isfinite(f_trial)
            and np.all(np.isfinite(g_trial))
            and f_trial < f
            and f_trial <= f + c1 * float(g @ step_vec)
        ):
            return x_trial, f_trial, g_trial
        alpha *= 0.5
    return None


def lbfgs_minimize(
    q: QuboMatrix,
    x0,
    state: LbfgsState,
    max_iter: int = 1_000_000,
    slope: float = DEFAULT_SLOPE,
) -> LbfgsResult:
    """Minimize the relaxed loss with box-projected L-BFGS.

    Trial points along the search direction are projected onto the box,
    accepted under an Armijo condition (c1 = 1e-4, backtrack factor 0.5),
    and curvature pairs with ``s.y <= 1e-12`` are discarded.  Terminates
    when the relative decrease drops to ``ftol``, when the projected
    gradient max-norm reaches 1e-12, or at ``max_iter``.
    """
    pg_tol = 1e-12
    lo, hi = state.lo, state.hi
    x = clamp_box(np.asarray(x0, dtype=np.float64), lo, hi)
    f, g = relaxed_loss_and_grad(q, x, slope)
    if not (math.isfinite(f) and np.all(np.isfinite(g))):
        return LbfgsResult(x, f, 0, NUMERIC_FAILURE)
    s_list: deque = deque(maxlen=state.memory_size)
    y_list: deque = deque(maxlen=state.memory_size)
    status = MAX_STEPS
    iterations = 0
    for k in range(max_iter):
        pg = x - np.clip(x - g, lo, hi)
        if np.max(np.abs(pg)) <= pg_tol:
            status = CONVERGED
            break
        # Without curvature memory the direction has no natural scale; cap
        # the first trial step so backtracking starts near the box scale.
        alpha_sd = min(1.0, 1.0 / max(1e-12, float(np.max(np.abs(g)))))
        d = _two_loop_direction(g, s_list, y_list)
        if float(g @ d) >= 0.0:
            s_list.clear()
            y_list.clear()
            d = -g
        trial = _backtracking_search(q, x, f, g, d, 1.0 if s_list else alpha_sd, lo, hi, slope)
        if trial is None and s_list:
            # The quasi-Newton direction stalled; retry with raw descent.
            s_list.clear()
            y_list.clear()
            trial = _backtracking_search(q, x, f, g, -g, alpha_sd, lo, hi, slope)
        if trial is None:
            status = CONVERGED
            break
        x_trial, f_trial, g_trial = trial
        iterations = k + 1
        s = x_trial - x
        y = g_trial - g
        if float(s @ y) > 1e-12:
            s_list.append(s)
            y_list.append(y)
        rel_dec = (f - f_trial) / max(abs(f), abs(f_trial), 1.0)
        x, f, g = x_trial, f_trial, g_trial
        if rel_dec <= state.ftol:
            status = CONVERGED
            break
    return LbfgsResult(x, f, iterations, status)
