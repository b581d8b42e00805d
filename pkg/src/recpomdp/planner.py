"""Planning with known parameters.

Closed forms for the per-cycle value of "hold k steps, then recommend once"
policies (average and discounted), the optimal waiting time, and an
independent belief-grid value-iteration solver used to cross-validate the
threshold structure of the optimal policy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ArmParams, success_prob

DEFAULT_K_MAX = 50


@dataclass(frozen=True)
class CycleValue:
    """Value of the k-cyclic policy: reward per step (average criterion) or
    total discounted reward (discounted criterion)."""

    k: int
    value: float


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"waiting time k must be >= 1, got {k}")


def cycle_value_avg(params: ArmParams, k: int) -> CycleValue:
    """Long-run average reward of the k-cyclic policy:
    (lam * k + success_prob(k)) / (k + 1)."""
    _check_k(k)
    f = success_prob(params, k)
    return CycleValue(k, (params.lam * k + f) / (k + 1))


def cycle_value_discounted(params: ArmParams, k: int, beta: float) -> CycleValue:
    """Total discounted reward of the k-cyclic policy started at a fresh cycle.

    One cycle earns lam * (1 - beta^k) / (1 - beta) from the held steps plus
    beta^k * success_prob(k) from the recommendation; cycles repeat with
    discount beta^(k+1), giving a closed geometric sum.
    """
    _check_k(k)
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"discount beta must lie in [0, 1), got {beta}")
    f = success_prob(params, k)
    bk = beta**k
    per_cycle = params.lam * (1.0 - bk) / (1.0 - beta) + bk * f
    return CycleValue(k, per_cycle / (1.0 - beta ** (k + 1)))


def k_opt(params: ArmParams, k_max: int = DEFAULT_K_MAX) -> int:
    """Smallest maximizer of the average cycle value over k in {1, ..., k_max}."""
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    qbar = 1.0 - params.q
    w = 1.0
    best_k, best_v = 1, -math.inf
    for k in range(1, k_max + 1):
        w *= qbar
        v = (params.lam * k + (w * params.rho + (1.0 - w))) / (k + 1)
        if v > best_v:
            best_v, best_k = v, k
    return best_k


@dataclass(frozen=True)
class ValueTable:
    """Converged discounted value function on a belief grid.

    grid      -- ascending beliefs, grid[-1] == 1.0 exactly
    values    -- fixed point of the Bellman operator at each grid point
    rec_mask  -- True where recommending is (weakly) the better branch
    threshold -- largest grid belief where recommending is optimal (nan if none)
    sweeps    -- Bellman sweeps used to converge
    """

    beta: float
    grid: np.ndarray
    values: np.ndarray
    rec_mask: np.ndarray
    threshold: float
    sweeps: int

    @property
    def switch_count(self) -> int:
        m = self.rec_mask.astype(np.int8)
        return int(np.count_nonzero(np.diff(m)))

    @property
    def threshold_form(self) -> bool:
        """True when actions along the grid are a recommend-prefix followed by
        a hold-suffix (at most one switch), i.e. a threshold rule. The switch
        may be absent when the threshold sits outside the grid range."""
        m = self.rec_mask.astype(np.int8)
        return bool(np.all(m[:-1] >= m[1:]))


def _bellman_branches(params: ArmParams, beta: float, grid: np.ndarray, values: np.ndarray):
    hold = params.lam + beta * np.interp((1.0 - params.q) * grid, grid, values)
    rec = 1.0 - grid * (1.0 - params.rho) + beta * values[-1]
    return hold, rec


def value_iteration(
    params: ArmParams,
    beta: float,
    grid_size: int = 1024,
    tol: float = 1e-9,
    max_iter: int = 10**6,
) -> ValueTable:
    """Solve the belief-space Bellman equation on a uniform grid.

    V(pi) = max{ lam + beta * V((1-q) pi),  1 - pi (1 - rho) + beta * V(1) }

    The held-branch argument (1-q) pi falls off the grid, so V there is taken
    by linear interpolation (which preserves convexity of the iterates).
    Stops when the sup-norm change drops below tol; raises if max_iter sweeps
    are not enough, which signals beta too close to 1 for this tolerance.
    """
    if grid_size < 64:
        raise ValueError(f"grid_size must be >= 64, got {grid_size}")
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"discount beta must lie in [0, 1), got {beta}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    grid = np.linspace(0.0, 1.0, grid_size)
    values = np.zeros(grid_size)
    sweeps = 0
    for sweeps in range(1, max_iter + 1):
        hold, rec = _bellman_branches(params, beta, grid, values)
        new_values = np.maximum(hold, rec)
        delta = float(np.max(np.abs(new_values - values)))
        values = new_values
        if delta < tol:
            break
    else:
        raise RuntimeError(
            f"value iteration did not converge in {max_iter} sweeps "
            f"(beta={beta}, tol={tol}); lower beta or relax tol"
        )
    hold, rec = _bellman_branches(params, beta, grid, values)
    rec_mask = rec >= hold
    threshold = float(grid[rec_mask][-1]) if rec_mask.any() else math.nan
    return ValueTable(beta, grid, values, rec_mask, threshold, sweeps)


def average_gain(table: ValueTable) -> float:
    """(1 - beta) * V(1): the per-step gain of the discounted solution, which
    approaches the average-reward gain as beta approaches 1."""
    return (1.0 - table.beta) * float(table.values[-1])


def greedy_wait_length(table: ValueTable, params: ArmParams, max_wait: int = 100_000) -> int:
    """Waiting time of the greedy policy read off a converged table.

    Starting from belief 1 (right after a recommendation), count the held
    steps until the greedy rule first recommends. Beliefs reset to exactly 1.0
    after every recommendation, so the greedy trajectory is periodic with this
    wait length and a single recommendation per period.
    """
    beta, grid, values = table.beta, table.grid, table.values
    v1 = float(values[-1])
    pi = 1.0
    for wait in range(max_wait + 1):
        rec = 1.0 - pi * (1.0 - params.rho) + beta * v1
        hold = params.lam + beta * float(np.interp((1.0 - params.q) * pi, grid, values))
        if rec >= hold:
            return wait
        pi = (1.0 - params.q) * pi
    raise RuntimeError(f"greedy policy never recommended within {max_wait} steps")


def structure_report(table: ValueTable, params: ArmParams, tol: float = 1e-9) -> dict[str, bool]:
    """Structural checks on a converged table: value monotone non-increasing,
    discretely convex, range bounded by (1 - rho), and threshold-form actions."""
    v = table.values
    first = np.diff(v)
    second = np.diff(v, n=2)
    return {
        "nonincreasing": bool(np.all(first <= tol)),
        "convex": bool(np.all(second >= -tol)),
        "range_bound": bool(v[0] - v[-1] < (1.0 - params.rho) + 1e-6),
        "threshold_form": table.threshold_form,
    }
