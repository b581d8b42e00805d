"""Observation-divergence diagnostics for the learning problem.

How distinguishable are candidate models from the truth, per waiting time?
This module computes Bernoulli KL divergences between epoch-success
probabilities, the squared success-probability gaps that lower-bound them,
confounder decision regions over a model grid, and the closed-form
logarithmic bound on how long suboptimal waiting times can survive.

Convention: every KL value here is in natural log (nats). Where a bits-based
constant is conventional, both scalings are reported side by side so either
can be audited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ArmParams, stay_low_prob, success_prob
from . import planner

Model = tuple[float, float]


def kl_bernoulli(p: float, q: float) -> float:
    """KL divergence D(p || q) between Bernoulli(p) and Bernoulli(q), in nats.

    Boundary success chances are rejected: the interior parameter margin
    guarantees every epoch-success probability stays inside (0, 1).
    """
    if not 0.0 < p < 1.0 or not 0.0 < q < 1.0:
        raise ValueError(f"kl_bernoulli needs p, q in (0, 1), got p={p}, q={q}")
    return p * math.log(p / q) + (1.0 - p) * math.log((1.0 - p) / (1.0 - q))


def _success(model: Model, k: int) -> float:
    return success_prob(ArmParams(model[0], model[1], allow_boundary=True), k)


def success_gap_squared(model: Model, truth: Model, k: int) -> float:
    """Squared gap between the two models' epoch-success probabilities at
    waiting time k, written via the no-recovery powers:

        [ (1-q)^k (rho - 1) - (1-q*)^k (rho* - 1) ]^2

    Algebraically identical to (f_truth(k) - f_model(k))^2.
    """
    if k < 1:
        raise ValueError(f"waiting time k must be >= 1, got {k}")
    a = stay_low_prob(model[0], k) * (model[1] - 1.0) - stay_low_prob(truth[0], k) * (truth[1] - 1.0)
    return a * a


def pinsker_check(model: Model, truth: Model, k: int) -> tuple[bool, float]:
    """Verify D(f_truth || f_model) >= 2 * squared success gap at waiting time k
    (the total-variation lower bound on KL, in nats). Returns (holds, slack)."""
    ft = _success(truth, k)
    fm = _success(model, k)
    if ft == fm:
        slack = 0.0
    else:
        slack = kl_bernoulli(ft, fm) - 2.0 * success_gap_squared(model, truth, k)
    return slack >= 0.0, slack


@dataclass(frozen=True)
class DecisionRegions:
    """Grid models grouped by their optimal waiting time.

    regions[k] holds every model whose best policy is k. For suboptimal k
    (k != k_star), near[k] holds the confounders whose observations at the
    oracle's waiting time are within epsilon KL of the truth's, and far[k]
    the rest; the two split regions[k] exactly.
    """

    k_star: int
    epsilon: float
    regions: dict[int, tuple[Model, ...]]
    near: dict[int, tuple[Model, ...]]
    far: dict[int, tuple[Model, ...]]
    kl_at_k_star: dict[Model, float]

    @property
    def n_models(self) -> int:
        return sum(len(v) for v in self.regions.values())


def decision_regions(grid, lam: float, k_max: int, epsilon: float, truth: Model) -> DecisionRegions:
    """Partition a model grid by optimal waiting time and split each
    suboptimal region into near/far confounder sets at KL threshold epsilon."""
    grid = [(float(q), float(rho)) for q, rho in grid]
    if truth not in grid:
        raise ValueError(f"truth {truth} must be one of the grid models")
    k_star = min(planner.k_opt(ArmParams(truth[0], truth[1], lam), k_max), k_max)
    f_truth = _success(truth, k_star)
    regions: dict[int, list[Model]] = {}
    kl_at: dict[Model, float] = {}
    for model in grid:
        k = min(planner.k_opt(ArmParams(model[0], model[1], lam), k_max), k_max)
        regions.setdefault(k, []).append(model)
        kl_at[model] = kl_bernoulli(f_truth, _success(model, k_star))
    near: dict[int, tuple[Model, ...]] = {}
    far: dict[int, tuple[Model, ...]] = {}
    for k, members in regions.items():
        if k == k_star:
            continue
        near[k] = tuple(m for m in members if kl_at[m] <= epsilon)
        far[k] = tuple(m for m in members if kl_at[m] > epsilon)
    return DecisionRegions(
        k_star=k_star,
        epsilon=epsilon,
        regions={k: tuple(v) for k, v in regions.items()},
        near=near,
        far=far,
        kl_at_k_star=kl_at,
    )


@dataclass(frozen=True)
class SeparationReport:
    """Worst-case separation of far-away models from the truth.

    delta is the smallest squared success-probability gap the neighborhood
    radius epsilon1 forces at some waiting time; delta2 = delta / ln 2 is its
    bits-convention KL floor, and delta2_nats = 2 * delta the nats-convention
    one. kappa is the least number of waiting times (over grid models outside
    the neighborhood) at which the gap is at least delta. gaps maps each grid
    model to its full per-k gap vector.
    """

    truth: Model
    epsilon1: float
    k_max: int
    delta: float
    delta_argmin_k: int
    delta2: float
    delta2_nats: float
    kappa: int
    outside: tuple[Model, ...]
    gaps: dict[Model, tuple[float, ...]]


def separation_report(truth: Model, epsilon1: float, k_max: int, grid) -> SeparationReport:
    """Compute the separation constants for a grid around a true model.

    epsilon1 must satisfy epsilon1 < q* so that the shifted no-recovery factor
    (1 - q*) + epsilon1 stays below 1; larger radii would silently change the
    meaning of the bound and are rejected. Models outside the neighborhood are
    those at sup-norm distance >= epsilon1 from the truth.
    """
    q_star, rho_star = float(truth[0]), float(truth[1])
    if epsilon1 <= 0.0:
        raise ValueError(f"epsilon1 must be positive, got {epsilon1}")
    if epsilon1 >= q_star:
        raise ValueError(
            f"epsilon1={epsilon1} too large: needs epsilon1 < q*={q_star} so that "
            f"(1 - q*) + epsilon1 < 1"
        )
    if k_max < 2:
        raise ValueError(f"k_max must be >= 2, got {k_max}")
    grid = [(float(q), float(rho)) for q, rho in grid]
    qbar = 1.0 - q_star
    delta = math.inf
    argmin_k = 1
    wa = 1.0  # (qbar + eps1)^k
    wb = 1.0  # qbar^k
    for k in range(1, k_max + 1):
        wa *= qbar + epsilon1
        wb *= qbar
        a = wa * ((rho_star + epsilon1) - 1.0) - wb * (rho_star - 1.0)
        if a * a < delta:
            delta = a * a
            argmin_k = k
    gaps = {
        m: tuple(success_gap_squared(m, (q_star, rho_star), k) for k in range(1, k_max + 1))
        for m in grid
    }
    outside = tuple(
        m
        for m in grid
        if max(abs(m[0] - q_star), abs(m[1] - rho_star)) >= epsilon1 and m != (q_star, rho_star)
    )
    if outside:
        kappa = min(sum(1 for g in gaps[m] if g >= delta) for m in outside)
    else:
        kappa = k_max - 1
    kappa = min(kappa, k_max - 1)
    return SeparationReport(
        truth=(q_star, rho_star),
        epsilon1=epsilon1,
        k_max=k_max,
        delta=delta,
        delta_argmin_k=argmin_k,
        delta2=delta / math.log(2.0),
        delta2_nats=2.0 * delta,
        kappa=kappa,
        outside=outside,
        gaps=gaps,
    )


def regret_log_bound(delta2: float, epsilon: float, n_epochs: int | float) -> float:
    """Closed-form ceiling on the log-scaled play count of suboptimal waiting
    times over n_epochs epochs:

        (1 / delta2) * (2 (1 + epsilon) / (1 - epsilon)) * ln(n_epochs)
    """
    if delta2 <= 0.0:
        raise ValueError(f"delta2 must be positive, got {delta2}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n_epochs < 2:
        raise ValueError(f"n_epochs must be >= 2, got {n_epochs}")
    return (1.0 / delta2) * (2.0 * (1.0 + epsilon) / (1.0 - epsilon)) * math.log(n_epochs)
