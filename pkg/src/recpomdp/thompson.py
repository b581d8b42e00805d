"""Thompson sampling over a finite grid of candidate arm models.

The learner works in epochs. Each epoch it samples a candidate (q, rho) from
its posterior, plays that model's optimal waiting time once (k held steps,
then one recommendation), observes only the recommendation's Bernoulli
reward, and performs an exact Bayes update of the posterior. Held steps carry
no information and do not touch the posterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels, planner
from .config import ExperimentConfig
from .core import Action, ArmParams, ArmSimulator, success_prob
from .rng import RngStream


def _normalize_logw(logw: list[float]) -> list[float]:
    m = max(logw)
    if math.isinf(m):
        raise ValueError("degenerate prior: all models have zero likelihood")
    s = 0.0
    for x in logw:
        s += math.exp(x - m)
    lse = m + math.log(s)
    return [x - lse for x in logw]


@dataclass(frozen=True, eq=False)
class DiscretePrior:
    """Probability weights over a finite list of candidate (q, rho) models.

    Weights live in log space so that thousands of likelihood updates cannot
    underflow; they are kept normalized after every operation. All candidate
    models must sit in the eta-interior of the unit square, which keeps every
    per-epoch likelihood strictly inside (0, 1).
    """

    models: tuple[tuple[float, float], ...]
    log_weights: tuple[float, ...]
    eta: float = 0.01

    def __post_init__(self):
        if not self.models:
            raise ValueError("prior needs at least one model")
        if len(self.models) != len(self.log_weights):
            raise ValueError("one log weight per model required")
        for q, rho in self.models:
            ArmParams(q, rho, eta=self.eta)  # validates the interior margin
        total = sum(math.exp(x) for x in self.log_weights)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1 within 1e-12, got {total}")

    @classmethod
    def uniform(cls, models, eta: float = 0.01) -> "DiscretePrior":
        models = tuple((float(q), float(rho)) for q, rho in models)
        logw = [-math.log(len(models))] * len(models)
        return cls(models, tuple(_normalize_logw(logw)), eta)

    @classmethod
    def from_weights(cls, models, weights, eta: float = 0.01) -> "DiscretePrior":
        models = tuple((float(q), float(rho)) for q, rho in models)
        weights = [float(w) for w in weights]
        if any(w < 0 for w in weights) or sum(weights) <= 0:
            raise ValueError("weights must be non-negative with positive total")
        logw = [math.log(w) if w > 0 else -math.inf for w in weights]
        return cls(models, tuple(_normalize_logw(logw)), eta)

    @property
    def weights(self) -> np.ndarray:
        return np.exp(np.asarray(self.log_weights))

    def index_of(self, model: tuple[float, float]) -> int:
        for i, (q, rho) in enumerate(self.models):
            if abs(q - model[0]) < 1e-12 and abs(rho - model[1]) < 1e-12:
                return i
        raise KeyError(f"model {model} not in prior support")

    def mass_on(self, model: tuple[float, float]) -> float:
        return math.exp(self.log_weights[self.index_of(model)])


def sample_model(prior: DiscretePrior, rng: RngStream) -> tuple[float, float]:
    """Draw one candidate model with probability equal to its weight."""
    u = rng.uniform()
    acc = 0.0
    idx = len(prior.models) - 1
    for i, lw in enumerate(prior.log_weights):
        acc += math.exp(lw)
        if u < acc:
            idx = i
            break
    return prior.models[idx]


def epoch_likelihood(model: tuple[float, float], k: int, r: int) -> float:
    """Chance that a single epoch with waiting time k yields reward r under
    the candidate model."""
    f = success_prob(ArmParams(model[0], model[1], allow_boundary=True), k)
    return f if r == 1 else 1.0 - f


def bayes_update(prior: DiscretePrior, k: int, r: int) -> DiscretePrior:
    """Exact posterior after observing reward r from one epoch of waiting time k.

    Each model's log weight moves by the log likelihood of r at that model's
    epoch-success probability, then the vector is renormalized in log space.
    """
    if k < 1:
        raise ValueError(f"waiting time k must be >= 1, got {k}")
    if r not in (0, 1):
        raise ValueError(f"epoch reward must be 0 or 1, got {r}")
    logw = list(prior.log_weights)
    for i, (q, rho) in enumerate(prior.models):
        f = success_prob(ArmParams(q, rho, allow_boundary=True), k)
        logw[i] += math.log(f) if r == 1 else math.log1p(-f)
    return DiscretePrior(prior.models, tuple(_normalize_logw(logw)), prior.eta)


@dataclass(frozen=True)
class EpochRecord:
    """One Thompson-sampling epoch: the sampled model, the waiting time
    played, and the single informative reward observed at the recommendation."""

    epoch_index: int
    model: tuple[float, float]
    k: int
    reward: int
    step_rewards: tuple[float, ...]  # k subsidy steps then the rec reward

    @property
    def length(self) -> int:
        return self.k + 1


def ts_epoch(
    prior: DiscretePrior,
    env: ArmSimulator,
    lam: float,
    k_max: int,
    rng: RngStream,
    epoch_index: int = 0,
) -> tuple[DiscretePrior, EpochRecord]:
    """Run one full epoch against `env` and return the updated prior.

    The environment must be positioned right after a recommendation (state
    LOW). Pass the environment's own stream as `rng` to reproduce the exact
    trajectories of run_ts, which draws the model sample and the environment
    noise from a single per-run stream.
    """
    q, rho = sample_model(prior, rng)
    k = min(planner.k_opt(ArmParams(q, rho, lam), k_max), k_max)
    step_rewards = [env.step(Action.NO_REC) for _ in range(k)]
    rec_reward = env.step(Action.REC)
    r = int(rec_reward)
    step_rewards.append(rec_reward)
    record = EpochRecord(epoch_index, (q, rho), k, r, tuple(step_rewards))
    return bayes_update(prior, k, r), record


@dataclass(eq=False)
class LearnerTrace:
    """Full output of one Thompson-sampling run over a step horizon."""

    step_rewards: np.ndarray  # float64[horizon]
    epoch_t_rec: np.ndarray  # int64, 0-based step of each completed epoch's rec
    epoch_k: np.ndarray  # int64
    epoch_reward: np.ndarray  # int64, 0/1
    epoch_model: np.ndarray  # int64 index into the config's model grid
    epoch_post_true: np.ndarray  # float64, true-model mass after each update
    final_log_weights: np.ndarray
    prior_true_mass: float
    draws_used: int

    @property
    def n_epochs(self) -> int:
        return int(self.epoch_k.shape[0])


def model_tables(config: ExperimentConfig) -> tuple[np.ndarray, np.ndarray]:
    """Per-model epoch-success probabilities f[i, k-1] for k = 1..k_max and the
    per-model optimal waiting times, both precomputed for the kernels."""
    models = config.models
    k_max = config.k_max
    f_tab = np.empty((len(models), k_max), dtype=np.float64)
    kopt_tab = np.empty(len(models), dtype=np.int64)
    for i, (q, rho) in enumerate(models):
        w = 1.0
        for k in range(1, k_max + 1):
            w *= 1.0 - q
            f_tab[i, k - 1] = w * rho + (1.0 - w)
        kopt_tab[i] = min(planner.k_opt(ArmParams(q, rho, config.lam, eta=config.eta), k_max), k_max)
    return f_tab, kopt_tab


def initial_log_weights(config: ExperimentConfig) -> np.ndarray:
    models = config.models
    if isinstance(config.prior, str):
        prior = DiscretePrior.uniform(models, eta=config.eta)
    else:
        prior = DiscretePrior.from_weights(models, config.prior, eta=config.eta)
    return np.asarray(prior.log_weights, dtype=np.float64)


def run_ts(config: ExperimentConfig, rng: RngStream) -> LearnerTrace:
    """Run Thompson sampling for config.horizon steps on a fresh arm instance.

    Deterministic in (config, rng state): rerunning with an identical stream
    produces a bit-identical trace. The final partial epoch is truncated at
    the horizon and leaves no epoch record.
    """
    logw0 = initial_log_weights(config)
    f_tab, kopt_tab = model_tables(config)
    true_idx = config.true_index
    kern = _kernels.get()
    (rewards, t_rec, ks, rs, midx, post, final_logw, used) = kern.run_thompson(
        config.true_model[0],
        config.true_model[1],
        config.lam,
        config.horizon,
        logw0,
        f_tab,
        kopt_tab,
        true_idx,
        rng.base,
        rng.counter,
    )
    rng.advance(used)
    return LearnerTrace(
        step_rewards=rewards,
        epoch_t_rec=t_rec,
        epoch_k=ks,
        epoch_reward=rs,
        epoch_model=midx,
        epoch_post_true=post,
        final_log_weights=final_logw,
        prior_true_mass=float(np.exp(logw0[true_idx])),
        draws_used=used,
    )
