"""Experiment harness: oracle-vs-learner regret over many seeded runs.

Each run simulates the Thompson-sampling learner and the known-parameter
oracle policy on independent arm instances with independent streams, then
records per-step cumulative rewards and per-epoch learner statistics. Regret
is therefore noisy around its mean; every aggregate claim is made on
run-averaged quantities.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels, planner
from .config import ExperimentConfig
from .core import ArmParams
from .rng import RngStream
from .thompson import run_ts

WORKERS_ENV_VAR = "RECPOMDP_WORKERS"

STEPS_HEADER = "run_id,t,learner_cum_reward,oracle_cum_reward,regret"
EPOCHS_HEADER = "run_id,epoch,t_of_rec,k,suboptimal,posterior_mass_true"
AGG_HEADER = "t,mean_regret,std_regret,mean_posterior_mass_true"


@dataclass(eq=False)
class RegretTrace:
    """One run's record: cumulative rewards of learner and oracle, plus the
    learner's per-epoch statistics (waiting time, reward, posterior mass on
    the true model after each update)."""

    run_id: int
    horizon: int
    k_star: int
    prior_true_mass: float
    learner_cum: np.ndarray  # float64[horizon]
    oracle_cum: np.ndarray  # float64[horizon]
    epoch_t_rec: np.ndarray  # int64, 0-based step of the epoch's recommendation
    epoch_k: np.ndarray
    epoch_reward: np.ndarray
    epoch_model: np.ndarray
    epoch_post_true: np.ndarray

    @property
    def regret(self) -> np.ndarray:
        return self.oracle_cum - self.learner_cum

    @property
    def n_epochs(self) -> int:
        return int(self.epoch_k.shape[0])

    @property
    def suboptimal(self) -> np.ndarray:
        return self.epoch_k != self.k_star

    def modified_regret(self, upto: int | None = None) -> int:
        """Number of epochs among the first `upto` whose waiting time differs
        from the oracle's."""
        flags = self.suboptimal if upto is None else self.suboptimal[:upto]
        return int(np.count_nonzero(flags))

    def play_counts(self, k_max: int) -> np.ndarray:
        """How often each waiting time k = 1..k_max was played."""
        return np.bincount(self.epoch_k, minlength=k_max + 1)[1:]

    def posterior_series(self) -> np.ndarray:
        """Per-step posterior mass on the true model, holding the last updated
        value between recommendations (the prior mass before the first one)."""
        levels = np.concatenate(([self.prior_true_mass], self.epoch_post_true))
        idx = np.searchsorted(self.epoch_t_rec, np.arange(self.horizon), side="right")
        return levels[idx]


def modified_regret_of(k_sequence, k_star: int) -> int:
    """Count entries of a played-k sequence that differ from k_star."""
    return int(sum(1 for k in k_sequence if k != k_star))


def run_oracle(params: ArmParams, horizon: int, rng: RngStream, k: int | None = None) -> np.ndarray:
    """Per-step cumulative reward of the k-cyclic policy (default: the optimal
    waiting time for `params`) on its own arm instance."""
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if k is None:
        k = planner.k_opt(params)
    if horizon == 0:
        return np.empty(0, dtype=np.float64)
    kern = _kernels.get()
    rewards, used = kern.run_cycle_policy(
        params.q, params.rho, params.lam, k, horizon, rng.base, rng.counter
    )
    rng.advance(used)
    return np.cumsum(rewards)


def _run_one(config: ExperimentConfig, run_id: int) -> RegretTrace:
    learner_rng = RngStream(config.seed, 2 * run_id)
    oracle_rng = RngStream(config.seed, 2 * run_id + 1)
    k_star = min(planner.k_opt(config.true_params, config.k_max), config.k_max)
    learner = run_ts(config, learner_rng)
    oracle_cum = run_oracle(config.true_params, config.horizon, oracle_rng, k=k_star)
    return RegretTrace(
        run_id=run_id,
        horizon=config.horizon,
        k_star=k_star,
        prior_true_mass=learner.prior_true_mass,
        learner_cum=np.cumsum(learner.step_rewards),
        oracle_cum=oracle_cum,
        epoch_t_rec=learner.epoch_t_rec,
        epoch_k=learner.epoch_k,
        epoch_reward=learner.epoch_reward,
        epoch_model=learner.epoch_model,
        epoch_post_true=learner.epoch_post_true,
    )


def _worker(args) -> RegretTrace:
    return _run_one(*args)


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> list[RegretTrace]:
    """Execute config.runs independent runs; deterministic for a fixed config.

    Runs are independent tasks. With workers > 1 they execute in a process
    pool; per-run streams are derived from (seed, run_id), so results do not
    depend on scheduling. The returned list is always sorted by run_id.
    """
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV_VAR, "1"))
    jobs = [(config, run_id) for run_id in range(config.runs)]
    if workers > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_worker, jobs))
    else:
        traces = [_run_one(*job) for job in jobs]
    traces.sort(key=lambda tr: tr.run_id)
    return traces


@dataclass(eq=False)
class RunAggregate:
    """Pointwise per-step aggregates over runs (1-based step axis in CSVs)."""

    mean_regret: np.ndarray
    std_regret: np.ndarray
    mean_posterior_true: np.ndarray

    @property
    def horizon(self) -> int:
        return int(self.mean_regret.shape[0])


def aggregate_runs(traces) -> RunAggregate:
    """Pointwise mean and sample standard deviation over a set of traces.

    Traces are reduced in run_id order, so the result is bit-identical under
    any permutation of the input. A single trace aggregates to itself with
    zero deviation.
    """
    traces = sorted(traces, key=lambda tr: tr.run_id)
    if not traces:
        raise ValueError("need at least one trace")
    horizon = traces[0].horizon
    if any(tr.horizon != horizon for tr in traces):
        raise ValueError("traces have mismatched horizons")
    regrets = np.stack([tr.regret for tr in traces])
    posts = np.stack([tr.posterior_series() for tr in traces])
    if len(traces) > 1:
        std = regrets.std(axis=0, ddof=1)
    else:
        std = np.zeros(horizon)
    return RunAggregate(
        mean_regret=regrets.mean(axis=0),
        std_regret=std,
        mean_posterior_true=posts.mean(axis=0),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".9g")


def write_steps_csv(traces, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(STEPS_HEADER + "\n")
        for tr in sorted(traces, key=lambda t: t.run_id):
            regret = tr.regret
            for t in range(tr.horizon):
                fh.write(
                    f"{tr.run_id},{t + 1},{_fmt(tr.learner_cum[t])},"
                    f"{_fmt(tr.oracle_cum[t])},{_fmt(regret[t])}\n"
                )


def write_epochs_csv(traces, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(EPOCHS_HEADER + "\n")
        for tr in sorted(traces, key=lambda t: t.run_id):
            subopt = tr.suboptimal
            for i in range(tr.n_epochs):
                fh.write(
                    f"{tr.run_id},{i + 1},{int(tr.epoch_t_rec[i]) + 1},{int(tr.epoch_k[i])},"
                    f"{int(subopt[i])},{_fmt(tr.epoch_post_true[i])}\n"
                )


def write_agg_csv(agg: RunAggregate, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(AGG_HEADER + "\n")
        for t in range(agg.horizon):
            fh.write(
                f"{t + 1},{_fmt(agg.mean_regret[t])},{_fmt(agg.std_regret[t])},"
                f"{_fmt(agg.mean_posterior_true[t])}\n"
            )
