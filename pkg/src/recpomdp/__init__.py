"""Recommendation-fatigue POMDP lab.

Simulation, planning and online learning for a two-state hidden-interest arm:
exact chain dynamics, closed-form and DP planning of cyclic recommendation
policies, epoch-based Thompson sampling over a discrete model grid, a
multi-run regret harness, and divergence diagnostics for the learning rate.
"""

from ._kernels import active_backend, available_backends, set_backend
from .analysis import (
    DecisionRegions,
    SeparationReport,
    decision_regions,
    kl_bernoulli,
    pinsker_check,
    regret_log_bound,
    separation_report,
    success_gap_squared,
)
from .config import ConfigError, ExperimentConfig
from .core import (
    Action,
    ArmParams,
    ArmSimulator,
    ArmState,
    sample_reward,
    stay_low_prob,
    step,
    success_prob,
    transition,
    update_belief,
)
from .experiment import (
    RegretTrace,
    RunAggregate,
    aggregate_runs,
    modified_regret_of,
    run_experiment,
    run_oracle,
)
from .planner import (
    CycleValue,
    ValueTable,
    average_gain,
    cycle_value_avg,
    cycle_value_discounted,
    greedy_wait_length,
    k_opt,
    value_iteration,
)
from .rng import RngStream
from .thompson import (
    DiscretePrior,
    EpochRecord,
    LearnerTrace,
    bayes_update,
    run_ts,
    sample_model,
    ts_epoch,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ArmParams",
    "ArmSimulator",
    "ArmState",
    "ConfigError",
    "CycleValue",
    "DecisionRegions",
    "DiscretePrior",
    "EpochRecord",
    "ExperimentConfig",
    "LearnerTrace",
    "RegretTrace",
    "RngStream",
    "RunAggregate",
    "SeparationReport",
    "ValueTable",
    "active_backend",
    "aggregate_runs",
    "available_backends",
    "average_gain",
    "bayes_update",
    "cycle_value_avg",
    "cycle_value_discounted",
    "decision_regions",
    "greedy_wait_length",
    "k_opt",
    "kl_bernoulli",
    "modified_regret_of",
    "pinsker_check",
    "regret_log_bound",
    "run_experiment",
    "run_oracle",
    "run_ts",
    "sample_model",
    "sample_reward",
    "separation_report",
    "set_backend",
    "stay_low_prob",
    "step",
    "success_gap_squared",
    "success_prob",
    "transition",
    "ts_epoch",
    "update_belief",
    "value_iteration",
]
