"""Single-arm dynamics: a two-state hidden chain for one item of content.

The hidden state is the user's interest in the item (low/high). Holding back
(no recommendation) pays a fixed subsidy and lets interest recover with chance
q per step; recommending pays a Bernoulli reward (certain when interest is
high, chance rho when low) and resets interest to low. The planner never sees
the state, only the belief pi = P(state is low).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

from .rng import RngStream


class ArmState(IntEnum):
    LOW = 0
    HIGH = 1


class Action(IntEnum):
    NO_REC = 0
    REC = 1


@dataclass(frozen=True)
class ArmParams:
    """User-dynamics triple (q, rho, lam).

    q     -- chance per held step that low interest recovers to high
    rho   -- chance a recommendation in the low state still pays off
    lam   -- deterministic subsidy for not recommending, in [0, 1)

    Constructors enforce the interior margin eta on q and rho. Boundary
    values (0 or 1) are for degenerate test scenarios only and must be
    requested explicitly with allow_boundary=True.
    """

    q: float
    rho: float
    lam: float = 0.0
    eta: float = field(default=0.01, repr=False, compare=False)
    allow_boundary: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 < self.eta < 0.5:
            raise ValueError(f"eta must lie in (0, 0.5), got {self.eta}")
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"lam must lie in [0, 1), got {self.lam}")
        if self.allow_boundary:
            lo, hi = 0.0, 1.0
        else:
            lo, hi = self.eta, 1.0 - self.eta
        for name, value in (("q", self.q), ("rho", self.rho)):
            if not lo <= value <= hi:
                raise ValueError(
                    f"{name}={value} outside [{lo}, {hi}]"
                    + ("" if self.allow_boundary else " (pass allow_boundary=True for degenerate tests)")
                )


def transition(state: ArmState, action: Action, params: ArmParams, rng: RngStream) -> ArmState:
    """Advance the hidden state one step.

    Held arms recover LOW -> HIGH with chance q and never decay; a
    recommendation resets the state to LOW with certainty. Consumes exactly
    one draw in the single random case (LOW held), none otherwise.
    """
    if action == Action.REC:
        return ArmState.LOW
    if state == ArmState.HIGH:
        return ArmState.HIGH
    return ArmState.HIGH if rng.uniform() < params.q else ArmState.LOW


def sample_reward(state: ArmState, action: Action, params: ArmParams, rng: RngStream) -> float:
    """Reward for (state, action): lam for holding, 1 for a high-state hit,
    Bernoulli(rho) for a low-state recommendation (the only random case)."""
    if action == Action.NO_REC:
        return params.lam
    if state == ArmState.HIGH:
        return 1.0
    return 1.0 if rng.uniform() < params.rho else 0.0


def step(state: ArmState, action: Action, params: ArmParams, rng: RngStream) -> tuple[float, ArmState]:
    """One environment step: reward is sampled first, then the transition.

    This draw order is the contract the simulation kernels replicate; keep it
    stable or seeded trajectories will diverge between implementations.
    """
    reward = sample_reward(state, action, params, rng)
    return reward, transition(state, action, params, rng)


def update_belief(pi: float, action: Action, params: ArmParams) -> float:
    """Belief recursion for pi = P(state LOW): a recommendation resets pi to 1,
    a held step shrinks it by the no-recovery factor (1 - q)."""
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"belief must lie in [0, 1], got {pi}")
    if action == Action.REC:
        return 1.0
    return (1.0 - params.q) * pi


def stay_low_prob(q: float, k: int) -> float:
    """(1 - q)**k by repeated multiplication.

    All call sites share this helper so the power is evaluated with one fixed
    multiply chain; the compiled and pure-Python kernels then agree bitwise.
    """
    w = 1.0
    base = 1.0 - q
    for _ in range(k):
        w *= base
    return w


def success_prob(params: ArmParams, k: int, allow_degenerate: bool = False) -> float:
    """Chance that recommending after k held steps (from a fresh LOW state)
    pays a unit reward: (1-q)^k * rho + (1 - (1-q)^k).

    k = 0 (recommending on consecutive steps) is outside the policy family and
    rejected unless allow_degenerate is set.
    """
    if k < 1 and not (allow_degenerate and k == 0):
        raise ValueError(f"waiting time k must be >= 1, got {k}")
    w = stay_low_prob(params.q, k)
    return w * params.rho + (1.0 - w)


class ArmSimulator:
    """Stateful wrapper around one arm: owns the hidden state and a stream.

    The constructor's params are the ground truth hidden from any learner that
    drives the simulator; learners should only use rewards returned by step().
    """

    def __init__(self, params: ArmParams, rng: RngStream, state: ArmState = ArmState.LOW):
        self._params = params
        self.rng = rng
        self.state = state
        self.t = 0

    def step(self, action: Action) -> float:
        reward, self.state = step(self.state, action, self._params, self.rng)
        self.t += 1
        return reward

    def reset(self, state: ArmState = ArmState.LOW) -> None:
        self.state = state
        self.t = 0
