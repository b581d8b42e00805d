"""Experiment configuration: the full description of one learning experiment."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .core import ArmParams

_REQUIRED_KEYS = ("true_model", "lambda", "grid", "horizon", "runs", "k_max", "seed")
_OPTIONAL_KEYS = ("prior", "out_dir")


class ConfigError(ValueError):
    """Raised for malformed or inconsistent experiment configurations."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment.

    The candidate-model grid is the cartesian product of q_values and
    rho_values (q outer, rho inner); the true model must be one of its points.
    prior is either "uniform" or one weight per grid model in that order.
    Run r draws its learner stream from (seed, 2r) and its oracle stream from
    (seed, 2r + 1).
    """

    true_model: tuple[float, float]
    lam: float
    q_values: tuple[float, ...]
    rho_values: tuple[float, ...]
    horizon: int
    runs: int
    k_max: int
    seed: int
    prior: tuple[float, ...] | str = "uniform"
    out_dir: str | None = None
    eta: float = field(default=0.01, repr=False)

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if self.k_max < 1:
            raise ConfigError(f"k_max must be >= 1, got {self.k_max}")
        if not 0.0 <= self.lam < 1.0:
            raise ConfigError(f"lambda must lie in [0, 1), got {self.lam}")
        if not self.q_values or not self.rho_values:
            raise ConfigError("grid axes must be non-empty")
        for axis, vals in (("q", self.q_values), ("rho", self.rho_values)):
            for v in vals:
                if not self.eta <= v <= 1.0 - self.eta:
                    raise ConfigError(f"grid {axis} value {v} outside interior [{self.eta}, {1 - self.eta}]")
            if len(set(vals)) != len(vals):
                raise ConfigError(f"grid {axis} values contain duplicates")
        self.true_index  # validates membership
        if not isinstance(self.prior, str):
            if len(self.prior) != len(self.models):
                raise ConfigError(
                    f"prior has {len(self.prior)} weights for {len(self.models)} grid models"
                )
            if any(w < 0 for w in self.prior) or sum(self.prior) <= 0:
                raise ConfigError("prior weights must be non-negative with positive total")
        elif self.prior != "uniform":
            raise ConfigError(f"prior must be 'uniform' or a weight list, got {self.prior!r}")

    @property
    def models(self) -> tuple[tuple[float, float], ...]:
        return tuple((q, rho) for q in self.q_values for rho in self.rho_values)

    @property
    def true_index(self) -> int:
        for i, (q, rho) in enumerate(self.models):
            if abs(q - self.true_model[0]) < 1e-12 and abs(rho - self.true_model[1]) < 1e-12:
                return i
        raise ConfigError(f"true model {self.true_model} does not lie on the grid")

    @property
    def true_params(self) -> ArmParams:
        return ArmParams(self.true_model[0], self.true_model[1], self.lam, eta=self.eta)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        unknown = sorted(set(raw) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        missing = sorted(set(_REQUIRED_KEYS) - set(raw))
        if missing:
            raise ConfigError(f"missing config keys: {', '.join(missing)}")
        grid = raw["grid"]
        if not isinstance(grid, dict) or set(grid) != {"q", "rho"}:
            raise ConfigError('grid must be an object with exactly the keys "q" and "rho"')
        true_model = raw["true_model"]
        if not isinstance(true_model, (list, tuple)) or len(true_model) != 2:
            raise ConfigError("true_model must be a [q, rho] pair")
        prior = raw.get("prior", "uniform")
        if isinstance(prior, (list, tuple)):
            prior = tuple(float(w) for w in prior)
        try:
            return cls(
                true_model=(float(true_model[0]), float(true_model[1])),
                lam=float(raw["lambda"]),
                q_values=tuple(float(v) for v in grid["q"]),
                rho_values=tuple(float(v) for v in grid["rho"]),
                horizon=int(raw["horizon"]),
                runs=int(raw["runs"]),
                k_max=int(raw["k_max"]),
                seed=int(raw["seed"]),
                prior=prior,
                out_dir=raw.get("out_dir"),
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path: str | Path, overrides: dict | None = None) -> "ExperimentConfig":
        """Load from a JSON file, then apply overrides (top-level keys only)."""
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        try:
            raw = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {p}: {exc}") from exc
        if overrides:
            raw = {**raw, **overrides}
        return cls.from_dict(raw)
