"""Run configuration: presets, TOML files and command-line overrides.

Resolution order is preset < config file < flags.  Unknown keys are
rejected, and every value is checked before any computation starts.
"""
import dataclasses
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import states
from .analysis import MEASURES, ClassifierConfig
from .dynamics import DEFAULT_ORIENTATIONS, Orientation
from .errors import ConfigError, NotUnitVector

STATE_FAMILIES = ("alpha_gamma", "isotropic", "alpha_beta", "schmidt", "maximally_mixed", "matrix")
FORMATS = ("csv", "json", "text")

PRESETS = {
    "fig1": dict(state="alpha_gamma", alpha=0.1, gamma=0.5, measures=["negativity"]),
    "fig2": dict(state="alpha_gamma", alpha=0.1, gamma=0.5, measures=["lqu"]),
    "fig3": dict(state="alpha_beta", alpha=0.4, beta=0.7, measures=["negativity"]),
    "fig4": dict(state="alpha_beta", alpha=0.4, beta=0.7, measures=["lqu"]),
}


@dataclass
class RunConfig:
    state: Optional[str] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    kind: Optional[int] = None
    sign: int = 1
    matrix: Optional[str] = None
    orientations: List[Tuple[str, Orientation]] = field(
        default_factory=lambda: list(DEFAULT_ORIENTATIONS.items()))
    tau_max: float = 20.0
    steps: int = 401
    measures: List[str] = field(default_factory=lambda: ["negativity", "lqu"])
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    out: str = "-"
    format: Optional[str] = None
    seed: int = 12345
    trajectories: int = 10000
    dump_states: bool = False
    preset: Optional[str] = None

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["orientations"] = {oid: list(n.as_tuple()) for oid, n in self.orientations}
        return d

    def initial_state(self):
        """The density matrix selected by ``state`` and its parameters."""
        s = self.state
        if s == "alpha_gamma":
            return states.rho_alpha_gamma(self.alpha, self.gamma)
        if s == "isotropic":
            return states.isotropic(self.alpha)
        if s == "alpha_beta":
            return states.rho_alpha_beta(self.alpha, self.beta)
        if s == "schmidt":
            return states.pure_density(states.schmidt_state(self.kind, self.alpha, self.sign))
        if s == "maximally_mixed":
            return states.maximally_mixed()
        if s == "matrix":
            from .io import read_matrix
            return read_matrix(self.matrix)
        raise ConfigError(f"unknown state family {s!r}")


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}
_CLASSIFIER_FIELDS = {f.name for f in dataclasses.fields(ClassifierConfig)}
_REQUIRED = {
    "alpha_gamma": ("alpha", "gamma"),
    "isotropic": ("alpha",),
    "alpha_beta": ("alpha", "beta"),
    "schmidt": ("kind", "alpha"),
    "maximally_mixed": (),
    "matrix": ("matrix",),
}


def parse_orientation(text: str, index: int) -> Tuple[str, Orientation]:
    """``"x,y,z"`` or ``"id=x,y,z"``; the vector is normalized."""
    oid = f"n{index}"
    if "=" in text:
        oid, text = text.split("=", 1)
        oid = oid.strip()
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"orientation {text!r}: expected three comma-separated numbers") from None
    return oid, _orientation(vals, f"orientation {oid!r}")


def _orientation(vals, where):
    if len(vals) != 3:
        raise ConfigError(f"{where}: expected 3 components, got {len(vals)}")
    try:
        return Orientation.normalized(*vals)
    except NotUnitVector:
        raise ConfigError(f"{where}: zero or non-finite vector {vals}") from None


def _orientations_from_file(value):
    if isinstance(value, dict):
        items = list(value.items())
    elif isinstance(value, list):
        items = [(f"n{i}", v) for i, v in enumerate(value)]
    else:
        raise ConfigError("orientations: expected a table {id = [x, y, z]} or a list of triples")
    out = []
    for oid, v in items:
        if not isinstance(v, list):
            raise ConfigError(f"orientations.{oid}: expected [x, y, z]")
        out.append((str(oid), _orientation([float(x) for x in v], f"orientations.{oid}")))
    return out


def load_config_file(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return data


def _apply(cfg: RunConfig, data: dict, source: str, base_dir: str = "."):
    for key, value in data.items():
        if key not in _FIELDS:
            raise ConfigError(f"{source}: unknown key {key!r}")
        if key == "classifier":
            if not isinstance(value, dict):
                raise ConfigError(f"{source}: 'classifier' must be a table")
            bad = set(value) - _CLASSIFIER_FIELDS
            if bad:
                raise ConfigError(f"{source}: unknown classifier key(s) {sorted(bad)}")
            cfg.classifier = dataclasses.replace(cfg.classifier, **{k: float(v) for k, v in value.items()})
        elif key == "orientations":
            cfg.orientations = value if source == "flags" else _orientations_from_file(value)
        elif key == "measures" and isinstance(value, str):
            cfg.measures = [m.strip() for m in value.split(",") if m.strip()]
        elif key == "matrix" and source != "flags" and value is not None:
            cfg.matrix = os.path.join(base_dir, value)
        else:
            setattr(cfg, key, value)


def _check_type(name, value, types):
    if value is not None and not isinstance(value, types):
        raise ConfigError(f"{name}: expected {types}, got {value!r}")


def resolve(preset: Optional[str] = None, config_path: Optional[str] = None,
            overrides: Optional[Dict] = None) -> RunConfig:
    cfg = RunConfig()
    file_data = load_config_file(config_path) if config_path else {}
    preset = (overrides or {}).get("preset") or file_data.get("preset") or preset
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        _apply(cfg, PRESETS[preset], f"preset {preset}")
        cfg.preset = preset
    if config_path:
        _apply(cfg, file_data, config_path, os.path.dirname(os.path.abspath(config_path)))
    if overrides:
        _apply(cfg, {k: v for k, v in overrides.items() if v is not None}, "flags")
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig):
    if cfg.state is None:
        raise ConfigError("state: no initial state given (use --state, a config file or --preset)")
    if cfg.state not in STATE_FAMILIES:
        raise ConfigError(f"state: unknown family {cfg.state!r}; choose from {STATE_FAMILIES}")
    for name in _REQUIRED[cfg.state]:
        if getattr(cfg, name) is None:
            raise ConfigError(f"state {cfg.state!r} needs '{name}'")
    for name in ("alpha", "beta", "gamma", "tau_max"):
        _check_type(name, getattr(cfg, name), (int, float))
    for name in ("steps", "seed", "trajectories", "sign"):
        _check_type(name, getattr(cfg, name), int)
    if cfg.kind is not None:
        _check_type("kind", cfg.kind, int)
    if not (isinstance(cfg.tau_max, (int, float)) and np.isfinite(cfg.tau_max) and cfg.tau_max > 0):
        raise ConfigError(f"tau_max must be > 0, got {cfg.tau_max!r}")
    if cfg.steps < 2:
        raise ConfigError(f"steps must be >= 2, got {cfg.steps}")
    if cfg.trajectories < 1:
        raise ConfigError(f"trajectories must be >= 1, got {cfg.trajectories}")
    if not cfg.orientations:
        raise ConfigError("at least one orientation is required")
    ids = [oid for oid, _ in cfg.orientations]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"duplicate orientation ids in {ids}")
    if not cfg.measures:
        raise ConfigError("at least one measure is required")
    for m in cfg.measures:
        if m not in MEASURES:
            raise ConfigError(f"measure: unknown {m!r}; choose from {sorted(MEASURES)}")
    if cfg.format is not None and cfg.format not in FORMATS:
        raise ConfigError(f"format: unknown {cfg.format!r}; choose from {FORMATS}")
    if cfg.state == "matrix" and not isinstance(cfg.matrix, str):
        raise ConfigError("matrix: expected a file path")
