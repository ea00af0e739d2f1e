"""Run configuration: flat ``key = value`` files plus ``--set key=value`` overrides."""
import io
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv.parser import parse_stream
from pydantic import BaseModel, Field, ValidationError, field_validator

from duopoly.config import settings
from duopoly.errors import ConfigError, GridTooLarge
from duopoly.integrator.runge_kutta import METHODS
from duopoly.model.core import PARAM_KEYS, ModelParams
from duopoly.reports import config_hash
from duopoly.verifier.certification import SuiteOptions

logger = logging.getLogger(__name__)

SWEEP_PREFIX = "sweep."


class SimulateOptions(BaseModel):
    u0: float = Field(1.0, ge=0, allow_inf_nan=False)
    v0: float = Field(1.0, ge=0, allow_inf_nan=False)
    t_end: float = Field(50.0, gt=0, allow_inf_nan=False)
    dt: float = Field(default_factory=lambda: settings.dt, gt=0, allow_inf_nan=False)
    method: str = Field(default_factory=lambda: settings.method)

    @field_validator("method")
    @classmethod
    def known_method(cls, v: str) -> str:
        if v not in METHODS:
            raise ValueError(f"expected one of {', '.join(METHODS)}")
        return v


class DiscreteOptions(BaseModel):
    x0: float = Field(0.5, ge=0, allow_inf_nan=False)
    y0: float = Field(0.5, ge=0, allow_inf_nan=False)
    steps: int = Field(100, ge=0)


class SweepRange(BaseModel):
    """Inclusive ``count`` evenly spaced values from start to stop."""

    start: float = Field(gt=0, allow_inf_nan=False)
    stop: float = Field(gt=0, allow_inf_nan=False)
    count: int = Field(ge=1)

    def values(self) -> List[float]:
        if self.count == 1:
            return [self.start]
        return [float(x) for x in np.linspace(self.start, self.stop, self.count)]


class SweepOptions(BaseModel):
    ranges: Dict[str, SweepRange] = {}
    t_end: float = Field(50.0, gt=0, allow_inf_nan=False)
    dt: float = Field(1e-2, gt=0, allow_inf_nan=False)
    u0: float = Field(5.0, gt=0, allow_inf_nan=False)
    v0: float = Field(5.0, gt=0, allow_inf_nan=False)
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)

    @property
    def size(self) -> int:
        return math.prod(r.count for r in self.ranges.values())


class RunConfig(BaseModel):
    """Validated run configuration shared by every command."""

    values: Dict[str, float]
    seed: int = Field(default_factory=lambda: settings.seed)
    simulate: SimulateOptions = SimulateOptions()
    discrete: DiscreteOptions = DiscreteOptions()
    sweep: SweepOptions = SweepOptions()
    verify: SuiteOptions = SuiteOptions()
    canonical: str = ""
    # binding line numbers for diagnostics; None for --set overrides
    lines: Dict[str, Optional[int]] = {}

    @property
    def config_sha256(self) -> str:
        return config_hash(self.canonical)

    @property
    def params(self) -> ModelParams:
        """Fixed model parameters; every key must have a value."""
        for key in PARAM_KEYS:
            if key not in self.values:
                raise ConfigError("missing model parameter", key=key)
        return ModelParams.from_mapping({k: self.values[k] for k in PARAM_KEYS})

    def sweep_base(self) -> Dict[str, float]:
        """Values for the parameters that are not swept; every other key must be fixed."""
        for key in PARAM_KEYS:
            if key not in self.values and key not in self.sweep.ranges:
                raise ConfigError("missing model parameter (neither fixed nor swept)", key=key)
        return {k: v for k, v in self.values.items() if k not in self.sweep.ranges}


# option key -> (block, field) targets
OPTION_KEYS: Dict[str, List[Tuple[str, str]]] = {
    "u0": [("simulate", "u0")],
    "v0": [("simulate", "v0")],
    "t_end": [("simulate", "t_end"), ("verify", "t_end")],
    "dt": [("simulate", "dt"), ("verify", "dt")],
    "method": [("simulate", "method")],
    "x0": [("discrete", "x0")],
    "y0": [("discrete", "y0")],
    "steps": [("discrete", "steps")],
    "sweep_t_end": [("sweep", "t_end")],
    "sweep_dt": [("sweep", "dt")],
    "sweep_u0": [("sweep", "u0")],
    "sweep_v0": [("sweep", "v0")],
    "workers": [("sweep", "workers")],
    "suite": [("verify", "suite")],
    "draws": [("verify", "draws")],
    "samples": [("verify", "samples")],
    "pairs": [("verify", "pairs")],
    "param_sets": [("verify", "param_sets")],
    "gap_t_end": [("verify", "gap_t_end")],
    "kappa": [("verify", "kappa")],
    "eta": [("verify", "eta")],
}

Binding = Tuple[str, Optional[int]]


def _binding_line(original) -> int:
    # the parser's mark starts before any blank lines preceding the key
    text = original.string
    return original.line + text[: len(text) - len(text.lstrip())].count("\n")


def read_bindings(text: str) -> Dict[str, Binding]:
    """key -> (raw value, line) from a flat key-value text; later keys win."""
    bindings = {}
    for b in parse_stream(io.StringIO(text)):
        line = _binding_line(b.original)
        if b.error:
            raise ConfigError(f"cannot parse {b.original.string.strip()!r}", line=line)
        if b.key is None:
            continue
        if b.value is None:
            raise ConfigError("missing value", key=b.key, line=line)
        bindings[b.key] = (b.value.strip(), line)
    return bindings


def parse_override(raw: str) -> Tuple[str, str]:
    key, sep, value = raw.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"--set expects key=value, got {raw!r}")
    return key.strip(), value.strip()


def _number(key: str, raw: str, line: Optional[int]) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{raw!r} is not a number", key=key, line=line) from None
    if not math.isfinite(value):
        raise ConfigError(f"{raw!r} is not finite", key=key, line=line)
    return value


def _integer(key: str, raw: str, line: Optional[int]) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{raw!r} is not an integer", key=key, line=line) from None


def _sweep_range(key: str, raw: str, line: Optional[int]) -> SweepRange:
    parts = raw.split(":")
    if len(parts) != 3:
        raise ConfigError(f"expected start:stop:count, got {raw!r}", key=key, line=line)
    start, stop = (_number(key, x, line) for x in parts[:2])
    count = _integer(key, parts[2], line)
    if count < 1:
        raise ConfigError("range is empty", key=key, line=line)
    if start <= 0 or stop <= 0:
        raise ConfigError("range bounds must be strictly positive", key=key, line=line)
    return SweepRange(start=start, stop=stop, count=count)


_INT_FIELDS = {"steps", "workers", "draws", "samples", "pairs", "param_sets", "seed"}


def _coerce(key: str, raw: str, line: Optional[int]):
    if key == "method":
        return raw
    if key == "suite":
        return [name.strip() for name in raw.split(",") if name.strip()]
    if key in _INT_FIELDS:
        return _integer(key, raw, line)
    return _number(key, raw, line)


def build_config(bindings: Dict[str, Binding]) -> RunConfig:
    """Route bindings to their blocks and validate."""
    values: Dict[str, float] = {}
    blocks: Dict[str, Dict[str, object]] = {"simulate": {}, "discrete": {}, "sweep": {}, "verify": {}}
    ranges: Dict[str, SweepRange] = {}
    origin: Dict[Tuple[str, str], str] = {}
    seed = settings.seed

    for key, (raw, line) in bindings.items():
        if key in PARAM_KEYS:
            value = _number(key, raw, line)
            if value <= 0:
                raise ConfigError("model parameters must be strictly positive", key=key, line=line)
            values[key] = value
        elif key.startswith(SWEEP_PREFIX):
            param = key[len(SWEEP_PREFIX):]
            if param not in PARAM_KEYS:
                raise ConfigError(f"cannot sweep unknown parameter {param!r}", key=key, line=line)
            ranges[param] = _sweep_range(key, raw, line)
        elif key == "seed":
            seed = _integer(key, raw, line)
        elif key in OPTION_KEYS:
            value = _coerce(key, raw, line)
            for block, name in OPTION_KEYS[key]:
                blocks[block][name] = value
                origin[(block, name)] = key
        else:
            raise ConfigError("unknown key", key=key, line=line)

    blocks["sweep"]["ranges"] = ranges
    canonical = "\n".join(f"{k}={bindings[k][0]}" for k in sorted(bindings))
    config = RunConfig(
        values=values,
        seed=seed,
        simulate=_block(SimulateOptions, "simulate", blocks, origin, bindings),
        discrete=_block(DiscreteOptions, "discrete", blocks, origin, bindings),
        sweep=_block(SweepOptions, "sweep", blocks, origin, bindings),
        verify=_block(SuiteOptions, "verify", blocks, origin, bindings),
        canonical=canonical,
        lines={k: line for k, (_, line) in bindings.items()},
    )
    if config.sweep.size > settings.sweep_cap:
        raise GridTooLarge(f"sweep grid has {config.sweep.size} points, cap is {settings.sweep_cap}")
    return config


def _block(model, block: str, blocks, origin: Dict[Tuple[str, str], str], bindings: Dict[str, Binding]):
    try:
        return model(**blocks[block])
    except ValidationError as e:
        err = e.errors()[0]
        name = str(err["loc"][0]) if err["loc"] else None
        key = origin.get((block, name))
        line = bindings[key][1] if key in bindings else None
        raise ConfigError(err["msg"], key=key, line=line) from None


def load_run_config(
    path: Optional[Path] = None,
    overrides: Sequence[str] = (),
    seed: Optional[int] = None,
) -> RunConfig:
    """Read ``path`` (if any), apply ``--set`` overrides and an explicit seed, validate."""
    bindings: Dict[str, Binding] = {}
    if path is not None:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e}")
        bindings.update(read_bindings(text))
        logger.debug(f"Read {len(bindings)} bindings from {path}")
    for raw in overrides:
        key, value = parse_override(raw)
        bindings[key] = (value, None)
    if seed is not None:
        bindings["seed"] = (str(seed), None)
    return build_config(bindings)
