"""
Run Configuration Module
YAML-backed run configuration with strict key checking, value validation,
command-line overrides and a canonical hash
"""

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from utils.errors import ConfigError
from utils.helpers import config_hash

PROFILES = ('desk', 'full')
REGIMES = ('ni', 'fractional')
METHODS = ('T1', 'T2', 'T3', 'IVX', 'OLS')
SETUPS = ('S1', 'S2', 'S3')
DEFAULT_SEED = 20240101


@dataclass
class IvxConfig:
    c_z: float = -1.0
    b: float = 0.95


@dataclass
class SizeConfig:
    regime: str = 'ni'
    c_values: Optional[List[float]] = None
    d_values: Optional[List[float]] = None
    deltas: Optional[List[float]] = None
    sizes: Optional[List[int]] = None
    methods: Optional[List[str]] = None
    level: float = 0.05


@dataclass
class PowerConfig:
    regime: str = 'ni'
    beta_grid: Optional[List[float]] = None
    c_values: Optional[List[float]] = None
    d_values: Optional[List[float]] = None
    deltas: Optional[List[float]] = None
    sizes: List[int] = field(default_factory=lambda: [250])
    methods: Optional[List[str]] = None
    level: float = 0.05


@dataclass
class EstimateConfig:
    input: Optional[str] = None
    y_column: str = 'y'
    x_column: str = 'x'
    setup: str = 'S3'
    beta0: float = 0.0
    empirical_kernels: bool = False


@dataclass
class PredictConfig:
    input: Optional[str] = None
    frequency: Optional[str] = None
    horizons: Optional[List[int]] = None
    setups: List[str] = field(default_factory=lambda: list(SETUPS))
    ep_transform: str = 'log'
    empirical_kernels: bool = True
    level: float = 0.05


@dataclass
class MemoryConfig:
    input: Optional[str] = None
    frequency: Optional[str] = None
    horizons: Optional[List[int]] = None
    b_grid: List[float] = field(default_factory=lambda: [0.55, 0.65, 0.75])
    ep_transform: str = 'log'


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    profile: str = 'desk'
    reps: Optional[int] = None
    threads: int = 1
    size: SizeConfig = field(default_factory=SizeConfig)
    power: PowerConfig = field(default_factory=PowerConfig)
    estimate: EstimateConfig = field(default_factory=EstimateConfig)
    predict: PredictConfig = field(default_factory=PredictConfig)
    memory: MemoryConfig = field(default_factory=MemoryConfig)
    ivx: IvxConfig = field(default_factory=IvxConfig)


_SECTIONS = {
    'size': SizeConfig,
    'power': PowerConfig,
    'estimate': EstimateConfig,
    'predict': PredictConfig,
    'memory': MemoryConfig,
    'ivx': IvxConfig,
}


def _build(cls, data: Any, path: str):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(path or 'config', "expected a mapping")

    known = {f.name for f in fields(cls)}
    kwargs = {}
    for key, value in data.items():
        dotted = f"{path}.{key}" if path else str(key)
        if key not in known:
            raise ConfigError(dotted, "unknown key")
        if cls is RunConfig and key in _SECTIONS:
            value = _build(_SECTIONS[key], value, dotted)
        kwargs[key] = value
    return cls(**kwargs)


def config_from_dict(data: Optional[Dict[str, Any]]) -> RunConfig:
    """Build and validate a RunConfig from plain data"""
    config = _build(RunConfig, data or {}, '')
    validate_config(config)
    return config


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """
    Load a YAML run configuration

    Args:
        path: Config file; defaults only when None

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: unreadable file, unknown keys or invalid values
    """
    if path is None:
        return config_from_dict({})
    try:
        data = yaml.safe_load(Path(path).read_text(encoding='utf-8'))
    except OSError as e:
        raise ConfigError('config', f"cannot read {path}: {e}")
    except yaml.YAMLError as e:
        raise ConfigError('config', f"invalid YAML in {path}: {e}")
    return config_from_dict(data)


def apply_overrides(config: RunConfig, overrides: Dict[str, Any]) -> RunConfig:
    """
    Return a copy with dotted-path overrides applied ('size.level', 'seed')

    None values are ignored so unset command-line flags keep file values.
    """
    for dotted, value in overrides.items():
        if value is None:
            continue
        parts = dotted.split('.')
        if len(parts) == 1:
            if parts[0] not in {f.name for f in fields(RunConfig)} or parts[0] in _SECTIONS:
                raise ConfigError(dotted, "unknown key")
            config = replace(config, **{parts[0]: value})
        elif len(parts) == 2 and parts[0] in _SECTIONS:
            section = getattr(config, parts[0])
            if parts[1] not in {f.name for f in fields(section)}:
                raise ConfigError(dotted, "unknown key")
            config = replace(config, **{parts[0]: replace(section, **{parts[1]: value})})
        else:
            raise ConfigError(dotted, "unknown key")
    validate_config(config)
    return config


def _number(path: str, value: Any, cast=float):
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected a number, got {value!r}")


def _check_all(path: str, values: Optional[List[Any]], predicate, message: str, cast=float):
    if values is None:
        return
    if not isinstance(values, (list, tuple)) or not values:
        raise ConfigError(path, "expected a non-empty list")
    for value in values:
        if not predicate(_number(path, value, cast)):
            raise ConfigError(path, f"{message}, got {value!r}")


def _check_choice(path: str, value: Any, choices):
    if value not in choices:
        raise ConfigError(path, f"must be one of {', '.join(choices)}, got {value!r}")


def _check_level(path: str, value: Any):
    if not 0 < _number(path, value) < 0.5:
        raise ConfigError(path, f"must lie in (0, 0.5), got {value!r}")


def validate_config(config: RunConfig):
    """
    Check every value of a RunConfig

    Raises:
        ConfigError: naming the dotted path of the first invalid value
    """
    seed = _number('seed', config.seed, int)
    if not 0 <= seed < 2 ** 64:
        raise ConfigError('seed', f"must be an unsigned 64-bit integer, got {config.seed!r}")
    _check_choice('profile', config.profile, PROFILES)
    if config.reps is not None and _number('reps', config.reps, int) < 100:
        raise ConfigError('reps', f"must be at least 100, got {config.reps!r}")
    if _number('threads', config.threads, int) < 1:
        raise ConfigError('threads', f"must be at least 1, got {config.threads!r}")

    for name in ('size', 'power'):
        section = getattr(config, name)
        _check_choice(f"{name}.regime", section.regime, REGIMES)
        _check_level(f"{name}.level", section.level)
        _check_all(f"{name}.c_values", section.c_values, lambda c: c <= 0, "c must be <= 0")
        _check_all(f"{name}.d_values", section.d_values, lambda d: 0 < d < 1.5, "d must lie in (0, 1.5)")
        _check_all(f"{name}.deltas", section.deltas, lambda d: -1 <= d <= 1, "|delta| must be <= 1")
        _check_all(f"{name}.sizes", section.sizes, lambda n: n >= 8, "n must be >= 8", int)
        for method in section.methods or []:
            _check_choice(f"{name}.methods", method, METHODS)
    _check_all('power.beta_grid', config.power.beta_grid, lambda b: b == b, "beta must be a number")

    _check_choice('estimate.setup', str(config.estimate.setup).upper(), SETUPS)
    _number('estimate.beta0', config.estimate.beta0)

    _check_level('predict.level', config.predict.level)
    for setup in config.predict.setups:
        _check_choice('predict.setups', str(setup).upper(), SETUPS)
    _check_all('predict.horizons', config.predict.horizons, lambda m: m >= 1, "horizons must be >= 1", int)
    _check_all('memory.horizons', config.memory.horizons, lambda m: m >= 1, "horizons must be >= 1", int)
    _check_all('memory.b_grid', config.memory.b_grid, lambda b: 0 < b < 1, "b must lie in (0, 1)")
    for name in ('predict', 'memory'):
        section = getattr(config, name)
        _check_choice(f"{name}.ep_transform", section.ep_transform, ('log', 'ratio'))
        if section.frequency is not None:
            _check_choice(f"{name}.frequency", section.frequency, ('monthly', 'quarterly'))

    if not _number('ivx.c_z', config.ivx.c_z) < 0:
        raise ConfigError('ivx.c_z', f"must be negative, got {config.ivx.c_z!r}")
    if not 0 < _number('ivx.b', config.ivx.b) < 1:
        raise ConfigError('ivx.b', f"must lie in (0, 1), got {config.ivx.b!r}")


def resolved_view(config: RunConfig, command: str) -> Dict[str, Any]:
    """Global settings plus the section a command reads; threads never affect results"""
    data = asdict(config)
    view = {key: data[key] for key in ('seed', 'profile', 'reps')}
    view['command'] = command
    view[command] = data[command]
    if command in ('size', 'power'):
        view['ivx'] = data['ivx']
    return view


def resolved_hash(config: RunConfig, command: str) -> str:
    """SHA-256 of the canonical resolved configuration of one command"""
    return config_hash(resolved_view(config, command))


def dump_config(config: RunConfig) -> str:
    """YAML rendering of a configuration"""
    return yaml.safe_dump(asdict(config), sort_keys=False)
