"""Scenario configuration and strict JSON ingestion.

JSON keys mirror the dataclass field names in lower_snake_case, one
nested object per sub-config. Unknown keys are rejected rather than
ignored so a typo cannot silently run the default.
"""

import dataclasses
import json
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Type

from .attacks import AttackProfile
from .bfo import BfoConfig
from .ledger import ChainCostModel
from .network import EnergyModel, NetworkConfig
from .seeding import mix64

_BFO_SEED_TAG = 0xB0F0


class ConfigError(ValueError):
    """Raised for malformed or out-of-range configuration input."""


@dataclass
class ScenarioConfig:
    network: NetworkConfig = field(default_factory=NetworkConfig)
    attack: AttackProfile = field(default_factory=AttackProfile)
    bfo: BfoConfig = field(default_factory=BfoConfig)
    cost_model: ChainCostModel = field(default_factory=ChainCostModel)
    comm_count: int = 500
    miner_fraction: float = 0.10
    sidechain_enabled: bool = True
    resplit_period: int = 50
    miner_refresh_period: int = 10
    trust_window: Optional[int] = None

    def __post_init__(self):
        if self.comm_count < 0:
            raise ValueError("comm_count must be >= 0")
        if not 0.0 < self.miner_fraction <= 1.0:
            raise ValueError("miner_fraction must be in (0, 1]")
        if self.resplit_period < 1:
            raise ValueError("resplit_period must be >= 1")
        if self.miner_refresh_period < 1:
            raise ValueError("miner_refresh_period must be >= 1")
        if self.trust_window is not None and self.trust_window < 1:
            raise ValueError("trust_window must be >= 1 when set")

    def reseeded(self, seed: int) -> "ScenarioConfig":
        """Copy with all RNG streams re-derived from one master seed."""
        return replace(
            self,
            network=replace(self.network, rng_seed=seed),
            bfo=replace(self.bfo, rng_seed=mix64(seed, _BFO_SEED_TAG)),
        )

    def with_attacks(self, enabled: bool) -> "ScenarioConfig":
        if enabled:
            fraction = self.attack.fraction if self.attack.fraction > 0 else 0.10
            return replace(self, attack=replace(self.attack, fraction=fraction))
        return replace(self, attack=self.attack.disabled())


_NESTED: Dict[Type, Dict[str, Type]] = {
    ScenarioConfig: {
        "network": NetworkConfig,
        "attack": AttackProfile,
        "bfo": BfoConfig,
        "cost_model": ChainCostModel,
    },
    NetworkConfig: {"energy_costs": EnergyModel},
}


def _build(cls: Type, data: Any, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or cls.__name__}: expected an object")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"{path or cls.__name__}: unknown keys {unknown}")
    nested = _NESTED.get(cls, {})
    kwargs = {}
    for key, value in data.items():
        if key in nested:
            kwargs[key] = _build(nested[key], value, f"{path}{key}.")
        else:
            kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path or cls.__name__}: {exc}") from exc


def config_from_dict(data: Dict[str, Any]) -> ScenarioConfig:
    return _build(ScenarioConfig, data, "")


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)
