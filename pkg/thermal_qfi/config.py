from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from thermal_qfi.errors import DomainError
from thermal_qfi.utils.io import read_yaml


# Mirrors configs/base.yaml; used when no config file is given.
DEFAULTS: Dict[str, Any] = {
    "project": {"name": "thermal-qfi", "run_name": "default"},
    "qfi": {"dtau": 1.0e-3, "dtau_floor": 1.0e-6, "rtol": 1.0e-5, "max_levels": 8},
    "sweep": {"tau_min": 0.01, "tau_max": 0.99, "steps": 99, "coincidence_rtol": 0.02},
    "parallel": {"mode": "thread", "max_workers": 4},
    "logging": {"log_dir": None, "save_events": True},
}


def deep_merge(a: Dict[str, Any], b: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge dict b into a recursively (b wins).
    """
    out = dict(a)
    for k, v in (b or {}).items():
        if k in out and isinstance(out[k], dict) and isinstance(v, dict):
            out[k] = deep_merge(out[k], v)
        else:
            out[k] = v
    return out


@dataclass
class Config:
    """
    Small wrapper around a dict config with helpers.
    """
    data: Dict[str, Any] = field(default_factory=lambda: deep_merge({}, DEFAULTS))
    source_path: Optional[str] = None

    def get(self, key: str, default: Any = None) -> Any:
        return self.data.get(key, default)

    def section(self, key: str) -> Dict[str, Any]:
        v = self.data.get(key) or {}
        if not isinstance(v, dict):
            raise DomainError(f"Config section '{key}' must be a mapping, got {type(v).__name__}")
        return v

    def resolve_path(self, *keys: str, default: Optional[str] = None) -> Optional[str]:
        cur: Any = self.data
        for k in keys:
            if not isinstance(cur, dict) or k not in cur:
                return default
            cur = cur[k]
        if cur is None:
            return default
        if not isinstance(cur, str):
            raise DomainError(f"Config path {'.'.join(keys)} must be str, got {type(cur).__name__}")
        return cur


def load_config(path: str) -> Config:
    """
    Load a YAML config on top of DEFAULTS.
    """
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"Config not found: {p}")
    data = read_yaml(p) or {}
    if not isinstance(data, dict):
        raise DomainError(f"Config root must be a mapping, got {type(data).__name__}")
    return Config(data=deep_merge(DEFAULTS, data), source_path=str(p))


def load_and_merge(base_path: Optional[str], override_path: Optional[str] = None) -> Config:
    base = load_config(base_path) if base_path else Config()
    if not override_path:
        return base
    p = Path(override_path)
    if not p.exists():
        raise FileNotFoundError(f"Config not found: {p}")
    override = read_yaml(p) or {}
    if not isinstance(override, dict):
        raise DomainError(f"Config root must be a mapping, got {type(override).__name__}")
    return Config(data=deep_merge(base.data, override), source_path=f"{base.source_path} + {p}")
