import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from .utils import default_worker_count, get_config_path, get_report_path

logger = logging.getLogger(__name__)


class ConfigManager:

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = Path(config_path) if config_path is not None else get_config_path()
        self._config: Dict[str, Any] = {}
        self._load_config()

    def _load_config(self):
        if self.config_path.exists():
            try:
                with open(self.config_path, 'r') as f:
                    loaded = json.load(f)
                self._config = self._merge(self._get_default_config(), loaded)
            except json.JSONDecodeError:
                logger.warning(f"Could not decode config file at {self.config_path}. Starting with default config.")
                self._config = self._get_default_config()
        else:
            self._config = self._get_default_config()
            self.save_config()

    def _merge(self, base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        merged = copy.deepcopy(base)
        for key, value in override.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key] = self._merge(merged[key], value)
            else:
                merged[key] = value
        return merged

    def _get_default_config(self) -> Dict[str, Any]:
        return {
            "grid": {"n": 256, "dx": 0.1, "hbar": 1.0},
            "seed": 42,
            "overlap_tolerance": 1e-10,
            "tolerances": {
                "algebraic": 1e-10,
                "quadrature": 1e-6,
                "reconstruction": 1e-4,
                "gamma_independence": 1e-5,
                "lundeen": 1e-7,
            },
            "worker_threads": default_worker_count(),
            "csv_precision": 17,
            "report_dir": str(get_report_path()),
        }

    def save_config(self):
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w') as f:
                json.dump(self._config, f, indent=4)
        except OSError as e:
            logger.warning(f"Could not write config file {self.config_path}: {e}")

    def get(self, key: str, default: Any = None) -> Any:
        current_level: Any = self._config
        for k in key.split('.'):
            if isinstance(current_level, dict) and k in current_level:
                current_level = current_level[k]
            else:
                return default
        return current_level

    def set(self, key: str, value: Any):
        keys = key.split('.')
        current_level = self._config
        for i, k in enumerate(keys):
            if i == len(keys) - 1:
                current_level[k] = value
            else:
                if k not in current_level or not isinstance(current_level[k], dict):
                    current_level[k] = {}
                current_level = current_level[k]
        self.save_config()

    def get_all(self) -> Dict[str, Any]:
        return copy.deepcopy(self._config)
