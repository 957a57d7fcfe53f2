import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from weft.grid import Grid, SampledState, make_grid, make_reference_state

INV_PI = 1.0 / math.pi


def default_grid(hbar: float = 1.0) -> Grid:
    return make_grid(256, 0.1, hbar)


def small_grid() -> Grid:
    return make_grid(128, 0.15)


def ground(grid: Grid) -> SampledState:
    return make_reference_state("gaussian", grid)


def hermite(grid: Grid, k: int = 1) -> SampledState:
    return make_reference_state("hermite", grid, k=k)


def gaussian(grid: Grid, x0: float = 0.0, p0: float = 0.0, width: Optional[float] = None) -> SampledState:
    return make_reference_state("gaussian", grid, x0=x0, p0=p0, width=width)


def max_abs(a: Any, b: Any) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def write_config(path: Path, overrides: Dict[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(overrides, f)
    return path
