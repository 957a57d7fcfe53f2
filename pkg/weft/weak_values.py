"""Weak values as phase-space averages over the complex quasi-distribution

    ρ(φ,ψ)(z) = W(φ,ψ)(z) / ⟨φ|ψ⟩

plus the direct operator route ⟨φ|Â|ψ⟩/⟨φ|ψ⟩ used to cross-check it, the
marginal conditions, pointer readouts and the projector scan that rebuilds a
wavefunction from weak values of position projectors.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, NamedTuple, Optional, Tuple

import numpy as np

from .errors import GridError, OrthogonalStatesError, PreconditionError
from .grid import (TWO_PI, Grid, PhaseSpaceField, SampledState, hbar_fourier_at, inner_product,
                   make_reference_state)
from .phase_space import cross_ambiguity, cross_wigner, symplectic_fourier, wigner_lattice

logger = logging.getLogger(__name__)

DEFAULT_OVERLAP_TOLERANCE = 1e-10


class ObservableKind(Enum):
    COORDINATE_X = "coordinate_x"
    COORDINATE_P = "coordinate_p"
    GRIDDED = "gridded"
    POSITION_PROJECTOR = "position_projector"


@dataclass(frozen=True, eq=False)
class ObservableSymbol:
    kind: ObservableKind
    values: Optional[np.ndarray] = None
    x_index: Optional[int] = None

    @classmethod
    def coordinate_x(cls) -> "ObservableSymbol":
        return cls(ObservableKind.COORDINATE_X)

    @classmethod
    def coordinate_p(cls) -> "ObservableSymbol":
        return cls(ObservableKind.COORDINATE_P)

    @classmethod
    def gridded(cls, values: Any) -> "ObservableSymbol":
        return cls(ObservableKind.GRIDDED, values=np.asarray(values, dtype=complex))

    @classmethod
    def position_projector(cls, x_index: int) -> "ObservableSymbol":
        if x_index < 0:
            raise PreconditionError(f"Projector index must be non-negative, got {x_index}")
        return cls(ObservableKind.POSITION_PROJECTOR, x_index=int(x_index))

    @classmethod
    def parse(cls, text: str) -> "ObservableSymbol":
        """``x``, ``p`` or ``proj:<x_index>``, as accepted on the command line."""
        text = text.strip()
        if text == "x":
            return cls.coordinate_x()
        if text == "p":
            return cls.coordinate_p()
        if text.startswith("proj:"):
            try:
                return cls.position_projector(int(text[len("proj:"):]))
            except ValueError as e:
                raise PreconditionError(f"Bad projector observable {text!r}: {e}") from e
        raise PreconditionError(f"Unknown observable {text!r}; expected x, p or proj:<x_index>")

    def describe(self) -> str:
        if self.kind is ObservableKind.POSITION_PROJECTOR:
            return f"proj:{self.x_index}"
        return self.kind.value


@dataclass(frozen=True)
class WeakValueReport:
    value: complex
    pointer_x_mean: float
    pointer_p_mean: float
    g: float
    v: float
    hbar: float = 1.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "pointer_x_mean": self.pointer_x_mean,
            "pointer_p_mean": self.pointer_p_mean,
            "g": self.g,
            "v": self.v,
            "hbar": self.hbar,
        }


_COMPLEX_SCHEMA = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re", "im"],
    "additionalProperties": False,
}

# Output of the ``weak-value`` command. ``direct`` is absent for gridded symbols.
WEAK_VALUE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "weak-value",
    "type": "object",
    "properties": {
        "observable": {"type": "string", "pattern": "^(coordinate_x|coordinate_p|gridded|proj:[0-9]+)$"},
        "overlap": _COMPLEX_SCHEMA,
        "value": _COMPLEX_SCHEMA,
        "direct": _COMPLEX_SCHEMA,
        "pointer_x_mean": {"type": "number"},
        "pointer_p_mean": {"type": "number"},
        "g": {"type": "number"},
        "v": {"type": "number"},
        "hbar": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["observable", "overlap", "value", "pointer_x_mean", "pointer_p_mean", "g", "v", "hbar"],
    "additionalProperties": False,
}


class Marginals(NamedTuple):
    x_marginal: np.ndarray
    p_marginal: np.ndarray
    residuals: Tuple[float, float]


def checked_overlap(phi: SampledState, psi: SampledState, tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                    what: str = "<phi|psi>") -> complex:
    overlap = inner_product(phi, psi)
    if not abs(overlap) > tolerance:
        raise OrthogonalStatesError(what, overlap, tolerance)
    return overlap


def quasi_distribution_rho(phi: SampledState, psi: SampledState,
                           overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                           workers: Optional[int] = None) -> PhaseSpaceField:
    overlap = checked_overlap(phi, psi, overlap_tolerance)
    wigner = cross_wigner(phi, psi, workers)
    return wigner.with_values(wigner.values / overlap, kind="rho")


def _check_symbol(symbol: ObservableSymbol, n: int):
    if symbol.kind is ObservableKind.GRIDDED:
        if symbol.values is None or symbol.values.shape != (n, n):
            shape = None if symbol.values is None else symbol.values.shape
            raise GridError(f"Gridded symbol has shape {shape}, expected {(n, n)}")
    if symbol.kind is ObservableKind.POSITION_PROJECTOR and not 0 <= symbol.x_index < n:
        raise GridError(f"Projector index {symbol.x_index} outside [0, {n})")


def weak_value_from_rho(symbol: ObservableSymbol, rho: PhaseSpaceField) -> complex:
    """Σ A(x_j, p_k) ρ(x_j, p_k) dμ.

    The position projector is evaluated through the momentum integral of ρ
    at the projector's lattice point instead of a discretized delta.
    """
    n = rho.grid.n
    _check_symbol(symbol, n)
    if symbol.kind is ObservableKind.POSITION_PROJECTOR:
        return complex(np.sum(rho.values[symbol.x_index, :]) * rho.dp)
    if symbol.kind is ObservableKind.COORDINATE_X:
        weights = np.broadcast_to(rho.x[:, None], (n, n))
    elif symbol.kind is ObservableKind.COORDINATE_P:
        weights = np.broadcast_to(rho.p[None, :], (n, n))
    else:
        weights = symbol.values
    return complex(np.sum(weights * rho.values) * rho.cell)


def weak_value_direct(symbol: ObservableSymbol, phi: SampledState, psi: SampledState,
                      overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE) -> complex:
    grid = psi.grid
    _check_symbol(symbol, grid.n)
    if symbol.kind is ObservableKind.GRIDDED:
        raise PreconditionError("The direct route supports x, p and position projectors only")
    overlap = checked_overlap(phi, psi, overlap_tolerance)
    if symbol.kind is ObservableKind.COORDINATE_X:
        numerator = np.vdot(phi.values, grid.x * psi.values) * grid.dx
    elif symbol.kind is ObservableKind.COORDINATE_P:
        # full Fourier sums at arbitrary p keep the FFT lattice out of the oracle
        p = grid.p
        numerator = np.vdot(hbar_fourier_at(phi, p), p * hbar_fourier_at(psi, p)) * grid.dp
    else:
        j = symbol.x_index
        numerator = np.conj(phi.values[j]) * psi.values[j]
    return complex(numerator / overlap)


def _require_wigner_lattice(rho: PhaseSpaceField, psi: SampledState):
    if rho.grid != psi.grid:
        raise GridError(f"Field and states live on different grids: {rho.grid} vs {psi.grid}")
    expected = wigner_lattice(psi.grid)
    if not all(math.isclose(rho.lattice()[key], value, rel_tol=1e-12, abs_tol=1e-12)
               for key, value in expected.items()):
        raise GridError(f"Field lattice {rho.lattice()} is not the Wigner lattice {expected}")


def marginals(rho: PhaseSpaceField, phi: SampledState, psi: SampledState) -> Marginals:
    _require_wigner_lattice(rho, psi)
    phi._check_partner(psi)
    overlap = inner_product(phi, psi)
    if overlap == 0:
        raise OrthogonalStatesError("<phi|psi>", overlap, 0.0)
    x_marginal = np.sum(rho.values, axis=1) * rho.dp
    p_marginal = np.sum(rho.values, axis=0) * rho.dx
    x_expected = np.conj(phi.values) * psi.values / overlap
    p_expected = np.conj(hbar_fourier_at(phi, rho.p)) * hbar_fourier_at(psi, rho.p) / overlap
    residuals = (float(np.max(np.abs(x_marginal - x_expected))), float(np.max(np.abs(p_marginal - p_expected))))
    logger.debug(f"marginal residuals x={residuals[0]:.3e} p={residuals[1]:.3e}")
    return Marginals(x_marginal, p_marginal, residuals)


def _projector_rho(psi: SampledState, p0: float, overlap_tolerance: float,
                   workers: Optional[int]) -> PhaseSpaceField:
    plane_wave = make_reference_state("plane_wave", psi.grid, p0=p0)
    checked_overlap(plane_wave, psi, overlap_tolerance, what=f"F psi(p0={p0})")
    return quasi_distribution_rho(plane_wave, psi, overlap_tolerance, workers)


def projector_weak_value_scan(psi: SampledState, p0: float,
                              overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                              workers: Optional[int] = None) -> np.ndarray:
    """Weak values of Π̂_x at every lattice x, postselected on the momentum p0.

    Each value is the momentum integral of ρ(φ_p0, ψ) at that x.
    """
    rho = _projector_rho(psi, p0, overlap_tolerance, workers)
    return np.sum(rho.values, axis=1) * rho.dp


def projector_scan_closed_form(psi: SampledState, p0: float,
                               overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE) -> np.ndarray:
    grid = psi.grid
    grid.p_index(p0)
    transform = complex(hbar_fourier_at(psi, p0)[0])
    if not abs(transform) > overlap_tolerance:
        raise OrthogonalStatesError(f"F psi(p0={p0})", transform, overlap_tolerance)
    return np.exp(-1j * p0 * grid.x / grid.hbar) * psi.values / (math.sqrt(TWO_PI * grid.hbar) * transform)


def lundeen_reconstruct(scan: Any, p0: float, k: complex, grid: Grid, label: Optional[str] = None) -> SampledState:
    """Invert the projector scan: ψ(x) = k (2πħ)^(1/2) e^(i p0 x/ħ) scan(x), with k = Fψ(p0)."""
    scan = np.asarray(scan, dtype=complex)
    if scan.shape != (grid.n,):
        raise GridError(f"Scan has shape {scan.shape}, expected {(grid.n,)}")
    values = complex(k) * math.sqrt(TWO_PI * grid.hbar) * np.exp(1j * p0 * grid.x / grid.hbar) * scan
    return SampledState(grid, values, label=label)


def rho_shape_residual(psi: SampledState, p0: float,
                       overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                       workers: Optional[int] = None) -> float:
    """x-dependence left in ρ(φ_p0, ψ)(x, p)·exp(-2i(p - p0)x/ħ).

    Only rows within an eighth of the window length of its centre enter: there
    the reflected plane wave stays inside the window over the whole support of
    a state confined to the central half.
    """
    grid = psi.grid
    rho = _projector_rho(psi, p0, overlap_tolerance, workers)
    rows = np.abs(rho.x - grid.center) <= grid.length / 8.0
    phase = np.exp(-2j * np.outer(rho.x[rows], rho.p - p0) / grid.hbar)
    profile = rho.values[rows, :] * phase
    reference = profile[profile.shape[0] // 2]
    return float(np.max(np.abs(profile - reference[None, :])))


def rho_from_ambiguity(phi: SampledState, psi: SampledState,
                       overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE) -> PhaseSpaceField:
    overlap = checked_overlap(phi, psi, overlap_tolerance)
    wigner = symplectic_fourier(cross_ambiguity(phi, psi))
    return wigner.with_values(wigner.values / overlap, kind="rho")


def pointer_readout(value: complex, g: float, v: float, hbar: float = 1.0) -> WeakValueReport:
    value = complex(value)
    return WeakValueReport(value=value,
                           pointer_x_mean=g * value.real,
                           pointer_p_mean=(2.0 * g * v / hbar) * value.imag,
                           g=g, v=v, hbar=hbar)


if __name__ == "__main__":
    from .grid import make_grid
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

    demo_grid = make_grid(256, 0.1)
    ground = make_reference_state("gaussian", demo_grid)
    shifted = make_reference_state("gaussian", demo_grid, x0=1.0)
    rho = quasi_distribution_rho(shifted, ground)
    x_hat = ObservableSymbol.coordinate_x()
    print(f"sum rho dmu      = {rho.integral():.10f}")
    print(f"<x>_w (rho)      = {weak_value_from_rho(x_hat, rho):.10f}")
    print(f"<x>_w (direct)   = {weak_value_direct(x_hat, shifted, ground):.10f}")
    print(f"scan(0) at p0=0  = {projector_weak_value_scan(ground, 0.0)[demo_grid.x_index(0.0)]:.8f}")
