"""Rebuild one state of a pair from its cross-Wigner transform and the other.

With any auxiliary γ,

    φ = (2/⟨ψ|γ⟩) Σ_z0 W(φ,ψ)*(z0) T_GR(z0)γ dμ
    ψ = (2/⟨φ|γ⟩) Σ_z0 W(φ,ψ)(z0)  T_GR(z0)γ dμ

For a fixed reflection centre x_j0 the momentum sum collapses to one inverse
FFT of the W row, so each row of the lattice costs O(n log n). Rows are
split into contiguous blocks and partial sums are added in block order.
"""
import logging
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import GridError
from .grid import Grid, PhaseSpaceField, SampledState, inner_product, make_reference_state, mass_outside_central
from .phase_space import wigner_lattice
from .utils import run_row_blocks
from .weak_values import DEFAULT_OVERLAP_TOLERANCE, checked_overlap

logger = logging.getLogger(__name__)

INTERIOR_MASS_LIMIT = 1e-8


class Which(Enum):
    PHI = "phi"
    PSI = "psi"


class ReconstructionQuality(NamedTuple):
    max_abs: float
    l2: float
    fidelity: float
    degenerate: bool

    def to_json(self):
        return self._asdict()


def default_gamma(grid: Grid) -> SampledState:
    return make_reference_state("gaussian", grid, x0=float(grid.x[grid.n // 2]))


def _warn_if_not_interior(state: SampledState, role: str):
    outside = mass_outside_central(state)
    if outside > INTERIOR_MASS_LIMIT:
        logger.warning(f"{role} has {outside:.2e} of its mass outside the central half of the window; "
                       f"reflections will be truncated")


def _check_field(W: PhaseSpaceField, state: SampledState):
    if W.grid != state.grid:
        raise GridError(f"Field and states live on different grids: {W.grid} vs {state.grid}")
    lattice = wigner_lattice(W.grid)
    if not np.allclose(list(W.lattice().values()), list(lattice.values()), rtol=1e-12, atol=1e-12):
        raise GridError(f"Reconstruction expects a field on the Wigner lattice {lattice}, got {W.lattice()}")


def _gr_superpose(weights: np.ndarray, W: PhaseSpaceField, gamma: SampledState,
                  workers: Optional[int] = None) -> np.ndarray:
    """Σ_z0 weights(z0) [T_GR(z0)γ](x_i) dμ for every lattice x_i."""
    grid = W.grid
    n, dx, hbar = grid.n, grid.dx, grid.hbar
    columns = np.arange(n)
    gamma_values = gamma.values

    def block_sum(rows: range) -> np.ndarray:
        centres = np.arange(rows.start, rows.stop)[:, None]
        offsets = columns[None, :] - centres
        momentum_sums = np.fft.ifft(weights[rows.start:rows.stop, :], axis=1) * n
        kernel = np.take_along_axis(momentum_sums, offsets % n, axis=1)
        kernel = kernel * np.exp(2j * W.p_min * offsets * dx / hbar)
        reflected = 2 * centres - columns[None, :]
        valid = (reflected >= 0) & (reflected < n)
        reflected_gamma = np.where(valid, gamma_values[np.clip(reflected, 0, n - 1)], 0.0)
        return np.sum(kernel * reflected_gamma, axis=0)

    total = np.zeros(n, dtype=complex)
    for partial in run_row_blocks(block_sum, n, workers):
        total = total + partial
    return total * W.cell


def reconstruct_phi(W: PhaseSpaceField, psi: SampledState, gamma: SampledState,
                    overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                    workers: Optional[int] = None) -> SampledState:
    _check_field(W, psi)
    psi._check_partner(gamma)
    overlap = checked_overlap(psi, gamma, overlap_tolerance, what="<psi|gamma>")
    _warn_if_not_interior(gamma, "gamma")
    values = (2.0 / overlap) * _gr_superpose(np.conj(W.values), W, gamma, workers)
    return SampledState(W.grid, values, label="reconstructed phi")


def reconstruct_psi(W: PhaseSpaceField, phi: SampledState, gamma: SampledState,
                    overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                    workers: Optional[int] = None) -> SampledState:
    _check_field(W, phi)
    phi._check_partner(gamma)
    overlap = checked_overlap(phi, gamma, overlap_tolerance, what="<phi|gamma>")
    _warn_if_not_interior(gamma, "gamma")
    values = (2.0 / overlap) * _gr_superpose(W.values, W, gamma, workers)
    return SampledState(W.grid, values, label="reconstructed psi")


def reconstruct_from_rho(rho: PhaseSpaceField, known: SampledState, gamma: SampledState, overlap: complex,
                         which: Union[Which, str], overlap_tolerance: float = DEFAULT_OVERLAP_TOLERANCE,
                         workers: Optional[int] = None) -> SampledState:
    """Same as the W routes with W = ⟨φ|ψ⟩ρ; ``overlap`` is not recoverable from ρ itself."""
    which = Which(which)
    W = rho.with_values(complex(overlap) * rho.values, kind="wigner")
    if which is Which.PHI:
        return reconstruct_phi(W, known, gamma, overlap_tolerance, workers)
    return reconstruct_psi(W, known, gamma, overlap_tolerance, workers)


def reconstruction_error(recovered: SampledState, truth: SampledState) -> ReconstructionQuality:
    truth._check_partner(recovered)
    difference = recovered.values - truth.values
    max_abs = float(np.max(np.abs(difference)))
    l2 = float(np.sqrt(np.sum(np.abs(difference) ** 2) * truth.measure))
    norms = recovered.norm() * truth.norm()
    if norms == 0:
        logger.warning("Fidelity undefined for a zero state; reporting 0")
        return ReconstructionQuality(max_abs, l2, 0.0, True)
    fidelity = min(1.0, abs(inner_product(truth, recovered)) / norms)
    return ReconstructionQuality(max_abs, l2, float(fidelity), False)


def absolute_convergence_bound(W: PhaseSpaceField, gamma: SampledState) -> Tuple[float, float]:
    """Discrete Cauchy–Schwarz bound for the reconstruction sums.

    Returns ``(lhs, rhs)`` with lhs = max_x Σ_z0 |W(z0)| |T_GR(z0)γ(x)| dμ and
    rhs = ‖W‖ ‖γ‖ sqrt(n·dp) on the field lattice; lhs <= rhs always.
    """
    _check_field(W, gamma)
    n = W.grid.n
    centres = np.arange(n)[None, :]
    reflected = 2 * centres - np.arange(n)[:, None]
    valid = (reflected >= 0) & (reflected < n)
    reflected_gamma = np.where(valid, np.abs(gamma.values)[np.clip(reflected, 0, n - 1)], 0.0)
    row_mass = np.sum(np.abs(W.values), axis=1)
    lhs = float(np.max(reflected_gamma @ row_mass) * W.cell)
    w_norm = float(np.sqrt(np.sum(np.abs(W.values) ** 2) * W.cell))
    rhs = w_norm * gamma.norm() * float(np.sqrt(n * W.dp))
    return lhs, rhs


def theta_battery(grid: Grid) -> List[SampledState]:
    hermites = [make_reference_state("hermite", grid, k=k) for k in range(5)]
    displaced = [make_reference_state("gaussian", grid, x0=x0, p0=p0, width=width)
                 for x0, p0, width in ((0.5, 0.0, 1.0), (-1.0, 0.5, 0.8), (1.5, -1.0, 1.2),
                                       (0.0, 2.0, 0.7), (-0.7, -0.3, 1.5))]
    return hermites + displaced


def dense_subspace_residual(chi: SampledState, phi: SampledState,
                            thetas: Optional[Sequence[SampledState]] = None) -> float:
    if thetas is None:
        thetas = theta_battery(phi.grid)
    return max(abs(inner_product(chi, theta) - inner_product(phi, theta)) for theta in thetas)


if __name__ == "__main__":
    from .grid import make_grid
    from .phase_space import cross_wigner
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

    demo_grid = make_grid(128, 0.15)
    ground = make_reference_state("gaussian", demo_grid)
    shifted = make_reference_state("gaussian", demo_grid, x0=1.0)
    field = cross_wigner(ground, shifted)
    recovered = reconstruct_phi(field, shifted, default_gamma(demo_grid))
    print(f"reconstruct_phi: {reconstruction_error(recovered, ground)}")
    recovered = reconstruct_psi(field, ground, default_gamma(demo_grid))
    print(f"reconstruct_psi: {reconstruction_error(recovered, shifted)}")
