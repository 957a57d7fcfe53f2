"""Cross-Wigner transform, Grossmann–Royer operator, cross-ambiguity function
and the symplectic Fourier transform that links the last two.

Conventions (ħ-scaled, one degree of freedom)::

    W(φ,ψ)(x,p) = (1/2πħ) ∫ exp(+i p y/ħ) φ*(x + y/2) ψ(x - y/2) dy
                = (1/πħ) ⟨T_GR(x,p) φ | ψ⟩

    T_GR(x0,p0) ψ(x) = exp(2i p0 (x - x0)/ħ) ψ(2 x0 - x)

    F_σ a(x,p) = (1/2πħ) ∫∫ exp(-i (p x' - x p')/ħ) a(x',p') dx' dp'

    A(φ,ψ)(x,p) = F_σ W(φ,ψ)(x,p)
                = (1/2πħ) ∫ exp(-i p y/ħ) φ*(y - x/2) ψ(y + x/2) dy

The correlation variable is sampled with ``dy = 2·dx`` so that ``x ± y/2``
land on grid points. One period of the resulting Wigner samples spans
``πħ/dx`` in momentum, so the Wigner lattice has ``n`` momenta spaced
``πħ/(n·dx)``. The ambiguity lattice is its symplectic dual: lags spaced
``2·dx`` and momenta spaced ``2πħ/(n·dx)``.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GridError, PreconditionError
from .grid import (TWO_PI, Grid, PhaseSpaceField, Representation, SampledState, ambiguity_lattice,
                   inner_product, lattice_dft, wigner_lattice)
from .utils import run_row_blocks

logger = logging.getLogger(__name__)

SYMPLECTIC_SIGN = -1


@dataclass(frozen=True)
class PhasePoint:
    x: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.p)):
            raise PreconditionError(f"Phase point must be finite, got ({self.x}, {self.p})")


def _check_pair(phi: SampledState, psi: SampledState) -> Grid:
    if phi.grid != psi.grid:
        raise GridError(f"States live on different grids: {phi.grid} vs {psi.grid}")
    if phi.representation is not Representation.POSITION or psi.representation is not Representation.POSITION:
        raise PreconditionError("Phase-space transforms expect position-space states")
    return phi.grid


def _pair_products(phi_conj: np.ndarray, psi: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    n = psi.shape[0]
    valid = (left >= 0) & (left < n) & (right >= 0) & (right < n)
    products = phi_conj[np.clip(left, 0, n - 1)] * psi[np.clip(right, 0, n - 1)]
    return np.where(valid, products, 0.0)


def cross_wigner(phi: SampledState, psi: SampledState, workers: Optional[int] = None) -> PhaseSpaceField:
    grid = _check_pair(phi, psi)
    n, dx, hbar = grid.n, grid.dx, grid.hbar
    lattice = wigner_lattice(grid)
    lags = np.arange(n) - n // 2
    phi_conj = np.conj(phi.values)

    def rows_block(rows: range) -> np.ndarray:
        j = np.arange(rows.start, rows.stop)[:, None]
        correlation = _pair_products(phi_conj, psi.values, j + lags[None, :], j - lags[None, :])
        return lattice_dft(correlation, 1, -(n // 2) * 2.0 * dx, 2.0 * dx,
                           lattice["p_min"], lattice["dp"], +1, hbar)

    blocks = run_row_blocks(rows_block, n, workers)
    values = np.concatenate(blocks, axis=0) * (2.0 * dx / (TWO_PI * hbar))
    logger.debug(f"cross_wigner on n={n} in {len(blocks)} block(s)")
    return PhaseSpaceField(grid, values, kind="wigner", **lattice)


def wigner_distribution(psi: SampledState, workers: Optional[int] = None) -> PhaseSpaceField:
    return cross_wigner(psi, psi, workers)


def grossmann_royer_apply(z0: PhasePoint, psi: SampledState) -> SampledState:
    if psi.representation is not Representation.POSITION:
        raise PreconditionError("Grossmann-Royer operator acts on position-space states")
    grid = psi.grid
    j0 = grid.x_index(z0.x)
    x0 = grid.x[j0]
    i = np.arange(grid.n)
    reflected = 2 * j0 - i
    valid = (reflected >= 0) & (reflected < grid.n)
    phase = np.exp(2j * z0.p * (grid.x - x0) / grid.hbar)
    values = np.where(valid, phase * psi.values[np.clip(reflected, 0, grid.n - 1)], 0.0)
    return psi.with_values(values)


def cross_wigner_via_gr(phi: SampledState, psi: SampledState, z: PhasePoint) -> complex:
    grid = _check_pair(phi, psi)
    return inner_product(grossmann_royer_apply(z, phi), psi) / (math.pi * grid.hbar)


def symplectic_fourier(field: PhaseSpaceField, sign: int = SYMPLECTIC_SIGN) -> PhaseSpaceField:
    """F_σ with kernel exp(sign·i(p x' - x p')/ħ)/(2πħ); an involution for either sign.

    The output lattice is the Fourier dual of the input one with the index
    offsets of the two axes exchanged, so applying F_σ twice lands on the
    original lattice.
    """
    if sign not in (-1, 1):
        raise PreconditionError(f"Symplectic sign must be +1 or -1, got {sign}")
    grid = field.grid
    n, hbar = grid.n, grid.hbar
    dx_out = TWO_PI * hbar / (n * field.dp)
    dp_out = TWO_PI * hbar / (n * field.dx)
    x_out_min = (field.p_min / field.dp) * dx_out
    p_out_min = (field.x_min / field.dx) * dp_out
    over_p = lattice_dft(field.values, 1, field.p_min, field.dp, x_out_min, dx_out, -sign, hbar)
    over_x = lattice_dft(over_p, 0, field.x_min, field.dx, p_out_min, dp_out, sign, hbar)
    values = over_x.T * (field.cell / (TWO_PI * hbar))
    kind = {"wigner": "ambiguity", "ambiguity": "wigner"}.get(field.kind, f"symplectic_fourier({field.kind})")
    return PhaseSpaceField(grid, values, x_out_min, dx_out, p_out_min, dp_out, kind)


def cross_ambiguity(phi: SampledState, psi: SampledState) -> PhaseSpaceField:
    grid = _check_pair(phi, psi)
    n, dx, hbar = grid.n, grid.dx, grid.hbar
    lattice = ambiguity_lattice(grid)
    half_lags = (np.arange(n) - n // 2)[:, None]
    j = np.arange(n)[None, :]
    correlation = _pair_products(np.conj(phi.values), psi.values, j - half_lags, j + half_lags)
    values = lattice_dft(correlation, 1, grid.x_min, dx, lattice["p_min"], lattice["dp"], -1, hbar)
    return PhaseSpaceField(grid, values * (dx / (TWO_PI * hbar)), kind="ambiguity", **lattice)


if __name__ == "__main__":
    from .grid import make_grid, make_reference_state
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")

    demo_grid = make_grid(256, 0.1)
    ground = make_reference_state("gaussian", demo_grid)
    first = make_reference_state("hermite", demo_grid, k=1)
    print(f"W(psi0,psi0)(0,0) = {cross_wigner(ground, ground).value_at(0.0, 0.0):.8f} (1/pi = {1 / math.pi:.8f})")
    print(f"W(h1,h1)(0,0)     = {cross_wigner(first, first).value_at(0.0, 0.0):.8f}")
    print(f"A(psi0,psi0)(0,0) = {cross_ambiguity(ground, ground).value_at(0.0, 0.0):.8f}")
