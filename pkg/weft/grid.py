"""Discretization substrate: grids, sampled states, phase-space fields.

All integrals are plain Riemann sums with weight ``dx`` (or ``dp`` on the
momentum lattice). Samples outside the window are taken to be zero.

The Fourier transform is the unitary ħ-scaled one::

    Fψ(p) = (2πħ)^(-1/2) Σ_j exp(-i p x_j / ħ) ψ(x_j) dx

evaluated with one FFT and the phase factors that account for the lattice
origins ``x_min`` and ``p_min`` (see :func:`lattice_dft`). Because
``dx·dp·n = 2πħ`` the forward/inverse pair is exactly unitary on the lattice.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np
from numpy.polynomial import hermite as np_hermite

from .errors import GridError, PreconditionError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
LATTICE_SNAP = 1e-6
DUALITY_RTOL = 1e-9


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    x_min: float
    dx: float
    n: int
    hbar: float = 1.0

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)):
            raise GridError(f"Point count must be an integer, got {self.n!r}")
        if not _is_power_of_two(int(self.n)) or self.n < 2:
            raise GridError(f"Point count must be a power of two, got {self.n}")
        if not math.isfinite(self.dx) or self.dx <= 0:
            raise GridError(f"Spacing dx must be positive, got {self.dx}")
        if not math.isfinite(self.hbar) or self.hbar <= 0:
            raise GridError(f"hbar must be positive, got {self.hbar}")
        if not math.isfinite(self.x_min):
            raise GridError(f"x_min must be finite, got {self.x_min}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def dp(self) -> float:
        return TWO_PI * self.hbar / (self.n * self.dx)

    @property
    def p_min(self) -> float:
        return -(self.n // 2) * self.dp

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.n) * self.dx

    @property
    def p(self) -> np.ndarray:
        return self.p_min + np.arange(self.n) * self.dp

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def center(self) -> float:
        return self.x_min + 0.5 * (self.n - 1) * self.dx

    def is_symmetric(self) -> bool:
        return abs(self.x_min + (self.n // 2) * self.dx) <= 1e-12 * max(1.0, abs(self.x_min))

    def x_index(self, x: float) -> int:
        return _snap(x, self.x_min, self.dx, self.n, "position")

    def p_index(self, p: float) -> int:
        return _snap(p, self.p_min, self.dp, self.n, "momentum")

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "dx": self.dx, "x_min": self.x_min, "hbar": self.hbar}


def _snap(value: float, origin: float, step: float, n: int, what: str) -> int:
    position = (value - origin) / step
    index = int(round(position))
    if abs(position - index) > LATTICE_SNAP or not 0 <= index < n:
        raise GridError(f"{what} {value} is not on the {what} lattice (origin {origin}, step {step}, {n} points)")
    return index


def make_grid(n: int, dx: float, hbar: float = 1.0) -> Grid:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not _is_power_of_two(int(n)) or n < 8:
        raise GridError(f"make_grid needs a power-of-two point count n >= 8, got {n!r}")
    if not math.isfinite(dx) or dx <= 0:
        raise GridError(f"Spacing dx must be positive, got {dx}")
    if not math.isfinite(hbar) or hbar <= 0:
        raise GridError(f"hbar must be positive, got {hbar}")
    grid = Grid(x_min=-(int(n) // 2) * dx, dx=float(dx), n=int(n), hbar=float(hbar))
    logger.debug(f"Built grid n={grid.n}, dx={grid.dx}, dp={grid.dp}, hbar={grid.hbar}")
    return grid


class Representation(Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


def _frozen_array(values: Any, shape: tuple, what: str) -> np.ndarray:
    array = np.array(values, dtype=complex)
    if array.shape != shape:
        raise GridError(f"{what} has shape {array.shape}, expected {shape}")
    if not np.all(np.isfinite(array)):
        raise PreconditionError(f"{what} contains non-finite entries")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SampledState:
    grid: Grid
    values: np.ndarray
    representation: Representation = Representation.POSITION
    label: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, (self.grid.n,), "state samples"))

    @property
    def measure(self) -> float:
        return self.grid.dx if self.representation is Representation.POSITION else self.grid.dp

    @property
    def coordinates(self) -> np.ndarray:
        return self.grid.x if self.representation is Representation.POSITION else self.grid.p

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.measure))

    def with_values(self, values: Any, label: Optional[str] = None) -> "SampledState":
        return SampledState(self.grid, values, self.representation, label if label is not None else self.label)

    def _check_partner(self, other: "SampledState"):
        if other.grid != self.grid:
            raise GridError(f"States live on different grids: {self.grid} vs {other.grid}")
        if other.representation is not self.representation:
            raise GridError("States are in different representations")

    def __add__(self, other: "SampledState") -> "SampledState":
        self._check_partner(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "SampledState") -> "SampledState":
        self._check_partner(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "SampledState":
        return self.with_values(complex(scalar) * self.values)

    __rmul__ = __mul__


def wigner_lattice(grid: Grid) -> Dict[str, float]:
    dp = math.pi * grid.hbar / (grid.n * grid.dx)
    return {"x_min": grid.x_min, "dx": grid.dx, "p_min": -(grid.n // 2) * dp, "dp": dp}


def ambiguity_lattice(grid: Grid) -> Dict[str, float]:
    return {"x_min": -(grid.n // 2) * 2.0 * grid.dx, "dx": 2.0 * grid.dx,
            "p_min": (grid.x_min / grid.dx) * grid.dp, "dp": grid.dp}


def _lattice_matches(lattice: Dict[str, float], expected: Dict[str, float]) -> bool:
    scale = max(abs(v) for v in expected.values())
    return all(math.isclose(lattice[key], expected[key], rel_tol=DUALITY_RTOL, abs_tol=DUALITY_RTOL * scale)
               for key in expected)


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    """Complex samples over an (x, p) lattice with cell measure ``dx·dp``.

    The lattice is carried explicitly and must be either the Wigner lattice
    (dx, πħ/(n·dx)) or the ambiguity lattice (2·dx, 2πħ/(n·dx)) of ``grid``.
    """
    grid: Grid
    values: np.ndarray
    x_min: float
    dx: float
    p_min: float
    dp: float
    kind: str = "field"

    def __post_init__(self):
        n = self.grid.n
        object.__setattr__(self, "values", _frozen_array(self.values, (n, n), "field samples"))
        if self.dx <= 0 or self.dp <= 0:
            raise GridError(f"Field spacings must be positive, got dx={self.dx}, dp={self.dp}")
        if not any(_lattice_matches(self.lattice(), expected)
                   for expected in (wigner_lattice(self.grid), ambiguity_lattice(self.grid))):
            raise GridError(f"Field lattice {self.lattice()} is neither the Wigner nor the ambiguity lattice of {self.grid}")

    @property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.grid.n) * self.dx

    @property
    def p(self) -> np.ndarray:
        return self.p_min + np.arange(self.grid.n) * self.dp

    @property
    def cell(self) -> float:
        return self.dx * self.dp

    def lattice(self) -> Dict[str, float]:
        return {"x_min": self.x_min, "dx": self.dx, "p_min": self.p_min, "dp": self.dp}

    def same_lattice(self, other: "PhaseSpaceField") -> bool:
        return other.grid == self.grid and all(
            math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)
            for a, b in zip(self.lattice().values(), other.lattice().values())
        )

    def with_values(self, values: Any, kind: Optional[str] = None) -> "PhaseSpaceField":
        return PhaseSpaceField(self.grid, values, self.x_min, self.dx, self.p_min, self.dp,
                               kind if kind is not None else self.kind)

    def conj(self) -> "PhaseSpaceField":
        return self.with_values(np.conj(self.values))

    def integral(self) -> complex:
        return complex(np.sum(self.values) * self.cell)

    def index_of(self, x: float, p: float) -> tuple:
        return (_snap(x, self.x_min, self.dx, self.grid.n, "field position"),
                _snap(p, self.p_min, self.dp, self.grid.n, "field momentum"))

    def value_at(self, x: float, p: float) -> complex:
        j, k = self.index_of(x, p)
        return complex(self.values[j, k])

    def __add__(self, other: "PhaseSpaceField") -> "PhaseSpaceField":
        if not self.same_lattice(other):
            raise GridError("Fields live on different lattices")
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "PhaseSpaceField") -> "PhaseSpaceField":
        if not self.same_lattice(other):
            raise GridError("Fields live on different lattices")
        return self.with_values(self.values - other.values)

    def __mul__(self, scalar: complex) -> "PhaseSpaceField":
        return self.with_values(complex(scalar) * self.values)

    __rmul__ = __mul__


def lattice_dft(values: np.ndarray, axis: int, src_min: float, src_step: float,
                dst_min: float, dst_step: float, sign: int, hbar: float) -> np.ndarray:
    """Evaluate ``Σ_j exp(sign·i·q_b·s_j/ħ) v_j`` for every ``q_b`` with one FFT.

    ``s_j = src_min + j·src_step`` and ``q_b = dst_min + b·dst_step`` along
    ``axis``; the two steps must satisfy ``src_step·dst_step·n = 2πħ``.
    """
    values = np.asarray(values, dtype=complex)
    n = values.shape[axis]
    if abs(src_step * dst_step * n / (TWO_PI * hbar) - 1.0) > DUALITY_RTOL:
        raise GridError(f"Lattices are not Fourier-dual: {src_step}·{dst_step}·{n} != 2πħ")
    index = np.arange(n)
    shape = [1] * values.ndim
    shape[axis] = n
    pre = np.exp(sign * 1j * dst_min * index * src_step / hbar).reshape(shape)
    post = np.exp(sign * 1j * (dst_min * src_min + index * dst_step * src_min) / hbar).reshape(shape)
    if sign < 0:
        transformed = np.fft.fft(values * pre, axis=axis)
    else:
        transformed = np.fft.ifft(values * pre, axis=axis) * n
    return transformed * post


def inner_product(phi: SampledState, psi: SampledState) -> complex:
    phi._check_partner(psi)
    return complex(np.vdot(phi.values, psi.values) * phi.measure)


def normalize(psi: SampledState) -> SampledState:
    norm = psi.norm()
    if not norm > 0:
        raise PreconditionError("Cannot normalize the zero state")
    return psi.with_values(psi.values / norm)


class FourierDirection(Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def hbar_fourier(psi: SampledState, direction: Union[FourierDirection, str] = FourierDirection.FORWARD) -> SampledState:
    direction = FourierDirection(direction)
    grid = psi.grid
    prefactor = 1.0 / math.sqrt(TWO_PI * grid.hbar)
    if direction is FourierDirection.FORWARD:
        if psi.representation is not Representation.POSITION:
            raise PreconditionError("Forward transform expects a position-space state")
        values = prefactor * grid.dx * lattice_dft(psi.values, 0, grid.x_min, grid.dx, grid.p_min, grid.dp, -1, grid.hbar)
        return SampledState(grid, values, Representation.MOMENTUM, psi.label)
    if psi.representation is not Representation.MOMENTUM:
        raise PreconditionError("Inverse transform expects a momentum-space state")
    values = prefactor * grid.dp * lattice_dft(psi.values, 0, grid.p_min, grid.dp, grid.x_min, grid.dx, +1, grid.hbar)
    return SampledState(grid, values, Representation.POSITION, psi.label)


def hbar_fourier_at(psi: SampledState, p_values: Any) -> np.ndarray:
    """Fψ at arbitrary momenta by direct quadrature (no FFT, no lattice constraint)."""
    if psi.representation is not Representation.POSITION:
        raise PreconditionError("hbar_fourier_at expects a position-space state")
    grid = psi.grid
    p_values = np.atleast_1d(np.asarray(p_values, dtype=float))
    kernel = np.exp(-1j * np.outer(p_values, grid.x) / grid.hbar)
    return kernel @ psi.values * (grid.dx / math.sqrt(TWO_PI * grid.hbar))


class ReferenceKind(Enum):
    GAUSSIAN = "gaussian"
    HERMITE = "hermite"
    PLANE_WAVE = "plane_wave"


def make_reference_state(kind: Union[ReferenceKind, str], grid: Grid, x0: float = 0.0, p0: float = 0.0,
                         width: Optional[float] = None, k: int = 0) -> SampledState:
    """Gaussian, Hermite function or plane wave sampled on ``grid``.

    Gaussian and Hermite states are normalized on the grid; their default
    width is sqrt(ħ), which makes the k-th Hermite function an eigenfunction of
    the Fourier transform. The plane wave carries exactly the (2πħ)^(-1/2)
    prefactor and is not grid-normalized.
    """
    kind = ReferenceKind(kind)
    x = grid.x
    if width is None:
        width = math.sqrt(grid.hbar)
    if kind is ReferenceKind.PLANE_WAVE:
        grid.p_index(p0)
        values = np.exp(1j * p0 * x / grid.hbar) / math.sqrt(TWO_PI * grid.hbar)
        return SampledState(grid, values, label=f"plane_wave(p0={p0})")
    if not width > 0:
        raise PreconditionError(f"Width must be positive, got {width}")
    xi = (x - x0) / width
    if kind is ReferenceKind.GAUSSIAN:
        values = (math.pi * width ** 2) ** -0.25 * np.exp(-0.5 * xi ** 2 + 1j * p0 * (x - x0) / grid.hbar)
        label = f"gaussian(x0={x0}, p0={p0}, width={width})"
    else:
        if k < 0:
            raise PreconditionError(f"Hermite order must be non-negative, got {k}")
        coefficients = np.zeros(k + 1)
        coefficients[k] = 1.0
        scale = 1.0 / math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi) * width)
        values = scale * np_hermite.hermval(xi, coefficients) * np.exp(-0.5 * xi ** 2)
        values = values * np.exp(1j * p0 * (x - x0) / grid.hbar)
        label = f"hermite(k={k}, x0={x0}, width={width})"
    return normalize(SampledState(grid, values, label=label))


def mass_outside_central(psi: SampledState, fraction: float = 0.5) -> float:
    grid = psi.grid
    half_width = 0.5 * fraction * grid.length
    outside = np.abs(psi.coordinates - grid.center) > half_width
    total = np.sum(np.abs(psi.values) ** 2)
    if total == 0:
        return 0.0
    return float(np.sum(np.abs(psi.values[outside]) ** 2) / total)


if __name__ == "__main__":
    logging.basicConfig(level=logging.DEBUG, format="%(asctime)s - %(levelname)s - %(message)s")
    demo_grid = make_grid(256, 0.1)
    ground = make_reference_state("gaussian", demo_grid)
    spectrum = hbar_fourier(ground)
    print(f"dp = {demo_grid.dp:.6f}")
    print(f"<psi0|psi0> = {inner_product(ground, ground):.12f}")
    print(f"max |F psi0 - psi0| = {np.max(np.abs(spectrum.values - (math.pi ** -0.25) * np.exp(-0.5 * demo_grid.p ** 2))):.2e}")
