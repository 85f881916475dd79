"""Uniform-grid Fourier machinery on symmetric tensor grids.

Transform convention (symmetric normalization):

    forward:  uhat(xi) = (2 pi)^(-n/2) integral exp(-i<x,xi>) u(x) dx
    inverse:  u(x)     = (2 pi)^(-n/2) integral exp(+i<x,xi>) uhat(xi) dxi

The discrete grids are symmetric about 0 with xi_j = (j - N/2) dxi and
x_j = (j - N/2) dx, dx = 2 pi / (N dxi).  With these choices the centered DFT
(fftshift o fft o ifftshift) approximates the continuous integrals once the
dx^n / dxi^n quadrature factors are applied, and the centered Gaussian
exp(-x^2/2) is self-dual.  R^n is discretized periodically (torus); accuracy
is controlled by decay-based admissibility checks rather than truncation
analysis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AccuracyError,
    AccuracyWarning,
    DimensionMismatchError,
    GridTooSmallError,
    InputError,
)

__all__ = [
    "FrequencyGrid",
    "SpatialField",
    "SpectralField",
    "fourier_forward",
    "fourier_inverse",
    "GriddedMeasure",
    "synthesize_measure",
    "auto_frequency_grid",
    "apply_multiplier",
    "apply_convolution",
    "apply_symbol_multiplier",
    "check_contraction",
    "check_commutation",
    "ContractionReport",
    "CommutationReport",
    "gaussian_field",
    "random_band_limited_field",
]


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric tensor grid in frequency space and its induced spatial grid.

    shape[i] is the (power of two) point count along axis i and dxi[i] the
    frequency spacing; the induced spatial spacing is dx = 2 pi / (N dxi).
    """

    shape: tuple = (256,)
    dxi: tuple = (0.1,)

    def __post_init__(self):
        shape = tuple(int(n) for n in np.atleast_1d(np.asarray(self.shape, dtype=int)))
        dxi_val = np.atleast_1d(np.asarray(self.dxi, dtype=float))
        if dxi_val.size == 1 and len(shape) > 1:
            dxi_val = np.repeat(dxi_val, len(shape))
        dxi = tuple(float(d) for d in dxi_val)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "dxi", dxi)
        if len(shape) not in (1, 2):
            raise InputError("only dimensions 1 and 2 are supported")
        if len(dxi) != len(shape):
            raise InputError("dxi must provide one spacing per axis")
        for n in shape:
            if n < 4 or (n & (n - 1)) != 0:
                raise InputError(f"points per axis must be a power of two >= 4, got {n}")
        if any(d <= 0 for d in dxi):
            raise InputError("dxi must be positive")

    @property
    def n(self) -> int:
        return len(self.shape)

    @property
    def dx(self) -> tuple:
        return tuple(2.0 * np.pi / (n * d) for n, d in zip(self.shape, self.dxi))

    @property
    def cell_volume_x(self) -> float:
        return float(np.prod(self.dx))

    @property
    def cell_volume_xi(self) -> float:
        return float(np.prod(self.dxi))

    def xi_axis(self, axis: int = 0) -> np.ndarray:
        n = self.shape[axis]
        return (np.arange(n) - n // 2) * self.dxi[axis]

    def x_axis(self, axis: int = 0) -> np.ndarray:
        n = self.shape[axis]
        return (np.arange(n) - n // 2) * self.dx[axis]

    def xi_points(self) -> np.ndarray:
        """All frequency nodes, shape (*shape, n)."""
        axes = [self.xi_axis(i) for i in range(self.n)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def x_points(self) -> np.ndarray:
        axes = [self.x_axis(i) for i in range(self.n)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)

    def boundary_mask(self) -> np.ndarray:
        """Nodes on the outermost frequency shell (any index 0 or N-1)."""
        mask = np.zeros(self.shape, dtype=bool)
        for axis in range(self.n):
            idx = [slice(None)] * self.n
            idx[axis] = 0
            mask[tuple(idx)] = True
            idx[axis] = self.shape[axis] - 1
            mask[tuple(idx)] = True
        return mask


def _check_grid_values(grid: FrequencyGrid, values) -> np.ndarray:
    values = np.asarray(values, dtype=complex)
    if values.shape != grid.shape:
        raise DimensionMismatchError(
            f"values shape {values.shape} does not match grid shape {grid.shape}"
        )
    return values


@dataclass(frozen=True)
class SpatialField:
    """Complex values on the spatial grid nodes of a FrequencyGrid."""

    grid: FrequencyGrid
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "values", _check_grid_values(self.grid, self.values))

    def l2(self) -> float:
        """Grid L2 norm approximating the continuum norm."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume_x))

    def sup(self) -> float:
        return float(np.abs(self.values).max())

    def with_values(self, values) -> "SpatialField":
        return SpatialField(self.grid, values)


@dataclass(frozen=True)
class SpectralField:
    """Complex values on the frequency grid nodes."""

    grid: FrequencyGrid
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        object.__setattr__(self, "values", _check_grid_values(self.grid, self.values))

    def l2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume_xi))

    def sup(self) -> float:
        return float(np.abs(self.values).max())

    def with_values(self, values) -> "SpectralField":
        return SpectralField(self.grid, values)


def _centered_fft(values: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(values)))


def _centered_ifft(values: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(values)))


def fourier_forward(u: SpatialField) -> SpectralField:
    g = u.grid
    factor = (2.0 * np.pi) ** (-g.n / 2.0) * g.cell_volume_x
    return SpectralField(g, factor * _centered_fft(u.values))


def fourier_inverse(uhat: SpectralField) -> SpatialField:
    g = uhat.grid
    factor = (2.0 * np.pi) ** (-g.n / 2.0) * g.cell_volume_xi * float(np.prod(g.shape))
    return SpatialField(g, factor * _centered_ifft(uhat.values))


# ---------------------------------------------------------------------------
# Measure synthesis: density of the probability measure whose characteristic
# exponent is b(s; .), via inverse transform of exp(-b)/(2 pi)^(n/2).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GriddedMeasure:
    """Discrete density approximation of a probability measure.

    Density values may dip slightly negative (Gibbs artifacts); the size of
    that dip is reported in ``negativity`` and never silently clamped here.
    """

    grid: FrequencyGrid
    density: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mass: float = 0.0
    negativity: float = 0.0
    boundary_decay: float = 0.0

    def __post_init__(self):
        density = np.asarray(self.density, dtype=float)
        if density.shape != self.grid.shape:
            raise DimensionMismatchError("density shape does not match grid")
        object.__setattr__(self, "density", density)


def multiplier_values(family, s, grid: FrequencyGrid) -> np.ndarray:
    """exp(-b(s; xi)) on all grid nodes."""
    return np.exp(-family.evaluate(s, grid.xi_points()))


def synthesize_measure(
    family,
    s,
    grid: FrequencyGrid,
    *,
    boundary_tol: float = 1e-12,
    mass_tol: float = 1e-6,
    allow_slow_decay: bool = False,
) -> GriddedMeasure:
    """Synthesize the density of the measure with characteristic exponent b(s; .).

    Raises GridTooSmallError when exp(-Re b) has not decayed below boundary_tol
    at the grid boundary (override with allow_slow_decay), and AccuracyError
    when the synthesized mass deviates from 1 by more than mass_tol.
    """
    if family.dim != grid.n:
        raise DimensionMismatchError("family dimension does not match grid")
    mult = multiplier_values(family, s, grid)
    decay = float(np.abs(mult[grid.boundary_mask()]).max())
    if decay > boundary_tol and not allow_slow_decay:
        raise GridTooSmallError(
            f"multiplier at grid boundary is {decay:.3e} > {boundary_tol:.1e}; "
            "enlarge the grid or pass allow_slow_decay=True"
        )
    spec = SpectralField(grid, (2.0 * np.pi) ** (-grid.n / 2.0) * mult)
    density_c = fourier_inverse(spec).values
    density = density_c.real
    mass = float(np.sum(density) * grid.cell_volume_x)
    negativity = float(max(0.0, -density.min()))
    if abs(mass - 1.0) > mass_tol:
        raise AccuracyError(f"synthesized mass {mass!r} deviates from 1 beyond {mass_tol}")
    return GriddedMeasure(
        grid=grid, density=density, mass=mass, negativity=negativity, boundary_decay=decay
    )


def auto_frequency_grid(
    family,
    s,
    n_points: int | None = None,
    *,
    boundary_tol: float = 1e-12,
    margin: float = 1.0,
    max_iter: int = 200,
) -> FrequencyGrid:
    """Choose dxi by bisection so exp(-Re b) ~ boundary_tol at the grid edge.

    The smallest admissible dxi maximizes the spatial extent while satisfying
    the decay requirement; ``margin`` > 1 widens the frequency band (finer
    spatial resolution) beyond the minimum.  Fails for multipliers with no
    radial decay (e.g. pure drift), in which case the grid must be given
    explicitly.
    """
    if n_points is None:
        n_points = 1024 if family.dim == 1 else 256
    n_points = int(n_points)

    def edge_decay(dxi: float) -> float:
        # The least-decayed boundary node sits at (N/2 - 1) dxi on each axis
        # (Re b is even, so only the magnitude matters).
        half = (0.5 * n_points - 1.0) * dxi
        probes = []
        for axis in range(family.dim):
            for sign in (-1.0, 1.0):
                p = np.zeros(family.dim)
                p[axis] = sign * half
                probes.append(p)
        probes.append(np.full(family.dim, half))
        vals = family.evaluate(s, np.asarray(probes))
        return float(np.exp(-vals.real).max())

    lo, hi = 1e-8, 1e-2
    for _ in range(100):
        if edge_decay(hi) <= boundary_tol:
            break
        hi *= 2.0
        if hi > 1e6:
            raise GridTooSmallError(
                "no admissible frequency spacing found; the multiplier does not decay"
            )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if edge_decay(mid) <= boundary_tol:
            hi = mid
        else:
            lo = mid
        if hi / lo < 1.0 + 1e-12:
            break
    dxi = hi * margin
    return FrequencyGrid(shape=(n_points,) * family.dim, dxi=(dxi,) * family.dim)


# ---------------------------------------------------------------------------
# Operator application: multiplier form and convolution form.
# ---------------------------------------------------------------------------


def _tail_warning(uhat: np.ndarray, grid: FrequencyGrid, tol: float, what: str):
    peak = float(np.abs(uhat).max())
    if peak == 0.0:
        return
    tail = float(np.abs(uhat[grid.boundary_mask()]).max())
    if tail > tol * peak:
        warnings.warn(
            f"{what}: spectral tail at grid boundary is {tail / peak:.3e} of peak "
            f"(> {tol:.1e}); result may be aliased",
            AccuracyWarning,
            stacklevel=3,
        )


def apply_multiplier(family, s, u: SpatialField, *, tail_tol: float = 1e-10) -> SpatialField:
    """Apply the operator with multiplier exp(-b(s; .)) to u."""
    uhat = fourier_forward(u)
    _tail_warning(uhat.values, u.grid, tail_tol, "apply_multiplier")
    mult = multiplier_values(family, s, u.grid)
    return fourier_inverse(uhat.with_values(mult * uhat.values))


def apply_convolution(measure: GriddedMeasure, u: SpatialField) -> SpatialField:
    """Apply the same operator in convolution form: (u * density)(x).

    Discrete periodic convolution of u with density * dx^n, evaluated by the
    convolution theorem under the symmetric normalization, where the transform
    of u * p is (2 pi)^(n/2) uhat phat.
    """
    if measure.grid is not u.grid and measure.grid != u.grid:
        raise DimensionMismatchError("measure and field must share one grid")
    g = u.grid
    uhat = fourier_forward(u)
    phat = fourier_forward(SpatialField(g, measure.density))
    prod = (2.0 * np.pi) ** (g.n / 2.0) * uhat.values * phat.values
    return fourier_inverse(SpectralField(g, prod))


def apply_symbol_multiplier(symbol, u: SpatialField, *, tail_tol: float = 1e-8) -> SpatialField:
    """Apply the operator psi(D) whose Fourier multiplier is the symbol itself."""
    uhat = fourier_forward(u)
    vals = symbol.evaluate(u.grid.xi_points())
    _tail_warning(vals * uhat.values, u.grid, tail_tol, "apply_symbol_multiplier")
    return fourier_inverse(uhat.with_values(vals * uhat.values))


# ---------------------------------------------------------------------------
# Contraction and commutation checks.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractionReport:
    l2_in: float
    l2_out: float
    sup_in: float
    sup_out: float
    l2_ratio: float
    sup_ratio: float
    passed: bool


def check_contraction(family, s, u: SpatialField, *, slack: float = 1e-12) -> ContractionReport:
    """Verify ||T u|| <= ||u|| in the grid L2 norm and its sup-norm analogue."""
    out = apply_multiplier(family, s, u)
    l2_in, l2_out = u.l2(), out.l2()
    sup_in, sup_out = u.sup(), out.sup()
    l2_ratio = l2_out / l2_in if l2_in > 0 else 0.0
    sup_ratio = sup_out / sup_in if sup_in > 0 else 0.0
    passed = l2_ratio <= 1.0 + slack and sup_ratio <= 1.0 + slack
    return ContractionReport(l2_in, l2_out, sup_in, sup_out, l2_ratio, sup_ratio, passed)


@dataclass(frozen=True)
class CommutationReport:
    relative_l2_difference: float
    passed: bool


def check_commutation(
    family, s, s2, u: SpatialField, *, tol: float = 1e-12
) -> CommutationReport:
    """Relative L2 difference of the two application orders T_s T_s2 u vs T_s2 T_s u."""
    ab = apply_multiplier(family, s2, apply_multiplier(family, s, u))
    ba = apply_multiplier(family, s, apply_multiplier(family, s2, u))
    denom = max(ab.l2(), ba.l2(), 1e-300)
    rel = ab.with_values(ab.values - ba.values).l2() / denom
    return CommutationReport(float(rel), rel <= tol)


# ---------------------------------------------------------------------------
# Field constructors used by tests, verification suites and the CLI.
# ---------------------------------------------------------------------------


def gaussian_field(grid: FrequencyGrid, width: float = 1.0, center=0.0) -> SpatialField:
    """exp(-|x - center|^2 / (2 width^2)) sampled on the spatial grid."""
    x = grid.x_points()
    center = np.broadcast_to(np.asarray(center, dtype=float), (grid.n,))
    r2 = np.sum((x - center) ** 2, axis=-1)
    return SpatialField(grid, np.exp(-r2 / (2.0 * width**2)).astype(complex))


def random_band_limited_field(
    grid: FrequencyGrid, seed: int, *, bandwidth_fraction: float = 0.25
) -> SpatialField:
    """Random smooth complex field: Gaussian spectral coefficients under a
    Gaussian envelope cut at a fraction of the Nyquist band (counter-based
    generator, reproducible across platforms)."""
    gen = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    coeffs = gen.normal(size=grid.shape) + 1j * gen.normal(size=grid.shape)
    xi = grid.xi_points()
    cutoff = bandwidth_fraction * min(
        0.5 * n * d for n, d in zip(grid.shape, grid.dxi)
    )
    envelope = np.exp(-np.sum(xi**2, axis=-1) / (2.0 * (cutoff / 3.0) ** 2))
    envelope[np.sqrt(np.sum(xi**2, axis=-1)) > cutoff] = 0.0
    u = fourier_inverse(SpectralField(grid, coeffs * envelope))
    peak = np.abs(u.values).max()
    return u.with_values(u.values / peak) if peak > 0 else u
