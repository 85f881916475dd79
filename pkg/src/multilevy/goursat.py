"""Characteristic-data hyperbolic problem for interaction families.

On the Fourier side the problem decouples per frequency into

    d^2/ds dt  vhat(s,t;xi) = a(s,t;xi) vhat(s,t;xi)
    vhat(s,0;xi) = exp(-s psi1(xi)) phihat(xi)
    vhat(0,t;xi) = exp(-t psi2(xi)) phihat(xi)

with data prescribed on the two characteristic axes.  The solver marches the
equivalent integral relation over cells with trapezoidal quadrature: on each
cell the unknown corner appears linearly with weight (ds dt / 4) a and is
solved for in closed form.  Frequencies never couple; each one carries its own
step refinement (halving until max|a| ds dt <= 0.1).  A Picard-iteration
solver on the base lattice is included for cross-validation at coarse
settings.

The normalized unknown w = vhat / phihat satisfies the same equation with
data exp(-s psi1), exp(-t psi2); the march operates on w and axis values are
imposed, never computed.

Caveat on conditioning: for large positive a the continuous problem amplifies
perturbations of characteristic data like the Riemann function
I_0(2 sqrt(a s t)), so per-frequency accuracy at frequencies with
a(S,T) S T >> 1 is limited by machine precision no matter the step size.
Error reporting therefore offers both the per-frequency view and the
assembled-solution view (the latter weights each frequency by |phihat|).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InputError
from .spectral import (
    SpatialField,
    SpectralField,
    apply_multiplier,
    fourier_forward,
    fourier_inverse,
)
from .symbolcalc import apply_derived_symbol
from .timefamily import Interaction, Separable

__all__ = [
    "GoursatProblem",
    "GoursatSolution",
    "solve_transformed",
    "solve_picard",
    "exact_solution",
    "mixed_derivative_residual",
    "residual_decay",
    "check_boundary_limits",
    "ResidualReport",
    "BoundaryLimitReport",
]


@dataclass(frozen=True)
class GoursatProblem:
    """Problem data: interaction family, spatial datum, time rectangle, steps."""

    family: Interaction
    datum: SpatialField
    extent: tuple = (1.0, 1.0)
    base_steps: tuple = (1.0 / 64.0, 1.0 / 64.0)

    def __post_init__(self):
        if not isinstance(self.family, Interaction):
            raise InputError("the characteristic-data problem requires an interaction family")
        if self.family.dim != self.datum.grid.n:
            raise DimensionMismatchError("family dimension does not match datum grid")
        extent = (float(self.extent[0]), float(self.extent[1]))
        steps = (float(self.base_steps[0]), float(self.base_steps[1]))
        object.__setattr__(self, "extent", extent)
        object.__setattr__(self, "base_steps", steps)
        if extent[0] <= 0 or extent[1] <= 0:
            raise InputError("the time rectangle must have positive extent")
        for ext, h in zip(extent, steps):
            if h <= 0 or abs(round(ext / h) - ext / h) > 1e-9 or round(ext / h) < 1:
                raise InputError("base steps must divide the extent a whole number of times")

    @property
    def cells(self) -> tuple:
        return (
            int(round(self.extent[0] / self.base_steps[0])),
            int(round(self.extent[1] / self.base_steps[1])),
        )


def exact_solution(problem: GoursatProblem, s: float, t: float) -> SpatialField:
    """Closed-form solution: the two-parameter contraction applied to the datum."""
    return apply_multiplier(problem.family, (s, t), problem.datum)


def _frequency_constants(problem: GoursatProblem, xi: np.ndarray):
    fam = problem.family
    return fam.psi1.evaluate(xi), fam.psi2.evaluate(xi), fam.psi3.evaluate(xi)


def _symbol_on_lattice(coupling, s_vals, t_vals, p1, p2, p3):
    """a(s,t;xi) for paired (s,t) arrays and per-frequency symbol values."""
    cs = np.asarray(coupling.d_s(s_vals, t_vals))
    ct = np.asarray(coupling.d_t(s_vals, t_vals))
    cst = np.asarray(coupling.d_st(s_vals, t_vals))
    return (
        (p1 * p2)[None, :]
        + ct[:, None] * (p1 * p3)[None, :]
        + cs[:, None] * (p2 * p3)[None, :]
        + (cs * ct)[:, None] * (p3 * p3)[None, :]
        - cst[:, None] * p3[None, :]
    )


@dataclass
class GoursatSolution:
    """Solution values on the base time lattice for every retained frequency,
    plus refinement and failure diagnostics."""

    problem: GoursatProblem
    s_nodes: np.ndarray
    t_nodes: np.ndarray
    retained: np.ndarray  # flat indices into the frequency grid
    xi: np.ndarray  # (M, n) frequency vectors
    datum_hat: np.ndarray  # (M,) spectral datum at retained frequencies
    vhat: np.ndarray  # (M, ns+1, nt+1)
    refine_levels: np.ndarray  # (M,)
    failed: tuple = ()  # flat indices excluded after hitting the refinement cap
    _exact_cache: np.ndarray | None = field(default=None, repr=False)

    def assemble(self, i: int, j: int) -> SpatialField:
        """Inverse-transform the solution at base node (s_i, t_j) to x-space."""
        grid = self.problem.datum.grid
        flat = np.zeros(int(np.prod(grid.shape)), dtype=complex)
        flat[self.retained] = self.vhat[:, i, j]
        return fourier_inverse(SpectralField(grid, flat.reshape(grid.shape)))

    def exact_vhat(self) -> np.ndarray:
        """exp(-b(s_i,t_j;xi)) phihat(xi) on the base lattice (oracle values)."""
        if self._exact_cache is None:
            p1, p2, p3 = _frequency_constants(self.problem, self.xi)
            s = self.s_nodes[:, None]
            t = self.t_nodes[None, :]
            c = self.problem.family.coupling.value(s, t)
            b = (
                s[..., None] * p1[None, None, :]
                + t[..., None] * p2[None, None, :]
                + c[..., None] * p3[None, None, :]
            )
            self._exact_cache = np.moveaxis(
                np.exp(-b) * self.datum_hat[None, None, :], -1, 0
            )
        return self._exact_cache

    def per_frequency_error(self) -> np.ndarray:
        """max over the lattice of |vhat - exact| / |phihat| per frequency."""
        diff = np.abs(self.vhat - self.exact_vhat())
        scale = np.abs(self.datum_hat)
        return diff.max(axis=(1, 2)) / np.where(scale > 0, scale, 1.0)

    def global_relative_error(self) -> float:
        """Assembled-solution error: max over lattice nodes of the spectral L2
        error, relative to the largest exact solution norm over the lattice.
        By Parseval this matches the spatial L2 error of the assembled fields.
        """
        diff = self.vhat - self.exact_vhat()
        err = np.sqrt(np.sum(np.abs(diff) ** 2, axis=0))
        denom = float(np.sqrt(np.sum(np.abs(self.exact_vhat()) ** 2, axis=0)).max())
        return float(err.max() / denom)


def _march_group(
    coupling, p1, p2, p3, phihat, level, ns, nt, hs_base, ht_base, out
):
    """Trapezoidal anti-diagonal march for one refinement level.

    p1, p2, p3, phihat: (F,) per-frequency values; out: (F, ns+1, nt+1) target.
    Only two previous anti-diagonals are kept; base-lattice nodes are extracted
    on the fly.  Axis values are imposed from the data, never computed.
    """
    step = 1 << level
    nsf, ntf = ns * step, nt * step
    hs, ht = hs_base / step, ht_base / step
    q = hs * ht / 4.0
    nfreq = p1.shape[0]

    def data_s(i_arr):  # nodes (i, 0)
        return np.exp(-np.multiply.outer(i_arr * hs, p1))

    def data_t(j_arr):  # nodes (0, j)
        return np.exp(-np.multiply.outer(j_arr * ht, p2))

    def a_diag(d, lo, hi):
        idx = np.arange(lo, hi + 1)
        return _symbol_on_lattice(coupling, idx * hs, (d - idx) * ht, p1, p2, p3)

    def bounds(d):
        return max(0, d - ntf), min(d, nsf)

    # Rolling buffers indexed by absolute row i via offset subtraction.
    w_prev2 = w_prev1 = None
    a_prev2 = a_prev1 = None
    lo_prev2 = lo_prev1 = 0

    for d in range(nsf + ntf + 1):
        lo, hi = bounds(d)
        w = np.empty((hi - lo + 1, nfreq), dtype=complex)
        a = a_diag(d, lo, hi)
        if lo == 0:
            w[0] = data_t(np.array([d]))[0] if d > 0 else np.ones(nfreq, dtype=complex)
        if hi == d:
            w[hi - lo] = data_s(np.array([d]))[0] if d > 0 else w[hi - lo]
        i_lo, i_hi = max(1, lo), min(d - 1, hi)
        if i_lo <= i_hi:
            sl = slice(i_lo - lo, i_hi - lo + 1)
            pm1 = slice(i_lo - 1 - lo_prev1, i_hi - lo_prev1)  # (i-1, j) on d-1
            p0 = slice(i_lo - lo_prev1, i_hi + 1 - lo_prev1)  # (i, j-1) on d-1
            pm2 = slice(i_lo - 1 - lo_prev2, i_hi - lo_prev2)  # (i-1, j-1) on d-2
            rhs = (
                w_prev1[pm1]
                + w_prev1[p0]
                - w_prev2[pm2]
                + q
                * (
                    a_prev2[pm2] * w_prev2[pm2]
                    + a_prev1[p0] * w_prev1[p0]
                    + a_prev1[pm1] * w_prev1[pm1]
                )
            )
            w[sl] = rhs / (1.0 - q * a[sl])

        if d % step == 0:
            first = ((lo + step - 1) // step) * step
            if first <= hi:
                ii = np.arange(first, hi + 1, step)
                out[:, ii // step, (d - ii) // step] = (
                    w[ii - lo] * phihat[None, :]
                ).T

        w_prev2, a_prev2, lo_prev2 = w_prev1, a_prev1, lo_prev1
        w_prev1, a_prev1, lo_prev1 = w, a, lo


def solve_transformed(
    problem: GoursatProblem,
    *,
    refine_threshold: float = 0.1,
    refine_limit: int = 10,
    drop_tol: float = 1e-14,
    threads: int = 1,
) -> GoursatSolution:
    """March the transformed problem from the characteristic axes.

    Frequencies with |phihat| below drop_tol * peak are skipped.  Steps are
    halved per frequency until max|a| ds dt <= refine_threshold (sampled on
    the base lattice); frequencies that would need more than 2**refine_limit
    times the base resolution are recorded as failed and excluded from
    assembly.  Output is deterministic and independent of thread scheduling:
    worker chunks write disjoint slices.
    """
    grid = problem.datum.grid
    ns, nt = problem.cells
    hs, ht = problem.base_steps
    phihat_full = fourier_forward(problem.datum).values.reshape(-1)
    peak = float(np.abs(phihat_full).max())
    if peak == 0.0:
        raise InputError("datum is identically zero")
    retained = np.flatnonzero(np.abs(phihat_full) >= drop_tol * peak)
    xi_all = grid.xi_points().reshape(-1, grid.n)

    xi = xi_all[retained]
    phihat = phihat_full[retained]
    p1, p2, p3 = _frequency_constants(problem, xi)

    # Refinement level from max|a| sampled on the base lattice.
    s_nodes = np.arange(ns + 1) * hs
    t_nodes = np.arange(nt + 1) * ht
    ss, tt = np.meshgrid(s_nodes, t_nodes, indexing="ij")
    a_lattice = _symbol_on_lattice(
        problem.family.coupling, ss.reshape(-1), tt.reshape(-1), p1, p2, p3
    )
    amax = np.abs(a_lattice).max(axis=0)
    product = amax * hs * ht
    levels = np.zeros(retained.shape[0], dtype=int)
    mask = product > refine_threshold
    levels[mask] = np.ceil(0.5 * np.log2(product[mask] / refine_threshold)).astype(int)

    ok = levels <= refine_limit
    failed = tuple(int(ix) for ix in retained[~ok])
    retained, xi, phihat = retained[ok], xi[ok], phihat[ok]
    p1, p2, p3, levels = p1[ok], p2[ok], p3[ok], levels[ok]

    vhat = np.zeros((retained.shape[0], ns + 1, nt + 1), dtype=complex)

    jobs = []
    for level in np.unique(levels):
        sel = np.flatnonzero(levels == level)
        # Chunk so diagonal buffers stay modest at deep refinement levels.
        rows = ns * (1 << int(level)) + 1
        chunk = max(1, int(4e6 / rows))
        for start in range(0, sel.size, chunk):
            jobs.append((int(level), sel[start : start + chunk]))

    def run(job):
        level, sel = job
        out = np.zeros((sel.size, ns + 1, nt + 1), dtype=complex)
        _march_group(
            problem.family.coupling,
            p1[sel],
            p2[sel],
            p3[sel],
            phihat[sel],
            level,
            ns,
            nt,
            hs,
            ht,
            out,
        )
        vhat[sel] = out  # disjoint slices across jobs: order-independent

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            list(pool.map(run, jobs))
    else:
        for job in jobs:
            run(job)

    return GoursatSolution(
        problem=problem,
        s_nodes=s_nodes,
        t_nodes=t_nodes,
        retained=retained,
        xi=xi,
        datum_hat=phihat,
        vhat=vhat,
        refine_levels=levels,
        failed=failed,
    )


def _cumtrapz(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Cumulative trapezoidal integral along an axis, zero at the first node."""
    mid = 0.5 * (np.take(values, range(1, values.shape[axis]), axis=axis)
                 + np.take(values, range(0, values.shape[axis] - 1), axis=axis))
    out = np.zeros_like(values)
    idx = [slice(None)] * values.ndim
    idx[axis] = slice(1, None)
    out[tuple(idx)] = h * np.cumsum(mid, axis=axis)
    return out


def solve_picard(
    problem: GoursatProblem,
    *,
    iterations: int = 80,
    drop_tol: float = 1e-14,
    tol: float = 1e-13,
) -> GoursatSolution:
    """Picard iteration of the integral relation on the base lattice.

    Reference implementation for cross-validating the marching scheme at
    coarse settings; iterates w <- data + cumulative double integral of a w
    until the update stalls.  Convergence slows as max|a| S T grows, so this
    is only suitable for small rectangles or small symbols.
    """
    grid = problem.datum.grid
    ns, nt = problem.cells
    hs, ht = problem.base_steps
    phihat_full = fourier_forward(problem.datum).values.reshape(-1)
    peak = float(np.abs(phihat_full).max())
    if peak == 0.0:
        raise InputError("datum is identically zero")
    retained = np.flatnonzero(np.abs(phihat_full) >= drop_tol * peak)
    xi = grid.xi_points().reshape(-1, grid.n)[retained]
    phihat = phihat_full[retained]
    p1, p2, p3 = _frequency_constants(problem, xi)

    s_nodes = np.arange(ns + 1) * hs
    t_nodes = np.arange(nt + 1) * ht
    ss, tt = np.meshgrid(s_nodes, t_nodes, indexing="ij")
    a = np.moveaxis(
        _symbol_on_lattice(
            problem.family.coupling, ss.reshape(-1), tt.reshape(-1), p1, p2, p3
        ).reshape(ns + 1, nt + 1, -1),
        -1,
        0,
    )
    data = (
        np.exp(-np.multiply.outer(p1, s_nodes))[:, :, None]
        + np.exp(-np.multiply.outer(p2, t_nodes))[:, None, :]
        - 1.0
    )
    w = data.copy()
    for _ in range(iterations):
        integral = _cumtrapz(_cumtrapz(a * w, hs, axis=1), ht, axis=2)
        new = data + integral
        change = np.abs(new - w).max()
        w = new
        if change <= tol * max(1.0, np.abs(w).max()):
            break
    return GoursatSolution(
        problem=problem,
        s_nodes=s_nodes,
        t_nodes=t_nodes,
        retained=retained,
        xi=xi,
        datum_hat=phihat,
        vhat=w * phihat[:, None, None],
        refine_levels=np.zeros(retained.shape[0], dtype=int),
        failed=(),
    )


# ---------------------------------------------------------------------------
# Residual and boundary-limit checks.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    points: tuple
    h: float
    residuals: tuple  # relative residual per point
    max_residual: float


def mixed_derivative_residual(
    problem: GoursatProblem,
    points,
    h: float,
    *,
    source=None,
    method: str = "set_partition",
) -> ResidualReport:
    """Central mixed difference of v in (s,t) minus a(s,t;D) v at sample points.

    ``source(s, t) -> SpatialField`` defaults to the closed-form solution.
    Points must be interior: at least h away from both axes.  The residual is
    normalized by max(||a v||, ||v||) so that identically-zero symbols report
    zero rather than 0/0.
    """
    if h <= 0:
        raise InputError("step h must be positive")
    if source is None:
        source = lambda s, t: exact_solution(problem, s, t)
    residuals = []
    for s, t in points:
        if s < h or t < h:
            raise InputError("residual points must be at least h away from the axes")
        vpp = source(s + h, t + h).values
        vpm = source(s + h, t - h).values
        vmp = source(s - h, t + h).values
        vmm = source(s - h, t - h).values
        d2 = (vpp - vpm - vmp + vmm) / (4.0 * h * h)
        center = source(s, t)
        av = apply_derived_symbol(problem.family, (s, t), center, method=method)
        num = SpatialField(center.grid, d2 - av.values).l2()
        denom = max(av.l2(), center.l2(), 1e-300)
        residuals.append(float(num / denom))
    return ResidualReport(
        points=tuple((float(s), float(t)) for s, t in points),
        h=float(h),
        residuals=tuple(residuals),
        max_residual=float(max(residuals)),
    )


def residual_decay(problem: GoursatProblem, points, h: float, *, source=None):
    """Residual reports at steps h and h/2 plus per-point decay ratios
    (second-order stencils give ratios near 4)."""
    r1 = mixed_derivative_residual(problem, points, h, source=source)
    r2 = mixed_derivative_residual(problem, points, h / 2.0, source=source)
    ratios = tuple(
        a / b if b > 0 else float("inf") for a, b in zip(r1.residuals, r2.residuals)
    )
    return r1, r2, ratios


@dataclass(frozen=True)
class BoundaryLimitReport:
    s_values: tuple
    differences: tuple
    t: float
    slope: float  # log-log fit over the nonzero entries
    monotone: bool


def check_boundary_limits(
    problem: GoursatProblem, s_values, t: float
) -> BoundaryLimitReport:
    """||T_(s,t) phi - T^(2)_t phi||_2 for s decreasing to zero.

    For smooth families the difference vanishes linearly in s, so the log-log
    slope should be near 1; at s = 0 the limit is attained exactly on the grid.
    """
    marginal = Separable(symbols=(problem.family.psi2,))
    reference = apply_multiplier(marginal, (t,), problem.datum)
    diffs = []
    for s in s_values:
        if s < 0:
            raise InputError("s values must be nonnegative")
        moved = apply_multiplier(problem.family, (s, t), problem.datum)
        diffs.append(SpatialField(moved.grid, moved.values - reference.values).l2())
    s_arr = np.asarray([float(s) for s in s_values])
    d_arr = np.asarray(diffs)
    fit_mask = (s_arr > 0) & (d_arr > 0)
    if fit_mask.sum() >= 2:
        slope = float(np.polyfit(np.log(s_arr[fit_mask]), np.log(d_arr[fit_mask]), 1)[0])
    else:
        slope = float("nan")
    order = np.argsort(s_arr)[::-1]
    slack = 1e-12 * max(float(d_arr.max()), 1e-300)
    monotone = bool(np.all(np.diff(d_arr[order]) <= slack))
    return BoundaryLimitReport(
        s_values=tuple(float(s) for s in s_values),
        differences=tuple(float(d) for d in diffs),
        t=float(t),
        slope=slope,
        monotone=monotone,
    )
