"""Catalog of continuous negative definite functions on R^n.

Every entry evaluates a function psi: R^n -> C with psi(0) = 0, Hermitian
symmetry psi(-xi) = conj(psi(xi)) and Re psi >= 0, so that exp(-t*psi) is a
positive definite function for every t > 0.  The catalog is closed: each kind
ships with these guarantees and with exact derivative formulas used elsewhere,
so arbitrary user callables are not accepted in the verified core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.stats import qmc

from .errors import DimensionMismatchError, InputError, SymbolIntegrityError

__all__ = [
    "Symbol",
    "Power",
    "Quadratic",
    "Drift",
    "Relativistic",
    "LogEuclid",
    "Block",
    "Combination",
    "zero_symbol",
    "standard_catalog",
    "check_negative_definite",
    "NegativeDefinitenessReport",
    "symbol_to_dict",
    "symbol_from_dict",
]


def _check_points(xi, dim: int) -> np.ndarray:
    """Coerce xi to a float array of shape (..., dim)."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        if dim != 1:
            raise DimensionMismatchError(f"scalar point given for dimension {dim}")
        xi = xi.reshape(1)
    if xi.shape[-1] != dim:
        raise DimensionMismatchError(
            f"points have dimension {xi.shape[-1]}, symbol has dimension {dim}"
        )
    return xi


@dataclass(frozen=True)
class Symbol:
    """Base class for catalog entries.  Instances are immutable and evaluation
    is pure, so symbols are safe to share between threads."""

    dim: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dimension must be a positive integer")

    def evaluate(self, xi) -> np.ndarray:
        """Evaluate at points of shape (..., dim); returns complex of shape (...)."""
        raise NotImplementedError

    def __call__(self, xi) -> np.ndarray:
        return self.evaluate(xi)

    @property
    def is_zero(self) -> bool:
        """Structurally zero (used by curve-restriction linearity detection)."""
        return False


@dataclass(frozen=True)
class Power(Symbol):
    """|xi|^alpha with 0 < alpha <= 2 (fractional Laplacian symbol)."""

    alpha: float = 2.0

    def __post_init__(self):
        super().__post_init__()
        if not 0.0 < self.alpha <= 2.0:
            raise InputError(f"alpha must be in (0, 2], got {self.alpha}")

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        r2 = np.sum(xi * xi, axis=-1)
        if self.alpha == 2.0:
            return r2.astype(complex)
        return (r2 ** (self.alpha / 2.0)).astype(complex)


@dataclass(frozen=True)
class Quadratic(Symbol):
    """xi . Q xi for a real symmetric positive semidefinite matrix Q."""

    matrix: np.ndarray = field(default_factory=lambda: np.eye(1))

    def __post_init__(self):
        q = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        object.__setattr__(self, "matrix", q)
        object.__setattr__(self, "dim", q.shape[0])
        super().__post_init__()
        if q.shape[0] != q.shape[1]:
            raise InputError("matrix must be square")
        if not np.allclose(q, q.T, atol=1e-12):
            raise InputError("matrix must be symmetric")
        if np.linalg.eigvalsh(q).min() < -1e-12 * max(1.0, abs(q).max()):
            raise InputError("matrix must be positive semidefinite")

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        return np.einsum("...i,ij,...j->...", xi, self.matrix, xi).astype(complex)


@dataclass(frozen=True)
class Drift(Symbol):
    """i (c, xi): pure drift with velocity c (imaginary-valued symbol)."""

    velocity: np.ndarray = field(default_factory=lambda: np.ones(1))

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.velocity, dtype=float))
        object.__setattr__(self, "velocity", c)
        object.__setattr__(self, "dim", c.shape[0])
        super().__post_init__()

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        return 1j * np.sum(xi * self.velocity, axis=-1)


@dataclass(frozen=True)
class Relativistic(Symbol):
    """sqrt(|xi|^2 + m^2) - m with mass m > 0."""

    mass: float = 1.0

    def __post_init__(self):
        super().__post_init__()
        if self.mass <= 0:
            raise InputError("mass must be positive")

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        r2 = np.sum(xi * xi, axis=-1)
        return (np.sqrt(r2 + self.mass**2) - self.mass).astype(complex)


@dataclass(frozen=True)
class LogEuclid(Symbol):
    """log(1 + |xi|^2) (symbol of the Gamma-subordinated Brownian motion)."""

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        return np.log1p(np.sum(xi * xi, axis=-1)).astype(complex)


@dataclass(frozen=True)
class Block(Symbol):
    """A symbol acting on a coordinate slice: psi_j(xi^j) on R^{n_j} embedded
    in R^n via the product decomposition R^n = R^{n_1} x R^{n_2} x ..."""

    base: Symbol = field(default_factory=Power)
    coords: tuple = (0,)

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))
        super().__post_init__()
        if len(set(self.coords)) != len(self.coords):
            raise InputError("coordinate slice must not repeat indices")
        if len(self.coords) != self.base.dim:
            raise InputError("coordinate slice length must match base symbol dimension")
        if any(c < 0 or c >= self.dim for c in self.coords):
            raise InputError("coordinate slice outside ambient dimension")

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        return self.base.evaluate(xi[..., list(self.coords)])

    @property
    def is_zero(self):
        return self.base.is_zero


@dataclass(frozen=True)
class Combination(Symbol):
    """Nonnegative combination sum_i w_i psi_i; the empty combination is the
    zero symbol."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((float(w), s) for w, s in self.terms)
        object.__setattr__(self, "terms", terms)
        super().__post_init__()
        for w, s in terms:
            if w < 0:
                raise InputError("combination weights must be nonnegative")
            if s.dim != self.dim:
                raise DimensionMismatchError(
                    "all combination terms must share the combination dimension"
                )

    def evaluate(self, xi):
        xi = _check_points(xi, self.dim)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for w, s in self.terms:
            if w != 0.0:
                out = out + w * s.evaluate(xi)
        return out

    @property
    def is_zero(self):
        return all(w == 0.0 or s.is_zero for w, s in self.terms)


def zero_symbol(dim: int = 1) -> Combination:
    """The identically-zero symbol (empty nonnegative combination)."""
    return Combination(dim=dim, terms=())


def standard_catalog(dim: int = 1) -> list[Symbol]:
    """One representative instance per catalog kind, used by verification suites."""
    entries = [
        Power(dim=dim, alpha=0.5),
        Power(dim=dim, alpha=1.0),
        Power(dim=dim, alpha=2.0),
        Quadratic(matrix=0.5 * np.eye(dim)),
        Drift(velocity=0.7 * np.ones(dim)),
        Relativistic(dim=dim, mass=1.0),
        LogEuclid(dim=dim),
        Block(dim=dim, base=Power(dim=1, alpha=2.0), coords=(dim - 1,)),
    ]
    entries.append(
        Combination(dim=dim, terms=((0.5, entries[2]), (1.5, entries[5]), (1.0, entries[4])))
    )
    return entries


# ---------------------------------------------------------------------------
# Empirical negative-definiteness verification.
#
# psi is negative definite iff exp(-t*psi) is positive definite for every
# t > 0, so the sample matrix M_jk = exp(-t * psi(xi_j - xi_k)) must be
# positive semidefinite for any choice of points.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NegativeDefinitenessReport:
    kind: str
    sample_count: int
    t_values: tuple
    min_eigenvalues: tuple
    tol: float
    hermitian_defect: float
    passed: bool


@lru_cache(maxsize=64)
def _sample_points(dim: int, count: int, radius: float, seed: int):
    """Scrambled Sobol points in [-radius, radius]^dim; cached for reuse."""
    engine = qmc.Sobol(d=dim, scramble=True, seed=seed)
    pts = engine.random(count)
    return radius * (2.0 * pts - 1.0)


def check_negative_definite(
    symbol,
    sample_count: int = 32,
    t_values=(0.1, 1.0, 10.0),
    tol: float | None = None,
    box_radius: float = 8.0,
    seed: int = 7,
) -> NegativeDefinitenessReport:
    """Positive-definiteness test of exp(-t*psi) on a deterministic point set.

    For each t the Hermitian matrix M_jk = exp(-t psi(xi_j - xi_k)) is formed
    on scrambled low-discrepancy points and its minimum eigenvalue reported.
    Eigensolver floating error grows with the matrix size, so the default
    tolerance is 1e-8 scaled by sample_count.
    """
    if sample_count < 2:
        raise InputError("sample_count must be at least 2")
    if tol is None:
        tol = 1e-8 * sample_count
    pts = _sample_points(symbol.dim, int(sample_count), float(box_radius), int(seed))
    diffs = pts[:, None, :] - pts[None, :, :]
    values = symbol.evaluate(diffs)

    # A broken catalog entry shows up as loss of Hermitian symmetry of psi.
    defect = float(np.abs(values - np.conj(values.T)).max())
    scale = max(1.0, float(np.abs(values).max()))
    if defect > 1e-10 * scale:
        raise SymbolIntegrityError(
            f"evaluation is not Hermitian (defect {defect:.3e}); catalog entry is broken"
        )

    mins = []
    for t in t_values:
        if t <= 0:
            raise InputError("t values must be positive")
        m = np.exp(-t * values)
        m = 0.5 * (m + np.conj(m.T))
        mins.append(float(np.linalg.eigvalsh(m).min()))
    passed = all(mn >= -tol for mn in mins)
    return NegativeDefinitenessReport(
        kind=type(symbol).__name__,
        sample_count=int(sample_count),
        t_values=tuple(float(t) for t in t_values),
        min_eigenvalues=tuple(mins),
        tol=float(tol),
        hermitian_defect=defect,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# JSON serialization.  The wire format is documented in docs/schema/symbol.schema.json.
# ---------------------------------------------------------------------------

_KINDS = {}


def _register(kind: str, cls, fields, to_d, from_d):
    _KINDS[kind] = (cls, frozenset(fields), to_d, from_d)


_register(
    "power",
    Power,
    ("alpha", "dim"),
    lambda s: {"alpha": s.alpha, "dim": s.dim},
    lambda d: Power(dim=int(d["dim"]), alpha=float(d["alpha"])),
)
_register(
    "quadratic",
    Quadratic,
    ("matrix",),
    lambda s: {"matrix": s.matrix.tolist()},
    lambda d: Quadratic(matrix=np.asarray(d["matrix"], dtype=float)),
)
_register(
    "drift",
    Drift,
    ("velocity",),
    lambda s: {"velocity": s.velocity.tolist()},
    lambda d: Drift(velocity=np.asarray(d["velocity"], dtype=float)),
)
_register(
    "relativistic",
    Relativistic,
    ("mass", "dim"),
    lambda s: {"mass": s.mass, "dim": s.dim},
    lambda d: Relativistic(dim=int(d["dim"]), mass=float(d["mass"])),
)
_register(
    "log_euclid",
    LogEuclid,
    ("dim",),
    lambda s: {"dim": s.dim},
    lambda d: LogEuclid(dim=int(d["dim"])),
)
_register(
    "block",
    Block,
    ("base", "coords", "dim"),
    lambda s: {"base": symbol_to_dict(s.base), "coords": list(s.coords), "dim": s.dim},
    lambda d: Block(
        dim=int(d["dim"]),
        base=symbol_from_dict(d["base"]),
        coords=tuple(int(c) for c in d["coords"]),
    ),
)
_register(
    "combination",
    Combination,
    ("terms", "dim"),
    lambda s: {
        "terms": [{"weight": w, "symbol": symbol_to_dict(sub)} for w, sub in s.terms],
        "dim": s.dim,
    },
    lambda d: Combination(
        dim=int(d["dim"]),
        terms=tuple(
            (float(t["weight"]), symbol_from_dict(t["symbol"])) for t in d["terms"]
        ),
    ),
)

_CLS_TO_KIND = {cls: kind for kind, (cls, _, _, _) in _KINDS.items()}


def symbol_to_dict(symbol: Symbol) -> dict:
    kind = _CLS_TO_KIND.get(type(symbol))
    if kind is None:
        raise InputError(f"cannot serialize symbol of type {type(symbol).__name__}")
    out = {"kind": kind}
    out.update(_KINDS[kind][2](symbol))
    return out


def symbol_from_dict(data: dict) -> Symbol:
    if not isinstance(data, dict) or "kind" not in data:
        raise InputError("symbol JSON must be an object with a 'kind' field")
    kind = data["kind"]
    if kind not in _KINDS:
        raise InputError(f"unknown symbol kind {kind!r}")
    cls, fields, to_d, from_d = _KINDS[kind]
    unknown = set(data.keys()) - fields - {"kind"}
    if unknown:
        raise InputError(f"unknown fields for symbol kind {kind!r}: {sorted(unknown)}")
    missing = fields - set(data.keys())
    if missing:
        raise InputError(f"missing fields for symbol kind {kind!r}: {sorted(missing)}")
    return from_d(data)
