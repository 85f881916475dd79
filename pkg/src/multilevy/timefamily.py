"""Families of negative definite functions parameterized by k time variables.

A family evaluates b(s_1..s_k; xi), carries exact mixed partial derivatives
in the time variables (first order per variable), and supports restriction to
monotone curves in the parameter quadrant.  Restrictions that are linear in
the curve parameter correspond to convolution semigroups and are flagged as
such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, DimensionMismatchError, InputError
from .symbols import Combination, Symbol, symbol_from_dict, symbol_to_dict, zero_symbol

__all__ = [
    "TimeFamily",
    "Separable",
    "Monomial",
    "Interaction",
    "ProductCoupling",
    "SaturatingCoupling",
    "Identity",
    "Sqrt",
    "PowerLaw",
    "CurveRestriction",
    "restrict_to_curve",
    "GrowthEstimate",
    "estimate_growth",
    "family_to_dict",
    "family_from_dict",
]

MAX_TIME_PARAMETERS = 5  # set-partition enumeration grows as Bell numbers


def _check_times(s, k: int, validate: bool) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if s.shape != (k,):
        raise InputError(f"expected {k} time parameters, got shape {s.shape}")
    if validate and np.any(s < 0):
        raise InputError(f"time parameters must be nonnegative, got {s}")
    return s


def _check_sigma(sigma, k: int) -> tuple:
    sigma = tuple(int(x) for x in sigma)
    if len(sigma) != k:
        raise InputError(f"multi-index length {len(sigma)} does not match k={k}")
    if any(x < 0 for x in sigma):
        raise InputError("multi-index entries must be nonnegative")
    if any(x > 1 for x in sigma):
        raise CapabilityError(
            "only first-order-per-variable mixed partials are available analytically"
        )
    return sigma


class TimeFamily:
    """Base class: b(s; xi) with exact time-derivatives.

    Evaluation is pure and instances are immutable, so families can be shared
    freely across threads.
    """

    k: int
    dim: int

    def evaluate(self, s, xi, *, validate: bool = True) -> np.ndarray:
        """b(s; xi) for xi of shape (..., dim).  validate=False permits negative
        time arguments (the closed forms extend analytically; used by
        finite-difference stencils)."""
        raise NotImplementedError

    def mixed_partial(self, sigma, s, xi, *, validate: bool = True) -> np.ndarray:
        """Exact mixed partial d^sigma b with sigma in {0,1}^k."""
        raise NotImplementedError


@dataclass(frozen=True)
class Separable(TimeFamily):
    """b = sum_j s_j psi_j(xi)."""

    symbols: tuple = ()

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise InputError("at least one symbol required")
        if len({s.dim for s in symbols}) != 1:
            raise DimensionMismatchError("all symbols must share one dimension")
        if len(symbols) > MAX_TIME_PARAMETERS:
            raise CapabilityError(f"at most {MAX_TIME_PARAMETERS} time parameters supported")

    @property
    def k(self):
        return len(self.symbols)

    @property
    def dim(self):
        return self.symbols[0].dim

    def evaluate(self, s, xi, *, validate=True):
        s = _check_times(s, self.k, validate)
        out = 0j
        for sj, psi in zip(s, self.symbols):
            out = out + sj * psi.evaluate(xi)
        return out

    def mixed_partial(self, sigma, s, xi, *, validate=True):
        sigma = _check_sigma(sigma, self.k)
        s = _check_times(s, self.k, validate)
        order = sum(sigma)
        if order == 0:
            return self.evaluate(s, xi, validate=validate)
        if order == 1:
            return self.symbols[sigma.index(1)].evaluate(xi)
        xi = np.asarray(xi, dtype=float)
        return np.zeros(xi.shape[:-1], dtype=complex)


@dataclass(frozen=True)
class Monomial(TimeFamily):
    """b = (prod_j s_j^{m_j}) psi(xi) with nonnegative integer exponents."""

    exponents: tuple = (1,)
    symbol: Symbol = field(default_factory=lambda: None)

    def __post_init__(self):
        exps = tuple(int(m) for m in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps or any(m < 0 for m in exps):
            raise InputError("exponents must be nonnegative integers")
        if len(exps) > MAX_TIME_PARAMETERS:
            raise CapabilityError(f"at most {MAX_TIME_PARAMETERS} time parameters supported")
        if self.symbol is None:
            raise InputError("a symbol is required")

    @property
    def k(self):
        return len(self.exponents)

    @property
    def dim(self):
        return self.symbol.dim

    def _coefficient(self, sigma, s) -> float:
        c = 1.0
        for sj, mj, dj in zip(s, self.exponents, sigma):
            if dj == 0:
                c *= sj**mj
            elif mj == 0:
                return 0.0
            else:
                c *= mj * sj ** (mj - 1)
        return c

    def evaluate(self, s, xi, *, validate=True):
        s = _check_times(s, self.k, validate)
        return self._coefficient((0,) * self.k, s) * self.symbol.evaluate(xi)

    def mixed_partial(self, sigma, s, xi, *, validate=True):
        sigma = _check_sigma(sigma, self.k)
        s = _check_times(s, self.k, validate)
        return self._coefficient(sigma, s) * self.symbol.evaluate(xi)


class Coupling:
    """Scalar coupling c(s,t) with c(0,t) = c(s,0) = 0, c >= 0, C^2."""

    name: str

    @staticmethod
    def value(s, t):
        raise NotImplementedError

    @staticmethod
    def d_s(s, t):
        raise NotImplementedError

    @staticmethod
    def d_t(s, t):
        raise NotImplementedError

    @staticmethod
    def d_st(s, t):
        raise NotImplementedError


class ProductCoupling(Coupling):
    """c(s,t) = s*t."""

    name = "product"

    @staticmethod
    def value(s, t):
        return s * t

    @staticmethod
    def d_s(s, t):
        return t * np.ones_like(np.asarray(s, dtype=float))

    @staticmethod
    def d_t(s, t):
        return s * np.ones_like(np.asarray(t, dtype=float))

    @staticmethod
    def d_st(s, t):
        return np.ones_like(np.asarray(s, dtype=float) * np.asarray(t, dtype=float))


class SaturatingCoupling(Coupling):
    """c(s,t) = (1 - exp(-s)) (1 - exp(-t))."""

    name = "saturating"

    @staticmethod
    def value(s, t):
        return -np.expm1(-s) * -np.expm1(-t)

    @staticmethod
    def d_s(s, t):
        return np.exp(-s) * -np.expm1(-t)

    @staticmethod
    def d_t(s, t):
        return -np.expm1(-s) * np.exp(-t)

    @staticmethod
    def d_st(s, t):
        return np.exp(-s) * np.exp(-t)


_COUPLINGS = {c.name: c for c in (ProductCoupling, SaturatingCoupling)}


@dataclass(frozen=True)
class Interaction(TimeFamily):
    """b = s psi1 + t psi2 + c(s,t) psi3 with a two-parameter coupling term
    that vanishes on both axes."""

    psi1: Symbol = None
    psi2: Symbol = None
    psi3: Symbol = None
    coupling: type = ProductCoupling

    def __post_init__(self):
        if self.psi1 is None or self.psi2 is None or self.psi3 is None:
            raise InputError("three symbols are required")
        if len({self.psi1.dim, self.psi2.dim, self.psi3.dim}) != 1:
            raise DimensionMismatchError("all symbols must share one dimension")
        if not (isinstance(self.coupling, type) and issubclass(self.coupling, Coupling)):
            raise InputError("coupling must be a Coupling subclass")

    @property
    def k(self):
        return 2

    @property
    def dim(self):
        return self.psi1.dim

    def evaluate(self, s, xi, *, validate=True):
        s = _check_times(s, 2, validate)
        c = self.coupling.value(s[0], s[1])
        return (
            s[0] * self.psi1.evaluate(xi)
            + s[1] * self.psi2.evaluate(xi)
            + c * self.psi3.evaluate(xi)
        )

    def mixed_partial(self, sigma, s, xi, *, validate=True):
        sigma = _check_sigma(sigma, 2)
        s = _check_times(s, 2, validate)
        cp = self.coupling
        if sigma == (0, 0):
            return self.evaluate(s, xi, validate=validate)
        if sigma == (1, 0):
            return self.psi1.evaluate(xi) + cp.d_s(s[0], s[1]) * self.psi3.evaluate(xi)
        if sigma == (0, 1):
            return self.psi2.evaluate(xi) + cp.d_t(s[0], s[1]) * self.psi3.evaluate(xi)
        return cp.d_st(s[0], s[1]) * self.psi3.evaluate(xi)


# ---------------------------------------------------------------------------
# Curve restrictions.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurveReparametrization:
    """Monotone nondecreasing reparametrization g with g(0) = 0, g(u) = u^beta."""

    exponent: float = 1.0

    def __post_init__(self):
        if self.exponent <= 0:
            raise InputError("curve exponent must be positive")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise InputError("curve parameter must be nonnegative")
        if self.exponent == 1.0:
            return u
        return u**self.exponent


def Identity() -> CurveReparametrization:
    return CurveReparametrization(1.0)


def Sqrt() -> CurveReparametrization:
    return CurveReparametrization(0.5)


def PowerLaw(beta: float) -> CurveReparametrization:
    return CurveReparametrization(float(beta))


@dataclass(frozen=True)
class CurveRestriction(TimeFamily):
    """One-parameter family u -> b(..., g(u), ...; xi) with the remaining time
    coordinates frozen.  ``linear`` reports whether the restriction equals
    u * rate_symbol(xi), i.e. whether it is a convolution semigroup direction.
    """

    family: TimeFamily = None
    axis: int = 0
    curve: CurveReparametrization = field(default_factory=Identity)
    frozen: tuple = ()
    linear: bool = False
    rate_symbol: Symbol | None = None

    k = 1

    @property
    def dim(self):
        return self.family.dim

    def full_times(self, u: float) -> np.ndarray:
        s = list(self.frozen)
        s.insert(self.axis, float(self.curve(u)))
        return np.asarray(s, dtype=float)

    def evaluate(self, s, xi, *, validate=True):
        s = _check_times(s, 1, validate)
        return self.family.evaluate(self.full_times(s[0]), xi, validate=validate)


def _structurally_zero(weight: float, symbol: Symbol) -> bool:
    return weight == 0.0 or symbol.is_zero


def _combination(terms, dim) -> Symbol:
    live = tuple((w, s) for w, s in terms if not _structurally_zero(w, s))
    if len(live) == 1 and live[0][0] == 1.0:
        return live[0][1]
    return Combination(dim=dim, terms=live)


def restrict_to_curve(
    family: TimeFamily, axis: int, curve: CurveReparametrization, frozen
) -> CurveRestriction:
    """Restrict one time coordinate to a curve, freezing the others.

    The linear flag is decided symbolically per variant: the restriction must
    be exactly u * psi for some symbol psi (a nonzero constant-in-u part or a
    nonlinear power of u both disqualify it).
    """
    frozen = tuple(float(v) for v in np.atleast_1d(np.asarray(frozen, dtype=float)))
    if axis < 0 or axis >= family.k:
        raise InputError(f"axis {axis} out of range for k={family.k}")
    if len(frozen) != family.k - 1:
        raise InputError(f"expected {family.k - 1} frozen values, got {len(frozen)}")
    if any(v < 0 for v in frozen):
        raise InputError("frozen values must be nonnegative")

    beta = curve.exponent
    linear = False
    rate: Symbol | None = None
    dim = family.dim

    if isinstance(family, Separable):
        others = [
            (f, psi)
            for f, psi in zip(frozen, [p for i, p in enumerate(family.symbols) if i != axis])
        ]
        const_zero = all(_structurally_zero(f, psi) for f, psi in others)
        axis_psi = family.symbols[axis]
        if const_zero and axis_psi.is_zero:
            linear, rate = True, zero_symbol(dim)
        elif const_zero and beta == 1.0:
            linear, rate = True, axis_psi
    elif isinstance(family, Monomial):
        coeff = math.prod(
            f**m
            for f, m in zip(frozen, [m for i, m in enumerate(family.exponents) if i != axis])
        )
        m_axis = family.exponents[axis]
        if coeff == 0.0 or family.symbol.is_zero:
            linear, rate = True, zero_symbol(dim)
        elif m_axis * beta == 1.0:
            linear, rate = True, _combination(((coeff, family.symbol),), dim)
    elif isinstance(family, Interaction):
        other = frozen[0]
        psi_axis, psi_other = (
            (family.psi1, family.psi2) if axis == 0 else (family.psi2, family.psi1)
        )
        const_zero = _structurally_zero(other, psi_other)
        if const_zero:
            if family.coupling is ProductCoupling:
                rate_terms = ((1.0, psi_axis), (other, family.psi3))
                if all(_structurally_zero(w, s) for w, s in rate_terms):
                    linear, rate = True, zero_symbol(dim)
                elif beta == 1.0:
                    linear, rate = True, _combination(rate_terms, dim)
            else:
                # Saturating coupling is nonlinear in u unless its symbol factor
                # vanishes (other == 0 kills the coupling entirely).
                coupling_dead = other == 0.0 or family.psi3.is_zero
                if coupling_dead and psi_axis.is_zero:
                    linear, rate = True, zero_symbol(dim)
                elif coupling_dead and beta == 1.0:
                    linear, rate = True, psi_axis
    else:
        raise CapabilityError(f"unsupported family variant {type(family).__name__}")

    return CurveRestriction(
        family=family, axis=axis, curve=curve, frozen=frozen, linear=linear, rate_symbol=rate
    )


# ---------------------------------------------------------------------------
# Empirical growth-order estimation: fit |d^sigma b| <= C (1+|xi|^2)^(r/2).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthEstimate:
    sigma: tuple
    exponent: float  # fitted r
    constant: float  # fitted C
    fit_residual: float  # RMS residual of the log-log fit, never discarded


def estimate_growth(family: TimeFamily, sigma, s, xi_points) -> GrowthEstimate:
    """Least-squares growth-order fit over the largest-|xi| half of the points.

    Requires at least 8 points spanning two decades in |xi|.  An identically
    vanishing derivative yields the -inf sentinel with zero residual.
    """
    sigma = _check_sigma(sigma, family.k)
    xi = np.asarray(xi_points, dtype=float)
    if xi.ndim == 1:
        xi = xi[:, None]
    norms = np.linalg.norm(xi, axis=-1)
    if xi.shape[0] < 8:
        raise InputError("at least 8 grid points required")
    positive = norms[norms > 0]
    if positive.size == 0 or positive.max() / positive.min() < 100.0:
        raise InputError("|xi| must span at least two decades")

    values = np.abs(family.mixed_partial(sigma, s, xi))
    if np.all(values == 0.0):
        return GrowthEstimate(sigma, float("-inf"), 0.0, 0.0)

    order = np.argsort(norms)
    upper = order[len(order) // 2 :]
    mask = values[upper] > 0.0
    upper = upper[mask]
    if upper.size < 2:
        return GrowthEstimate(sigma, float("-inf"), 0.0, 0.0)
    x = np.log1p(norms[upper] ** 2)
    y = np.log(values[upper])
    design = np.stack([x, np.ones_like(x)], axis=1)
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.sqrt(np.mean((design @ np.array([slope, intercept]) - y) ** 2)))
    return GrowthEstimate(sigma, float(2.0 * slope), float(np.exp(intercept)), resid)


# ---------------------------------------------------------------------------
# JSON serialization (schema in docs/schema/family.schema.json).
# ---------------------------------------------------------------------------


def family_to_dict(family: TimeFamily) -> dict:
    if isinstance(family, Separable):
        return {
            "variant": "separable",
            "symbols": [symbol_to_dict(p) for p in family.symbols],
        }
    if isinstance(family, Monomial):
        return {
            "variant": "monomial",
            "exponents": list(family.exponents),
            "symbol": symbol_to_dict(family.symbol),
        }
    if isinstance(family, Interaction):
        return {
            "variant": "interaction",
            "psi1": symbol_to_dict(family.psi1),
            "psi2": symbol_to_dict(family.psi2),
            "psi3": symbol_to_dict(family.psi3),
            "coupling": family.coupling.name,
        }
    raise InputError(f"cannot serialize family of type {type(family).__name__}")


_FAMILY_FIELDS = {
    "separable": {"symbols"},
    "monomial": {"exponents", "symbol"},
    "interaction": {"psi1", "psi2", "psi3", "coupling"},
}


def family_from_dict(data: dict) -> TimeFamily:
    if not isinstance(data, dict) or "variant" not in data:
        raise InputError("family JSON must be an object with a 'variant' field")
    variant = data["variant"]
    if variant not in _FAMILY_FIELDS:
        raise InputError(f"unknown family variant {variant!r}")
    fields = _FAMILY_FIELDS[variant]
    unknown = set(data.keys()) - fields - {"variant"}
    if unknown:
        raise InputError(f"unknown fields for variant {variant!r}: {sorted(unknown)}")
    missing = fields - set(data.keys())
    if missing:
        raise InputError(f"missing fields for variant {variant!r}: {sorted(missing)}")
    if variant == "separable":
        return Separable(symbols=tuple(symbol_from_dict(p) for p in data["symbols"]))
    if variant == "monomial":
        return Monomial(
            exponents=tuple(int(m) for m in data["exponents"]),
            symbol=symbol_from_dict(data["symbol"]),
        )
    coupling = _COUPLINGS.get(data["coupling"])
    if coupling is None:
        raise InputError(f"unknown coupling {data['coupling']!r}")
    return Interaction(
        psi1=symbol_from_dict(data["psi1"]),
        psi2=symbol_from_dict(data["psi2"]),
        psi3=symbol_from_dict(data["psi3"]),
        coupling=coupling,
    )
