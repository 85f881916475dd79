"""Batch command-line front-end.

Subcommands map onto the library pipelines and emit CSV tables plus a JSON
run summary (inputs, tolerances, one pass/fail entry per check, timings).
Summaries are byte-stable for fixed inputs apart from the timing fields.

Exit codes: 0 success, 1 usage or configuration error (bad flags, malformed
or schema-rejected JSON), 2 accuracy failure (a check missed its tolerance,
the grid was inadmissible, or a synthesis contract was violated).
"""

from __future__ import annotations

import argparse
import importlib.resources
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

import jsonschema
from referencing import Registry, Resource

from . import __version__
from .errors import (
    AccuracyError,
    CapabilityError,
    ContractError,
    GridTooSmallError,
    InputError,
    MultilevyError,
)
from .fieldio import format_float, read_field_csv, write_field_csv
from .goursat import GoursatProblem, exact_solution, solve_transformed
from .montecarlo import ecf_check, sample_measure, semigroup_convolution_check
from .spectral import (
    FrequencyGrid,
    apply_convolution,
    apply_multiplier,
    auto_frequency_grid,
    check_commutation,
    check_contraction,
    gaussian_field,
    multiplier_values,
    random_band_limited_field,
    synthesize_measure,
)
from .symbolcalc import DerivedSymbol
from .symbols import Power, Quadratic, check_negative_definite, standard_catalog
from .timefamily import (
    Identity,
    Interaction,
    Monomial,
    ProductCoupling,
    Separable,
    Sqrt,
    TimeFamily,
    estimate_growth,
    family_from_dict,
    family_to_dict,
    restrict_to_curve,
)

__all__ = ["main", "run", "RunConfig", "ToleranceTier", "TIERS"]


@dataclass(frozen=True)
class ToleranceTier:
    """Named accuracy tier; heavy-tailed symbols decay algebraically in
    frequency and get the looser tier."""

    name: str
    boundary_tol: float
    mass_tol: float
    equivalence_tol: float
    convolution_l1_tol: float
    goursat_tol: float


TIERS = {
    "strict": ToleranceTier("strict", 1e-12, 1e-6, 1e-8, 1e-6, 1e-5),
    "heavy-tail": ToleranceTier("heavy-tail", 1e-8, 1e-4, 1e-8, 1e-3, 1e-4),
}


@dataclass(frozen=True)
class RunConfig:
    """Resolved run configuration; defaults are documented here.

    grid_n defaults to 1024 (one-dimensional runs); grid_dxi of None selects
    the automatic spacing (bisection on the boundary decay of the multiplier);
    tol_tier defaults to strict; threads to 1; seed to 0.
    """

    command: str
    out_dir: Path
    grid_n: int = 1024
    grid_dxi: float | None = None
    tol_tier: str = "strict"
    threads: int = 1
    seed: int = 0

    @property
    def tier(self) -> ToleranceTier:
        return TIERS[self.tol_tier]


# ---------------------------------------------------------------------------
# Schema-validated JSON loading.
# ---------------------------------------------------------------------------


def _schema_registry():
    files = importlib.resources.files("multilevy").joinpath("schemas")
    resources = []
    schemas = {}
    for name in ("symbol", "family", "goursat_problem"):
        content = json.loads(files.joinpath(f"{name}.schema.json").read_text())
        schemas[name] = content
        resources.append((content["$id"], Resource.from_contents(content)))
    return schemas, Registry().with_resources(resources)


_SCHEMAS, _REGISTRY = _schema_registry()


def validate_document(data, schema_name: str) -> None:
    validator = jsonschema.Draft202012Validator(_SCHEMAS[schema_name], registry=_REGISTRY)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        where = "/".join(str(p) for p in first.absolute_path) or "<root>"
        raise InputError(f"{schema_name} JSON invalid at {where}: {first.message}")


def load_family(path) -> "TimeFamily":
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read family file {path}: {exc}") from exc
    validate_document(data, "family")
    return family_from_dict(data)


# ---------------------------------------------------------------------------
# Output helpers.
# ---------------------------------------------------------------------------


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_float(c) if isinstance(c, float) else str(c) for c in row))
            fh.write("\n")


class Summary:
    """Accumulates checks and output paths; serialized deterministically."""

    def __init__(self, command: str, inputs: dict, tolerances: dict):
        self.doc = {
            "command": command,
            "version": __version__,
            "inputs": inputs,
            "tolerances": tolerances,
            "checks": [],
            "outputs": [],
            "timings": {},
        }
        self._clock = time.perf_counter()

    def check(self, name: str, passed: bool, value=None, threshold=None, expected=None):
        entry = {"name": name, "passed": bool(passed)}
        if value is not None:
            entry["value"] = value
        if threshold is not None:
            entry["threshold"] = threshold
        if expected is not None:
            entry["expected"] = expected
        self.doc["checks"].append(entry)

    def output(self, path: Path):
        # recorded relative to the output directory so summaries are
        # byte-stable across runs in different locations
        self.doc["outputs"].append(path.name)

    def finish(self, out_dir: Path) -> int:
        self.doc["timings"]["wall_seconds"] = time.perf_counter() - self._clock
        self.doc["passed"] = all(c["passed"] for c in self.doc["checks"])
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "summary.json"
        path.write_text(json.dumps(self.doc, indent=2, sort_keys=True) + "\n")
        for check in self.doc["checks"]:
            state = "pass" if check["passed"] else "FAIL"
            print(f"[{state}] {check['name']}" + (f" value={check.get('value')}" if "value" in check else ""))
        print(f"summary: {path}")
        return 0 if self.doc["passed"] else 2


def _resolve_grid(cfg: RunConfig, family, s) -> FrequencyGrid:
    if cfg.grid_dxi is not None:
        return FrequencyGrid(shape=(cfg.grid_n,) * family.dim, dxi=(cfg.grid_dxi,) * family.dim)
    return auto_frequency_grid(family, s, cfg.grid_n, boundary_tol=cfg.tier.boundary_tol)


def _parse_times(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise InputError(f"cannot parse time vector {text!r}") from exc


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def cmd_density(args, cfg: RunConfig) -> int:
    family = load_family(args.family)
    s = _parse_times(args.s)
    grid = _resolve_grid(cfg, family, s)
    tier = cfg.tier
    summary = Summary(
        "density",
        {
            "family": family_to_dict(family),
            "s": list(s),
            "grid_n": cfg.grid_n,
            "grid_dxi": grid.dxi,
            "seed": cfg.seed,
        },
        {"boundary_tol": tier.boundary_tol, "mass_tol": tier.mass_tol},
    )
    measure = synthesize_measure(
        family,
        s,
        grid,
        boundary_tol=tier.boundary_tol,
        mass_tol=tier.mass_tol,
        allow_slow_decay=args.allow_slow_decay,
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "density.csv"
    if grid.n == 1:
        rows = zip((float(v) for v in grid.x_axis(0)), (float(p) for p in measure.density))
        _write_csv(path, ["x0", "density"], rows)
    else:
        pts = grid.x_points().reshape(-1, grid.n)
        dens = measure.density.reshape(-1)
        rows = ((float(p[0]), float(p[1]), float(d)) for p, d in zip(pts, dens))
        _write_csv(path, ["x0", "x1", "density"], rows)
    summary.output(path)
    summary.check("mass", abs(measure.mass - 1.0) <= tier.mass_tol, measure.mass, tier.mass_tol)
    summary.check(
        "negativity",
        measure.negativity <= 1e-8 * max(measure.density.max(), 1e-300),
        measure.negativity,
    )
    return summary.finish(cfg.out_dir)


def cmd_apply(args, cfg: RunConfig) -> int:
    family = load_family(args.family)
    s = _parse_times(args.s)
    width = None
    if args.field is not None:
        u = read_field_csv(args.field)
        grid = u.grid
    else:
        grid = _resolve_grid(cfg, family, s)
        width = args.datum_width
        if width is None:
            # widest Gaussian whose spectrum clears the band-limit check,
            # with margin for the asymmetric boundary node
            xi_edge = min(abs(grid.xi_axis(i)).max() for i in range(grid.n)) * (
                1.0 - 2.0 / min(grid.shape)
            )
            width = float(np.sqrt(2.0 * np.log(1e12)) / xi_edge)
        u = gaussian_field(grid, width=width)
    summary = Summary(
        "apply",
        {
            "family": family_to_dict(family),
            "s": list(s),
            "grid_n": grid.shape,
            "grid_dxi": grid.dxi,
            "datum_width": width if args.field is None else None,
            "field": args.field,
        },
        {"contraction_slack": 1e-12},
    )
    out = apply_multiplier(family, s, u)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "applied.csv"
    write_field_csv(out, path)
    summary.output(path)
    report = check_contraction(family, s, u)
    summary.check("contraction_l2", report.l2_ratio <= 1.0 + 1e-12, report.l2_ratio)
    summary.check("contraction_sup", report.sup_ratio <= 1.0 + 1e-12, report.sup_ratio)
    return summary.finish(cfg.out_dir)


def cmd_symbol(args, cfg: RunConfig) -> int:
    family = load_family(args.family)
    s = _parse_times(args.s)
    grid = _resolve_grid(cfg, family, s)
    method = args.method.replace("-", "_")
    deriv = DerivedSymbol(family, method=method, fd_step=args.fd_step)
    values = deriv.evaluate(s, grid.xi_points())
    summary = Summary(
        "symbol",
        {
            "family": family_to_dict(family),
            "s": list(s),
            "method": method,
            "fd_step": args.fd_step,
            "grid_n": cfg.grid_n,
            "grid_dxi": grid.dxi,
        },
        {},
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "symbol.csv"
    pts = grid.xi_points().reshape(-1, grid.n)
    flat = values.reshape(-1)
    header = [f"xi{i}" for i in range(grid.n)] + ["re_a", "im_a", "method"]
    rows = (
        tuple(float(c) for c in p) + (float(v.real), float(v.imag), method)
        for p, v in zip(pts, flat)
    )
    _write_csv(path, header, rows)
    summary.output(path)
    summary.check("evaluated", True, int(flat.size))
    return summary.finish(cfg.out_dir)


def cmd_goursat(args, cfg: RunConfig) -> int:
    try:
        doc = json.loads(Path(args.problem).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read problem file {args.problem}: {exc}") from exc
    validate_document(doc, "goursat_problem")
    family = family_from_dict(doc["family"])
    if not isinstance(family, Interaction):
        raise InputError("the characteristic-data problem requires an interaction family")
    if family.dim != 1:
        raise InputError("the goursat subcommand supports one-dimensional problems")
    grid_spec = doc.get("grid", {})
    n_points = int(grid_spec.get("n_points", cfg.grid_n))
    boundary_tol = float(grid_spec.get("boundary_tol", cfg.tier.boundary_tol))
    extent = tuple(float(v) for v in doc["extent"])
    if grid_spec.get("dxi") is not None:
        grid = FrequencyGrid(shape=(n_points,) * family.dim, dxi=(float(grid_spec["dxi"]),) * family.dim)
    else:
        grid = auto_frequency_grid(family, extent, n_points, boundary_tol=boundary_tol)
    datum = gaussian_field(
        grid, width=float(doc["datum"]["width"]), center=float(doc["datum"].get("center", 0.0))
    )
    problem = GoursatProblem(
        family=family,
        datum=datum,
        extent=extent,
        base_steps=tuple(float(v) for v in doc["base_steps"]),
    )
    tol = float(doc.get("error_tolerance", cfg.tier.goursat_tol))
    summary = Summary(
        "goursat",
        {"problem": doc, "grid_n": n_points, "grid_dxi": grid.dxi, "threads": cfg.threads},
        {"error_tolerance": tol},
    )
    solution = solve_transformed(problem, threads=cfg.threads)

    nodes = doc.get("output_nodes") or [[extent[0], extent[1]]]
    hs, ht = problem.base_steps
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "goursat_errors.csv"
    rows = []
    for s_req, t_req in nodes:
        i, j = int(round(s_req / hs)), int(round(t_req / ht))
        if abs(i * hs - s_req) > 1e-9 or abs(j * ht - t_req) > 1e-9:
            raise InputError(f"output node ({s_req},{t_req}) is not on the base lattice")
        v = solution.assemble(i, j)
        ex = exact_solution(problem, i * hs, j * ht)
        x = grid.x_points().reshape(-1, grid.n)
        for p, a, b in zip(x, v.values.reshape(-1), ex.values.reshape(-1)):
            rows.append(
                tuple(float(c) for c in p[:1])
                + (
                    float(i * hs),
                    float(j * ht),
                    float(a.real),
                    float(a.imag),
                    float(b.real),
                    float(b.imag),
                    float(abs(a - b)),
                )
            )
    _write_csv(path, ["x0", "s", "t", "re_v", "im_v", "re_exact", "im_exact", "abs_err"], rows)
    summary.output(path)
    err = solution.global_relative_error()
    summary.check("global_relative_error", err <= tol, err, tol)
    summary.check("no_failed_frequencies", len(solution.failed) == 0, len(solution.failed))
    return summary.finish(cfg.out_dir)


def cmd_sample(args, cfg: RunConfig) -> int:
    family = load_family(args.family)
    s = _parse_times(args.s)
    tier = cfg.tier
    if cfg.grid_dxi is not None:
        grid = FrequencyGrid(shape=(cfg.grid_n,) * family.dim, dxi=(cfg.grid_dxi,) * family.dim)
    else:
        # A wider frequency band gives finer spatial cells for inversion sampling.
        grid = auto_frequency_grid(
            family, s, cfg.grid_n, boundary_tol=tier.boundary_tol, margin=4.0
        )
    summary = Summary(
        "sample",
        {
            "family": family_to_dict(family),
            "s": list(s),
            "count": args.count,
            "seed": cfg.seed,
            "grid_n": cfg.grid_n,
            "grid_dxi": grid.dxi,
        },
        {"boundary_tol": tier.boundary_tol, "mass_tol": tier.mass_tol},
    )
    measure = synthesize_measure(
        family, s, grid, boundary_tol=tier.boundary_tol, mass_tol=tier.mass_tol
    )
    batch = sample_measure(measure, args.count, cfg.seed)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "samples.csv"
    _write_csv(path, ["x"], ((float(v),) for v in batch.draws))
    sidecar = cfg.out_dir / "samples.json"
    sidecar.write_text(
        json.dumps(
            {
                "family": family_to_dict(family),
                "s": list(s),
                "seed": cfg.seed,
                "count": args.count,
                "clamped_mass": batch.clamped_mass,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    summary.output(path)
    summary.output(sidecar)
    summary.check("determinism_contract", True, cfg.seed)
    return summary.finish(cfg.out_dir)


def cmd_growth(args, cfg: RunConfig) -> int:
    family = load_family(args.family)
    s = _parse_times(args.s)
    sigma = tuple(int(v) for v in args.sigma.split(","))
    xi = np.geomspace(args.xi_min, args.xi_max, args.xi_points)
    points = np.zeros((xi.size, family.dim))
    points[:, 0] = xi
    estimate = estimate_growth(family, sigma, s, points)
    summary = Summary(
        "growth",
        {
            "family": family_to_dict(family),
            "s": list(s),
            "sigma": list(sigma),
            "xi_min": args.xi_min,
            "xi_max": args.xi_max,
            "xi_points": args.xi_points,
        },
        {},
    )
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "growth.json"
    path.write_text(
        json.dumps(
            {
                "sigma": list(estimate.sigma),
                "exponent": estimate.exponent,
                "constant": estimate.constant,
                "fit_residual": estimate.fit_residual,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    summary.output(path)
    summary.check("fit_residual", np.isfinite(estimate.fit_residual), estimate.fit_residual)
    return summary.finish(cfg.out_dir)


def _verify_families():
    half = Quadratic(matrix=[[0.5]])
    gauss = Separable(symbols=(half, half))
    cauchy = Monomial(exponents=(2, 1), symbol=Power(alpha=1.0))
    inter = Interaction(
        psi1=Power(alpha=2.0),
        psi2=Power(alpha=2.0),
        psi3=Power(alpha=2.0),
        coupling=ProductCoupling,
    )
    return {"separable_gaussian": gauss, "monomial_cauchy": cauchy, "interaction_product": inter}


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.suite != "core":
        raise InputError(f"unknown suite {args.suite!r}")
    tier = cfg.tier
    summary = Summary(
        "verify",
        {"suite": args.suite, "seed": cfg.seed, "grid_n": cfg.grid_n},
        {
            "psd_tol_per_dim": 1e-8,
            "contraction_slack": 1e-12,
            "commutation_tol": 1e-12,
            "equivalence_tol": tier.equivalence_tol,
            "mass_tol": tier.mass_tol,
            "convolution_l1_tol": tier.convolution_l1_tol,
        },
    )

    for symbol in standard_catalog(1):
        report = check_negative_definite(symbol, 32, (0.1, 1.0, 10.0), seed=cfg.seed + 7)
        summary.check(
            f"psd_{type(symbol).__name__.lower()}",
            report.passed,
            min(report.min_eigenvalues),
            -report.tol,
        )

    families = _verify_families()
    for name, family in families.items():
        grid = auto_frequency_grid(
            family,
            (1.0, 1.0),
            min(cfg.grid_n, 512),
            boundary_tol=max(tier.boundary_tol, 1e-10),
        )
        measure = synthesize_measure(
            family, (1.0, 1.0), grid, boundary_tol=1e-8, mass_tol=tier.mass_tol
        )
        summary.check(f"mass_{name}", abs(measure.mass - 1.0) <= tier.mass_tol, measure.mass)
        mult_bound = float(np.abs(multiplier_values(family, (1.0, 1.0), grid)).max())
        summary.check(f"multiplier_bound_{name}", mult_bound <= 1.0 + 1e-12, mult_bound)
        worst_equiv = 0.0
        worst_contr = 0.0
        worst_comm = 0.0
        for trial in range(10):
            u = random_band_limited_field(grid, seed=cfg.seed + 100 + trial)
            via_mult = apply_multiplier(family, (1.0, 1.0), u)
            via_conv = apply_convolution(measure, u)
            num = np.sqrt(np.sum(np.abs(via_mult.values - via_conv.values) ** 2))
            den = np.sqrt(np.sum(np.abs(via_mult.values) ** 2))
            worst_equiv = max(worst_equiv, float(num / den))
            contr = check_contraction(family, (0.7, 0.4), u)
            worst_contr = max(worst_contr, contr.l2_ratio, contr.sup_ratio)
            comm = check_commutation(family, (0.7, 0.4), (0.2, 1.1), u)
            worst_comm = max(worst_comm, comm.relative_l2_difference)
        summary.check(
            f"equivalence_{name}", worst_equiv <= tier.equivalence_tol, worst_equiv
        )
        summary.check(f"contraction_{name}", worst_contr <= 1.0 + 1e-12, worst_contr)
        summary.check(f"commutation_{name}", worst_comm <= 1e-12, worst_comm)

    # Convolution semigroups along the two linear curve directions, plus the
    # nonlinear restriction as a negative control (expected to be rejected).
    mono = Monomial(exponents=(2, 1), symbol=Power(alpha=2.0))
    sqrt_curve = restrict_to_curve(mono, 0, Sqrt(), (1.0,))
    ident_curve = restrict_to_curve(mono, 1, Identity(), (2.0,))
    for name, restriction in (("sqrt_curve", sqrt_curve), ("identity_curve", ident_curve)):
        grid = auto_frequency_grid(restriction, (2.0,), min(cfg.grid_n, 512))
        report = semigroup_convolution_check(
            restriction, 0.7, 1.3, grid, tol=tier.convolution_l1_tol
        )
        summary.check(f"semigroup_{name}", report.passed, report.relative_l1_error)
    nonlinear = restrict_to_curve(mono, 0, Identity(), (1.0,))
    try:
        semigroup_convolution_check(nonlinear, 0.7, 1.3, grid)
        summary.check("semigroup_nonlinear_rejected", False, expected="ContractError")
    except ContractError:
        summary.check("semigroup_nonlinear_rejected", True, expected="ContractError")

    return summary.finish(cfg.out_dir)


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multilevy",
        description="Spectral pipelines for multiparameter Levy-type operator families.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--grid-n", type=int, default=1024, help="grid points per axis")
        p.add_argument("--grid-dxi", type=float, default=None, help="frequency spacing override")
        p.add_argument(
            "--tol-tier", choices=sorted(TIERS), default="strict", help="accuracy tier"
        )
        p.add_argument("--threads", type=int, default=1, help="parallelism degree")
        p.add_argument("--seed", type=int, default=0, help="random seed")

    p = sub.add_parser("density", help="synthesize a probability density")
    common(p)
    p.add_argument("--family", required=True, help="family JSON file")
    p.add_argument("--s", required=True, help="comma-separated time parameters")
    p.add_argument("--allow-slow-decay", action="store_true")

    p = sub.add_parser("apply", help="apply the contraction operator to a field")
    common(p)
    p.add_argument("--family", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--field", default=None, help="input field CSV (default: Gaussian datum)")
    p.add_argument(
        "--datum-width",
        type=float,
        default=None,
        help="Gaussian datum width (default: fitted to the grid band)",
    )

    p = sub.add_parser("symbol", help="dump the derived symbol over the grid")
    common(p)
    p.add_argument("--family", required=True)
    p.add_argument("--s", required=True)
    p.add_argument(
        "--method",
        choices=["set-partition", "closed-form", "finite-difference"],
        default="set-partition",
    )
    p.add_argument("--fd-step", type=float, default=1e-3)

    p = sub.add_parser("goursat", help="solve a characteristic-data problem")
    common(p)
    p.add_argument("--problem", required=True, help="problem JSON file")

    p = sub.add_parser("verify", help="run a verification suite")
    common(p)
    p.add_argument("--suite", default="core")

    p = sub.add_parser("sample", help="draw samples from a synthesized measure")
    common(p)
    p.add_argument("--family", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--count", type=int, default=100000)

    p = sub.add_parser("growth", help="estimate the frequency growth order")
    common(p)
    p.add_argument("--family", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--sigma", required=True, help="comma-separated 0/1 multi-index")
    p.add_argument("--xi-min", type=float, default=0.5)
    p.add_argument("--xi-max", type=float, default=500.0)
    p.add_argument("--xi-points", type=int, default=48)

    return parser


_DISPATCH = {
    "density": cmd_density,
    "apply": cmd_apply,
    "symbol": cmd_symbol,
    "goursat": cmd_goursat,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "growth": cmd_growth,
}


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    cfg = RunConfig(
        command=args.command,
        out_dir=Path(args.out),
        grid_n=args.grid_n,
        grid_dxi=args.grid_dxi,
        tol_tier=args.tol_tier,
        threads=args.threads,
        seed=args.seed,
    )
    try:
        return _DISPATCH[args.command](args, cfg)
    except (InputError, CapabilityError, ContractError) as exc:
        print(f"error: {exc}")
        return 1
    except (AccuracyError, GridTooSmallError) as exc:
        print(f"accuracy failure: {exc}")
        return 2
    except MultilevyError as exc:
        print(f"error: {exc}")
        return 1


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
