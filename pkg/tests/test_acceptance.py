"""Acceptance criteria, one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
Tolerances are fixed here; analytic oracles (normal/Cauchy densities, closed
multiplier forms, hand-differentiated symbols) are independent of the code
paths they check.
"""

import time

import numpy as np
import pytest
from scipy.stats import cauchy, norm

from multilevy import (
    Block,
    ContractError,
    Drift,
    GoursatProblem,
    Identity,
    Interaction,
    Monomial,
    Power,
    ProductCoupling,
    Quadratic,
    SaturatingCoupling,
    Separable,
    Sqrt,
    apply_convolution,
    apply_multiplier,
    auto_frequency_grid,
    check_boundary_limits,
    check_commutation,
    check_contraction,
    check_negative_definite,
    ecf_check,
    gaussian_field,
    mixed_derivative_residual,
    random_band_limited_field,
    residual_decay,
    restrict_to_curve,
    sample_measure,
    semigroup_convolution_check,
    solve_transformed,
    standard_catalog,
    symbol_closed_form,
    symbol_finite_difference,
    symbol_from_partitions,
    synthesize_measure,
)

from conftest import rel_l2


def _report(number: int, name: str, ok: bool, detail: str = ""):
    state = "PASS" if ok else "FAIL"
    print(f"[acceptance {number}] {name}: {state}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {number} ({name}): {detail}"


P2 = Power(alpha=2.0)
HALF = Quadratic(matrix=[[0.5]])


def _gaussian_family():
    return Separable(symbols=(HALF, HALF))


def _cauchy_family():
    return Monomial(exponents=(2, 1), symbol=Power(alpha=1.0))


def test_criterion_1_schoenberg_psd_suite():
    start = time.perf_counter()
    worst = 0.0
    ok = True
    for dim in (1, 2):
        for symbol in standard_catalog(dim):
            report = check_negative_definite(symbol, 32, (0.1, 1.0, 10.0), tol=1e-8 * 32)
            ok = ok and report.passed
            worst = min(worst, min(report.min_eigenvalues))
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 5.0
    _report(1, "schoenberg positive-definiteness suite", ok,
            f"min eig {worst:.2e} >= {-1e-8 * 32:.1e}, {elapsed:.2f}s < 5s")


def test_criterion_2_density_recovery():
    fam = _gaussian_family()
    start = time.perf_counter()
    grid = auto_frequency_grid(fam, (1.0, 1.0), 1024)
    meas = synthesize_measure(fam, (1.0, 1.0), grid)
    gauss_err = float(np.abs(meas.density - norm.pdf(grid.x_axis(0), scale=np.sqrt(2))).max())
    gauss_time = time.perf_counter() - start
    mass_dev = abs(meas.mass - 1.0)

    cfam = _cauchy_family()
    start = time.perf_counter()
    cgrid = auto_frequency_grid(cfam, (1.0, 1.0), 1024, boundary_tol=1e-8)
    cmeas = synthesize_measure(cfam, (1.0, 1.0), cgrid, boundary_tol=1e-8, mass_tol=1e-4)
    cauchy_err = float(np.abs(cmeas.density - cauchy.pdf(cgrid.x_axis(0))).max())
    cauchy_time = time.perf_counter() - start

    ok = (
        gauss_err <= 1e-6
        and mass_dev <= 1e-8
        and cauchy_err <= 1e-4
        and gauss_time < 1.0
        and cauchy_time < 1.0
    )
    _report(2, "gaussian and cauchy density recovery", ok,
            f"sup {gauss_err:.2e} <= 1e-6, mass dev {mass_dev:.1e} <= 1e-8, "
            f"cauchy sup {cauchy_err:.2e} <= 1e-4, {gauss_time:.2f}s/{cauchy_time:.2f}s < 1s")


def test_criterion_3_multiplier_equals_convolution():
    families = {
        "gaussian": _gaussian_family(),
        "cauchy": _cauchy_family(),
        "interaction": Interaction(psi1=P2, psi2=P2, psi3=P2, coupling=ProductCoupling),
    }
    worst = 0.0
    for family in families.values():
        grid = auto_frequency_grid(family, (1.0, 1.0), 512, boundary_tol=1e-10)
        meas = synthesize_measure(family, (1.0, 1.0), grid, boundary_tol=1e-8, mass_tol=1e-4)
        for seed in range(10):
            u = random_band_limited_field(grid, seed=seed)
            a = apply_multiplier(family, (1.0, 1.0), u)
            b = apply_convolution(meas, u)
            worst = max(worst, rel_l2(b.values, a.values))
    _report(3, "multiplier and convolution forms agree", worst <= 1e-8,
            f"worst rel L2 {worst:.2e} <= 1e-8 on 10 fields x {len(families)} families")


def test_criterion_4_symbol_calculus():
    inter = Interaction(psi1=P2, psi2=Power(alpha=1.0), psi3=HALF, coupling=ProductCoupling)
    rng = np.random.Generator(np.random.Philox(key=4))
    xi = rng.uniform(-2.0, 2.0, size=(16, 1))
    analytic_gap = 0.0
    fd_gap = 0.0
    ratios = []
    for _ in range(5):
        s = tuple(rng.uniform(0.1, 1.2, size=2))
        a_part = symbol_from_partitions(inter, s, xi)
        a_closed = symbol_closed_form(inter, s, xi)
        a_fd = symbol_finite_difference(inter, s, xi, 1e-3)
        a_fd2 = symbol_finite_difference(inter, s, xi, 5e-4)
        scale = np.abs(a_part)
        analytic_gap = max(analytic_gap, float(np.max(np.abs(a_part - a_closed) / scale)))
        fd_gap = max(fd_gap, float(np.max(np.abs(a_fd - a_part) / scale)))
        err1 = np.abs(a_fd - a_part).max()
        err2 = np.abs(a_fd2 - a_part).max()
        ratios.append(err1 / err2)
    ratio_ok = all(4.0 * 0.7 <= r <= 4.0 * 1.3 for r in ratios)

    # closed-form exemplars, exact
    biharm = symbol_from_partitions(Separable(symbols=(P2, P2)), (0.3, 0.8), np.array([2.0]))
    third = symbol_from_partitions(
        Separable(symbols=(P2, Drift(velocity=[0.7]))), (1.0, 1.0), np.array([2.0])
    )
    lap = symbol_from_partitions(
        Separable(symbols=(Drift(velocity=[1.0]), Drift(velocity=[-1.0]))),
        (1.0, 1.0),
        np.array([3.0]),
    )
    b1 = Block(dim=2, base=Power(dim=1, alpha=2.0), coords=(0,))
    b2 = Block(dim=2, base=Power(dim=1, alpha=2.0), coords=(1,))
    block = symbol_from_partitions(
        Separable(symbols=(b1, b2)), (0.5, 0.5), np.array([1.5, 2.0])
    )
    exemplars_ok = (
        complex(biharm) == 16.0
        and complex(third) == 1j * 0.7 * 8.0
        and complex(lap) == 9.0
        and complex(block) == 1.5**2 * 2.0**2
    )
    ok = analytic_gap <= 1e-9 and fd_gap <= 1e-5 and ratio_ok and exemplars_ok
    _report(4, "symbol calculus three-way agreement", ok,
            f"analytic gap {analytic_gap:.2e} <= 1e-9, fd gap {fd_gap:.2e} <= 1e-5, "
            f"fd ratios {[f'{r:.2f}' for r in ratios]} in 4 +/- 30%, exemplars exact: {exemplars_ok}")


def test_criterion_5_goursat_solver():
    fam = Interaction(psi1=P2, psi2=P2, psi3=P2, coupling=ProductCoupling)
    grid = auto_frequency_grid(fam, (1.0, 1.0), 1024)
    datum = gaussian_field(grid, width=np.sqrt(7.0))

    start = time.perf_counter()
    problem = GoursatProblem(
        family=fam, datum=datum, extent=(1.0, 1.0), base_steps=(1 / 64, 1 / 64)
    )
    err_coarse = solve_transformed(problem).global_relative_error()
    elapsed = time.perf_counter() - start

    problem_fine = GoursatProblem(
        family=fam, datum=datum, extent=(1.0, 1.0), base_steps=(1 / 128, 1 / 128)
    )
    err_fine = solve_transformed(problem_fine).global_relative_error()
    ratio = err_coarse / err_fine
    ok = err_coarse <= 1e-5 and 4.0 * 0.8 <= ratio <= 4.0 * 1.2 and elapsed < 30.0
    _report(5, "characteristic-data solver vs closed form", ok,
            f"global rel err {err_coarse:.2e} <= 1e-5 at steps 1/64, "
            f"halving ratio {ratio:.2f} in 4 +/- 20%, {elapsed:.1f}s < 30s at N=1024")


def test_criterion_6_residual_check():
    fam = Interaction(psi1=P2, psi2=P2, psi3=P2, coupling=ProductCoupling)
    grid = auto_frequency_grid(fam, (1.0, 1.0), 1024)
    problem = GoursatProblem(
        family=fam,
        datum=gaussian_field(grid, width=np.sqrt(7.0)),
        extent=(1.0, 1.0),
        base_steps=(1 / 64, 1 / 64),
    )
    points = [(0.3, 0.4), (0.6, 0.7), (0.5, 0.25)]
    r1, r2, ratios = residual_decay(problem, points, 0.02)
    decay_ok = all(4.0 * 0.8 <= r <= 4.0 * 1.2 for r in ratios)

    noise = random_band_limited_field(grid, 17)
    control = mixed_derivative_residual(problem, points, 0.02, source=lambda s, t: noise)
    control_ok = min(control.residuals) > 1e-2
    ok = decay_ok and control_ok
    _report(6, "mixed-derivative residual", ok,
            f"residuals {[f'{r:.1e}' for r in r1.residuals]} with decay ratios "
            f"{[f'{r:.2f}' for r in ratios]} ~ 4, negative control {min(control.residuals):.2f} > 1e-2")


def test_criterion_7_boundary_limits():
    fam = Interaction(psi1=P2, psi2=P2, psi3=P2, coupling=ProductCoupling)
    grid = auto_frequency_grid(fam, (1.0, 1.0), 1024)
    problem = GoursatProblem(
        family=fam,
        datum=gaussian_field(grid, width=np.sqrt(7.0)),
        extent=(1.0, 1.0),
        base_steps=(1 / 64, 1 / 64),
    )
    report = check_boundary_limits(problem, [1e-1, 1e-2, 1e-3, 1e-4], 0.5)
    ok = report.monotone and abs(report.slope - 1.0) <= 0.1
    _report(7, "marginal boundary limits", ok,
            f"log-log slope {report.slope:.3f} in 1 +/- 0.1, monotone: {report.monotone}")


def test_criterion_8_contraction_and_commutation():
    families = {
        "gaussian": _gaussian_family(),
        "cauchy": _cauchy_family(),
        "stable": Separable(symbols=(Power(alpha=0.5), Power(alpha=1.5))),
        "interaction": Interaction(psi1=P2, psi2=P2, psi3=P2, coupling=ProductCoupling),
        "relativistic": Separable(
            symbols=(Power(alpha=2.0), Quadratic(matrix=[[1.0]]))
        ),
    }
    worst_ratio = 0.0
    worst_comm = 0.0
    for family in families.values():
        grid = auto_frequency_grid(family, (1.0, 1.0), 512, boundary_tol=1e-10)
        for seed in (0, 1, 2):
            u = random_band_limited_field(grid, seed=seed)
            rep = check_contraction(family, (0.8, 0.4), u)
            worst_ratio = max(worst_ratio, rep.l2_ratio, rep.sup_ratio)
            com = check_commutation(family, (0.8, 0.4), (0.15, 1.2), u)
            worst_comm = max(worst_comm, com.relative_l2_difference)
    ok = worst_ratio <= 1.0 + 1e-12 and worst_comm <= 1e-12
    _report(8, "contraction and commutation", ok,
            f"worst norm ratio {worst_ratio:.15f} <= 1+1e-12, "
            f"worst commutator {worst_comm:.2e} <= 1e-12")


def test_criterion_9_monte_carlo():
    start = time.perf_counter()
    m = 100000
    probes = [0.25, 0.5, 1.0, 2.0, 4.0]

    fam = _gaussian_family()
    grid = auto_frequency_grid(fam, (1.0, 1.0), 1024, margin=4.0)
    meas = synthesize_measure(fam, (1.0, 1.0), grid)
    gauss_rep = ecf_check(sample_measure(meas, m, seed=42), fam, (1.0, 1.0), probes)

    cfam = _cauchy_family()
    cgrid = auto_frequency_grid(cfam, (1.0, 1.0), 1024, boundary_tol=1e-8, margin=4.0)
    cmeas = synthesize_measure(cfam, (1.0, 1.0), cgrid, boundary_tol=1e-8, mass_tol=1e-4)
    cauchy_rep = ecf_check(sample_measure(cmeas, m, seed=43), cfam, (1.0, 1.0), probes)

    mono = Monomial(exponents=(2, 1), symbol=P2)
    sqrt_curve = restrict_to_curve(mono, 0, Sqrt(), (1.0,))
    ident_curve = restrict_to_curve(mono, 1, Identity(), (2.0,))
    g1 = auto_frequency_grid(sqrt_curve, (2.0,), 1024)
    g2 = auto_frequency_grid(ident_curve, (2.0,), 1024)
    conv1 = semigroup_convolution_check(sqrt_curve, 1.0, 1.0, g1)
    conv2 = semigroup_convolution_check(ident_curve, 0.7, 1.3, g2)

    nonlinear = restrict_to_curve(mono, 0, Identity(), (1.0,))
    try:
        semigroup_convolution_check(nonlinear, 1.0, 1.0, g1)
        control_ok = False
    except ContractError:
        control_ok = True
    elapsed = time.perf_counter() - start

    ok = (
        gauss_rep.passed
        and cauchy_rep.passed
        and conv1.passed
        and conv2.passed
        and control_ok
        and elapsed < 10.0
    )
    _report(9, "monte carlo distributional checks", ok,
            f"ecf dev/env gauss {max(gauss_rep.deviations):.3f}/{min(gauss_rep.envelope):.3f}, "
            f"cauchy {max(cauchy_rep.deviations):.3f}/{min(cauchy_rep.envelope):.3f}, "
            f"curve checks {conv1.relative_l1_error:.1e}/{conv2.relative_l1_error:.1e}, "
            f"nonlinear rejected: {control_ok}, {elapsed:.1f}s < 10s")
