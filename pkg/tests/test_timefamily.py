import numpy as np
import pytest

from multilevy import (
    CapabilityError,
    Drift,
    Identity,
    InputError,
    Interaction,
    LogEuclid,
    Monomial,
    Power,
    PowerLaw,
    ProductCoupling,
    Quadratic,
    SaturatingCoupling,
    Separable,
    Sqrt,
    estimate_growth,
    family_from_dict,
    family_to_dict,
    restrict_to_curve,
    zero_symbol,
)

RNG = np.random.Generator(np.random.Philox(key=2024))


def _families():
    p2 = Power(alpha=2.0)
    p1 = Power(alpha=1.0)
    return [
        Separable(symbols=(p2, p1)),
        Separable(symbols=(p2, Drift(velocity=[0.7]), LogEuclid())),
        Monomial(exponents=(2, 1), symbol=p2),
        Monomial(exponents=(3, 0, 1), symbol=LogEuclid()),
        Interaction(psi1=p2, psi2=p1, psi3=LogEuclid(), coupling=ProductCoupling),
        Interaction(psi1=p2, psi2=p1, psi3=Quadratic(matrix=[[0.5]]), coupling=SaturatingCoupling),
    ]


def test_separable_sum_value():
    fam = Separable(symbols=(Power(alpha=2.0), Power(alpha=2.0)))
    assert fam.evaluate((1.0, 1.0), np.array([1.0])) == pytest.approx(2.0)


def test_monomial_value_matches_power_product():
    # b = s^2 t psi: at s=(2,3), psi(1)=1 the value is 4*3 = 12.
    fam = Monomial(exponents=(2, 1), symbol=Power(alpha=2.0))
    assert fam.evaluate((2.0, 3.0), np.array([1.0])) == pytest.approx(12.0)


def test_interaction_axis_drops_coupling():
    fam = Interaction(
        psi1=Power(alpha=2.0), psi2=Power(alpha=1.0), psi3=LogEuclid(), coupling=ProductCoupling
    )
    xi = np.array([1.7])
    t = 0.8
    assert fam.evaluate((0.0, t), xi) == pytest.approx(t * Power(alpha=1.0).evaluate(xi))
    s = 1.2
    assert fam.evaluate((s, 0.0), xi) == pytest.approx(s * Power(alpha=2.0).evaluate(xi))


@pytest.mark.parametrize("family", _families(), ids=lambda f: type(f).__name__ + str(f.k))
def test_vanishes_at_zero_frequency(family):
    for _ in range(5):
        s = RNG.uniform(0, 2, size=family.k)
        assert family.evaluate(s, np.zeros(family.dim)) == 0.0


def test_separable_and_monomial_vanish_at_zero_times():
    xi = np.array([1.1])
    assert Separable(symbols=(Power(),)).evaluate((0.0,), xi) == 0.0
    assert Monomial(exponents=(2, 1), symbol=Power()).evaluate((0.0, 0.0), xi) == 0.0


def test_interaction_coupling_vanishes_on_axes():
    for coupling in (ProductCoupling, SaturatingCoupling):
        assert coupling.value(0.0, 1.3) == 0.0
        assert coupling.value(1.3, 0.0) == 0.0
        assert coupling.value(0.7, 0.9) > 0.0


def test_negative_times_rejected():
    fam = Separable(symbols=(Power(),))
    with pytest.raises(InputError):
        fam.evaluate((-0.1,), np.array([1.0]))
    # analytic continuation is explicitly allowed when validation is off
    fam.evaluate((-0.1,), np.array([1.0]), validate=False)


def test_separable_first_partial_is_the_symbol():
    fam = Separable(symbols=(Power(alpha=2.0), Power(alpha=1.0)))
    xi = np.array([2.0])
    assert fam.mixed_partial((1, 0), (0.3, 0.9), xi) == pytest.approx(4.0)
    assert fam.mixed_partial((0, 1), (0.3, 0.9), xi) == pytest.approx(2.0)
    assert fam.mixed_partial((1, 1), (0.3, 0.9), xi) == 0.0


def test_interaction_product_cross_partial_is_coupling_symbol():
    fam = Interaction(
        psi1=Power(alpha=2.0), psi2=Power(alpha=1.0), psi3=LogEuclid(), coupling=ProductCoupling
    )
    xi = np.array([1.5])
    # hand differentiation of c = s t: d^2/ds dt (s t psi3) = psi3
    assert fam.mixed_partial((1, 1), (0.4, 0.7), xi) == pytest.approx(
        LogEuclid().evaluate(xi)
    )


def test_monomial_cross_partial_hand_formula():
    fam = Monomial(exponents=(2, 1), symbol=Power(alpha=2.0))
    xi = np.array([1.0])
    s, t = 0.8, 0.5
    # d^2/ds dt (s^2 t) psi = 2 s psi
    assert fam.mixed_partial((1, 1), (s, t), xi) == pytest.approx(2 * s)


def _fd_mixed(family, sigma, s, xi, h=1e-4):
    """Second-order central finite-difference oracle for mixed partials."""
    idx = [i for i, v in enumerate(sigma) if v == 1]
    total = 0j
    import itertools

    for eps in itertools.product((-1.0, 1.0), repeat=len(idx)):
        shifted = np.array(s, dtype=float)
        for which, e in zip(idx, eps):
            shifted[which] += e * h
        total += np.prod(eps) * family.evaluate(shifted, xi, validate=False)
    return total / (2 * h) ** len(idx) if idx else family.evaluate(s, xi)


@pytest.mark.parametrize("family", _families(), ids=lambda f: type(f).__name__ + str(f.k))
def test_partials_match_finite_differences(family):
    xi = RNG.normal(scale=2.0, size=(4, family.dim))
    for trial in range(3):
        s = RNG.uniform(0.2, 1.5, size=family.k)
        for sigma_bits in range(1, 2**family.k):
            sigma = tuple((sigma_bits >> i) & 1 for i in range(family.k))
            exact = family.mixed_partial(sigma, s, xi)
            approx = _fd_mixed(family, sigma, s, xi)
            scale = np.abs(exact) + 1.0
            assert np.max(np.abs(exact - approx) / scale) < 1e-5


def test_higher_order_sigma_is_capability_error():
    fam = Separable(symbols=(Power(),))
    with pytest.raises(CapabilityError):
        fam.mixed_partial((2,), (1.0,), np.array([1.0]))


def test_too_many_parameters_rejected():
    with pytest.raises(CapabilityError):
        Separable(symbols=(Power(),) * 6)
    with pytest.raises(CapabilityError):
        Monomial(exponents=(1,) * 6, symbol=Power())


# ---------------------------------------------------------------------------
# Growth estimation
# ---------------------------------------------------------------------------


def _log_grid(dim=1):
    xi = np.geomspace(0.5, 500.0, 48)
    pts = np.zeros((xi.size, dim))
    pts[:, 0] = xi
    return pts


def test_growth_exponent_quadratic():
    fam = Separable(symbols=(Power(alpha=2.0), Power(alpha=1.0)))
    est = estimate_growth(fam, (1, 0), (1.0, 1.0), _log_grid())
    assert est.exponent == pytest.approx(2.0, abs=0.05)
    assert est.fit_residual < 0.01


def test_growth_exponent_linear():
    fam = Separable(symbols=(Power(alpha=1.0), Power(alpha=2.0)))
    est = estimate_growth(fam, (1, 0), (1.0, 1.0), _log_grid())
    assert est.exponent == pytest.approx(1.0, abs=0.05)


def test_growth_sentinel_for_vanishing_derivative():
    fam = Separable(symbols=(Power(alpha=2.0), Power(alpha=1.0)))
    est = estimate_growth(fam, (1, 1), (1.0, 1.0), _log_grid())
    assert est.exponent == float("-inf")
    assert est.fit_residual == 0.0


def test_growth_requires_decades_and_points():
    fam = Separable(symbols=(Power(),))
    with pytest.raises(InputError):
        estimate_growth(fam, (1,), (1.0,), np.linspace(1, 2, 48)[:, None])
    with pytest.raises(InputError):
        estimate_growth(fam, (1,), (1.0,), _log_grid()[:4])


# ---------------------------------------------------------------------------
# Curve restrictions
# ---------------------------------------------------------------------------


def test_sqrt_curve_gives_linear_semigroup_direction():
    fam = Monomial(exponents=(2, 1), symbol=Power(alpha=2.0))
    t0 = 0.8
    res = restrict_to_curve(fam, 0, Sqrt(), (t0,))
    assert res.linear
    xi = np.array([1.3])
    for u in (0.0, 0.5, 2.0):
        assert res.evaluate((u,), xi) == pytest.approx(t0 * u * Power(alpha=2.0).evaluate(xi))
        assert res.evaluate((u,), xi) == pytest.approx(u * res.rate_symbol.evaluate(xi))


def test_identity_curve_on_second_axis_is_linear():
    fam = Monomial(exponents=(2, 1), symbol=Power(alpha=2.0))
    s0 = 2.0
    res = restrict_to_curve(fam, 1, Identity(), (s0,))
    assert res.linear
    xi = np.array([0.9])
    assert res.evaluate((1.5,), xi) == pytest.approx(s0**2 * 1.5 * Power(alpha=2.0).evaluate(xi))


def test_identity_curve_on_first_axis_is_quadratic():
    fam = Monomial(exponents=(2, 1), symbol=Power(alpha=2.0))
    res = restrict_to_curve(fam, 0, Identity(), (0.8,))
    assert not res.linear
    xi = np.array([1.0])
    assert res.evaluate((2.0,), xi) == pytest.approx(0.8 * 4.0)


def test_power_law_curve_matches_exponent_rule():
    fam = Monomial(exponents=(3, 1), symbol=Power(alpha=2.0))
    res = restrict_to_curve(fam, 0, PowerLaw(1.0 / 3.0), (1.0,))
    assert res.linear
    assert not restrict_to_curve(fam, 0, PowerLaw(0.5), (1.0,)).linear


def test_separable_restriction_requires_vanishing_frozen_part():
    fam = Separable(symbols=(Power(alpha=2.0), Power(alpha=1.0)))
    assert restrict_to_curve(fam, 0, Identity(), (0.0,)).linear
    assert not restrict_to_curve(fam, 0, Identity(), (0.5,)).linear
    assert not restrict_to_curve(fam, 0, Sqrt(), (0.0,)).linear


def test_separable_restriction_with_zero_symbols_is_linear():
    fam = Separable(symbols=(Power(alpha=2.0), zero_symbol(1)))
    res = restrict_to_curve(fam, 0, Identity(), (0.9,))
    assert res.linear


def test_interaction_restriction_linearity():
    p2 = Power(alpha=2.0)
    fam = Interaction(psi1=p2, psi2=p2, psi3=p2, coupling=ProductCoupling)
    assert restrict_to_curve(fam, 0, Identity(), (0.0,)).linear
    assert not restrict_to_curve(fam, 0, Identity(), (0.4,)).linear
    fam_no2 = Interaction(psi1=p2, psi2=zero_symbol(1), psi3=p2, coupling=ProductCoupling)
    res = restrict_to_curve(fam_no2, 0, Identity(), (0.4,))
    assert res.linear
    xi = np.array([1.2])
    # rate symbol is psi1 + t0 psi3
    assert res.rate_symbol.evaluate(xi) == pytest.approx(1.4 * p2.evaluate(xi))


def test_saturating_restriction_is_nonlinear_with_live_coupling():
    p2 = Power(alpha=2.0)
    fam = Interaction(psi1=p2, psi2=zero_symbol(1), psi3=p2, coupling=SaturatingCoupling)
    assert not restrict_to_curve(fam, 0, Identity(), (0.4,)).linear
    assert restrict_to_curve(fam, 0, Identity(), (0.0,)).linear


def test_restriction_validates_inputs():
    fam = Separable(symbols=(Power(), Power()))
    with pytest.raises(InputError):
        restrict_to_curve(fam, 2, Identity(), (1.0,))
    with pytest.raises(InputError):
        restrict_to_curve(fam, 0, Identity(), (1.0, 2.0))
    with pytest.raises(InputError):
        restrict_to_curve(fam, 0, Identity(), (-1.0,))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("family", _families(), ids=lambda f: type(f).__name__ + str(f.k))
def test_family_json_round_trip(family):
    back = family_from_dict(family_to_dict(family))
    xi = RNG.normal(size=(6, family.dim))
    s = RNG.uniform(0, 1, size=family.k)
    np.testing.assert_array_equal(back.evaluate(s, xi), family.evaluate(s, xi))


def test_family_json_rejects_unknown_fields():
    doc = family_to_dict(Separable(symbols=(Power(),)))
    doc["surprise"] = 1
    with pytest.raises(InputError):
        family_from_dict(doc)
    with pytest.raises(InputError):
        family_from_dict({"variant": "mystery"})
