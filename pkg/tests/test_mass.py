import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from lelonglab import (
    DomainError,
    Eigenvalue,
    FourierSpec,
    InputError,
    PoissonSpec,
    TransversalAtom,
    UnsupportedCurrentError,
    boundary_integral,
    boundary_reduction_check,
    build_current,
    closed_form_applicable,
    ia,
    ib,
    interval_window,
    kernel_weight,
    lelong_estimate,
    lelong_to_json,
    lower_bound_nonperiodic,
    mass_closed_form,
    mass_closed_form_negative_periodic,
    mass_closed_form_positive_periodic,
    mass_quadrature,
    monodromy_family,
    normalize,
    nu_limit_positive_periodic,
    total_weight,
)

from conftest import flat_poisson


def single_atom_current(lam, alpha, spec, weight=1.0):
    return build_current(lam, [TransversalAtom(alpha, weight, spec)])


class TestMassQuadrature:
    def test_flagship_value(self, flagship):
        result = mass_quadrature(flagship, 1.0)
        assert result.value == pytest.approx(2.5 * math.pi, rel=1e-9)
        assert result.error_estimate < 1e-6
        assert result.r == 1.0

    def test_scales_with_r_squared_at_lambda_one(self, flagship):
        # at lambda = 1 the bracket is r-free, so mass is exactly quadratic
        m1 = mass_quadrature(flagship, 1.0).value
        m2 = mass_quadrature(flagship, 0.5).value
        assert m2 == pytest.approx(0.25 * m1, rel=1e-9)

    def test_empty_leaf_zero(self, neg_single):
        result = mass_quadrature(neg_single, 0.1)
        assert result.value == 0.0
        assert result.error_estimate == 0.0

    def test_radius_validation(self, flagship):
        with pytest.raises(DomainError):
            mass_quadrature(flagship, 0.0)
        with pytest.raises(DomainError):
            mass_quadrature(flagship, 1.5)

    def test_additive_over_atoms(self):
        lam = Eigenvalue.rational(1, 1)
        a = TransversalAtom(0.5, 0.7, FourierSpec(b=1, a0=1.0))
        b = TransversalAtom(1.5, 0.3, FourierSpec(b=1, a0=1.0))
        whole = mass_quadrature(build_current(lam, [a, b]), 0.8).value
        parts = (
            mass_quadrature(build_current(lam, [a]), 0.8).value
            + mass_quadrature(build_current(lam, [b]), 0.8).value
        )
        assert whole == pytest.approx(parts, rel=1e-12)

    @given(scale=st.floats(min_value=0.1, max_value=5.0))
    @settings(max_examples=20, deadline=None)
    def test_linear_in_weight(self, scale):
        lam = Eigenvalue.rational(1, 2)
        base = mass_quadrature(
            single_atom_current(lam, 1.2, FourierSpec(b=1, a0=1.0), weight=1.0), 0.7
        ).value
        scaled = mass_quadrature(
            single_atom_current(lam, 1.2, FourierSpec(b=1, a0=1.0), weight=scale), 0.7
        ).value
        assert scaled == pytest.approx(scale * base, rel=1e-11)

    def test_k0_window_invariance(self, flagship):
        m0 = mass_quadrature(flagship, 1.0, k0=0)
        m5 = mass_quadrature(flagship, 1.0, k0=5)
        assert m0.value == pytest.approx(m5.value, abs=2.0 * (m0.error_estimate + m5.error_estimate) + 1e-13)


class TestClosedFormPositive:
    def test_flagship_exact(self, flagship):
        assert mass_closed_form_positive_periodic(flagship, 1.0) == pytest.approx(
            2.5 * math.pi, rel=1e-14
        )

    def test_b0_bracket_contribution_frozen(self):
        # difference isolates the linear-part bracket: 2 pi r^2 B(r) at
        # lambda=1, |alpha|=1/2, r=0.1
        lam = Eigenvalue.rational(1, 1)
        with_b0 = single_atom_current(lam, 0.5, FourierSpec(b=1, a0=1.0, b0=1.0))
        without = single_atom_current(lam, 0.5, FourierSpec(b=1, a0=1.0))
        diff = mass_closed_form_positive_periodic(with_b0, 0.1) - mass_closed_form_positive_periodic(without, 0.1)
        assert diff == pytest.approx(0.22011451848025903, rel=1e-12)

    def test_outer_region_agrees_with_quadrature(self):
        # |alpha| >= r^{1-lambda}: the r^{2/lambda - 2} power in the linear
        # bracket is the one the quadrature route certifies
        lam = Eigenvalue.rational(1, 2)
        cur = single_atom_current(lam, 1.2, FourierSpec(b=1, a0=1.0, b0=0.6), weight=0.8)
        for r in (1.0, 0.4, 0.1):
            closed = mass_closed_form_positive_periodic(cur, r)
            result = mass_quadrature(cur, r)
            assert closed == pytest.approx(result.value, rel=1e-8)

    def test_rejects_negative_eigenvalue(self, neg_single):
        with pytest.raises(UnsupportedCurrentError):
            mass_closed_form_positive_periodic(neg_single, 1.0)

    def test_rejects_poisson_atoms(self):
        lam = Eigenvalue.irrational(math.sqrt(2.0) - 1.0)
        cur = single_atom_current(lam, 1.3, flat_poisson())
        with pytest.raises(UnsupportedCurrentError):
            mass_closed_form_positive_periodic(cur, 1.0)


class TestStripIntegrals:
    def test_frozen_value(self):
        want = 1.0 - math.exp(-2.0)
        assert ia(-1.0, math.exp(-1.0), 1.0) == pytest.approx(want, rel=1e-14)
        assert ib(-1.0, math.exp(-1.0), 1.0) == pytest.approx(want, rel=1e-14)

    @pytest.mark.parametrize("lv", [-1.0, -0.5, -0.25])
    @pytest.mark.parametrize("t", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("r", [0.3, 0.6, 0.9])
    def test_against_defining_integrals(self, lv, t, r):
        am = t * r ** (1.0 - lv)
        log_am = math.log(am)
        v_lo, v_hi = -math.log(r), (log_am - math.log(r)) / lv

        def jac(v):
            return 2.0 * (math.exp(-2.0 * v) + (lv * am) ** 2 * math.exp(-2.0 * lv * v))

        want_a, _ = quad(lambda v: (1.0 - lv * v / log_am) * jac(v), v_lo, v_hi, epsabs=1e-13)
        want_b, _ = quad(lambda v: v * jac(v), v_lo, v_hi, epsabs=1e-13)
        assert ia(lv, am, r) == pytest.approx(want_a / r**2, abs=1e-10)
        assert ib(lv, am, r) == pytest.approx(want_b / r**2, abs=1e-10)

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            ia(-1.0, 0.5, 0.5)  # |alpha| >= r^{1-lambda}: no strip
        with pytest.raises(DomainError):
            ib(-1.0, 1.2, 1.0)
        with pytest.raises(DomainError):
            ia(0.5, 0.1, 0.5)  # positive eigenvalue has no strip integral

    def test_b_part_mass_increases_with_r(self):
        # 0.2 < r^1.5 keeps the strip nonempty along the whole sweep
        rs = np.linspace(0.4, 1.0, 13)
        vals = [r**2 * ib(-0.5, 0.2, r) for r in rs]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestClosedFormNegative:
    def test_single_atom(self, neg_single):
        want = 2.0 * math.pi * (1.0 - math.exp(-2.0))
        assert mass_closed_form_negative_periodic(neg_single, 1.0) == pytest.approx(want, rel=1e-13)

    def test_skips_inadmissible_atoms(self, neg_single):
        # at r = 0.5 the single strip is empty: closed form must return 0
        assert mass_closed_form_negative_periodic(neg_single, 0.5) == 0.0

    def test_agrees_with_quadrature(self, neg_single):
        for r in (1.0, 0.9, 0.7):
            closed = mass_closed_form_negative_periodic(neg_single, r)
            result = mass_quadrature(neg_single, r)
            assert closed == pytest.approx(result.value, rel=1e-9, abs=1e-12)

    def test_rejects_positive_eigenvalue(self, flagship):
        with pytest.raises(UnsupportedCurrentError):
            mass_closed_form_negative_periodic(flagship, 1.0)


class TestClosedFormApplicable:
    def test_constant_atom(self, flagship):
        assert closed_form_applicable(flagship)

    def test_full_period_modes(self):
        lam = Eigenvalue.rational(1, 2)
        spec = normalize(FourierSpec(b=2, a0=1.0, modes=((-2, 0.2, 0.1), (-4, 0.05, 0.0))))
        assert closed_form_applicable(single_atom_current(lam, 0.5, spec))

    def test_fractional_mode_atom_not_applicable(self):
        # a lone b=2 atom with k=-1 leaves a half-period residual in the
        # window; only the full orbit cancels it
        lam = Eigenvalue.rational(1, 2)
        spec = normalize(FourierSpec(b=2, a0=1.0, modes=((-1, 0.2, 0.1),)))
        assert not closed_form_applicable(single_atom_current(lam, 0.5, spec))

    def test_complete_orbit_applicable(self):
        lam = Eigenvalue.rational(1, 2)
        mother = normalize(FourierSpec(b=2, a0=1.0, modes=((-1, 0.2, 0.1),)))
        cur = build_current(lam, monodromy_family(lam, 1.0, 0.7, mother))
        assert closed_form_applicable(cur)

    def test_poisson_not_applicable(self):
        lam = Eigenvalue.irrational(math.sqrt(2.0) - 1.0)
        assert not closed_form_applicable(single_atom_current(lam, 1.3, flat_poisson()))

    def test_orbit_quadrature_matches_closed(self):
        lam = Eigenvalue.rational(1, 2)
        mother = normalize(FourierSpec(b=2, a0=1.0, modes=((-1, 0.2, 0.1),)))
        cur = build_current(lam, monodromy_family(lam, 1.0, 0.7, mother))
        for r in (1.0, 0.3):
            closed = mass_closed_form(cur, r)
            result = mass_quadrature(cur, r)
            assert closed == pytest.approx(result.value, rel=1e-8)


class TestBoundaryReduction:
    def test_flat_boundary_frozen_ratio(self):
        # H == 1 collapses the ratio to the pure jacobian integral: at
        # lambda = 1, |alpha| = 1/2 that is exactly 1 + |alpha|^2 = 1.25
        ratio = boundary_reduction_check(1.0, 0.5, flat_poisson(), math.exp(-1.0), 0.0)
        assert ratio == pytest.approx(1.25, rel=1e-5)

    @pytest.mark.parametrize("lam_value", [0.5, 1.0])
    @pytest.mark.parametrize("u", [0.0, 2.0, -5.0])
    def test_bump_ratios_inside_lemma_window(self, lam_value, u):
        n = 769
        ys = np.linspace(-16.0 * math.pi, 16.0 * math.pi, n)
        values = 0.4 + np.exp(-(ys**2) / 18.0)
        spec = PoissonSpec(ys=ys, values=values, tail=0.4)
        r = math.exp(-1.2 / lam_value)
        ratio = boundary_reduction_check(lam_value, 1.2, spec, r, u)
        c_min, c_max = min(1.0, lam_value), 1.0 + lam_value
        assert 0.5 * c_min <= ratio <= 2.0 * c_max

    def test_radius_gate(self):
        with pytest.raises(DomainError):
            boundary_reduction_check(0.5, 1.2, flat_poisson(), 0.5, 0.0)

    def test_rejects_linear_term(self):
        with pytest.raises(InputError):
            boundary_reduction_check(1.0, 0.5, flat_poisson(c_lin=0.2), math.exp(-1.0), 0.0)


class TestIntervalBound:
    def test_kernel_weight_symmetric(self):
        assert kernel_weight(0) == pytest.approx(0.5)
        assert kernel_weight(3) == kernel_weight(-3) == pytest.approx(1.0 / 17.0)

    def test_interval_windows_tile(self):
        # consecutive windows abut: no gaps, no overlaps
        k = 2
        for n in range(0, 5):
            assert interval_window(n, k)[1] == pytest.approx(interval_window(n + 1, k)[0])
        for n in range(-5, -1):
            assert interval_window(n, k)[1] == pytest.approx(interval_window(n + 1, k)[0])
        with pytest.raises(InputError):
            interval_window(0, 1)

    def test_matches_direct_arithmetic(self):
        lam = Eigenvalue.irrational(math.sqrt(2.0) - 1.0)
        spec = flat_poisson()
        cur = build_current(lam, [TransversalAtom(1.3, 0.9, spec)])
        k, n_max = 2, 20
        expected = 0.0
        for n in range(-n_max, n_max + 1):
            lo, hi = interval_window(n, k)
            expected += kernel_weight(n) * 0.9 * boundary_integral(spec, lo, hi) / (2.0 * math.pi * k)
        expected *= min(1.0, lam.value) / (2.0 * math.pi)
        assert lower_bound_nonperiodic(cur, k=k, n_max=n_max) == pytest.approx(expected, rel=1e-12)

    def test_flat_boundary_window_lengths(self):
        # constant boundary turns the sum into pure window arithmetic
        lam = Eigenvalue.rational(1, 1)
        cur = build_current(lam, [TransversalAtom(1.3, 1.0, flat_poisson())])
        raw = 0.75 + 2.0 * sum(1.0 / (1.0 + m**2) for m in range(2, 22))
        want = 1.0 / (2.0 * math.pi) * raw
        assert lower_bound_nonperiodic(cur, k=2, n_max=20) == pytest.approx(want, rel=1e-12)

    def test_monotone_in_n_max(self):
        lam = Eigenvalue.irrational(1.0 / math.pi)
        cur = build_current(lam, [TransversalAtom(1.3, 1.0, flat_poisson())])
        bounds = [lower_bound_nonperiodic(cur, n_max=n) for n in (5, 10, 20)]
        assert bounds[0] < bounds[1] < bounds[2]

    def test_rejects_negative_eigenvalue(self, neg_single):
        with pytest.raises(InputError):
            lower_bound_nonperiodic(neg_single)

    def test_rejects_fourier_atoms(self, flagship):
        with pytest.raises(UnsupportedCurrentError):
            lower_bound_nonperiodic(flagship)


class TestLelongEstimate:
    def test_flagship_constant_schedule(self, flagship):
        est = lelong_estimate(flagship, steps=12)
        assert len(est.rs) == 12
        assert est.rs[0] == 1.0 and est.rs[-1] == pytest.approx(2.0**-11)
        assert all(nu == pytest.approx(2.5, rel=1e-9) for nu in est.nus)
        assert est.monotone_ok
        assert not est.diverging
        assert est.limit_bracket[0] <= 2.5 <= est.limit_bracket[1]

    def test_engines_agree(self, flagship):
        closed = lelong_estimate(flagship, steps=6, engine="closed")
        numeric = lelong_estimate(flagship, steps=6, engine="quadrature")
        assert np.allclose(closed.nus, numeric.nus, rtol=1e-8)

    def test_auto_prefers_closed_for_applicable(self, flagship):
        est = lelong_estimate(flagship, steps=6)
        assert max(est.errs) < 1e-11  # closed-form error model, not quadrature's

    def test_hump_breaks_monotonicity_both_ways(self):
        # inner-region atom below lambda = 1: nu rises to a hump at
        # r = |alpha|^{1/(1-lambda)} and falls beyond it
        lam = Eigenvalue.rational(1, 2)
        cur = single_atom_current(lam, 0.5, FourierSpec(b=1, a0=1.0))
        est = lelong_estimate(cur, steps=12)
        assert not est.monotone_ok

    def test_divergence_slope_frozen(self):
        lam = Eigenvalue.rational(1, 1)
        cur = single_atom_current(lam, 0.5, FourierSpec(b=1, a0=1.0, b0=0.8))
        est = lelong_estimate(cur, steps=12)
        # region-1 linear bracket at lambda = 1: slope 2 w b0 (1 + |alpha|^2)
        assert est.slope == pytest.approx(2.0, rel=1e-10)
        assert est.r_squared > 0.9999
        assert est.diverging

    def test_negative_family_decays_to_zero(self):
        from lelonglab import accumulation_family

        lam = Eigenvalue.negative(-1.0)
        cur = build_current(lam, accumulation_family(lam, 8))
        est = lelong_estimate(cur, steps=12)
        assert est.nus[0] > 1.0
        assert est.nus[-1] == 0.0
        assert est.monotone_ok
        assert not est.diverging

    def test_schedule_validation(self, flagship):
        with pytest.raises(InputError):
            lelong_estimate(flagship, ratio=1.5)
        with pytest.raises(InputError):
            lelong_estimate(flagship, steps=1)
        with pytest.raises(InputError):
            lelong_estimate(flagship, engine="galerkin")

    def test_json_shape(self, flagship):
        est = lelong_estimate(flagship, steps=4)
        payload = lelong_to_json(est)
        assert set(payload) >= {
            "rs", "nus", "errs", "monotone_ok",
            "limit_estimate", "limit_bracket", "slope", "r_squared", "diverging",
        }
        assert len(payload["rs"]) == 4


class TestPositiveLimit:
    def test_flagship_limit(self, flagship):
        assert nu_limit_positive_periodic(flagship) == pytest.approx(5.0 * 0.5)

    def test_outer_atom_at_lambda_one(self):
        lam = Eigenvalue.rational(1, 1)
        cur = single_atom_current(lam, 2.0, FourierSpec(b=1, a0=1.0))
        assert nu_limit_positive_periodic(cur) == pytest.approx(2.0 * (1.0 + 0.25))

    def test_below_one_limit_is_2_lambda_weight(self):
        lam = Eigenvalue.rational(1, 2)
        cur = single_atom_current(lam, 1.2, FourierSpec(b=1, a0=1.0), weight=0.8)
        assert nu_limit_positive_periodic(cur) == pytest.approx(2.0 * 0.5 * 0.8)
        est = lelong_estimate(cur, steps=16)
        assert est.limit_estimate == pytest.approx(0.8, rel=1e-4)

    def test_total_weight(self, flagship):
        assert total_weight(flagship) == 1.0
