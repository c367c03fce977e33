"""Closed-form asymptotics of the model families and their consistency identities."""
import math

import pytest

from extreme_fpt.errors import DomainError, UnsupportedRegimeError
from extreme_fpt.model import (
    AnnulusModel,
    InitialCondition,
    NarrowEscapeSphereModel,
    OUWellModel,
    ShortTimeAsymptotics,
    appendix_short_time_coefficients,
    mfpt_asymptotic,
    ou_higher_eigenvalue_asymptotic,
    principal_eigenvalue_asymptotic,
    short_time_coefficients,
)

SQRT_PI = math.sqrt(math.pi)

SWEEP_SIGMAS = [0.01, 0.05, 0.1, 0.3, 0.6, 0.9]
SWEEP_KAPPAS = [math.inf, 0.01, 1.0, 100.0]
SWEEP_DIMS = [1, 2, 3]


def sweep_models(initial=InitialCondition.DELTA_AT_OUTER):
    for d in SWEEP_DIMS:
        for kappa in SWEEP_KAPPAS:
            for sigma in SWEEP_SIGMAS:
                if d == 1 and sigma not in (0.1,):
                    sigma = 0.0
                yield AnnulusModel(dim=d, sigma=sigma, kappa=kappa, initial=initial, t_diff=1.0)


class TestValidation:
    def test_dim_range(self):
        with pytest.raises(DomainError):
            AnnulusModel(dim=4, sigma=0.1, kappa=1.0)

    def test_sigma_range(self):
        with pytest.raises(DomainError):
            AnnulusModel(dim=2, sigma=1.0, kappa=1.0)
        with pytest.raises(DomainError):
            AnnulusModel(dim=3, sigma=0.0, kappa=1.0)

    def test_dim1_allows_positive_sigma(self):
        # the kappa-sweep figure uses an interval (0.1, 1); sigma^(d-1) is 1 anyway
        m = AnnulusModel(dim=1, sigma=0.1, kappa=0.01)
        assert m.sigma_pow_dm1 == 1.0
        assert m.geometry_factor == 1.0

    def test_short_time_gap_sign(self):
        with pytest.raises(DomainError):
            ShortTimeAsymptotics(amp=1.0, power=0.5, gap=-0.1)
        with pytest.raises(DomainError):
            ShortTimeAsymptotics(amp=0.0, power=0.5, gap=0.0)


class TestMfptAsymptotics:
    def test_annulus_three_dim_perfect(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf)
        assert mfpt_asymptotic(m) == pytest.approx(10.0 / 3.0, rel=1e-14)

    def test_annulus_two_dim_perfect(self):
        m = AnnulusModel(dim=2, sigma=0.1, kappa=math.inf, t_diff=2.0)
        assert mfpt_asymptotic(m) == pytest.approx(2.0 * (-math.log(0.1)) / 2.0, rel=1e-14)

    def test_annulus_one_dim_partial(self):
        m = AnnulusModel(dim=1, sigma=0.0, kappa=0.01)
        assert mfpt_asymptotic(m) == pytest.approx(100.0, rel=1e-14)

    def test_annulus_partial_geometry_factor(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=0.5)
        expect = (1 - 0.1**3) / ((1 - 0.1) ** 2 * 3 * 0.5 * 0.1**2)
        assert mfpt_asymptotic(m) == pytest.approx(expect, rel=1e-14)

    def test_one_dim_perfect_has_no_slow_regime(self):
        with pytest.raises(UnsupportedRegimeError):
            mfpt_asymptotic(AnnulusModel(dim=1, sigma=0.0, kappa=math.inf))

    def test_ou_well(self):
        m = OUWellModel(dim=1, eps=0.1)
        oracle = math.gamma(0.5) / 4.0 * 0.1**1.5 * math.exp(10.0)
        assert mfpt_asymptotic(m) == pytest.approx(oracle, rel=1e-14)
        assert mfpt_asymptotic(m) == pytest.approx(308.6, rel=1e-3)

    def test_narrow_escape_three_dim(self):
        m = NarrowEscapeSphereModel(
            dim=3, num_targets=1, target_radius=1.0, sigma=0.01, domain_volume=1.0, diffusivity=1.0
        )
        assert principal_eigenvalue_asymptotic(m) == pytest.approx(4.0 * math.pi * 0.01, rel=1e-14)
        assert mfpt_asymptotic(m) == pytest.approx(1.0 / (4.0 * math.pi * 0.01), rel=1e-14)

    def test_narrow_escape_two_dim(self):
        m = NarrowEscapeSphereModel(
            dim=2, num_targets=3, target_radius=1.0, sigma=0.02, domain_volume=2.0, diffusivity=0.5
        )
        oracle = -2.0 * math.pi * 0.5 * 3 / (2.0 * math.log(0.02))
        assert principal_eigenvalue_asymptotic(m) == pytest.approx(oracle, rel=1e-14)

    def test_ou_principal_eigenvalue(self):
        m = OUWellModel(dim=2, eps=0.1)
        assert principal_eigenvalue_asymptotic(m) == pytest.approx(400.0 * math.exp(-10.0), rel=1e-13)

    def test_annulus_robin_eigenvalue_reciprocal(self):
        m = AnnulusModel(dim=1, sigma=0.0, kappa=0.01)
        assert principal_eigenvalue_asymptotic(m) == pytest.approx(0.01, rel=1e-14)


class TestOUHigherEigenvalues:
    def test_values(self):
        assert ou_higher_eigenvalue_asymptotic(OUWellModel(dim=1, eps=0.1), 1) == pytest.approx(40.0)
        assert ou_higher_eigenvalue_asymptotic(OUWellModel(dim=1, eps=0.1), 3) == pytest.approx(120.0)
        assert ou_higher_eigenvalue_asymptotic(OUWellModel(dim=2, eps=0.5, t_diff=2.0), 1) == pytest.approx(4.0)

    def test_index_domain(self):
        with pytest.raises(DomainError):
            ou_higher_eigenvalue_asymptotic(OUWellModel(dim=1, eps=0.1), 0)


class TestShortTimeCoefficients:
    def test_case1(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf)
        st = short_time_coefficients(m)
        assert st.amp == pytest.approx(2.0 / SQRT_PI * 0.1, rel=1e-13)
        assert st.power == 0.5
        assert st.gap == 0.25

    def test_case2(self):
        m = AnnulusModel(dim=2, sigma=0.2, kappa=1.5, t_diff=2.0)
        st = short_time_coefficients(m)
        assert st.amp == pytest.approx(4.0 / SQRT_PI * 2.0**-1.5 * 1.5 * math.sqrt(0.2), rel=1e-13)
        assert st.power == 1.5
        assert st.gap == 0.5

    def test_case3(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf, initial=InitialCondition.UNIFORM)
        st = short_time_coefficients(m)
        assert st.amp == pytest.approx(6.0 * 0.9 * 0.01 / (SQRT_PI * 0.999), rel=1e-13)
        assert st.amp == pytest.approx(0.0304967, abs=2e-7)
        assert st.power == 0.5
        assert st.gap == 0.0

    def test_case4_one_dim(self):
        m = AnnulusModel(dim=1, sigma=0.0, kappa=0.01, initial=InitialCondition.UNIFORM)
        st = short_time_coefficients(m)
        assert st.amp == pytest.approx(0.01, rel=1e-14)
        assert st.power == 1.0
        assert st.gap == 0.0

    def test_quasi_stationary_rejected(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf, initial=InitialCondition.QUASI_STATIONARY)
        with pytest.raises(UnsupportedRegimeError):
            short_time_coefficients(m)

    def test_gap_iff_delta_start(self):
        for model in sweep_models(InitialCondition.DELTA_AT_OUTER):
            assert short_time_coefficients(model).gap == model.t_diff / 4.0
        for model in sweep_models(InitialCondition.UNIFORM):
            assert short_time_coefficients(model).gap == 0.0


class TestAppendixCoefficients:
    def test_perfect_from_outer(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf)
        st = appendix_short_time_coefficients(m, 1.0)
        assert st.amp == pytest.approx(2.0 * 0.1 / (SQRT_PI * 0.9), rel=1e-13)
        assert st.power == 0.5
        assert st.gap == pytest.approx(0.2025, rel=1e-14)

    def test_one_dim_factors_drop(self):
        m = AnnulusModel(dim=1, sigma=0.0, kappa=math.inf)
        st = appendix_short_time_coefficients(m, 1.0)
        assert st.amp == pytest.approx(2.0 / SQRT_PI, rel=1e-14)
        assert st.gap == 0.25

    def test_robin_two_dim(self):
        # kappa_bar = 0.75/0.75 = 1; frozen from the formula itself
        m = AnnulusModel(dim=2, sigma=0.25, kappa=0.75)
        st = appendix_short_time_coefficients(m, 1.0)
        assert st.amp == pytest.approx(4.0 / (SQRT_PI * 0.5625) * 0.5, rel=1e-13)
        assert st.amp == pytest.approx(2.0060074, abs=1e-6)
        assert st.power == 1.5
        assert st.gap == pytest.approx(0.140625, rel=1e-14)

    def test_interior_start_radius(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf)
        st = appendix_short_time_coefficients(m, 0.5)
        assert st.gap == pytest.approx(0.4**2 / 4.0, rel=1e-14)
        assert st.amp == pytest.approx(2.0 / (SQRT_PI * 0.4) * (0.1 / 0.5), rel=1e-13)

    def test_start_radius_domain(self):
        m = AnnulusModel(dim=3, sigma=0.1, kappa=math.inf)
        with pytest.raises(DomainError):
            appendix_short_time_coefficients(m, 0.05)
        with pytest.raises(DomainError):
            appendix_short_time_coefficients(m, 1.2)


class TestConsistencyIdentities:
    def test_unit_conversion_reproduces_primary_coefficients(self):
        # appendix coefficients live in outer-radius time units; rescaling by
        # (1-sigma)^2/t_diff must reproduce the primary delta-start table
        for model in sweep_models(InitialCondition.DELTA_AT_OUTER):
            primary = short_time_coefficients(model)
            appendix = appendix_short_time_coefficients(model, 1.0)
            converted = appendix.rescaled((1.0 - model.sigma) ** 2 / model.t_diff)
            assert converted.power == primary.power
            assert converted.amp == pytest.approx(primary.amp, rel=1e-12)
            assert converted.gap == pytest.approx(primary.gap, rel=1e-12)

    def test_mfpt_eigenvalue_reciprocity(self):
        models = [
            AnnulusModel(dim=3, sigma=0.1, kappa=math.inf),
            AnnulusModel(dim=2, sigma=0.05, kappa=math.inf),
            AnnulusModel(dim=3, sigma=0.2, kappa=0.7),
            AnnulusModel(dim=1, sigma=0.0, kappa=0.01),
            OUWellModel(dim=1, eps=0.1),
            OUWellModel(dim=3, eps=0.25, t_diff=0.5),
            NarrowEscapeSphereModel(
                dim=3, num_targets=2, target_radius=0.5, sigma=0.03, domain_volume=4.0, diffusivity=1.3
            ),
        ]
        for m in models:
            assert mfpt_asymptotic(m) * principal_eigenvalue_asymptotic(m) == pytest.approx(1.0, rel=1e-12)

    def test_case4_amplitude_times_mfpt_near_one(self):
        # A * E[tau] = 1/(1 - sigma): within 5% of 1 at sigma = 0.01
        m = AnnulusModel(dim=3, sigma=0.01, kappa=0.1, initial=InitialCondition.UNIFORM)
        product = short_time_coefficients(m).amp * mfpt_asymptotic(m)
        assert abs(product - 1.0) < 0.05

    def test_rescale_round_trip(self):
        st = ShortTimeAsymptotics(amp=2.0, power=1.5, gap=0.3)
        back = st.rescaled(5.0).rescaled(1.0 / 5.0)
        assert back.amp == pytest.approx(st.amp, rel=1e-15)
        assert back.gap == pytest.approx(st.gap, rel=1e-15)

    def test_evaluate_matches_formula(self):
        st = ShortTimeAsymptotics(amp=0.5, power=0.5, gap=0.25)
        t = 0.05
        assert st.evaluate(t) == pytest.approx(0.5 * math.sqrt(t) * math.exp(-0.25 / t), rel=1e-14)
        assert st.evaluate(0.0) == 0.0
