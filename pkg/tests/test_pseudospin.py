import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import erf

from gaussbell.errors import AccuracyError, InvalidInputError
from gaussbell.gaussian import TmstParams, nu_thermal
from gaussbell.oracles import auto_bins, quadrature_correlators, quadrature_syy
from gaussbell.pseudospin import (
    Binned,
    CorrelatorSet,
    FockGrouped,
    SeriesControl,
    _log_gamma_parts,
    binned_correlators,
    cross_correlators,
    gamma_factor,
    sxx_correlator,
    syy_correlator,
    szz_correlator,
    szz_large_l_asymptote,
    szz_small_l_asymptote,
    unbinned_correlators,
    x1_term,
    x2_term,
    x_term,
    z1_term,
    z2_term,
    z_term,
)

TIGHT = SeriesControl(tail_tol=1e-10)


def _marginal_density(p, q1, q2):
    """Position marginal of the squeezed-thermal Wigner function."""
    nu = nu_thermal(p.omega_a, p.T)
    c, s = math.cosh(2 * p.r), math.sinh(2 * p.r)
    return np.exp((-(q1 * q1 + q2 * q2) * c + 2 * q1 * q2 * s) / nu) / (math.pi * nu)


def _z_term_bruteforce(n, m, p, l):
    """pi * bin-pair integral of the position marginal: the Z lattice term."""
    val, err = integrate.dblquad(
        lambda q2, q1: _marginal_density(p, q1, q2),
        n * l, (n + 1) * l,
        lambda q: m * l, lambda q: (m + 1) * l,
        epsabs=1e-13, epsrel=1e-12,
    )
    assert err < 1e-10
    return math.pi * val


def _jk_bruteforce(n, m, p, l):
    """J_{n,m} + K_{n,m} by direct 2D quadrature of the shifted marginals."""
    nu = nu_thermal(p.omega_a, p.T)
    pj = math.exp(-0.5 * l * l * nu * math.exp(-2 * p.r))
    pk = math.exp(-0.5 * l * l * nu * math.exp(2 * p.r))
    j_val = integrate.dblquad(
        lambda q2, q1: _marginal_density(p, q1 + l / 2, q2 + l / 2),
        2 * n * l, (2 * n + 1) * l,
        lambda q: 2 * m * l, lambda q: (2 * m + 1) * l,
        epsabs=1e-13, epsrel=1e-12,
    )[0]
    k_val = integrate.dblquad(
        lambda q2, q1: _marginal_density(p, q1 + l / 2, q2 - l / 2),
        2 * n * l, (2 * n + 1) * l,
        lambda q: (2 * m + 1) * l, lambda q: (2 * m + 2) * l,
        epsabs=1e-13, epsrel=1e-12,
    )[0]
    return math.pi * (pj * j_val + pk * k_val)


class TestZTerms:
    def test_vacuum_unit_bin_closed_form(self):
        # Z_{0,0} for the vacuum at l = 1 is pi/4 * erf(1)^2
        p = TmstParams(r=0.0)
        expected = 0.25 * math.pi * math.erf(1.0) ** 2
        assert z_term(0, 0, p, 1.0) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("n,m,r,T,l", [
        (1, -1, 0.6, 0.37, 0.9),
        (0, 2, 1.1, 0.0, 1.4),
        (-2, -2, 0.3, 0.8, 0.7),
    ])
    def test_against_bruteforce_bin_integral(self, n, m, r, T, l):
        p = TmstParams(r=r, T=T)
        assert z_term(n, m, p, l) == pytest.approx(
            _z_term_bruteforce(n, m, p, l), abs=1e-9
        )

    def test_symmetry_in_n_m(self):
        p = TmstParams(r=0.9, T=0.2)
        assert z_term(2, -1, p, 1.1) == pytest.approx(
            z_term(-1, 2, p, 1.1), abs=1e-14
        )

    def test_gaussian_envelope_bound(self):
        # far-offset terms fall below the bare Gaussian envelope
        p = TmstParams(r=1.0)
        g1 = 2 * math.exp(-2.0)
        for (n, m, l) in [(3, 1, 2.0), (4, 2, 1.5), (5, 5, 1.0)]:
            envelope = math.exp(-g1 * (n + m) ** 2 * l * l / 4)
            assert abs(z_term(n, m, p, l)) < envelope

    def test_reflection_identity(self):
        p = TmstParams(r=0.8, T=0.4)
        for (n, m) in [(0, 0), (2, -1), (-3, 1), (1, 4)]:
            assert z2_term(n, m, p, 0.9) == pytest.approx(
                z1_term(-n - 1, -m - 1, p, 0.9), abs=1e-13
            )

    def test_z_is_branch_sum(self):
        p = TmstParams(r=0.5, T=0.1)
        assert z_term(1, 0, p, 1.2) == pytest.approx(
            z1_term(1, 0, p, 1.2) + z2_term(1, 0, p, 1.2), abs=1e-15
        )


class TestXTerms:
    def test_gamma_small_l_limit(self):
        for (r, T) in [(0.5, 0.0), (1.5, 0.7), (3.0, 2.0)]:
            assert gamma_factor(1e-8, r, T) == pytest.approx(2.0, abs=1e-12)

    def test_gamma_large_l_vanishes(self):
        assert gamma_factor(50.0, 2.0, 0.5) < 1e-20
        assert gamma_factor(50.0, 0.5, 0.5) < 1e-200

    @pytest.mark.parametrize("n,m,r,T,l", [
        (0, 0, 1.0, 0.2, 1.0),
        (1, 1, 1.2, 0.0, 1.3),
        (-2, 1, 0.5, 0.8, 0.6),
    ])
    def test_matches_bruteforce(self, n, m, r, T, l):
        p = TmstParams(r=r, T=T)
        assert x_term(n, m, p, l) == pytest.approx(
            _jk_bruteforce(n, m, p, l), abs=1e-9
        )

    def test_zero_temperature_reduction(self):
        # T -> 0 must reproduce the squeezed-vacuum expressions exactly
        p_cold = TmstParams(r=1.0, T=1e-10)
        p_zero = TmstParams(r=1.0, T=0.0)
        for (n, m) in [(0, 0), (1, -1), (2, 0)]:
            assert x_term(n, m, p_cold, 0.9) == pytest.approx(
                x_term(n, m, p_zero, 0.9), abs=1e-10
            )
        assert x_term(0, 0, p_zero, 0.9) == pytest.approx(
            _jk_bruteforce(0, 0, p_zero, 0.9), abs=1e-9
        )

    def test_reflection_identity(self):
        p = TmstParams(r=0.8, T=0.4)
        for (n, m) in [(0, 0), (1, 1), (2, -1), (-2, 0)]:
            assert x2_term(n, m, p, 0.7) == pytest.approx(
                x1_term(-n - 1, -m - 1, p, 0.7), abs=1e-13
            )

    def test_symmetry_in_n_m(self):
        p = TmstParams(r=0.7, T=0.3)
        assert x_term(2, -1, p, 0.8) == pytest.approx(
            x_term(-1, 2, p, 0.8), abs=1e-14
        )


class TestSzzCorrelator:
    def test_large_l_asymptote(self):
        # (2/pi) arctan(sinh 2r); the thermal scale drops out of the limit
        got = szz_correlator(TmstParams(r=3.0, T=1e-6), 100.0, TIGHT)
        assert got == pytest.approx(szz_large_l_asymptote(3.0), abs=1e-3)

    def test_large_l_asymptote_thermal(self):
        got = szz_correlator(TmstParams(r=1.5, T=0.5), 100.0, TIGHT)
        assert got == pytest.approx(szz_large_l_asymptote(1.5), abs=1e-4)

    def test_small_l_vanishes(self):
        got = szz_correlator(TmstParams(r=1.0), 0.01, TIGHT)
        assert abs(got - szz_small_l_asymptote(1.0, 0.0, 0.01)) < 1e-8
        assert abs(got) < 1e-8

    def test_product_state_uncorrelated(self):
        # r = 0: the bin sign is odd, so <Sz Sz> factorizes to <Sz>^2 = 0
        assert abs(szz_correlator(TmstParams(r=0.0, T=0.7), 1.3)) < 1e-10

    def test_matches_quadrature_oracle(self):
        p = TmstParams(r=1.0, T=0.3)
        qz, _ = quadrature_correlators(p, 1.5, auto_bins(p, 1.5))
        assert szz_correlator(p, 1.5, TIGHT) == pytest.approx(qz, abs=1e-7)


class TestSxxCorrelator:
    def test_small_l_near_one(self):
        got = sxx_correlator(TmstParams(r=0.5), 0.01, TIGHT)
        assert abs(got - 1.0) < 1e-4

    def test_large_l_vanishes(self):
        got = sxx_correlator(TmstParams(r=2.0), 50.0, TIGHT)
        assert abs(got) < 1e-3

    def test_matches_quadrature_oracle(self):
        p = TmstParams(r=1.5, T=0.4)
        _, qx = quadrature_correlators(p, 0.7, auto_bins(p, 0.7))
        assert sxx_correlator(p, 0.7, TIGHT) == pytest.approx(qx, abs=1e-7)


class TestSyyCorrelator:
    def test_bounded(self):
        assert abs(syy_correlator(TmstParams(r=1.0, T=0.2), 1.0)) <= 1.0 + 1e-6

    def test_gamma_weight_identity(self):
        # sxx and syy share one lattice sum: their ratio is fixed by the
        # two Gamma branches, hence sxx + syy = 2 * Gamma_K / Gamma * sxx
        p = TmstParams(r=0.9, T=0.35)
        l = 1.2
        sxx = sxx_correlator(p, l)
        syy = syy_correlator(p, l)
        lg_j, lg_k = _log_gamma_parts(p, l)
        gj, gk = math.exp(lg_j), math.exp(lg_k)
        assert sxx + syy == pytest.approx(2 * gk / (gj + gk) * sxx, rel=1e-12)

    def test_matches_quadrature_oracle(self):
        p = TmstParams(r=0.8, T=0.4)
        got = syy_correlator(p, 2.0, TIGHT)
        ref = quadrature_syy(p, 2.0, auto_bins(p, 2.0))
        assert got == pytest.approx(ref, abs=1e-7)

    def test_anticorrelated_for_squeezing(self):
        assert syy_correlator(TmstParams(r=1.0), 1.0) < 0.0


class TestCrossCorrelators:
    @pytest.mark.parametrize("r,T,l", [(1.0, 0.0, 1.0), (2.0, 0.5, 0.8)])
    def test_vanish_for_squeezed_thermal(self, r, T, l):
        zx, yz, xy = cross_correlators(TmstParams(r=r, T=T), l)
        assert abs(zx) < 1e-6
        assert abs(yz) < 1e-6
        assert abs(xy) < 1e-6

    def test_large_l_finite_and_zero(self):
        zx, yz, xy = cross_correlators(TmstParams(r=1.0, T=0.2), 30.0)
        for v in (zx, yz, xy):
            assert math.isfinite(v)
            assert abs(v) < 1e-6


class TestUnbinned:
    def test_zero_temperature_szz_is_one(self):
        szz, _ = unbinned_correlators(TmstParams(r=1.0, T=0.0))
        assert szz == 1.0

    def test_no_squeezing_sxx_is_zero(self):
        _, sxx = unbinned_correlators(TmstParams(r=0.0, T=0.3))
        assert sxx == 0.0

    def test_closed_forms(self):
        szz, sxx = unbinned_correlators(TmstParams(r=1.0, T=0.5))
        assert szz == pytest.approx(math.tanh(1.0) ** 2, rel=1e-14)
        assert sxx == pytest.approx(
            (2 / math.pi) * math.atan(math.sinh(2.0)), rel=1e-14
        )

    def test_requires_equal_frequencies(self):
        with pytest.raises(InvalidInputError):
            unbinned_correlators(TmstParams(r=1.0, omega_a=1.0, omega_b=2.0))


class TestSeriesProperties:
    def test_zero_temperature_continuity(self):
        for (r, l) in [(0.7, 0.9), (1.5, 2.0)]:
            cold = binned_correlators(TmstParams(r=r, T=1e-8), l, TIGHT)
            zero = binned_correlators(TmstParams(r=r, T=0.0), l, TIGHT)
            assert abs(cold.szz - zero.szz) < 1e-8
            assert abs(cold.sxx - zero.sxx) < 1e-8

    def test_correlators_in_unit_interval(self):
        rng = np.random.default_rng(11)
        for _ in range(12):
            r = rng.uniform(0, 2.5)
            T = rng.uniform(0, 2.0)
            l = 10.0 ** rng.uniform(-1.5, 1.5)
            p = TmstParams(r=r, T=T)
            cs = binned_correlators(p, l, include_syy=True)
            for v in (cs.szz, cs.sxx, cs.syy):
                assert abs(v) <= 1.0 + 1e-6

    def test_tail_bound_sound_under_radius_doubling(self):
        # clipping the lattice window must change the value by less than the
        # reported estimate
        p = TmstParams(r=1.0)
        loose = SeriesControl(sum_radius=60, tail_tol=1.0, adaptive=False)
        wide = SeriesControl(sum_radius=120, tail_tol=1.0, adaptive=False)
        for l in (0.05, 0.08):
            small = binned_correlators(p, l, loose)
            big = binned_correlators(p, l, wide)
            assert abs(small.szz - big.szz) <= small.est_error
            assert abs(small.sxx - big.sxx) <= small.est_error

    def test_accuracy_error_when_radius_exhausted(self):
        ctrl = SeriesControl(sum_radius=50, tail_tol=1e-9)
        with pytest.raises(AccuracyError) as exc:
            szz_correlator(TmstParams(r=1.0), 0.05, ctrl)
        assert exc.value.estimate is not None

    def test_phi_rejected(self):
        with pytest.raises(InvalidInputError):
            szz_correlator(TmstParams(r=1.0, phi=0.3), 1.0)

    def test_unequal_frequencies_rejected(self):
        with pytest.raises(InvalidInputError):
            sxx_correlator(TmstParams(r=1.0, omega_a=1.0, omega_b=1.5), 1.0)

    def test_bad_bin_size_rejected(self):
        with pytest.raises(InvalidInputError):
            szz_correlator(TmstParams(r=1.0), 0.0)

    def test_correlator_set_envelope_guard(self):
        with pytest.raises(InvalidInputError):
            CorrelatorSet(szz=1.5, sxx=0.0, est_error=0.0)


class TestOperatorChoice:
    def test_binned_requires_positive_l(self):
        with pytest.raises(InvalidInputError):
            Binned(0.0)
        with pytest.raises(InvalidInputError):
            Binned(math.inf)

    def test_grouped_requires_positive_d(self):
        with pytest.raises(InvalidInputError):
            FockGrouped(0)


class TestSeriesControl:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            SeriesControl(z_quad_order=4)
        with pytest.raises(InvalidInputError):
            SeriesControl(tail_tol=0.0)
        with pytest.raises(InvalidInputError):
            SeriesControl(sum_radius=0)
