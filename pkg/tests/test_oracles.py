import math

import numpy as np
import pytest
from scipy.linalg import expm

from gaussbell.bell import chen_bound, grouped_bell_closed_form
from gaussbell.errors import AccuracyError, InvalidInputError
from gaussbell.gaussian import TmstParams
from gaussbell.oracles import (
    FockTruncation,
    McControl,
    auto_bins,
    fock_bell_chen,
    fock_bell_grouped,
    fock_operators_chen,
    fock_operators_grouped,
    mc_correlators,
    mc_pseudospin,
    quadrature_correlators,
    taylor_expm,
    tmsv_amplitudes,
)
from gaussbell.pseudospin import SeriesControl, binned_correlators

TIGHT = SeriesControl(tail_tol=1e-10)


class TestFockOperators:
    def test_chen_value_no_squeezing(self):
        assert fock_bell_chen(0.0, FockTruncation(40)) == pytest.approx(2.0)

    def test_chen_matches_closed_form(self):
        got = fock_bell_chen(1.0, FockTruncation(120))
        assert got == pytest.approx(chen_bound(1.0), abs=1e-8)

    def test_grouped_reduces_to_chen_at_d1(self):
        trunc = FockTruncation(140)
        assert fock_bell_grouped(0.9, 1, trunc) == pytest.approx(
            fock_bell_chen(0.9, trunc), abs=1e-12
        )

    def test_grouped_no_squeezing(self):
        for d in (1, 2, 5):
            assert fock_bell_grouped(0.0, d, FockTruncation(40)) == pytest.approx(2.0)

    @pytest.mark.parametrize("r,d", [(1.2, 2), (1.5, 3), (0.8, 4)])
    def test_grouped_matches_closed_form(self, r, d):
        got = fock_bell_grouped(r, d, FockTruncation(150))
        assert got == pytest.approx(grouped_bell_closed_form(r, d), abs=1e-6)

    def test_su2_closure_on_interior(self):
        # [s_x, s_y] = 2i s_z away from the truncation boundary
        for ops in (fock_operators_chen(60), fock_operators_grouped(3, 60)):
            s_z, s_x, s_y = ops
            comm = s_x @ s_y - s_y @ s_x
            resid = comm - 2j * s_z
            interior = resid[: 60 - 6, : 60 - 6]
            assert np.max(np.abs(interior)) < 1e-10

    def test_squares_to_identity_on_interior(self):
        for d in (1, 3):
            s_z, s_x, s_y = fock_operators_grouped(d, 50)
            for op in (s_z, s_x, s_y):
                sq = (op @ op)[: 50 - 2 * d, : 50 - 2 * d]
                assert np.max(np.abs(sq - np.eye(50 - 2 * d))) < 1e-10

    def test_tmsv_amplitudes_normalized(self):
        c = tmsv_amplitudes(0.8, 300)
        assert float(c @ c) == pytest.approx(1.0, abs=1e-12)

    def test_truncation_guard(self):
        with pytest.raises(AccuracyError):
            fock_bell_chen(3.0, FockTruncation(10))

    def test_invalid_truncation(self):
        with pytest.raises(InvalidInputError):
            FockTruncation(0)


class TestMonteCarlo:
    def test_seed_reproducibility(self):
        p = TmstParams(r=1.0, T=0.3)
        mc = McControl(samples=50_000, seed=123, batch=10_000)
        a = mc_correlators(p, 1.5, mc)
        b = mc_correlators(p, 1.5, mc)
        assert a == b

    def test_matches_series_within_three_sigma(self):
        p = TmstParams(r=1.0, T=0.3)
        mc = McControl(samples=400_000, seed=5, batch=20_000)
        szz, sxx, se_z, se_x = mc_correlators(p, 1.5, mc)
        ref = binned_correlators(p, 1.5, TIGHT)
        assert abs(szz - ref.szz) < 3 * se_z
        assert abs(sxx - ref.sxx) < 3 * se_x

    def test_product_state_factorizes(self):
        # r = 0: szz = <sign>^2 = 0 and sxx = (2 E[A] e^{-l^2 nu/4})^2
        p = TmstParams(r=0.0, T=0.4)
        mc = McControl(samples=400_000, seed=9, batch=20_000)
        szz, sxx, se_z, se_x = mc_correlators(p, 1.0, mc)
        assert abs(szz) < 3 * se_z
        ref = binned_correlators(p, 1.0, TIGHT)
        assert abs(sxx - ref.sxx) < 3 * se_x

    def test_error_scaling_with_samples(self):
        p = TmstParams(r=1.0, T=0.3)
        small = McControl(samples=100_000, seed=2, batch=2_000)
        big = McControl(samples=400_000, seed=2, batch=8_000)
        _, _, se_small, _ = mc_correlators(p, 1.5, small)
        _, _, se_big, _ = mc_correlators(p, 1.5, big)
        # quadrupling the sample count should halve the error, within the
        # sampling noise of the error estimate itself
        ratio = se_big / se_small
        assert 0.35 < ratio < 0.65

    def test_syy_and_cross_estimators(self):
        p = TmstParams(r=0.8, T=0.4)
        mc = McControl(samples=300_000, seed=3, batch=15_000)
        est = mc_pseudospin(p, 2.0, mc, observables=("syy", "zx", "yz", "xy"))
        from gaussbell.pseudospin import syy_correlator

        syy, se = est["syy"]
        assert abs(syy - syy_correlator(p, 2.0, TIGHT)) < 3 * se
        for name in ("zx", "yz", "xy"):
            val, se = est[name]
            assert abs(val) < 3 * se

    def test_validation(self):
        with pytest.raises(InvalidInputError):
            McControl(samples=100)
        with pytest.raises(InvalidInputError):
            mc_correlators(TmstParams(r=1.0, phi=0.2), 1.0,
                           McControl(samples=20_000, batch=10_000))


class TestQuadrature:
    @pytest.mark.parametrize("r,T,l", [
        (1.0, 0.0, 1.0),
        (1.5, 0.4, 0.7),
        (0.8, 0.4, 2.0),
    ])
    def test_matches_series(self, r, T, l):
        p = TmstParams(r=r, T=T)
        qz, qx = quadrature_correlators(p, l, auto_bins(p, l))
        ref = binned_correlators(p, l, TIGHT)
        assert abs(qz - ref.szz) < 1e-7
        assert abs(qx - ref.sxx) < 1e-7

    def test_high_temperature_decorrelates(self):
        p = TmstParams(r=0.0, T=50.0)
        qz, qx = quadrature_correlators(p, 1.0, auto_bins(p, 1.0))
        assert abs(qz) < 1e-7
        assert abs(qx) < 1e-3

    def test_bin_budget_guard(self):
        p = TmstParams(r=2.0, T=1.0)
        with pytest.raises(AccuracyError):
            quadrature_correlators(p, 0.5, 3)

    def test_auto_bins_cover(self):
        p = TmstParams(r=2.0, T=1.0)
        bins = auto_bins(p, 0.5)
        assert bins * 0.5 >= 8.0 * math.sqrt(0.5 * p.nu_a * math.cosh(4.0))


class TestTaylorExpm:
    def test_matches_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            M = rng.uniform(-1.5, 1.5, (4, 4))
            assert np.max(np.abs(taylor_expm(M) - expm(M))) < 1e-12

    def test_zero_matrix(self):
        assert np.allclose(taylor_expm(np.zeros((3, 3))), np.eye(3))
