import math

import pytest
from hypothesis import given, strategies as st

from ris_sop.errors import DomainError
from ris_sop.sysmodel import (
    SystemConfig,
    derive_clt_params,
    path_loss_linear,
    rho_of,
)


class TestPathLoss:
    def test_reference_distance(self):
        assert path_loss_linear(1.0, 42.0, 3.5) == pytest.approx(10**4.2, rel=1e-14)

    def test_default_geometry(self):
        expected = 10 ** ((42.0 - 35.0 * math.log10(45.0)) / 10.0)
        got = path_loss_linear(45.0, 42.0, 3.5)
        assert got == pytest.approx(expected, rel=1e-14)
        assert got == pytest.approx(2.593e-2, rel=1e-3)

    def test_zero_db_crossing(self):
        # z0 = 10 * upsilon * log10(d) exactly at d=10, z0=20, upsilon=2
        assert path_loss_linear(10.0, 20.0, 2.0) == 1.0

    @given(st.floats(0.5, 1e4), st.floats(1.0, 2e4))
    def test_strictly_decreasing(self, d, bump):
        lo = path_loss_linear(d, 42.0, 3.5)
        hi = path_loss_linear(d + bump, 42.0, 3.5)
        assert hi < lo

    def test_rejects_nonpositive_distance(self):
        with pytest.raises(DomainError):
            path_loss_linear(0.0, 42.0, 3.5)
        with pytest.raises(DomainError):
            path_loss_linear(-3.0, 42.0, 3.5)


class TestRhoOf:
    def test_unit_threshold(self):
        assert rho_of(1.0) == 2.0

    def test_power_of_two(self):
        assert rho_of(3.0) == 8.0

    def test_limit_from_above(self):
        rho = rho_of(1e-12)
        assert 1.0 < rho < 1.0 + 1e-11


def _unit_gain_config(n, m=3, gamma0_db=0.0):
    # z0 = 0 at d = 1 m makes every linear gain exactly 1.
    return SystemConfig(
        n_elements=n,
        n_users=m,
        d_sr=1.0,
        d_rd=1.0,
        d_re=1.0,
        z0=0.0,
        upsilon=3.5,
        gamma0_db=gamma0_db,
    )


class TestDeriveCltParams:
    def test_unit_gain_moments(self):
        p = derive_clt_params(_unit_gain_config(64))
        assert p.mu_d == pytest.approx(16 * math.pi, rel=1e-15)
        assert p.sigma2_d == pytest.approx(4 * (16 - math.pi**2), rel=1e-15)

    def test_xi_saturates_quickly(self):
        p = derive_clt_params(_unit_gain_config(64))
        # mu_d / sigma_d = sqrt(N) * pi / sqrt(16 - pi^2) ~ 10.15 at N=64
        assert p.mu_d / p.sigma_d == pytest.approx(
            math.sqrt(64) * math.pi / math.sqrt(16 - math.pi**2), rel=1e-13
        )
        assert abs(p.xi - 1.0) < 1e-15

    def test_unit_lambda(self):
        p = derive_clt_params(_unit_gain_config(1, m=1, gamma0_db=0.0))
        assert p.lambda_e == 1.0

    def test_exact_scaling_in_n(self):
        base = derive_clt_params(SystemConfig(n_elements=50))
        double = derive_clt_params(SystemConfig(n_elements=100))
        assert double.mu_d == 2 * base.mu_d
        assert double.sigma2_d == 2 * base.sigma2_d
        assert double.lambda_e == 2 * base.lambda_e

    def test_scaling_in_transmit_snr(self):
        base = derive_clt_params(SystemConfig(gamma0_db=17.0))
        double = derive_clt_params(
            SystemConfig(gamma0_db=17.0 + 10 * math.log10(2.0))
        )
        # dB round trip costs a couple of ulps, nothing more
        assert double.lambda_e == pytest.approx(2 * base.lambda_e, rel=1e-13)
        assert double.mu_d == base.mu_d

    def test_xi_monotone_to_one(self):
        xis = [derive_clt_params(SystemConfig(n_elements=n)).xi for n in
               (4, 8, 16, 32, 64, 128)]
        assert all(a >= b for a, b in zip(xis, xis[1:]))
        assert all(x > 0.5 and x <= max(xis) for x in xis)
        for n, xi in zip((16, 32, 64, 128), xis[2:]):
            assert abs(xi - 1.0) < 1e-6, f"xi at N={n}"

    def test_rho_always_above_one(self):
        p = derive_clt_params(SystemConfig(r_th=0.01))
        assert p.rho > 1.0


class TestSystemConfigValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_elements": 0},
            {"n_users": 0},
            {"d_sr": 0.0},
            {"d_rd": -1.0},
            {"d_re": 0.0},
            {"r_th": 0.0},
            {"upsilon": 0.0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(DomainError):
            SystemConfig(**kwargs)

    def test_defaults_are_valid(self):
        cfg = SystemConfig()
        assert cfg.r_th == 1.0
        assert (cfg.d_sr, cfg.d_rd, cfg.d_re) == (45.0, 45.0, 30.0)
        assert (cfg.z0, cfg.upsilon) == (42.0, 3.5)
