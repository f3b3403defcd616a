"""Closed-form thermodynamics: frozen oracle values, limits, and invariants.

Expected values tagged "oracle" were computed with the brute-force routines
(golden-section scan of the free energy, high-precision central differences)
before the closed forms were written, and frozen here.
"""

import math

import numpy as np
import pytest

from filamentmc.errors import ConvergenceError, DomainError, UnreachableEnthalpyError
from filamentmc.thermo import (
    ScaledParams,
    enthalpy_of_beta,
    enthalpy_supremum,
    entropy_per_filament,
    finite_m_eta0,
    finite_m_free_energy,
    free_energy,
    mean_square_radius,
    solve_beta_for_enthalpy,
    solve_point,
    specific_heat,
)

# oracle: golden-section minimization of F over R^2 in (0, 1e3) at (1, 1, 1)
R2_111 = 0.8430703308172536
# oracle: direct evaluation at the scan minimum
F_111 = 1.4788168854490928
# oracle: central finite difference of beta*F(beta, R^2(beta)), h = 1e-12 (mp 40 digits)
H0_111 = 0.2926762238145856
# oracle: -beta^2 * finite difference of the enthalpy; equals (1/4)(1/sqrt(33) - 1)
CP_111 = -0.20648058601107554
# oracle: cross-checked via S = beta * (H0 - F)
S_111 = -1.1861406616345072


def _log_uniform(rng, lo, hi, size):
    return 10.0 ** rng.uniform(math.log10(lo), math.log10(hi), size=size)


class TestScaledParams:
    def test_beta_route(self):
        p = ScaledParams(1.0, 2.0, beta_scaled=0.5)
        assert p.beta_scaled == 0.5

    def test_exactly_one_independent_variable(self):
        with pytest.raises(DomainError):
            ScaledParams(1.0, 1.0)
        with pytest.raises(DomainError):
            ScaledParams(1.0, 1.0, beta_scaled=1.0, enthalpy_per_filament=0.1)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_positivity(self, bad):
        with pytest.raises(DomainError):
            ScaledParams(bad, 1.0, beta_scaled=1.0)
        with pytest.raises(DomainError):
            ScaledParams(1.0, bad, beta_scaled=1.0)


class TestMeanSquareRadius:
    def test_unit_point(self):
        assert mean_square_radius(1, 1, 1) == pytest.approx((1 + math.sqrt(33)) / 8, rel=1e-15)
        assert mean_square_radius(1, 1, 1) == pytest.approx(R2_111, rel=1e-12)

    def test_large_beta_limit(self):
        # R^2 -> 1/(4p) as beta -> infinity
        for p in (0.3, 1.0, 7.0):
            assert mean_square_radius(1.0, 1e6, p) == pytest.approx(1.0 / (4 * p), rel=1e-5)

    def test_small_pressure_blowup(self):
        r2 = mean_square_radius(1.0, 1.0, 1e-12)
        assert math.isfinite(r2) and r2 > 1e10
        values = [mean_square_radius(1.0, 1.0, p) for p in (1e-6, 1e-8, 1e-10, 1e-12)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            mean_square_radius(1.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            mean_square_radius(1.0, 1.0, -2.0)
        with pytest.raises(DomainError):
            mean_square_radius(math.inf, 1.0, 1.0)


class TestFreeEnergy:
    def test_log_one(self):
        assert free_energy(1, 1, 1, 1.0) == 1.5

    def test_at_stationary_radius(self):
        assert free_energy(1, 1, 1, R2_111) == pytest.approx(F_111, rel=1e-12)

    def test_stationarity_by_finite_difference(self):
        h = 1e-6
        df = (free_energy(1, 1, 1, R2_111 + h) - free_energy(1, 1, 1, R2_111 - h)) / (2 * h)
        assert abs(df) < 1e-7

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(DomainError):
            free_energy(1, 1, 1, 0.0)


class TestEnthalpy:
    def test_unit_point(self):
        assert enthalpy_of_beta(1, 1, 1) == pytest.approx(H0_111, rel=1e-12)

    def test_large_beta_supremum(self):
        assert enthalpy_of_beta(1, 1e6, 1) == pytest.approx((1 + math.log(4)) / 4, rel=1e-5)
        assert enthalpy_supremum(1.0) == pytest.approx((1 + math.log(4)) / 4, rel=1e-15)

    def test_strictly_increasing_in_beta(self):
        assert enthalpy_of_beta(1, 2, 1) > enthalpy_of_beta(1, 1, 1)
        betas = np.logspace(-2, 2, 30)
        values = [enthalpy_of_beta(0.7, b, 2.3) for b in betas]
        assert all(a < b for a, b in zip(values, values[1:]))


class TestSpecificHeat:
    def test_unit_point(self):
        assert specific_heat(1, 1, 1) == pytest.approx(0.25 * (1 / math.sqrt(33) - 1), rel=1e-14)
        assert specific_heat(1, 1, 1) == pytest.approx(CP_111, rel=1e-12)

    def test_zero_pressure_boundary(self):
        assert specific_heat(2.0, 3.0, 0.0) == 0.0

    def test_negative_on_log_grid(self):
        grid = np.logspace(-2, 2, 5)
        for a in grid:
            for b in grid:
                for p in grid:
                    assert specific_heat(a, b, p) < 0.0


class TestEntropy:
    def test_unit_point(self):
        assert entropy_per_filament(1, 1, 1, H0_111) == pytest.approx(S_111, rel=1e-12)

    def test_reduces_to_minus_beta_f_at_zero_enthalpy(self):
        assert entropy_per_filament(1, 1, 1, 0.0) == pytest.approx(-F_111, rel=1e-12)

    def test_ds_dh_is_beta(self):
        # parametric finite differences of (H0(beta), S(beta)) at fixed (alpha, p)
        a, p, beta = 1.3, 0.6, 0.9
        h = 1e-5 * beta
        ds = entropy_per_filament(a, beta + h, p, enthalpy_of_beta(a, beta + h, p)) - \
            entropy_per_filament(a, beta - h, p, enthalpy_of_beta(a, beta - h, p))
        dh = enthalpy_of_beta(a, beta + h, p) - enthalpy_of_beta(a, beta - h, p)
        assert ds / dh == pytest.approx(beta, rel=1e-4)


class TestSolveBetaForEnthalpy:
    def test_unit_roundtrip(self):
        assert solve_beta_for_enthalpy(1, 1, H0_111) == pytest.approx(1.0, rel=1e-6)

    def test_unreachable_enthalpy_names_supremum(self):
        with pytest.raises(UnreachableEnthalpyError) as exc:
            solve_beta_for_enthalpy(1.0, 1.0, 0.59658)
        assert exc.value.supremum == pytest.approx(0.5965735902799727, rel=1e-12)

    @pytest.mark.parametrize("beta", [0.1, 1.0, 10.0])
    def test_roundtrip_identity(self, beta):
        h = enthalpy_of_beta(1.0, beta, 1.0)
        assert solve_beta_for_enthalpy(1.0, 1.0, h) == pytest.approx(beta, rel=1e-8)

    def test_roundtrip_off_unit_parameters(self):
        for a, p, beta in [(0.2, 5.0, 0.03), (12.0, 0.4, 250.0)]:
            h = enthalpy_of_beta(a, beta, p)
            assert solve_beta_for_enthalpy(a, p, h) == pytest.approx(beta, rel=1e-8)


class TestSolvePoint:
    def test_beta_route_fills_every_field(self):
        pt = solve_point(ScaledParams(1.0, 1.0, beta_scaled=1.0))
        assert pt.r_squared == pytest.approx(R2_111, rel=1e-12)
        assert pt.free_energy == pytest.approx(F_111, rel=1e-12)
        assert pt.enthalpy == pytest.approx(H0_111, rel=1e-12)
        assert pt.entropy == pytest.approx(S_111, rel=1e-12)
        assert pt.temperature == 1.0
        assert pt.specific_heat == pytest.approx(CP_111, rel=1e-12)

    def test_enthalpy_route_matches_beta_route(self):
        direct = solve_point(ScaledParams(1.0, 1.0, beta_scaled=1.0))
        inverted = solve_point(
            ScaledParams(1.0, 1.0, enthalpy_per_filament=direct.enthalpy)
        )
        assert inverted.beta_scaled == pytest.approx(1.0, rel=1e-8)
        assert inverted.r_squared == pytest.approx(direct.r_squared, rel=1e-8)

    def test_legendre_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            a, b, p = _log_uniform(rng, 1e-2, 1e2, 3)
            pt = solve_point(ScaledParams(a, p, beta_scaled=b))
            expected = b * (pt.enthalpy - pt.free_energy)
            assert pt.entropy == pytest.approx(expected, rel=1e-12)


class TestFiniteSegmentFreeEnergy:
    def test_eta0_sqrt2(self):
        # M * alpha * beta * R^2 = 1
        assert finite_m_eta0(0.5, 1.0, 2, 1.0) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_eta0_large_m_limit(self):
        # M*a*b*R^2 = 1e6: eta0 = 1 + 5e-13 to within 1e-14 absolute
        eta = finite_m_eta0(1.0, 1.0, 10**6, 1.0)
        assert abs(eta - (1.0 + 5e-13)) < 1e-14

    def test_gap_strictly_decreasing_at_unit_point(self):
        r2 = mean_square_radius(1, 1, 1)
        limit = free_energy(1, 1, 1, r2)
        gaps = [
            abs(finite_m_free_energy(1, 1, 1, 1, m, r2) - limit)
            for m in (8, 16, 32, 64, 128)
        ]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-5

    def test_quadratic_convergence_rate(self):
        r2 = mean_square_radius(1, 1, 1)
        limit = free_energy(1, 1, 1, r2)
        g64 = abs(finite_m_free_energy(1, 1, 1, 1, 64, r2) - limit)
        g128 = abs(finite_m_free_energy(1, 1, 1, 1, 128, r2) - limit)
        assert g64 / g128 == pytest.approx(4.0, rel=0.1)


class TestInvariants:
    """Property checks over seeded log-uniform parameter samples."""

    def test_negativity(self):
        rng = np.random.default_rng(101)
        for _ in range(200):
            a, b, p = _log_uniform(rng, 1e-3, 1e3, 3)
            assert specific_heat(a, b, p) < 0.0

    def test_stationarity(self):
        rng = np.random.default_rng(102)
        for _ in range(50):
            a, b, p = _log_uniform(rng, 1e-2, 1e2, 3)
            r2 = mean_square_radius(a, b, p)
            h = 1e-6 * r2
            df = (free_energy(a, b, p, r2 + h) - free_energy(a, b, p, r2 - h)) / (2 * h)
            f = free_energy(a, b, p, r2)
            assert abs(df) <= max(1e-6, 1e-6 * abs(f))

    def test_derivative_consistency(self):
        rng = np.random.default_rng(103)
        for _ in range(50):
            a, b, p = _log_uniform(rng, 1e-1, 1e1, 3)
            h = 1e-5 * b
            dh = (enthalpy_of_beta(a, b + h, p) - enthalpy_of_beta(a, b - h, p)) / (2 * h)
            assert specific_heat(a, b, p) == pytest.approx(-b * b * dh, rel=1e-4)

    def test_envelope_consistency(self):
        rng = np.random.default_rng(104)

        def beta_f(a, b, p):
            return b * free_energy(a, b, p, mean_square_radius(a, b, p))

        for _ in range(50):
            a, b, p = _log_uniform(rng, 1e-1, 1e1, 3)
            h = 1e-5 * b
            total = (beta_f(a, b + h, p) - beta_f(a, b - h, p)) / (2 * h)
            assert enthalpy_of_beta(a, b, p) == pytest.approx(total, rel=1e-6)

    def test_temperature_identity(self):
        rng = np.random.default_rng(105)
        for _ in range(30):
            a, b, p = _log_uniform(rng, 1e-1, 1e1, 3)
            h = 0.5e-4 * b
            s_hi = entropy_per_filament(a, b + h, p, enthalpy_of_beta(a, b + h, p))
            s_lo = entropy_per_filament(a, b - h, p, enthalpy_of_beta(a, b - h, p))
            dh = enthalpy_of_beta(a, b + h, p) - enthalpy_of_beta(a, b - h, p)
            assert (s_hi - s_lo) / dh == pytest.approx(b, rel=1e-3)

    def test_appendix_limit_random_parameters(self):
        rng = np.random.default_rng(106)
        for _ in range(10):
            a, b, p = _log_uniform(rng, 0.5, 2.0, 3)
            r2 = mean_square_radius(a, b, p)
            limit = free_energy(a, b, p, r2)
            gaps = [
                abs(finite_m_free_energy(a, b, p, 1, m, r2) - limit)
                for m in (8, 16, 32, 64, 128)
            ]
            assert all(x > y for x, y in zip(gaps, gaps[1:]))


class TestBracketFailure:
    def test_convergence_error_is_reachable(self):
        # sanity: the expansion limit raises rather than looping forever
        with pytest.raises((ConvergenceError, UnreachableEnthalpyError)):
            solve_beta_for_enthalpy(1.0, 1.0, 0.7)
