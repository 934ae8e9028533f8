import numpy as np
import pytest

from novikov2c import (
    BandwidthWarning,
    Field,
    apply_multiplier,
    cube,
    derivative,
    helmholtz_dx,
    helmholtz_inverse,
    lp_norm,
    make_grid,
    multiply,
)

from conftest import mode_field, random_band_limited


class TestMakeGrid:
    def test_small_grid_constants(self):
        g = make_grid(16, np.pi)
        assert g.dx == pytest.approx(np.pi / 8, abs=0)
        assert g.k_max == pytest.approx(8.0)

    def test_desk_scale_kmax(self):
        g = make_grid(65536, 50.0)
        assert g.k_max == pytest.approx(np.pi * 65536 / 100.0)

    def test_wavenumbers_symmetric_except_nyquist(self):
        g = make_grid(64, 2.0)
        ks = np.sort(g.wavenumbers)
        # every k except the most negative one has its mirror on the lattice
        assert np.allclose(ks[1:], -ks[1:][::-1])
        assert np.max(np.abs(g.wavenumbers)) == pytest.approx(g.k_max)

    @pytest.mark.parametrize("n,L", [(15, 1.0), (8, 1.0), (100, 1.0),
                                     (256, 0.0), (256, -3.0)])
    def test_rejects_bad_arguments(self, n, L):
        with pytest.raises(ValueError):
            make_grid(n, L)


class TestFieldViews:
    def test_round_trip(self, trig_grid):
        f = random_band_limited(trig_grid, 40.0, seed=1)
        g = Field.from_physical(trig_grid, f.physical)
        back = Field(trig_grid, spectral=g.spectral).physical
        assert np.max(np.abs(back - f.physical)) <= 1e-12 * np.max(np.abs(f.physical))

    def test_hermitian_symmetry_of_real_field(self, trig_grid):
        f = random_band_limited(trig_grid, 40.0, seed=2)
        coeffs = f.spectral
        n = trig_grid.n_points
        idx = np.arange(1, n // 2)
        dev = np.max(np.abs(coeffs[n - idx] - np.conj(coeffs[idx])))
        assert dev <= 1e-12 * np.max(np.abs(coeffs))

    def test_parseval(self, trig_grid):
        f = random_band_limited(trig_grid, 40.0, seed=3)
        phys = np.sum(f.physical**2) * trig_grid.dx
        spec = np.sum(np.abs(f.spectral) ** 2) / (2 * trig_grid.half_width)
        assert phys == pytest.approx(spec, rel=1e-10)

    def test_from_spectral_rejects_non_hermitian(self, trig_grid):
        coeffs = np.zeros(trig_grid.n_points, dtype=complex)
        coeffs[3] = 1.0  # no conjugate partner at -k
        bad = Field.from_spectral(trig_grid, coeffs)
        with pytest.raises(ValueError, match="Hermitian"):
            bad.physical

    def test_fields_are_immutable(self, trig_grid):
        f = mode_field(trig_grid, 2.0)
        with pytest.raises(ValueError):
            f.physical[0] = 99.0
        with pytest.raises(TypeError):
            f * f  # pointwise products must go through multiply()

    def test_grid_mismatch_rejected(self, trig_grid):
        other = make_grid(128, np.pi)
        with pytest.raises(ValueError, match="different grids"):
            mode_field(trig_grid, 1.0) + mode_field(other, 1.0)


class TestApplyMultiplier:
    def test_identity(self, trig_grid):
        f = mode_field(trig_grid, 2.0)
        out = apply_multiplier(f, lambda k: np.ones_like(k))
        assert np.allclose(out.physical, f.physical, atol=1e-13)

    def test_single_mode_helmholtz_symbol(self, trig_grid):
        f = mode_field(trig_grid, 2.0)
        out = apply_multiplier(f, lambda k: 1.0 / (1.0 + k**2))
        assert np.allclose(out.physical, np.cos(2 * trig_grid.x) / 5.0, atol=1e-13)

    def test_derivative_symbol(self, trig_grid):
        f = mode_field(trig_grid, 3.0, kind="sin")
        out = apply_multiplier(f, lambda k: 1j * k)
        assert np.allclose(out.physical, 3.0 * np.cos(3 * trig_grid.x), atol=1e-11)

    def test_composition_equals_product_symbol(self, trig_grid):
        f = random_band_limited(trig_grid, 40.0, seed=4)
        a = lambda k: 1.0 / (1.0 + k**2)  # noqa: E731
        b = lambda k: np.cos(k)  # noqa: E731
        two_step = apply_multiplier(apply_multiplier(f, a), b)
        one_step = apply_multiplier(f, lambda k: a(k) * b(k))
        scale = np.max(np.abs(one_step.physical))
        assert np.max(np.abs(two_step.physical - one_step.physical)) <= 1e-10 * scale

    def test_non_hermitian_symbol_rejected(self, trig_grid):
        with pytest.raises(ValueError, match="Hermitian"):
            apply_multiplier(mode_field(trig_grid, 1.0),
                             lambda k: np.where(k > 0, 1.0, 0.0).astype(complex))

    def test_non_finite_symbol_rejected(self, trig_grid):
        with np.errstate(divide="ignore"):
            with pytest.raises(ValueError, match="finite"):
                apply_multiplier(mode_field(trig_grid, 1.0), lambda k: 1.0 / k)


class TestDerivative:
    def test_single_mode(self, trig_grid):
        f = mode_field(trig_grid, 3.0)
        expected = -3.0 * np.sin(3.0 * trig_grid.x)
        assert np.allclose(derivative(f).physical, expected, atol=1e-11)

    def test_constant(self, trig_grid):
        f = Field.from_physical(trig_grid, np.full(trig_grid.n_points, 2.5))
        assert np.max(np.abs(derivative(f).physical)) <= 1e-13

    def test_matches_centered_differences_at_second_order(self):
        # same band-limited profile on two resolutions: the finite-difference
        # defect against the spectral derivative must drop ~4x per refinement
        def defect(n):
            g = make_grid(n, np.pi)
            f = sum(np.cos(k * g.x) / (1 + k**2) for k in range(1, 6))
            fld = Field.from_physical(g, f)
            d_spec = derivative(fld).physical
            d_fd = (np.roll(f, -1) - np.roll(f, 1)) / (2 * g.dx)
            return np.max(np.abs(d_spec - d_fd))

        ratio = defect(128) / defect(256)
        assert ratio == pytest.approx(4.0, rel=0.15)


class TestHelmholtz:
    def test_inverse_single_mode(self, trig_grid):
        out = helmholtz_inverse(mode_field(trig_grid, 2.0))
        assert np.allclose(out.physical, np.cos(2 * trig_grid.x) / 5.0, atol=1e-13)

    def test_dx_single_mode(self, trig_grid):
        k = 3.0
        out = helmholtz_dx(mode_field(trig_grid, k))
        expected = -(k / (1 + k**2)) * np.sin(k * trig_grid.x)
        assert np.allclose(out.physical, expected, atol=1e-12)

    def test_operator_round_trip(self, trig_grid):
        f = random_band_limited(trig_grid, 40.0, seed=5)
        g = helmholtz_inverse(f)
        recovered = g - derivative(derivative(g))
        scale = np.max(np.abs(f.physical))
        assert np.max(np.abs(recovered.physical - f.physical)) <= 1e-10 * scale

    def test_dx_equals_derivative_of_inverse(self, trig_grid):
        f = random_band_limited(trig_grid, 40.0, seed=6)
        a = helmholtz_dx(f).physical
        b = derivative(helmholtz_inverse(f)).physical
        assert np.max(np.abs(a - b)) <= 1e-10 * np.max(np.abs(a))


class TestMultiply:
    def test_annihilator(self, trig_grid):
        f = mode_field(trig_grid, 2.0)
        zero = Field.from_physical(trig_grid, np.zeros(trig_grid.n_points))
        assert np.max(np.abs(multiply(f, zero).physical)) == 0.0

    def test_product_to_sum(self, trig_grid):
        f = mode_field(trig_grid, 1.0)
        out = multiply(f, f)
        expected = (1.0 + np.cos(2 * trig_grid.x)) / 2.0
        assert np.allclose(out.physical, expected, atol=1e-13)

    def test_cube_identity(self, trig_grid):
        out = cube(mode_field(trig_grid, 1.0))
        x = trig_grid.x
        expected = (3 * np.cos(x) + np.cos(3 * x)) / 4.0
        assert np.allclose(out.physical, expected, atol=1e-13)

    def test_commutative_bitwise(self, trig_grid):
        f = random_band_limited(trig_grid, 30.0, seed=7)
        g = random_band_limited(trig_grid, 30.0, seed=8)
        assert np.array_equal(multiply(f, g).physical, multiply(g, f).physical)

    def test_bilinear(self, trig_grid):
        f = random_band_limited(trig_grid, 20.0, seed=9)
        g = random_band_limited(trig_grid, 20.0, seed=10)
        h = random_band_limited(trig_grid, 20.0, seed=11)
        lhs = multiply(f + g, h).physical
        rhs = (multiply(f, h) + multiply(g, h)).physical
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(lhs)), 1.0)

    def test_half_rule_truncation(self, trig_grid):
        # two modes at 0.35 k_max produce content at 0.7 k_max, which the
        # 1/2 rule must remove
        k = np.floor(0.35 * trig_grid.k_max)
        out = multiply(mode_field(trig_grid, k), mode_field(trig_grid, k))
        high = np.abs(trig_grid.wavenumbers) > trig_grid.k_max / 2
        assert np.max(np.abs(out.spectral[high])) == 0.0

    def test_bandwidth_warning_on_wide_factors(self, trig_grid):
        f = random_band_limited(trig_grid, trig_grid.k_max, seed=12)
        with pytest.warns(BandwidthWarning):
            multiply(f, f)

    def test_safe_band_products_do_not_warn(self, trig_grid):
        import warnings
        f = random_band_limited(trig_grid, trig_grid.k_max / 3, seed=13)
        with warnings.catch_warnings():
            warnings.simplefilter("error", BandwidthWarning)
            multiply(f, f)


class TestLpNorm:
    def test_constant_l2(self, trig_grid):
        one = Field.from_physical(trig_grid, np.ones(trig_grid.n_points))
        assert lp_norm(one, 2) == pytest.approx(np.sqrt(2 * np.pi), rel=1e-14)

    def test_sine_l2(self, trig_grid):
        f = mode_field(trig_grid, 1.0, kind="sin")
        assert lp_norm(f, 2) == pytest.approx(np.sqrt(np.pi), rel=1e-13)

    def test_abs_cos_mean_l1(self, trig_grid):
        # |cos| has kinks, so the rectangle rule aliases the 1/k^2 Fourier
        # tail: accuracy ~ 1/N^2 rather than spectral
        f = mode_field(trig_grid, 1.0)
        mean = lp_norm(f, 1) / (2 * trig_grid.half_width)
        assert mean == pytest.approx(2.0 / np.pi, rel=1e-4)

    def test_abs_cos_mean_l1_refines_quadratically(self):
        def err(n):
            g = make_grid(n, np.pi)
            f = Field.from_physical(g, np.cos(g.x))
            return abs(lp_norm(f, 1) / (2 * np.pi) - 2.0 / np.pi)

        assert err(256) / err(512) == pytest.approx(4.0, rel=0.2)

    def test_inf_norm(self, trig_grid):
        f = mode_field(trig_grid, 3.0)
        assert lp_norm(f, np.inf) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_p_below_one(self, trig_grid):
        with pytest.raises(ValueError):
            lp_norm(mode_field(trig_grid, 1.0), 0.5)


class TestScalarAlgebra:
    def test_power_of_two_scaling_is_exact(self, trig_grid):
        # exactness holds per representation; fields with one cached view
        # never mix transform paths
        f = Field.from_physical(trig_grid,
                                random_band_limited(trig_grid, 30.0, seed=14).physical)
        assert np.array_equal((4.0 * f).physical, 4.0 * f.physical)
        assert np.array_equal((f + f).physical, 2.0 * f.physical)
        assert np.array_equal((4.0 * f).spectral, 4.0 * f.spectral)

    def test_negation_and_subtraction(self, trig_grid):
        f = random_band_limited(trig_grid, 30.0, seed=15)
        assert np.max(np.abs((f - f).physical)) == 0.0
        assert np.array_equal((-f).physical, -f.physical)
