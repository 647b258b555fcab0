"""Grid, transform, multiplier, cutoff, and norm tests."""

import numpy as np
import pytest

from conftest import band_limited_random, centered_gaussian
from viscowave.exceptions import (
    InvalidExponentError,
    InvalidGridError,
    UnsupportedSymbolError,
)
from viscowave.grid import (
    CutoffSpec,
    VectorField,
    apply_symbol,
    coefficient_l2_norm,
    dealias_mask,
    hermitian_defect,
    lp_norm,
    make_grid,
    sobolev_seminorm,
    transform,
    zero_field,
)


class TestMakeGrid:
    def test_unit_lattice(self):
        g = make_grid(8, 2.0 * np.pi)
        ks = np.sort(g.xi1)
        assert np.allclose(ks, np.arange(-4, 4), atol=1e-14)

    def test_smallest_nonzero_frequency(self):
        g = make_grid(16, 1.0)
        nz = np.abs(g.xi1[np.abs(g.xi1) > 0])
        assert np.min(nz) == pytest.approx(2.0 * np.pi, rel=1e-15)

    def test_zero_vector_once(self):
        g = make_grid(8, 2.0 * np.pi)
        assert int(np.count_nonzero(g.radius == 0.0)) == 1
        assert g.radius.size == 8**3

    def test_spacing_identity(self):
        g = make_grid(12, 7.5)
        assert g.spacing * g.n == pytest.approx(g.box_length, rel=1e-15)

    def test_invalid(self):
        with pytest.raises(InvalidGridError):
            make_grid(7, 1.0)
        with pytest.raises(InvalidGridError):
            make_grid(4, 1.0)
        with pytest.raises(InvalidGridError):
            make_grid(8, -1.0)


class TestTransform:
    def test_zero_field(self, grid16):
        out = transform(zero_field(grid16))
        assert np.all(out.data == 0.0)

    def test_plane_wave_two_coefficients(self, grid8):
        x = grid8.x_component(0)
        data = np.zeros((3, *grid8.shape))
        data[0] = np.cos(x) * np.ones(grid8.shape)
        fh = transform(VectorField(grid8, data, "physical"))
        nonzero = np.abs(fh.data[0]) > 1e-12
        assert int(np.count_nonzero(nonzero)) == 2
        idx = np.argwhere(nonzero)
        assert sorted(grid8.xi1[i[0]] for i in idx) == [-1.0, 1.0]

    def test_round_trip(self, grid16):
        fld = band_limited_random(grid16, seed=1)
        back = transform(transform(fld))
        scale = np.max(np.abs(fld.data))
        assert np.max(np.abs(back.data - fld.data)) < 1e-12 * scale

    def test_plancherel(self, grid16):
        fld = band_limited_random(grid16, seed=2)
        fh = transform(fld)
        a = lp_norm(fld, 2)
        b = coefficient_l2_norm(fh)
        assert abs(a - b) <= 1e-12 * a

    def test_hermitian_symmetry(self, grid16):
        fh = transform(band_limited_random(grid16, seed=3))
        assert hermitian_defect(fh) < 1e-12


class TestApplySymbol:
    def test_identity(self, grid16):
        fh = transform(band_limited_random(grid16, seed=4))
        out = apply_symbol(fh, "one")
        assert np.array_equal(out.data, fh.data)

    def test_riesz_resolution_of_identity(self, grid16):
        fh = transform(band_limited_random(grid16, seed=5))
        acc = np.zeros_like(fh.data)
        for a in range(3):
            acc += apply_symbol(apply_symbol(fh, "riesz", axis=a), "riesz", axis=a).data
        expected = fh.data.copy()
        expected[:, 0, 0, 0] = 0.0  # the mean is annihilated
        assert np.max(np.abs(acc - expected)) < 1e-13 * np.max(np.abs(fh.data))

    def test_derivative_single_mode(self, grid8):
        x = grid8.x_component(0)
        data = np.zeros((3, *grid8.shape))
        data[0] = np.cos(x) * np.ones(grid8.shape)
        fh = transform(VectorField(grid8, data, "physical"))
        out = apply_symbol(fh, "derivative", alpha=(1, 0, 0))
        # coefficient at xi = (1,0,0) picks up a factor i * 1
        i1 = int(np.argwhere(grid8.xi1 == 1.0)[0][0])
        assert out.data[0, i1, 0, 0] == pytest.approx(1j * fh.data[0, i1, 0, 0], rel=1e-14)

    def test_unknown_symbol(self, grid16):
        fh = transform(zero_field(grid16))
        with pytest.raises(UnsupportedSymbolError):
            apply_symbol(fh, "banana")

    def test_inv_grad_mean_flag(self, grid16):
        fld = centered_gaussian(grid16)
        fh = transform(fld)
        out = apply_symbol(fh, "inv_grad")
        assert "mean-not-zero" in out.meta
        # mean-free input stays clean
        clean = fh.data.copy()
        clean[:, 0, 0, 0] = 0.0
        out2 = apply_symbol(VectorField(grid16, clean, "spectral"), "inv_grad")
        assert "mean-not-zero" not in out2.meta

    def test_composition(self, grid16):
        fh = transform(band_limited_random(grid16, seed=6))
        lame_nu, t = 0.7, 1.3
        one_then_two = apply_symbol(
            apply_symbol(fh, "heat", t=t, nu=lame_nu), "riesz", axis=1
        )
        r = grid16.radius
        with np.errstate(invalid="ignore", divide="ignore"):
            riesz = np.where(r > 0, grid16.xi_component(1) / np.where(r > 0, r, 1.0), 0.0)
        combined = fh.data * (np.exp(-0.5 * lame_nu * t * r * r) * riesz)
        scale = np.max(np.abs(fh.data))
        assert np.max(np.abs(one_then_two.data - combined)) <= 1e-14 * scale

    def test_kernel_symbol(self, grid16):
        fh = transform(band_limited_random(grid16, seed=7))
        out = apply_symbol(fh, "k1", beta=1.0, nu=1.0, t=0.0)
        assert np.max(np.abs(out.data)) == 0.0  # K1(0) = 0


class TestCutoffs:
    def test_partition_and_range(self):
        spec = CutoffSpec(c0=1.0, c1=4.0)
        r = np.linspace(0.0, 12.0, 4001)
        cl, cm, ch = spec.chi_l(r), spec.chi_m(r), spec.chi_h(r)
        assert np.array_equal(cl + cm + ch, np.ones_like(r))
        for arr in (cl, cm, ch):
            assert np.all(arr >= 0.0) and np.all(arr <= 1.0)

    def test_support_conditions(self):
        spec = CutoffSpec(c0=1.0, c1=4.0)
        assert np.all(spec.chi_l(np.linspace(0, 0.5, 50)) == 1.0)
        assert np.all(spec.chi_l(np.linspace(1.0, 3.0, 50)) == 0.0)
        assert np.all(spec.chi_h(np.linspace(0, 4.0, 50)) == 0.0)
        assert np.all(spec.chi_h(np.linspace(8.0, 20.0, 50)) == 1.0)

    def test_invalid_radii(self):
        with pytest.raises(ValueError):
            CutoffSpec(c0=2.0, c1=1.0)


class TestLpNorm:
    def test_constant(self):
        g = make_grid(8, 3.0)
        data = np.zeros((3, *g.shape))
        data[1] = 2.5
        v = lp_norm(VectorField(g, data, "physical"), 2)
        assert v == pytest.approx(2.5 * 3.0**1.5, rel=1e-14)

    def test_sup(self, grid16):
        fld = band_limited_random(grid16, seed=8)
        assert lp_norm(fld, np.inf) == pytest.approx(np.max(np.abs(fld.data)))

    def test_gaussian_l2_analytic(self):
        g = make_grid(64, 16.0)
        sigma = 0.5
        fld = centered_gaussian(g, sigma=sigma, components=(1.0, 0.0, 0.0))
        # || (2 pi s^2)^{-3/2} e^{-|x|^2/(2 s^2)} ||_2 = (4 pi s^2)^{-3/4}
        exact = (4.0 * np.pi * sigma**2) ** -0.75
        assert lp_norm(fld, 2) == pytest.approx(exact, rel=1e-6)

    def test_invalid_exponent(self, grid16):
        with pytest.raises(InvalidExponentError):
            lp_norm(zero_field(grid16), 0.5)

    def test_riesz_l2_contraction(self, grid16):
        fh = transform(band_limited_random(grid16, seed=9))
        out = apply_symbol(fh, "riesz", axis=0)
        assert sobolev_seminorm(out, 0) <= sobolev_seminorm(fh, 0) * (1 + 1e-15)


def test_dealias_mask_counts(grid16):
    mask = dealias_mask(grid16)
    kmax = grid16.n // 3
    assert mask.sum() == (2 * kmax + 1) ** 3
    assert dealias_mask(grid16, "none").all()
