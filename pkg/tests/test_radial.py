"""Radial quadrature and axisymmetric physical-space evaluation tests."""

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import centered_gaussian
from viscowave.grid import lp_norm, make_grid
from viscowave.radial import (
    SPHERE_LONG,
    SPHERE_TRANS,
    AngularTerm,
    axisym_evaluate,
    axisym_lp_norm,
    axisym_magnitude,
    gauss_theta_rule,
    radial_l2_norm,
)


class TestRadialL2:
    def test_gaussian_analytic(self):
        # multiplier 1, h(r) = e^{-r^2/2}: integral = c_ang * int r^2 e^{-r^2} dr
        val = radial_l2_norm(
            lambda t, r: np.ones_like(r), lambda r: np.exp(-0.5 * r * r), 0, (1.0, 0.0)
        )
        exact = np.sqrt(SPHERE_LONG * np.sqrt(np.pi) / 4.0)
        assert val == pytest.approx(exact, rel=1e-8)

    def test_angular_constants_against_sphere_quadrature(self):
        # c_par = int (w.e)^2 dOmega, c_perp = int |e - (w.e)w|^2 dOmega
        c_par = 2.0 * np.pi * quad(lambda mu: mu * mu, -1, 1)[0]
        c_perp = 2.0 * np.pi * quad(lambda mu: 1.0 - mu * mu, -1, 1)[0]
        assert SPHERE_LONG == pytest.approx(c_par, rel=1e-12)
        assert SPHERE_TRANS == pytest.approx(c_perp, rel=1e-12)

    def test_heat_multiplier_monotone_in_time(self):
        h = lambda r: np.exp(-0.25 * r * r)
        vals = [
            radial_l2_norm(lambda t, r: np.exp(-r * r * t), h, 0, (0.5, 0.5), t=t)
            for t in (0.1, 0.5, 1.0, 2.0, 5.0)
        ]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_agrees_with_grid_norm(self):
        # band-limited radial data measured both ways
        g = make_grid(48, 24.0)
        sigma = 1.0
        fld = centered_gaussian(g, sigma=sigma, components=(1.0, 0.0, 0.0))
        grid_val = lp_norm(fld, 2)
        c = (2.0 * np.pi) ** (-1.5)
        ghat = lambda r: c * np.exp(-0.5 * (sigma * r) ** 2)
        # one component along e1: |P e|^2 + |(I-P) e|^2 = 1 on the sphere
        val = radial_l2_norm(lambda t, r: np.ones_like(r), ghat, 0, (1.0 / SPHERE_LONG, 0.0))
        val = np.hypot(
            radial_l2_norm(lambda t, r: np.ones_like(r), ghat, 0, (1.0, 0.0)),
            radial_l2_norm(lambda t, r: np.ones_like(r), ghat, 0, (0.0, 1.0)),
        )
        assert val == pytest.approx(grid_val, rel=1e-5)


class TestAxisymEvaluator:
    def test_gaussian_identity_structure(self):
        r = np.linspace(0, 12, 1601)
        psi = [np.exp(-0.5 * r * r)]
        terms = [AngularTerm(0, 0, lambda wx, wy, wz, f: np.ones_like(wx))]
        s = np.linspace(0, 6, 61)
        out = axisym_evaluate(r, psi, terms, 1, s, np.array([0.0, 0.9]))
        exact = np.exp(-0.5 * s * s)
        assert np.max(np.abs(out[0] - exact[:, None])) < 1e-12

    def test_rank_one_derivative_structure(self):
        # F^{-1}[i xi_3 e^{-r^2/2}] = d_3 e^{-|x|^2/2} = -x_3 e^{-|x|^2/2}
        r = np.linspace(0, 12, 1601)
        psi = [r * np.exp(-0.5 * r * r)]
        terms = [
            AngularTerm(
                0, 0, lambda wx, wy, wz, f: 1j * (wx * f.gz[0] + wy * f.gz[1] + wz * f.gz[2])
            )
        ]
        s = np.linspace(0, 6, 61)
        thetas = np.array([0.0, 1.1, 2.3])
        out = axisym_evaluate(r, psi, terms, 1, s, thetas)
        x3 = s[:, None] * np.cos(thetas)[None, :]
        assert np.max(np.abs(out[0] + x3 * np.exp(-0.5 * s * s)[:, None])) < 1e-12

    def test_rank_two_projector_structure(self):
        # F^{-1}[xi_3^2 e^{-r^2/2}] = (1 - x_3^2) e^{-|x|^2/2}
        r = np.linspace(0, 12, 1601)
        psi = [r * r * np.exp(-0.5 * r * r)]
        terms = [
            AngularTerm(
                0, 0, lambda wx, wy, wz, f: (wx * f.gz[0] + wy * f.gz[1] + wz * f.gz[2]) ** 2
            )
        ]
        s = np.linspace(0, 6, 61)
        thetas = np.array([0.3, 1.4])
        out = axisym_evaluate(r, psi, terms, 1, s, thetas)
        x3 = s[:, None] * np.cos(thetas)[None, :]
        exact = (1.0 - x3**2) * np.exp(-0.5 * s * s)[:, None]
        assert np.max(np.abs(out[0] - exact)) < 1e-12

    def test_lp_norms_match_analytic_gaussian(self):
        r = np.linspace(0, 12, 2401)
        psi = [np.exp(-0.5 * r * r)]
        terms = [AngularTerm(0, 0, lambda wx, wy, wz, f: np.ones_like(wx))]
        thetas, tw = gauss_theta_rule(16)
        s = np.linspace(0, 10, 1201)
        out = axisym_evaluate(r, psi, terms, 1, s, thetas)
        mag = axisym_magnitude(out)
        assert axisym_lp_norm(mag, s, tw, 2.0) == pytest.approx(np.pi**0.75, rel=1e-8)
        assert axisym_lp_norm(mag, s, tw, np.inf) == pytest.approx(1.0, rel=1e-10)
        exact4 = (np.pi / 2.0) ** 0.375  # (int e^{-2|x|^2} dx)^{1/4}
        assert axisym_lp_norm(mag, s, tw, 4.0) == pytest.approx(exact4, rel=1e-8)
