"""Closed-form Fourier-mode kernels of the strongly damped wave operator.

Every Fourier mode of ``w_tt - beta^2 Lap w - nu Lap w_t = f`` obeys the
scalar ODE ``w'' + nu r^2 w' + beta^2 r^2 w = f`` with ``r = |xi|``.  This
module evaluates the two fundamental solutions of that ODE (``K0`` for unit
initial value, ``K1`` for unit initial velocity) and their time derivatives
up to second order, together with the diffusion-wave factors ``G0, G1``, the
low-frequency cosine kernel ``K00``, the undamped wave kernels ``W0, W1``,
and an independent adaptive-ODE oracle used to verify all of them.

The characteristic roots are

    sigma_pm = (-nu r^2 +/- sqrt(nu^2 r^4 - 4 beta^2 r^2)) / 2,

complex conjugates for ``nu r < 2 beta`` (oscillatory modes), real for
``nu r > 2 beta`` (overdamped modes), and confluent on the threshold.  All
evaluators are branch-stable: the overdamped branch uses expm1-based
differences so no catastrophic cancellation occurs near confluence, and an
explicit degenerate window switches to the confluent limit formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline

from .exceptions import OutOfDomainError, StiffnessError, UnsupportedOrderError

__all__ = [
    "DampingParams",
    "KernelEval",
    "char_roots",
    "kernel_hat",
    "diffusion_hat",
    "wave_hat",
    "kernel_eval",
    "mode_oracle",
    "lowfreq_residual",
]

# Relative half-width of the confluent window around the degenerate root.
_DEGENERATE_RTOL = 1e-6


@dataclass(frozen=True)
class DampingParams:
    """Wave speed ``beta`` and viscosity ``nu`` of one scalar mode family."""

    beta: float
    nu: float

    def __post_init__(self) -> None:
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    @property
    def root_threshold(self) -> float:
        """Radius ``2 beta / nu`` separating oscillatory from overdamped modes."""
        return 2.0 * self.beta / self.nu


@dataclass(frozen=True)
class KernelEval:
    """All scalar kernel values at one ``(t, r)`` point."""

    k0: float
    k1: float
    k00: float
    g0: float
    g1: float
    phi: float
    branch: str  # complex_roots | real_roots | degenerate


def _split(params: DampingParams, r):
    """Return (m, d2, degenerate_mask) with m the root midpoint and d2 = m^2 - beta^2 r^2."""
    r = np.asarray(r, dtype=float)
    m = -0.5 * params.nu * r * r
    d2 = m * m - (params.beta * r) ** 2
    half_gap = np.sqrt(np.abs(d2))
    scale = np.maximum(np.abs(m), params.beta * r)
    degen = 2.0 * half_gap <= _DEGENERATE_RTOL * scale + 1e-300
    return m, d2, degen


def char_roots(params: DampingParams, r: float) -> tuple[complex, complex, str]:
    """Characteristic roots of ``sigma^2 + nu r^2 sigma + beta^2 r^2 = 0``.

    The first root has the larger real part; on the oscillatory branch the
    positive-imaginary root is returned first.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    m, d2, degen = _split(params, r)
    m = float(m)
    d2 = float(d2)
    if bool(degen):
        return complex(m), complex(m), "degenerate"
    if d2 < 0.0:
        w = np.sqrt(-d2)
        return complex(m, w), complex(m, -w), "complex_roots"
    a = np.sqrt(d2)
    # The large-magnitude root is cancellation-free; the small one comes from
    # the exact product sigma_plus sigma_minus = beta^2 r^2.
    s_minus = m - a
    s_plus = (params.beta * r) ** 2 / s_minus
    return complex(s_plus), complex(s_minus), "real_roots"


def _envelopes(params: DampingParams, t, r):
    """Stable ``(EC, ES)`` with EC = e^{mt} cosh(dt) and ES = e^{mt} sinh(dt)/d.

    ``d`` is the half root gap (imaginary on the oscillatory branch, where the
    pair reduces to ``e^{mt} cos(w t)`` and ``e^{mt} sin(w t)/w``).  These two
    envelopes generate every kernel and time derivative in this module.
    """
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    t, r = np.broadcast_arrays(t, r)
    m, d2, degen = _split(params, r)

    ec = np.empty_like(m)
    es = np.empty_like(m)

    osc = (d2 < 0.0) & ~degen
    if np.any(osc):
        w = np.sqrt(-d2[osc])
        emt = np.exp(m[osc] * t[osc])
        ec[osc] = emt * np.cos(w * t[osc])
        es[osc] = emt * t[osc] * np.sinc(w * t[osc] / np.pi)

    over = (d2 > 0.0) & ~degen
    if np.any(over):
        a = np.sqrt(d2[over])
        to = t[over]
        ro = np.broadcast_to(r, m.shape)[over]
        # sigma_plus <= 0 (no overflow), computed from the exact root product
        # to dodge the m + a cancellation at strong overdamping.
        s_plus = (params.beta * ro) ** 2 / (m[over] - a)
        ep = np.exp(s_plus * to)
        e2 = np.exp(-2.0 * a * to)
        ec[over] = 0.5 * ep * (1.0 + e2)
        es[over] = 0.5 * ep * (-np.expm1(-2.0 * a * to)) / a

    if np.any(degen):
        emt = np.exp(m[degen] * t[degen])
        ec[degen] = emt
        es[degen] = t[degen] * emt

    return ec, es, m


def kernel_hat(t, r, params: DampingParams, which: str = "K0", dt_order: int = 0):
    """Evaluate ``d^l/dt^l`` of the mode kernel ``K0`` or ``K1`` at ``(t, r)``.

    Broadcasts over ``t`` and ``r``.  ``K0`` solves the mode ODE with data
    (1, 0), ``K1`` with data (0, 1); derivatives use the exact relations
    ``K0' = -beta^2 r^2 K1`` and the envelope algebra, so every branch is
    cancellation-free.
    """
    if dt_order not in (0, 1, 2):
        raise UnsupportedOrderError(f"time derivative order {dt_order} not supported (0..2)")
    ec, es, m = _envelopes(params, t, r)
    r = np.broadcast_to(np.asarray(r, dtype=float), ec.shape)
    b2r2 = (params.beta * r) ** 2
    if which == "K1":
        if dt_order == 0:
            out = es
        elif dt_order == 1:
            out = m * es + ec
        else:
            out = (2.0 * m * m - b2r2) * es + 2.0 * m * ec
    elif which == "K0":
        if dt_order == 0:
            out = ec - m * es
        elif dt_order == 1:
            out = -b2r2 * es
        else:
            out = -b2r2 * (m * es + ec)
    else:
        raise ValueError(f"unknown kernel {which!r}")
    return out if out.ndim else float(out)


def _phi(params: DampingParams, r):
    """Frequency-correction factor sqrt(1 - nu^2 r^2 / (4 beta^2)), oscillatory branch."""
    s = params.nu * np.asarray(r, dtype=float) / (2.0 * params.beta)
    return np.sqrt((1.0 - s) * (1.0 + s))


def diffusion_hat(t, r, params: DampingParams, which: str):
    """Diffusion-wave factors ``G0, G1``, the cosine kernel ``K00``, or ``PHI``.

    ``G0 = e^{-nu r^2 t/2} cos(beta r t)`` and
    ``G1 = e^{-nu r^2 t/2} sin(beta r t)/(beta r)`` (limit ``t`` at ``r = 0``).
    ``K00 = e^{-nu r^2 t/2} cos(beta r t phi)`` continues as the hyperbolic
    envelope past the overdamped threshold.  ``PHI`` is only defined strictly
    below the threshold ``2 beta/nu``.
    """
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    if which == "PHI":
        if np.any(r >= params.root_threshold):
            raise OutOfDomainError(
                f"phi requires r < 2*beta/nu = {params.root_threshold:g}"
            )
        out = _phi(params, r)
        return out if out.ndim else float(out)
    env = np.exp(-0.5 * params.nu * r * r * t)
    if which == "G0":
        out = env * np.cos(params.beta * r * t)
    elif which == "G1":
        out = env * t * np.sinc(params.beta * r * t / np.pi)
    elif which == "K00":
        ec, _, _ = _envelopes(params, t, r)
        out = ec
    else:
        raise ValueError(f"unknown diffusion kernel {which!r}")
    out = np.asarray(out)
    return out if out.ndim else float(out)


def wave_hat(t, r, params: DampingParams, which: str):
    """Undamped wave kernels ``W0 = cos(t beta r)``, ``W1 = sin(t beta r)/(beta r)``."""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    if which == "W0":
        out = np.cos(params.beta * r * t)
    elif which == "W1":
        out = t * np.sinc(params.beta * r * t / np.pi)
    else:
        raise ValueError(f"unknown wave kernel {which!r}")
    out = np.asarray(out)
    return out if out.ndim else float(out)


def kernel_eval(t: float, r: float, params: DampingParams) -> KernelEval:
    """Bundle every scalar kernel value at one ``(t, r)`` point."""
    _, _, branch = char_roots(params, r)
    phi = float(_phi(params, r)) if r < params.root_threshold else float("nan")
    return KernelEval(
        k0=float(kernel_hat(t, r, params, "K0")),
        k1=float(kernel_hat(t, r, params, "K1")),
        k00=float(diffusion_hat(t, r, params, "K00")),
        g0=float(diffusion_hat(t, r, params, "G0")),
        g1=float(diffusion_hat(t, r, params, "G1")),
        phi=phi,
        branch=branch,
    )


def mode_oracle(
    t: float,
    r: float,
    params: DampingParams,
    w0: float,
    w1: float,
    forcing=None,
    rtol: float = 1e-10,
) -> tuple[float, float]:
    """Integrate one mode ODE ``w'' + nu r^2 w' + beta^2 r^2 w = f`` to time ``t``.

    Independent verification oracle for the closed-form kernels: it uses an
    adaptive 4/5-order Runge-Kutta pair and never touches the kernel
    formulas.  ``forcing`` may be None, a callable ``f(t)``, or a pair of
    arrays ``(times, values)`` interpolated with a cubic spline.
    """
    if forcing is None:
        f: Callable[[float], float] = lambda tau: 0.0
    elif callable(forcing):
        f = forcing
    else:
        times, values = forcing
        spline = CubicSpline(np.asarray(times, float), np.asarray(values, float))
        f = lambda tau: float(spline(tau))

    nr2 = params.nu * r * r
    b2r2 = (params.beta * r) ** 2

    def rhs(tau, y):
        return [y[1], f(tau) - nr2 * y[1] - b2r2 * y[0]]

    if t == 0.0:
        return float(w0), float(w1)
    scale = max(abs(w0), abs(w1), 1e-30)
    sol = solve_ivp(
        rhs,
        (0.0, t),
        [float(w0), float(w1)],
        method="RK45",
        rtol=rtol,
        atol=1e-14 * scale,
        t_eval=[t],
    )
    if not sol.success:
        raise StiffnessError(f"mode integration failed at r={r}: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def forced_kernel_quadrature(
    t: float, r: float, params: DampingParams, forcing: Callable[[float], float]
) -> float:
    """High-resolution quadrature of ``int_0^t K1(t - tau, r) f(tau) dtau``.

    Oracle companion for Duhamel checks; independent of the stepping code.
    """
    val, _ = quad(
        lambda tau: kernel_hat(t - tau, r, params, "K1") * forcing(tau),
        0.0,
        t,
        epsabs=1e-14,
        epsrel=1e-12,
        limit=400,
    )
    return val


def lowfreq_residual(t, r, params: DampingParams) -> tuple[float, float]:
    """Residuals of the two oscillatory-branch representation identities.

    On the oscillatory branch the kernels admit trigonometric forms; the
    identities (exact, so both residuals vanish to round-off) are

        K0 = (nu r^2 / 2) K1 + K00,
        K1 = e^{-nu r^2 t/2} sin(t beta r phi) / (beta r phi).

    The coefficient ``nu r^2 / 2`` is forced by the initial conditions:
    ``K0(0) = 1, K0'(0) = 0`` pins the sine amplitude to half the damping
    rate.  Raises outside the oscillatory region, where ``phi`` is imaginary.
    """
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(r >= params.root_threshold):
        raise OutOfDomainError(
            f"trigonometric forms require r < 2*beta/nu = {params.root_threshold:g}"
        )
    k0 = kernel_hat(t, r, params, "K0")
    k1 = kernel_hat(t, r, params, "K1")
    k00 = diffusion_hat(t, r, params, "K00")
    res_24 = np.abs(k0 - 0.5 * params.nu * r * r * k1 - k00)

    phi = _phi(params, r)
    env = np.exp(-0.5 * params.nu * r * r * t)
    trig = env * t * np.sinc(params.beta * r * phi * t / np.pi)
    res_25 = np.abs(k1 - trig)
    if res_24.ndim:
        return res_24, res_25
    return float(res_24), float(res_25)
