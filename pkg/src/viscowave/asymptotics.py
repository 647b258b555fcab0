"""Moments, diffusion-wave profiles, and decay-rate measurement.

The long-time shape of the linear solution is governed by the diffusion-wave
factors evaluated at the zero-frequency moments of the data:

    m0[k] = int grad f0_k dx   (3x3),    m1 = int f1 dx,
    M     = int_0^inf int F(u) dx dt     (forcing moment),

with the displacement profile built from ``G1``-factors on ``m1 + M`` and a
``1/|xi|``-regularized term on ``m0``; the velocity and acceleration
profiles swap in ``G0``-factors and ``beta^2 |xi|^2``-weighted combinations.
The measurement side fits log-log slopes of norm series computed on the
continuum radial path (no periodic images), and compares solution decay
against profile-error decay.

Conventions: profiles are stated in the same unitary transform used by the
grid layer, so a profile coefficient approximates the solution coefficient
as ``xi -> 0``; the inverse-gradient factor on the ``m0`` term is realized
as ``-i (xi . m0_k) / |xi|^2``, the zero-frequency representation of the
``f0`` coefficient itself, and is only meaningful under at least one
spatial derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats
from scipy.integrate import simpson

from .elastic import LameParams
from .exceptions import (
    UnsupportedCombinationError,
    UnsupportedNormError,
    WindowError,
)
from .grid import VectorField, sobolev_seminorm, transform
from .kernels import diffusion_hat, kernel_hat
from .radial import (
    AngularTerm,
    axisym_evaluate,
    axisym_lp_norm,
    axisym_magnitude,
    gauss_theta_rule,
    radial_l2_norm,
)
from .solver import Trajectory

__all__ = [
    "Moments",
    "DecayReport",
    "NormSpec",
    "LinearSource",
    "moments",
    "nonlinear_moment",
    "profile_hat",
    "decay_slope",
    "linear_norm",
    "linear_norm_series",
    "profile_error_series",
    "expected_solution_slope",
    "SUPPORTED_NORMS",
]

_TWO_PI_32 = (2.0 * np.pi) ** 1.5


@dataclass(frozen=True)
class Moments:
    """Zero-frequency data moments driving the asymptotic profiles."""

    m0: np.ndarray  # (3, 3); row k holds int grad f0_k
    m1: np.ndarray  # (3,)
    m_nl: np.ndarray  # (3,); space-time integral of the forcing
    m_tail_bound: float = 0.0
    warnings: tuple[str, ...] = ()

    @staticmethod
    def of(m0=None, m1=None, m_nl=None, tail: float = 0.0, warnings=()) -> "Moments":
        z3 = np.zeros(3)
        return Moments(
            m0=np.zeros((3, 3)) if m0 is None else np.asarray(m0, float),
            m1=z3 if m1 is None else np.asarray(m1, float),
            m_nl=z3 if m_nl is None else np.asarray(m_nl, float),
            m_tail_bound=tail,
            warnings=tuple(warnings),
        )


def moments(f0: VectorField, f1: VectorField, support_rtol: float = 1e-8) -> Moments:
    """Quadrature moments ``m0, m1`` of physical-space data.

    ``m0`` integrates the spectrally differentiated field, which vanishes to
    round-off for any lattice function (the divergence-theorem statement is
    exact in frequency space).  Data with more than ``support_rtol`` of its
    mass on the outermost lattice shell picks up a ``support`` warning.
    """
    h3 = f0.grid.spacing**3
    m1 = np.array([float(np.sum(f1.data[k])) * h3 for k in range(3)])
    f0h = transform(f0)
    m0 = np.zeros((3, 3))
    for a in range(3):
        grad_a = transform(
            VectorField(f0.grid, 1j * f0.grid.xi_component_safe(a) * f0h.data, "spectral")
        )
        m0[:, a] = np.sum(grad_a.data, axis=(1, 2, 3)) * h3
    warns = []
    for name, fld in (("f0", f0), ("f1", f1)):
        if boundary_mass_fraction(fld) > support_rtol:
            warns.append(f"support:{name}")
    return Moments.of(m0=m0, m1=m1, warnings=warns)


def boundary_mass_fraction(fld: VectorField) -> float:
    """Fraction of total |field| mass on the outermost lattice shell."""
    a = np.abs(fld.data)
    total = float(a.sum())
    if total == 0.0:
        return 0.0
    inner = float(a[:, 1:-1, 1:-1, 1:-1].sum())
    return (total - inner) / total


def nonlinear_moment(traj: Trajectory, t_trunc: float) -> tuple[np.ndarray, float]:
    """Space-time integral of the cached forcing up to ``t_trunc``.

    The spatial integral of each snapshot is ``(2 pi)^{3/2}`` times its zero
    coefficient; the time integral is composite Simpson on the stored times.
    The tail bound extrapolates the observed ``(1+t)^{-2}`` decay of the
    spatial integral: ``C_fit (1 + t_trunc)^{-1}`` with ``C_fit`` regressed
    over the last decade.
    """
    times = np.asarray(traj.times, float)
    if times[-1] < t_trunc - 1e-12:
        raise WindowError(
            f"trajectory ends at t={times[-1]:g}, before t_trunc={t_trunc:g}"
        )
    keep = times <= t_trunc + 1e-12
    ts = times[keep]
    vals = []
    for flag, cache in zip(keep, traj.nonlinearity_cache):
        if not flag:
            continue
        if cache is None:
            raise ValueError("trajectory carries no cached forcing snapshots")
        vals.append(_TWO_PI_32 * cache.data[:, 0, 0, 0].real)
    vals = np.asarray(vals)  # (n_t, 3)
    m_nl = np.array([float(simpson(vals[:, k], x=ts)) for k in range(3)])

    mags = np.linalg.norm(vals, axis=1)
    last = ts >= max(ts[-1] / 10.0, ts[0])
    c_fit = float(np.max(mags[last] * (1.0 + ts[last]) ** 2)) if np.any(last) else 0.0
    tail = c_fit / (1.0 + t_trunc)
    return m_nl, tail


# ---------------------------------------------------------------------------
# profiles


def _gg(t: float, r, lame: LameParams, j: int, branch: str):
    dp = lame.long_params if branch == "L" else lame.trans_params
    return diffusion_hat(t, r, dp, f"G{j}")


def profile_hat(
    t: float,
    xi,
    lame: LameParams,
    mom: Moments,
    which: str,
    derivative: tuple[int, int, int] = (0, 0, 0),
) -> np.ndarray:
    """Spectral coefficient of the requested derivative of a profile at one xi.

    ``which`` is ``"G"`` (displacement), ``"H"`` (velocity), or ``"Gtilde"``
    (acceleration).  The ``m0`` term needs total derivative order >= 1; with
    ``m0 == 0`` any order (including none) is allowed.
    """
    xi = np.asarray(xi, dtype=float)
    r = float(np.linalg.norm(xi))
    order = int(sum(derivative))
    has_m0 = bool(np.any(mom.m0 != 0.0))
    if has_m0 and order < 1:
        raise UnsupportedCombinationError(
            "the inverse-gradient moment term requires at least one derivative"
        )

    c = (2.0 * np.pi) ** (-1.5)
    mvec = c * (mom.m1 + mom.m_nl)
    if r == 0.0:
        q = np.zeros(3, dtype=complex)
        p = np.zeros((3, 3))
    else:
        q = c * (-1j) * (mom.m0 @ xi) / r**2  # q_k = -i (xi . m0_k) / |xi|^2
        p = np.outer(xi, xi) / r**2
    eye = np.eye(3)

    g0l, g0t = _gg(t, r, lame, 0, "L"), _gg(t, r, lame, 0, "T")
    g1l, g1t = _gg(t, r, lame, 1, "L"), _gg(t, r, lame, 1, "T")
    b2l, b2t = lame.lam + 2.0 * lame.mu, lame.mu

    if which == "G":
        mat_m0 = (g0l - g0t) * p + g0t * eye
        mat_m1 = (g1l - g1t) * p + g1t * eye
    elif which == "H":
        mat_m0 = -(r**2) * ((b2l * g1l - b2t * g1t) * p + b2t * g1t * eye)
        mat_m1 = (g0l - g0t) * p + g0t * eye
    elif which == "Gtilde":
        mat_m0 = -(r**2) * ((b2l * g0l - b2t * g0t) * p + b2t * g0t * eye)
        mat_m1 = -(r**2) * ((b2l * g1l - b2t * g1t) * p + b2t * g1t * eye)
    else:
        raise ValueError(f"unknown profile {which!r}")

    out = mat_m0 @ q + mat_m1 @ mvec.astype(complex)
    for axis, o in enumerate(derivative):
        if o:
            out = out * (1j * xi[axis]) ** o
    if r == 0.0 and has_m0 and order >= 1:
        out = np.zeros(3, dtype=complex)
    return out


# ---------------------------------------------------------------------------
# decay-slope fitting


@dataclass(frozen=True)
class NormSpec:
    """Which norm to measure: derivative order, time order, exponent."""

    alpha: int
    ell: int
    p: float

    def label(self) -> str:
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        return f"alpha={self.alpha},ell={self.ell},p={p}"


@dataclass(frozen=True)
class DecayReport:
    times: np.ndarray
    values: np.ndarray
    slope: float
    ci95: float
    expected: float | None
    norm_id: str
    power_law_ok: bool
    drift: float = 0.0


def decay_slope(
    times, values, expected: float | None = None, norm_id: str = ""
) -> DecayReport:
    """Least-squares slope of log(values) against log(times).

    Requires at least 8 points spanning 1.5 decades.  ``power_law_ok`` is
    false when decade-windowed slopes drift by more than 0.02, which flags
    logarithmic corrections masquerading as power laws.
    """
    times = np.asarray(times, float)
    values = np.asarray(values, float)
    if np.any(values <= 0.0) or np.any(times <= 0.0):
        raise ValueError("decay_slope requires positive times and values")
    if times.size < 8 or np.log10(times[-1] / times[0]) < 1.5:
        raise WindowError("need >= 8 points spanning >= 1.5 decades")
    lt, lv = np.log(times), np.log(values)
    fit = stats.linregress(lt, lv)
    ci = float(stats.t.ppf(0.975, times.size - 2) * fit.stderr)

    # Decade-windowed drift check.
    slopes = []
    lo = times[0]
    while lo * 10.0 <= times[-1] * (1.0 + 1e-9):
        sel = (times >= lo) & (times <= lo * 10.0)
        if np.count_nonzero(sel) >= 3:
            slopes.append(stats.linregress(lt[sel], lv[sel]).slope)
        lo *= math.sqrt(10.0)
    drift = float(np.max(slopes) - np.min(slopes)) if len(slopes) >= 2 else 0.0
    return DecayReport(
        times=times,
        values=values,
        slope=float(fit.slope),
        ci95=ci,
        expected=expected,
        norm_id=norm_id,
        power_law_ok=drift <= 0.02,
        drift=drift,
    )


def expected_solution_slope(spec: NormSpec) -> float:
    """Sharp decay exponent of ``||grad^a dt^l u||_p`` for data with mass.

    Derived from the measured family: ``-5/2 (1 - 1/p) + 1 - (a + l)/2``.
    """
    inv_p = 0.0 if math.isinf(spec.p) else 1.0 / spec.p
    return -2.5 * (1.0 - inv_p) + 1.0 - 0.5 * (spec.alpha + spec.ell)


# ---------------------------------------------------------------------------
# linear measurement path (radial data, continuum norms)


@dataclass(frozen=True)
class LinearSource:
    """Velocity data ``f1(x) = g(|x|) e`` with continuum radial transform ``ghat``.

    ``amp`` is ``|e|``; the measured norms are rotation invariant so the
    direction itself is irrelevant.  ``ghat0`` must equal ``ghat(0)``.
    """

    ghat: Callable
    amp: float = 1.0

    @staticmethod
    def gaussian(sigma: float = 0.5, mass: float = 1.0, amp: float = 1.0) -> "LinearSource":
        c = mass * (2.0 * np.pi) ** (-1.5)
        return LinearSource(ghat=lambda r: c * np.exp(-0.5 * (sigma * r) ** 2), amp=amp)

    def ghat0(self) -> float:
        return float(np.real(self.ghat(np.zeros(1))[0]))


# Supported (profile, ell) -> {p: allowed alphas}.
SUPPORTED_NORMS: dict[tuple[str, int], dict[float, tuple[int, ...]]] = {
    ("G", 0): {2.0: (1, 2, 3), math.inf: (0, 1)},
    ("H", 1): {2.0: (0, 1, 2), 4.0: (2,), math.inf: (0, 1)},
    ("Gtilde", 2): {2.0: (0,), 4.0: (0,)},
}


def _solution_mults(lame: LameParams, src: LinearSource, ell: int):
    """(long, trans) radial coefficient functions of d_t^ell u at time t."""

    def ml(t, r):
        return kernel_hat(t, r, lame.long_params, "K1", ell) * src.ghat(r)

    def mt(t, r):
        return kernel_hat(t, r, lame.trans_params, "K1", ell) * src.ghat(r)

    return ml, mt


def _profile_mults(lame: LameParams, src: LinearSource, which: str):
    """(long, trans) radial coefficient functions of the matching profile."""
    g0 = src.ghat0()
    b2l, b2t = lame.lam + 2.0 * lame.mu, lame.mu

    if which == "G":
        return (
            lambda t, r: diffusion_hat(t, r, lame.long_params, "G1") * g0,
            lambda t, r: diffusion_hat(t, r, lame.trans_params, "G1") * g0,
        )
    if which == "H":
        return (
            lambda t, r: diffusion_hat(t, r, lame.long_params, "G0") * g0,
            lambda t, r: diffusion_hat(t, r, lame.trans_params, "G0") * g0,
        )
    if which == "Gtilde":
        return (
            lambda t, r: -b2l * r * r * diffusion_hat(t, r, lame.long_params, "G1") * g0,
            lambda t, r: -b2t * r * r * diffusion_hat(t, r, lame.trans_params, "G1") * g0,
        )
    raise ValueError(f"unknown profile {which!r}")


def _l2_norm_from_mults(ml, mt, t: float, alpha: int, amp: float) -> float:
    one = lambda r: np.ones_like(r)
    nl = radial_l2_norm(ml, one, alpha, (1.0, 0.0), t=t)
    nt = radial_l2_norm(mt, one, alpha, (0.0, 1.0), t=t)
    return amp * math.hypot(nl, nt)


def _support_radius(lame: LameParams, src: LinearSource, t: float) -> float:
    """Radius beyond which the damped coefficients are negligible."""
    probe = np.logspace(-4, 2.5, 2048)
    m = -0.5 * lame.nu * probe**2
    d2 = m * m - (max(lame.beta_long, lame.beta_trans) * probe) ** 2
    sigma_re = np.where(d2 > 0, m + np.sqrt(np.maximum(d2, 0.0)), m)
    env = np.abs(src.ghat(probe)) * np.exp(np.maximum(sigma_re * t, -745.0)) * (1.0 + t)
    env = np.maximum(env, np.abs(src.ghat(probe)) * 1e-300)
    peak = env.max()
    keep = np.nonzero(env > peak * 1e-18)[0]
    return float(probe[keep[-1]] * 1.25)


_PTS_PER_CYCLE = 16.0


def _xspace_grids(lame: LameParams, src: LinearSource, t: float):
    r_max = _support_radius(lame, src, t)
    width = max(math.sqrt(lame.nu * t), 1e-3)
    s_max = lame.beta_long * t + 12.0 * width + 12.0 * math.pi / r_max
    ds = math.pi / (8.0 * r_max)
    n_s = int(s_max / ds) + 2
    s = np.linspace(0.0, s_max, n_s)
    n_r = int(r_max * s_max * _PTS_PER_CYCLE / (2.0 * math.pi)) + 1
    n_r = max(n_r, 801)
    if n_r % 2 == 0:
        n_r += 1
    r = np.linspace(0.0, r_max, n_r)
    return r, s


def _derivative_slots(alpha: int):
    """Sorted derivative multisets with multinomial weights, crossed with components."""
    if alpha == 0:
        dir_groups = [((), 1.0)]
    elif alpha == 1:
        dir_groups = [((d,), 1.0) for d in range(3)]
    elif alpha == 2:
        dir_groups = [
            ((c, d), 1.0 if c == d else 2.0) for c in range(3) for d in range(c, 3)
        ]
    else:
        raise UnsupportedNormError("sup/p-norm path supports derivative orders 0..2")
    slots = []
    for dirs, w in dir_groups:
        for j in range(3):
            slots.append((dirs, j, w))
    return slots


def _xspace_norms(
    mult_pairs, t: float, spec: NormSpec, amp: float, lame: LameParams, src: LinearSource
) -> list[float]:
    """Sup- or L^p-norms of several fields sharing one evaluation grid.

    ``mult_pairs`` is a list of (long, trans) radial coefficient callables;
    fusing them lets the moment tables be computed once per time point.
    """
    r, s = _xspace_grids(lame, src, t)
    ra = r**spec.alpha
    slots = _derivative_slots(spec.alpha)
    ii = 1j**spec.alpha

    psi_bank = []
    terms = []
    for ip, (ml, mt) in enumerate(mult_pairs):
        vl = np.asarray(ml(t, r), dtype=np.complex128)
        vt = np.asarray(mt(t, r), dtype=np.complex128)
        psi_bank.extend([ra * (vl - vt), ra * vt])
        for islot, (dirs, j, _w) in enumerate(slots):
            def ang_par(wx, wy, wz, f, dirs=dirs, j=j):
                e = f.gz
                we = wx * e[0] + wy * e[1] + wz * e[2]
                comp = (wx, wy, wz)
                val = ii * we * comp[j]
                for d in dirs:
                    val = val * comp[d]
                return val

            def ang_perp(wx, wy, wz, f, dirs=dirs, j=j):
                e = f.gz
                val = ii * e[j] * np.ones_like(wx)
                for d in dirs:
                    val = val * (wx, wy, wz)[d]
                return val

            slot = ip * len(slots) + islot
            terms.append(AngularTerm(slot=slot, psi=2 * ip, angular=ang_par))
            terms.append(AngularTerm(slot=slot, psi=2 * ip + 1, angular=ang_perp))

    theta_gauss, theta_w = gauss_theta_rule(24)
    theta_extra = np.linspace(0.0, np.pi, 13)
    thetas = np.concatenate([theta_gauss, theta_extra])
    fields = axisym_evaluate(
        r, psi_bank, terms, len(mult_pairs) * len(slots), s, thetas, nmax=spec.alpha + 2
    )

    weights = np.array([w for (_, _, w) in slots])
    out = []
    for ip in range(len(mult_pairs)):
        block = fields[ip * len(slots) : (ip + 1) * len(slots)]
        if math.isinf(spec.p):
            mag = axisym_magnitude(block, weights)
            out.append(amp * axisym_lp_norm(mag, s, theta_w, spec.p))
        else:
            mag = axisym_magnitude(block[:, :, : theta_gauss.size], weights)
            out.append(amp * axisym_lp_norm(mag, s, theta_w, spec.p))
    return out


def linear_norm(
    lame: LameParams, src: LinearSource, spec: NormSpec, t: float
) -> float:
    """One norm value ``||grad^a dt^l u(t)||_p`` of the homogeneous solution."""
    ml, mt = _solution_mults(lame, src, spec.ell)
    if spec.p == 2.0:
        return _l2_norm_from_mults(ml, mt, t, spec.alpha, src.amp)
    return _xspace_norms([(ml, mt)], t, spec, src.amp, lame, src)[0]


def linear_norm_series(
    lame: LameParams, src: LinearSource, spec: NormSpec, times
) -> DecayReport:
    vals = np.array([linear_norm(lame, src, spec, float(t)) for t in times])
    return decay_slope(
        times, vals, expected=expected_solution_slope(spec), norm_id=spec.label()
    )


def _validate_norm(which: str, spec: NormSpec) -> None:
    table = SUPPORTED_NORMS.get((which, spec.ell))
    if table is None or spec.p not in table or spec.alpha not in table[spec.p]:
        raise UnsupportedNormError(
            f"norm {spec.label()} is outside the measured set for profile {which}"
        )


def profile_error_series(
    source,
    which: str,
    spec: NormSpec,
    times,
    lame: LameParams | None = None,
) -> tuple[DecayReport, DecayReport]:
    """(solution decay, profile-error decay) for one norm and profile.

    ``source`` is a :class:`LinearSource` (continuum path) or a
    :class:`Trajectory` (grid path, capped at the box-validity time).
    """
    _validate_norm(which, spec)
    if isinstance(source, Trajectory):
        return _trajectory_profile_series(source, which, spec, times, lame)
    src: LinearSource = source
    ml, mt = _solution_mults(lame, src, spec.ell)
    pl, pt = _profile_mults(lame, src, which)
    el = lambda t, r: ml(t, r) - pl(t, r)
    et = lambda t, r: mt(t, r) - pt(t, r)

    sol_vals, err_vals = [], []
    for t in times:
        t = float(t)
        if spec.p == 2.0:
            sol_vals.append(_l2_norm_from_mults(ml, mt, t, spec.alpha, src.amp))
            err_vals.append(_l2_norm_from_mults(el, et, t, spec.alpha, src.amp))
        else:
            sv, ev = _xspace_norms([(ml, mt), (el, et)], t, spec, src.amp, lame, src)
            sol_vals.append(sv)
            err_vals.append(ev)
    exp_sol = expected_solution_slope(spec)
    sol = decay_slope(times, np.asarray(sol_vals), expected=exp_sol, norm_id=spec.label())
    err = decay_slope(
        times, np.asarray(err_vals), expected=exp_sol - 0.5, norm_id=spec.label() + ",err"
    )
    return sol, err


def _profile_field(
    grid, t: float, lame: LameParams, mom: Moments, which: str
) -> VectorField:
    """Profile coefficients sampled on a grid's frequency lattice (m0 = 0 path)."""
    if np.any(mom.m0 != 0.0):
        raise UnsupportedCombinationError("grid profiles support mean-free f0 only")
    c = (2.0 * np.pi) ** (-1.5)
    mvec = c * (mom.m1 + mom.m_nl)
    vals, inv = grid.unique_radii()
    b2l, b2t = lame.lam + 2.0 * lame.mu, lame.mu
    if which == "G":
        al = diffusion_hat(t, vals, lame.long_params, "G1")
        at = diffusion_hat(t, vals, lame.trans_params, "G1")
    elif which == "H":
        al = diffusion_hat(t, vals, lame.long_params, "G0")
        at = diffusion_hat(t, vals, lame.trans_params, "G0")
    else:
        al = -b2l * vals * vals * diffusion_hat(t, vals, lame.long_params, "G1")
        at = -b2t * vals * vals * diffusion_hat(t, vals, lame.trans_params, "G1")
    gl, gt = al[inv], at[inv]
    xi = [grid.xi_component_safe(a) for a in range(3)]
    r2 = xi[0] ** 2 + xi[1] ** 2 + xi[2] ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        inv_r2 = np.where(r2 > 0, 1.0 / np.where(r2 > 0, r2, 1.0), 0.0)
    dot = sum(xi[a] * mvec[a] for a in range(3)) * inv_r2
    data = np.stack([gt * mvec[a] + (gl - gt) * dot * xi[a] for a in range(3)])
    data = data.astype(np.complex128)
    # The zero mode carries the pure r -> 0 limit (projector-free).
    lim = {"G": t, "H": 1.0, "Gtilde": 0.0}[which]
    for a in range(3):
        data[a, 0, 0, 0] = lim * mvec[a]
    return VectorField(grid, data, "spectral")


def _trajectory_profile_series(
    traj: Trajectory, which: str, spec: NormSpec, times, lame: LameParams
) -> tuple[DecayReport, DecayReport]:
    """Grid-path comparison, valid only before wave fronts wrap the box."""
    grid = traj.grid
    t_cap = grid.box_length / (4.0 * lame.beta_long)
    times = np.asarray([t for t in times if t <= t_cap], float)
    if times.size < 8:
        raise WindowError(
            f"box-validity cap t <= {t_cap:g} leaves fewer than 8 sample times"
        )
    m_nl, tail = nonlinear_moment(traj, float(traj.times[-1]))
    # m1 from the stored initial velocity coefficients.
    v0 = traj.states[0].velocity_hat
    m1 = _TWO_PI_32 * v0.data[:, 0, 0, 0].real
    mom = Moments.of(m1=m1, m_nl=m_nl, tail=tail)

    if spec.p != 2.0:
        raise UnsupportedNormError("trajectory path measures p = 2 only")
    if spec.ell not in (0, 1):
        raise UnsupportedNormError("trajectory path measures ell <= 1 only")
    ts = np.asarray(traj.times)
    # Snap requested times to stored ones; the fit must use the snapped grid.
    idx = sorted({int(np.argmin(np.abs(ts - t))) for t in times})
    used, sol_vals, err_vals = [], [], []
    for i in idx:
        st = traj.states[i]
        fld = st.displacement_hat if spec.ell == 0 else st.velocity_hat
        prof = _profile_field(grid, float(ts[i]), lame, mom, which)
        diff = VectorField(grid, fld.data - prof.data, "spectral")
        used.append(float(ts[i]))
        sol_vals.append(sobolev_seminorm(fld, spec.alpha))
        err_vals.append(sobolev_seminorm(diff, spec.alpha))
    sol = decay_slope(used, np.asarray(sol_vals), norm_id=spec.label())
    err = decay_slope(used, np.asarray(err_vals), norm_id=spec.label() + ",err")
    return sol, err
