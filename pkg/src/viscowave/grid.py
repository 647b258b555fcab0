"""Periodic 3-D grid, FFT layer, Fourier multipliers, cutoffs, and norms.

Conventions fixed here and relied on everywhere else:

* lattice: n points per axis on ``[0, L)``, wave vectors ``xi = (2 pi / L) k``
  with integer ``k in {-n/2, ..., n/2 - 1}`` per axis (fftfreq order);
* transform normalization: ``fhat = (2 pi)^{-3/2} h^3 FFT[f]`` with
  ``h = L/n``, so the discrete coefficients approximate the continuum
  transform and discrete Plancherel holds exactly:
  ``sum |f|^2 h^3 = sum |fhat|^2 (2 pi / L)^3``;
* vector fields are stored as arrays of shape ``(3, n, n, n)`` with axis
  order (component, x, y, z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import fft as sfft

from .exceptions import (
    InvalidExponentError,
    InvalidGridError,
    ShapeMismatchError,
    UnsupportedSymbolError,
)
from .kernels import DampingParams, diffusion_hat, kernel_hat, wave_hat

__all__ = [
    "Grid3",
    "VectorField",
    "CutoffSpec",
    "make_grid",
    "make_field",
    "zero_field",
    "field_from_function",
    "transform",
    "apply_symbol",
    "lp_norm",
    "coefficient_l2_norm",
    "sobolev_seminorm",
    "hermitian_defect",
    "dealias_mask",
]

_WORKERS = -1  # scipy.fft: use all cores


@dataclass(frozen=True)
class Grid3:
    """Periodic cubic lattice and its frequency lattice.

    ``xi1`` is the 1-D frequency array in FFT order; ``radius`` the full
    ``|xi|`` array, precomputed because every multiplier needs it.
    """

    n: int
    box_length: float
    spacing: float = field(init=False, compare=False)
    xi1: np.ndarray = field(init=False, repr=False, compare=False)
    radius: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 8 or self.n % 2 != 0:
            raise InvalidGridError(f"n must be even and >= 8, got {self.n}")
        if not self.box_length > 0:
            raise InvalidGridError(f"box_length must be positive, got {self.box_length}")
        spacing = self.box_length / self.n
        xi1 = 2.0 * np.pi * np.fft.fftfreq(self.n, d=spacing)
        rad = np.sqrt(
            xi1[:, None, None] ** 2 + xi1[None, :, None] ** 2 + xi1[None, None, :] ** 2
        )
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "xi1", xi1)
        object.__setattr__(self, "radius", rad)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n)

    def xi_component(self, axis: int) -> np.ndarray:
        """Wave-vector component as a broadcastable (n,1,1)/(1,n,1)/(1,1,n) array."""
        shape = [1, 1, 1]
        shape[axis] = self.n
        return self.xi1.reshape(shape)

    def xi_component_safe(self, axis: int) -> np.ndarray:
        """Wave-vector component with the unpaired Nyquist entry zeroed.

        Odd symbols (derivatives, Riesz factors, projector contractions) must
        annihilate the self-conjugate ``k = -n/2`` plane or they break the
        lattice Hermitian symmetry of real fields.
        """
        shape = [1, 1, 1]
        shape[axis] = self.n
        safe = self.xi1.copy()
        safe[self.n // 2] = 0.0
        return safe.reshape(shape)

    def x_component(self, axis: int) -> np.ndarray:
        """Physical coordinate along one axis, broadcastable like xi_component."""
        shape = [1, 1, 1]
        shape[axis] = self.n
        return (self.spacing * np.arange(self.n)).reshape(shape)

    def unique_radii(self) -> tuple[np.ndarray, np.ndarray]:
        """(sorted unique |xi| values, inverse index array of shape (n,n,n)).

        Lets radial kernels be evaluated on a few thousand scalars instead of
        n^3 lattice points; cached after the first call.
        """
        cached = self.__dict__.get("_unique_radii")
        if cached is None:
            vals, inv = np.unique(self.radius.round(12), return_inverse=True)
            cached = (vals, inv.reshape(self.shape).astype(np.int32))
            object.__setattr__(self, "_unique_radii", cached)
        return cached


def make_grid(n: int, box_length: float) -> Grid3:
    """Validated grid constructor."""
    return Grid3(n=int(n), box_length=float(box_length))


@dataclass(frozen=True, eq=False)
class VectorField:
    """Three-component field over a grid, in physical or spectral space.

    Physical data is real float64, spectral data complex128 with Hermitian
    symmetry.  Treated as immutable; operations return new fields.  ``meta``
    accumulates warning flags (e.g. ``"mean-not-zero"``).
    """

    grid: Grid3
    data: np.ndarray
    space: str  # "physical" | "spectral"
    meta: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.space not in ("physical", "spectral"):
            raise ValueError(f"space must be 'physical' or 'spectral', got {self.space!r}")
        if self.data.shape != (3, *self.grid.shape):
            raise ShapeMismatchError(
                f"field shape {self.data.shape} does not match grid {self.grid.shape}"
            )

    def with_data(self, data: np.ndarray, meta: tuple[str, ...] | None = None) -> "VectorField":
        return replace(self, data=data, meta=self.meta if meta is None else meta)


def make_field(grid: Grid3, data: np.ndarray, space: str = "physical") -> VectorField:
    dtype = np.complex128 if space == "spectral" else np.float64
    return VectorField(grid=grid, data=np.asarray(data, dtype=dtype), space=space)


def zero_field(grid: Grid3, space: str = "physical") -> VectorField:
    dtype = np.complex128 if space == "spectral" else np.float64
    return VectorField(grid=grid, data=np.zeros((3, *grid.shape), dtype=dtype), space=space)


def field_from_function(grid: Grid3, fn) -> VectorField:
    """Sample ``fn(x, y, z) -> (3, ...) array`` on the lattice."""
    x = grid.x_component(0)
    y = grid.x_component(1)
    z = grid.x_component(2)
    data = np.asarray(fn(x, y, z), dtype=np.float64)
    data = np.broadcast_to(data, (3, *grid.shape)).copy()
    return VectorField(grid=grid, data=data, space="physical")


def _forward_scale(grid: Grid3) -> float:
    return grid.spacing**3 * (2.0 * np.pi) ** (-1.5)


def transform(fld: VectorField) -> VectorField:
    """Toggle between physical and spectral space (unitary up to round-off)."""
    scale = _forward_scale(fld.grid)
    if fld.space == "physical":
        data = sfft.fftn(fld.data, axes=(1, 2, 3), workers=_WORKERS) * scale
        return VectorField(fld.grid, data, "spectral", fld.meta)
    data = sfft.ifftn(fld.data, axes=(1, 2, 3), workers=_WORKERS) / scale
    return VectorField(fld.grid, np.ascontiguousarray(data.real), "physical", fld.meta)


def hermitian_defect(fld: VectorField) -> float:
    """Relative deviation of spectral coefficients from gh(-xi) = conj(gh(xi))."""
    if fld.space != "spectral":
        raise ValueError("hermitian_defect expects a spectral field")
    flipped = fld.data[:, :, :, :]
    for ax in (1, 2, 3):
        flipped = np.roll(np.flip(flipped, axis=ax), 1, axis=ax)
    num = np.max(np.abs(fld.data - np.conj(flipped)))
    den = max(np.max(np.abs(fld.data)), 1e-300)
    return float(num / den)


# ---------------------------------------------------------------------------
# cutoffs


def _smoothstep(s: np.ndarray) -> np.ndarray:
    """C^inf step: 1 for s <= 0, 0 for s >= 1, exp(-1/s)-based in between."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    out[s <= 0.0] = 1.0
    out[s >= 1.0] = 0.0
    mid = (s > 0.0) & (s < 1.0)
    if np.any(mid):
        sm = s[mid]
        g = np.exp(-1.0 / sm)
        gc = np.exp(-1.0 / (1.0 - sm))
        out[mid] = gc / (g + gc)
    return out


@dataclass(frozen=True)
class CutoffSpec:
    """Smooth low/mid/high frequency partition of unity.

    ``chi_l = 1`` for ``r <= c0/2`` and 0 for ``r >= c0``; ``chi_h = 0`` for
    ``r <= c1`` and 1 for ``r >= 2 c1``; ``chi_m`` is the remainder.  Needs
    ``0 < c0 < c1`` so the low and high supports cannot overlap.
    """

    c0: float
    c1: float
    transition: str = "exp-smoothstep"

    def __post_init__(self) -> None:
        if not (0.0 < self.c0 < self.c1):
            raise ValueError(f"need 0 < c0 < c1, got c0={self.c0}, c1={self.c1}")

    def chi_l(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return _smoothstep((r - 0.5 * self.c0) / (0.5 * self.c0))

    def chi_h(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return _smoothstep((2.0 * self.c1 - r) / self.c1)

    def chi_m(self, r) -> np.ndarray:
        return 1.0 - self.chi_l(r) - self.chi_h(r)

    def chi(self, part: str, r) -> np.ndarray:
        return {"L": self.chi_l, "M": self.chi_m, "H": self.chi_h}[part](r)


# ---------------------------------------------------------------------------
# Fourier multipliers


def _multiplier(grid: Grid3, symbol_id: str, params: dict) -> np.ndarray:
    r = grid.radius
    if symbol_id == "one":
        return np.ones_like(r)
    if symbol_id == "derivative":
        alpha = params["alpha"]
        if len(alpha) != 3:
            raise ValueError("derivative multi-index must have 3 entries")
        mult = np.ones(grid.shape, dtype=np.complex128)
        for axis, order in enumerate(alpha):
            if order:
                mult = mult * (1j * grid.xi_component_safe(axis)) ** order
        return mult
    if symbol_id == "riesz":
        axis = params["axis"]
        rs2 = sum(grid.xi_component_safe(a) ** 2 for a in range(3))
        with np.errstate(invalid="ignore", divide="ignore"):
            mult = np.where(
                rs2 > 0,
                grid.xi_component_safe(axis) / np.sqrt(np.where(rs2 > 0, rs2, 1.0)),
                0.0,
            )
        return mult
    if symbol_id == "inv_grad":
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0), 0.0)
    if symbol_id == "cutoff":
        spec: CutoffSpec = params["spec"]
        return spec.chi(params["part"], r)
    if symbol_id == "heat":
        return np.exp(-0.5 * params["nu"] * params["t"] * r * r)
    if symbol_id in ("k0", "k1"):
        dp = DampingParams(params["beta"], params["nu"])
        vals, inv = grid.unique_radii()
        table = kernel_hat(params["t"], vals, dp, symbol_id.upper(), params.get("dt_order", 0))
        return table[inv]
    if symbol_id in ("g0", "g1", "k00"):
        dp = DampingParams(params["beta"], params["nu"])
        vals, inv = grid.unique_radii()
        table = diffusion_hat(params["t"], vals, dp, symbol_id.upper())
        return table[inv]
    if symbol_id in ("w0", "w1"):
        dp = DampingParams(params["beta"], params["nu"])
        vals, inv = grid.unique_radii()
        table = wave_hat(params["t"], vals, dp, symbol_id.upper())
        return table[inv]
    raise UnsupportedSymbolError(f"unknown symbol {symbol_id!r}")


def apply_symbol(fld: VectorField, symbol_id: str, **params) -> VectorField:
    """Multiply spectral coefficients by a named radial/tensorial symbol.

    Symbols with a 0/0 form at ``xi = 0`` (``riesz``, ``inv_grad``) take the
    value 0 there; ``inv_grad`` flags a nonzero-mean input in the result
    metadata instead of raising.
    """
    if fld.space != "spectral":
        raise ValueError("apply_symbol expects a spectral field")
    mult = _multiplier(fld.grid, symbol_id, params)
    meta = fld.meta
    if symbol_id == "inv_grad":
        mean_coeff = np.max(np.abs(fld.data[:, 0, 0, 0]))
        scale = max(np.max(np.abs(fld.data)), 1e-300)
        if mean_coeff > 1e-13 * scale:
            meta = meta + ("mean-not-zero",)
    return VectorField(fld.grid, fld.data * mult, "spectral", meta)


def dealias_mask(grid: Grid3, rule: str = "2/3") -> np.ndarray:
    """Boolean retain-mask for quadratic products (two-thirds rule)."""
    if rule in ("none", None):
        return np.ones(grid.shape, dtype=bool)
    if rule != "2/3":
        raise ValueError(f"unknown dealias rule {rule!r}")
    kmax = grid.n // 3
    k1 = np.rint(grid.xi1 / (2.0 * np.pi / grid.box_length)).astype(int)
    keep1 = np.abs(k1) <= kmax
    return keep1[:, None, None] & keep1[None, :, None] & keep1[None, None, :]


# ---------------------------------------------------------------------------
# norms


def lp_norm(fld: VectorField, p: float) -> float:
    """Riemann-sum L^p norm over all components and lattice points."""
    if fld.space != "physical":
        raise ValueError("lp_norm expects a physical-space field")
    if p < 1:
        raise InvalidExponentError(f"p must satisfy 1 <= p <= inf, got {p}")
    a = np.abs(fld.data)
    if math.isinf(p):
        return float(a.max())
    h3 = fld.grid.spacing**3
    return float((np.sum(a**p) * h3) ** (1.0 / p))


def coefficient_l2_norm(fld: VectorField) -> float:
    """Weighted l2 norm of spectral coefficients; equals lp_norm(.., 2) by Plancherel."""
    if fld.space != "spectral":
        raise ValueError("coefficient_l2_norm expects a spectral field")
    dxi3 = (2.0 * np.pi / fld.grid.box_length) ** 3
    return float(np.sqrt(np.sum(np.abs(fld.data) ** 2) * dxi3))


def sobolev_seminorm(fld: VectorField, order: int) -> float:
    """Homogeneous seminorm ``|| |xi|^order fhat ||`` via spectral Plancherel."""
    if fld.space != "spectral":
        raise ValueError("sobolev_seminorm expects a spectral field")
    dxi3 = (2.0 * np.pi / fld.grid.box_length) ** 3
    w = fld.grid.radius ** (2 * order) if order else 1.0
    return float(np.sqrt(np.sum(w * np.abs(fld.data) ** 2) * dxi3))
