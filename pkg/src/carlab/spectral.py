"""Fourier-side operators: the Cauchy-Riemann symbol, the regularized inverse
multiplier with a radial inner cutoff, dyadic band decomposition with an exact
telescoped partition of unity, band kernels, and periodic convolution.

Conventions.  The first-order operator i d/dy + d/dx acts on lattice
exponentials e^{i(x xi + y eta)} with eigenvalue -eta + i xi, i.e. symbol
i*zeta for zeta = xi + i eta; dbar is half of it.  Dyadic bands follow the
low-frequency-at-large-k convention: band k lives on the annulus
2^(-k-1) <= |zeta| <= 2^(-k+1), with the profile equal to 1 at |zeta| = 2^(-k).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnresolvedBandError
from .grid import FREQUENCY, POSITION, Field, GridSpec, fft, ifft


def _quintic_step(u: np.ndarray) -> np.ndarray:
    """C^2 monotone ramp: 0 for u <= 0, 1 for u >= 1, quintic in between."""
    v = np.clip(u, 0.0, 1.0)
    return v * v * v * (10.0 + v * (-15.0 + 6.0 * v))


def _mollifier_step(u: np.ndarray) -> np.ndarray:
    """C^inf monotone ramp built from exp(-1/u) glue."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    um = u[mid]
    g = np.exp(-1.0 / um)
    g1 = np.exp(-1.0 / (1.0 - um))
    out[mid] = g / (g + g1)
    return out


PROFILES = {
    "quintic_smoothstep": _quintic_step,
    "exp_mollifier": _mollifier_step,
}


@dataclass(frozen=True)
class MultiplierSpec:
    """Radial inner cutoff: 0 on |zeta| <= delta, 1 on |zeta| >= 2 delta."""

    delta: float
    profile: str = "quintic_smoothstep"

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"cutoff scale delta must be positive, got {self.delta}")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown cutoff profile {self.profile!r}; known: {sorted(PROFILES)}")

    def cutoff(self, rho: np.ndarray) -> np.ndarray:
        return PROFILES[self.profile]((np.asarray(rho, dtype=float) - self.delta) / self.delta)

    def resolvable_on(self, grid: GridSpec) -> bool:
        """Whether the transition region spans at least two frequency cells."""
        return self.delta >= 2 * grid.freq_spacing


def psi_delta(spec: MultiplierSpec, grid: GridSpec) -> Field:
    """The cutoff sampled on the frequency lattice (real values in [0, 1])."""
    return Field(grid, spec.cutoff(grid.freq_rmesh).astype(np.complex128), FREQUENCY)


@dataclass(frozen=True)
class DyadicBand:
    """Nominal dyadic annulus of band k (larger k means lower frequency)."""

    k: int

    @property
    def inner(self) -> float:
        return 2.0 ** (-self.k - 1)

    @property
    def outer(self) -> float:
        return 2.0 ** (-self.k + 1)

    def resolvable_on(self, grid: GridSpec) -> bool:
        # inner edge at least two lattice cells from 0; outer edge at most
        # half of Nyquist, leaving an anti-aliasing margin
        return (
            self.inner >= 2 * grid.freq_spacing
            and self.outer <= grid.freq_spacing * grid.n / 4
        )


def resolvable_bands(grid: GridSpec) -> list[int]:
    """All band indices whose annulus fits the grid's usable frequency range."""
    # brute scan is clearer than juggling log rounding at the edges
    return [k for k in range(-64, 65) if DyadicBand(k).resolvable_on(grid)]


@dataclass(frozen=True)
class LPFamily:
    """Telescoped dyadic partition chi_k = phi(2^k |zeta|) - phi(2^(k+1) |zeta|).

    phi is a radial ramp equal to 1 for r <= 1 and 0 for r >= 2, so each band
    is supported on [2^(-k-1), 2^(-k+1)], adjacent bands overlap in exactly
    one half-octave, and the partial sum over k_min..k_max telescopes to 1 on
    the covered annulus 2^(-k_max) <= |zeta| <= 2^(-k_min).
    """

    k_min: int
    k_max: int
    profile: str = "quintic_smoothstep"

    def __post_init__(self):
        if self.k_min > self.k_max:
            raise ValueError(f"need k_min <= k_max, got ({self.k_min}, {self.k_max})")
        if self.profile not in PROFILES:
            raise ValueError(f"unknown band profile {self.profile!r}; known: {sorted(PROFILES)}")

    def phi(self, rho: np.ndarray) -> np.ndarray:
        return 1.0 - PROFILES[self.profile](np.asarray(rho, dtype=float) - 1.0)

    def chi(self, k: int, rho: np.ndarray) -> np.ndarray:
        if not self.k_min <= k <= self.k_max:
            raise ValueError(f"band {k} outside family range [{self.k_min}, {self.k_max}]")
        rho = np.asarray(rho, dtype=float)
        return self.phi(rho * 2.0 ** k) - self.phi(rho * 2.0 ** (k + 1))

    def chi_sum(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        return self.phi(rho * 2.0 ** self.k_min) - self.phi(rho * 2.0 ** (self.k_max + 1))

    @property
    def covered_inner(self) -> float:
        return 2.0 ** (-self.k_max)

    @property
    def covered_outer(self) -> float:
        return 2.0 ** (-self.k_min)

    def bands(self) -> list[DyadicBand]:
        return [DyadicBand(k) for k in range(self.k_min, self.k_max + 1)]

    def band(self, k: int) -> DyadicBand:
        if not self.k_min <= k <= self.k_max:
            raise ValueError(f"band {k} outside family range [{self.k_min}, {self.k_max}]")
        return DyadicBand(k)


def lp_family(k_min: int, k_max: int, profile: str = "quintic_smoothstep") -> LPFamily:
    return LPFamily(k_min, k_max, profile)


def _cr_symbol(grid: GridSpec) -> np.ndarray:
    # i * (xi + i eta) = -eta + i xi
    return 1j * grid.wmesh


def _apply_multiplier(field: Field, symbol: np.ndarray) -> Field:
    if field.space != POSITION:
        raise ValueError("operator expects a position-space field")
    spectrum = fft(field)
    return ifft(Field(field.grid, spectrum.values * symbol, FREQUENCY))


def apply_cr(field: Field) -> Field:
    """The first-order operator i d/dy + d/dx via its exact lattice symbol."""
    return _apply_multiplier(field, _cr_symbol(field.grid))


def apply_dbar(field: Field) -> Field:
    """dbar = (i d/dy + d/dx)/2 as an exact lattice multiplier.

    Constants and lattice exponentials are exact eigenvectors; sampled smooth
    functions are differentiated up to the aliasing of their spectral tail.
    """
    return _apply_multiplier(field, _cr_symbol(field.grid) / 2.0)


def _inverse_symbol(spec: MultiplierSpec, grid: GridSpec) -> np.ndarray:
    """psi_delta(zeta) / (-eta + i xi), set to 0 at the origin bin."""
    s = _cr_symbol(grid)
    psi = spec.cutoff(grid.freq_rmesh)
    out = np.zeros_like(s)
    nz = s != 0
    out[nz] = psi[nz] / s[nz]
    return out


def apply_T(field: Field, spec: MultiplierSpec) -> Field:
    """Regularized inverse of the first-order operator (inner cutoff psi)."""
    return _apply_multiplier(field, _inverse_symbol(spec, field.grid))


def apply_Tk(field: Field, spec: MultiplierSpec, family: LPFamily, k: int) -> Field:
    """Band-localized regularized inverse: extra chi_k factor on the symbol."""
    grid = field.grid
    symbol = _inverse_symbol(spec, grid) * family.chi(k, grid.freq_rmesh)
    return _apply_multiplier(field, symbol)


def lp_project(field: Field, family: LPFamily, k: int) -> Field:
    """Band projection h_k: multiply the spectrum by chi_k."""
    grid = field.grid
    return _apply_multiplier(field, family.chi(k, grid.freq_rmesh).astype(np.complex128))


def band_projections(field: Field, family: LPFamily) -> list[Field]:
    """All h_k for the family, sharing a single forward transform."""
    if field.space != POSITION:
        raise ValueError("band_projections expects a position-space field")
    grid = field.grid
    spectrum = fft(field)
    rho = grid.freq_rmesh
    return [
        ifft(Field(grid, spectrum.values * family.chi(k, rho), FREQUENCY))
        for k in range(family.k_min, family.k_max + 1)
    ]


def square_function(field: Field, family: LPFamily) -> Field:
    """Pointwise (sum_k |h_k|^2)^(1/2) over the family's bands."""
    if field.space != POSITION:
        raise ValueError("square_function expects a position-space field")
    acc = np.zeros((field.grid.n, field.grid.n))
    for hk in band_projections(field, family):
        acc += np.abs(hk.values) ** 2
    return Field(field.grid, np.sqrt(acc).astype(np.complex128), POSITION)


def band_multiplier(spec: MultiplierSpec, family: LPFamily, k: int, grid: GridSpec) -> Field:
    """The frequency-side symbol psi_delta * chi_k / (-eta + i xi) as a Field."""
    symbol = _inverse_symbol(spec, grid) * family.chi(k, grid.freq_rmesh)
    return Field(grid, symbol, FREQUENCY)


def kernel_Tk(spec: MultiplierSpec, family: LPFamily, k: int, grid: GridSpec) -> Field:
    """Position-space convolution kernel of the band-localized inverse."""
    band = family.band(k)
    if not band.resolvable_on(grid):
        raise UnresolvedBandError(
            f"band k={k} (annulus [{band.inner:g}, {band.outer:g}]) is not resolvable: "
            f"need inner >= 2*{grid.freq_spacing:g} and outer <= {grid.freq_spacing * grid.n / 4:g}"
        )
    return ifft(band_multiplier(spec, family, k, grid))


def cauchy_solve(field: Field, spec: MultiplierSpec) -> Field:
    """Approximate right inverse of dbar: symbol 2 psi_delta / (-eta + i xi).

    Composing apply_dbar with this operator reproduces the psi-filtered input;
    the origin bin (and with it the input's lattice mean) is removed.
    """
    return _apply_multiplier(field, 2.0 * _inverse_symbol(spec, field.grid))


def periodic_convolve(a: Field, b: Field) -> Field:
    """Periodic convolution with cell measure h^2 (Riemann sum of the integral)."""
    if a.grid != b.grid:
        raise ValueError("periodic_convolve requires both fields on the same grid")
    if a.space != POSITION or b.space != POSITION:
        raise ValueError("periodic_convolve expects position-space fields")
    return ifft(Field(a.grid, fft(a).values * fft(b).values, FREQUENCY))


def band_limited_noise(
    grid: GridSpec,
    family: LPFamily,
    ks: list[int],
    rng: np.random.Generator,
    normalize: bool = True,
) -> Field:
    """Seeded random field with spectrum confined to the selected bands."""
    if not ks:
        raise ValueError("need at least one band index")
    coeffs = rng.standard_normal((grid.n, grid.n)) + 1j * rng.standard_normal((grid.n, grid.n))
    mask = np.zeros((grid.n, grid.n))
    for k in ks:
        mask += family.chi(k, grid.freq_rmesh)
    out = ifft(Field(grid, coeffs * mask, FREQUENCY))
    if normalize:
        scale = math.sqrt(grid.spacing ** 2 * np.sum(np.abs(out.values) ** 2))
        if scale == 0:
            raise ValueError(f"bands {ks} carry no lattice points on this grid")
        out = Field(grid, out.values / scale, POSITION)
    return out
