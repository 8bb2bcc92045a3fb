"""Uniform periodic grids, continuum-calibrated FFTs, and quadrature norms.

The sampling lattice covers [-L, L)^2 with n points per axis and spacing
h = 2L/n, so the origin is a sample (index n//2).  The dual lattice carries
frequencies (pi/L)*m for m in [-n/2, n/2).  The forward transform multiplies
the raw DFT by h^2, which makes it a quadrature approximation of the
continuous integral transform: identities written for functions on the plane
transfer literally to sampled fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import ExclusionZoneError

POSITION = "position"
FREQUENCY = "frequency"

# samples at or below this magnitude count as identically zero when guarding
# the singular weight |z|^{-t}
VANISH_TOL = 1e-13


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    """Square sampling lattice and its dual frequency lattice.

    Attributes
    ----------
    n : samples per axis, a power of two >= 16.
    half_width : L, so positions span [-L, L).
    """

    n: int
    half_width: float

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise ValueError(f"grid size must be an integer, got {n!r}")
        if not _is_power_of_two(int(n)) or n < 16:
            raise ValueError(f"grid size must be a power of two >= 16, got {n}")
        L = self.half_width
        if not (isinstance(L, (int, float, np.floating)) and math.isfinite(L) and L > 0):
            raise ValueError(f"half width must be a positive finite real, got {L!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "half_width", float(L))

    @property
    def spacing(self) -> float:
        """Position-space lattice spacing h = 2L/n."""
        return 2.0 * self.half_width / self.n

    @property
    def freq_spacing(self) -> float:
        """Frequency-space lattice spacing pi/L."""
        return math.pi / self.half_width

    @property
    def nyquist(self) -> float:
        """Largest representable frequency modulus along an axis."""
        return self.freq_spacing * (self.n // 2)

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n)

    @cached_property
    def freq_axis(self) -> np.ndarray:
        return self.freq_spacing * (np.arange(self.n) - self.n // 2)

    @cached_property
    def zmesh(self) -> np.ndarray:
        """Complex positions z = x + iy; values[iy, ix] pairs with axis order."""
        x = self.axis
        return x[None, :] + 1j * x[:, None]

    @cached_property
    def rmesh(self) -> np.ndarray:
        return np.abs(self.zmesh)

    @cached_property
    def wmesh(self) -> np.ndarray:
        """Complex frequencies zeta = xi + i*eta on the dual lattice."""
        f = self.freq_axis
        return f[None, :] + 1j * f[:, None]

    @cached_property
    def freq_rmesh(self) -> np.ndarray:
        return np.abs(self.wmesh)

    def origin_index(self) -> tuple[int, int]:
        return (self.n // 2, self.n // 2)


def make_grid(n: int, half_width: float) -> GridSpec:
    """Build a GridSpec, rejecting non-power-of-two sizes and L <= 0."""
    return GridSpec(n, half_width)


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples on a grid, tagged as position- or frequency-space.

    Fields are immutable: the sample array is made read-only on construction
    and every operation returns a fresh Field, so values can be shared freely
    across concurrent workers.
    """

    grid: GridSpec
    values: np.ndarray
    space: str = POSITION

    def __post_init__(self):
        if self.space not in (POSITION, FREQUENCY):
            raise ValueError(f"unknown space tag {self.space!r}")
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        n = self.grid.n
        if vals.shape != (n, n):
            raise ValueError(f"expected {n}x{n} samples, got shape {vals.shape}")
        if not np.isfinite(vals).all():
            raise ValueError("field contains non-finite samples")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values: np.ndarray, space: str | None = None) -> "Field":
        return Field(self.grid, values, self.space if space is None else space)


@dataclass(frozen=True)
class Exponents:
    """A Lebesgue exponent pair (p, q) on the critical line 1/p - 1/q = 1/2."""

    p: float
    q: float

    GAP_TOL = 1e-12

    def __post_init__(self):
        p, q = self.p, self.q
        if not (1.0 < p < 2.0):
            raise ValueError(f"p must lie strictly in (1, 2), got {p}")
        if not (2.0 < q < math.inf):
            raise ValueError(f"q must lie strictly in (2, inf), got {q}")
        if abs(1.0 / p - 1.0 / q - 0.5) > self.GAP_TOL:
            raise ValueError(
                f"exponents must satisfy 1/p - 1/q = 1/2; got gap {1.0 / p - 1.0 / q!r}"
            )

    @classmethod
    def from_p(cls, p: float) -> "Exponents":
        if not (1.0 < p < 2.0):
            raise ValueError(f"p must lie strictly in (1, 2), got {p}")
        return cls(float(p), 2.0 * p / (2.0 - p))


def sample(grid: GridSpec, fn: Callable[[np.ndarray], np.ndarray]) -> Field:
    """Evaluate a pointwise function of z = x + iy on the grid.

    Non-finite values are rejected with an error naming the offending point.
    """
    z = grid.zmesh
    vals = np.asarray(fn(z), dtype=np.complex128)
    if vals.shape == ():
        vals = np.full((grid.n, grid.n), complex(vals))
    elif vals.shape != z.shape:
        raise ValueError(f"sampled function returned shape {vals.shape}, expected {z.shape}")
    finite = np.isfinite(vals)
    if not finite.all():
        iy, ix = np.argwhere(~finite)[0]
        zz = z[iy, ix]
        raise ValueError(
            f"sampled function is non-finite at grid point (x={zz.real:g}, y={zz.imag:g})"
        )
    return Field(grid, vals, POSITION)


def fft(field: Field) -> Field:
    """Continuum-calibrated forward transform (factor h^2 on the raw DFT)."""
    if field.space != POSITION:
        raise ValueError("fft expects a position-space field")
    h = field.grid.spacing
    vals = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(field.values))) * (h * h)
    return Field(field.grid, vals, FREQUENCY)


def ifft(field: Field) -> Field:
    """Inverse of :func:`fft`; composition is the identity to rounding."""
    if field.space != FREQUENCY:
        raise ValueError("ifft expects a frequency-space field")
    h = field.grid.spacing
    vals = np.fft.ifftshift(np.fft.ifft2(np.fft.fftshift(field.values))) / (h * h)
    return Field(field.grid, vals, POSITION)


def lp_norm(field: Field, p: float) -> float:
    """Quadrature L^p norm (h^2 Riemann sum); p = inf gives the sample max."""
    if field.space != POSITION:
        raise ValueError("lp_norm expects a position-space field")
    if p != math.inf and p < 1:
        raise ValueError(f"p must be >= 1 (or inf), got {p}")
    a = np.abs(field.values)
    if p == math.inf:
        return float(a.max())
    h2 = field.grid.spacing ** 2
    return float((h2 * np.sum(a ** p)) ** (1.0 / p))


def frequency_l2_norm(field: Field) -> float:
    """L^2 quadrature on the frequency lattice (cell measure (pi/L)^2).

    With the h^2-calibrated transform, lp_norm(f, 2) equals
    frequency_l2_norm(fft(f)) / (2 pi).
    """
    if field.space != FREQUENCY:
        raise ValueError("frequency_l2_norm expects a frequency-space field")
    d2 = field.grid.freq_spacing ** 2
    return float(math.sqrt(d2 * np.sum(np.abs(field.values) ** 2)))


def weighted_lp_norm(
    field: Field,
    p: float,
    t: float,
    exclusion_radius: float,
    vanish_tol: float = VANISH_TOL,
) -> float:
    """L^p norm of |z|^(-t) * f for a field vanishing near the origin.

    The weight is unbounded at z = 0, so the field must vanish (up to
    ``vanish_tol``) on all samples with |z| < exclusion_radius, and the
    product is defined as 0 wherever the field vanishes.  A non-vanishing
    sample inside the exclusion disk raises, naming the point.
    """
    if field.space != POSITION:
        raise ValueError("weighted_lp_norm expects a position-space field")
    if t < 0:
        raise ValueError(f"weight power t must be >= 0, got {t}")
    if t == 0:
        return lp_norm(field, p)
    if p != math.inf and p < 1:
        raise ValueError(f"p must be >= 1 (or inf), got {p}")
    g = field.grid
    if exclusion_radius < 2 * g.spacing:
        raise ValueError(
            f"exclusion radius {exclusion_radius:g} must be >= 2h = {2 * g.spacing:g} when t > 0"
        )
    a = np.abs(field.values)
    r = g.rmesh
    live = a > vanish_tol
    offenders = live & (r < exclusion_radius)
    if offenders.any():
        iy, ix = np.argwhere(offenders)[0]
        zz = g.zmesh[iy, ix]
        raise ExclusionZoneError(
            f"sample at z = ({zz.real:g}, {zz.imag:g}) has |value| = {a[iy, ix]:.3e} "
            f"inside the exclusion disk of radius {exclusion_radius:g}"
        )
    weighted = np.zeros_like(a)
    weighted[live] = a[live] * r[live] ** (-t)
    if p == math.inf:
        return float(weighted.max())
    h2 = g.spacing ** 2
    return float((h2 * np.sum(weighted ** p)) ** (1.0 / p))


def ball_mask(grid: GridSpec, center: complex, radius: float) -> np.ndarray:
    return np.abs(grid.zmesh - center) <= radius


def restrict_ball(field: Field, center: complex, radius: float) -> Field:
    """Zero all samples outside the closed ball |z - center| <= radius.

    Radii beyond the box are allowed and make the restriction the identity.
    """
    if field.space != POSITION:
        raise ValueError("restrict_ball expects a position-space field")
    if not radius > 0:
        raise ValueError(f"ball radius must be positive, got {radius}")
    mask = ball_mask(field.grid, complex(center), radius)
    return Field(field.grid, np.where(mask, field.values, 0.0), POSITION)


def lp_norm_outside_ball(field: Field, center: complex, radius: float, p: float) -> float:
    """Quadrature L^p norm over the complement of the closed ball."""
    if field.space != POSITION:
        raise ValueError("lp_norm_outside_ball expects a position-space field")
    if p != math.inf and p < 1:
        raise ValueError(f"p must be >= 1 (or inf), got {p}")
    outside = ~ball_mask(field.grid, complex(center), radius)
    a = np.abs(field.values)[outside]
    if p == math.inf:
        return float(a.max()) if a.size else 0.0
    h2 = field.grid.spacing ** 2
    return float((h2 * np.sum(a ** p)) ** (1.0 / p))
