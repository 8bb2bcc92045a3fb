"""Closed-form test functions with closed-form Cauchy-Riemann derivatives.

Every AnalyticField bundles a value function with the exact dbar derivative
(dbar = (i d/dy + d/dx)/2), so spectral operators can always be checked
against an analytic oracle.  Potentials carry closed-form L^2 norms where
available so absorption checks need no numerical integration oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

ComplexFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AnalyticField:
    """A test function together with its exact dbar derivative.

    If support_radius is set, both value_fn and dbar_fn vanish outside the
    closed disk around support_center.  slit_discontinuous marks fields that
    jump across the negative real axis (non-integer powers of z).
    """

    label: str
    value_fn: ComplexFn
    dbar_fn: ComplexFn
    support_radius: float | None = None
    support_center: complex = 0j
    slit_discontinuous: bool = False

    def support_inner_radius(self) -> float:
        """Distance from the origin to the declared support disk (0 if unknown)."""
        if self.support_radius is None:
            return 0.0
        return max(abs(self.support_center) - self.support_radius, 0.0)


@dataclass(frozen=True)
class Potential:
    """A square-integrable multiplier, with its exact L^2 norm when known."""

    label: str
    value_fn: ComplexFn
    l2_norm_exact: float | None = None
    support_radius: float | None = None
    support_center: complex = 0j


def _as_array(z) -> tuple[np.ndarray, bool]:
    arr = np.asarray(z, dtype=np.complex128)
    return arr, arr.ndim == 0


def _ret(out: np.ndarray, scalar: bool):
    return complex(out) if scalar else out


def bump(center: complex, radius: float) -> AnalyticField:
    """Smooth compactly supported bump exp(1 - 1/(1 - s)), s = |z-c|^2/r^2."""
    if not radius > 0:
        raise ValueError(f"bump radius must be positive, got {radius}")
    c = complex(center)
    r2 = float(radius) ** 2

    def value(z):
        arr, scalar = _as_array(z)
        s = np.abs(arr - c) ** 2 / r2
        out = np.zeros_like(arr)
        inside = s < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside]))
        return _ret(out, scalar)

    def dbar(z):
        arr, scalar = _as_array(z)
        w = arr - c
        s = np.abs(w) ** 2 / r2
        out = np.zeros_like(arr)
        inside = s < 1.0
        si = s[inside]
        # chain rule: dbar s = (z - c)/r^2, d/ds exp(1 - 1/(1-s)) = -value/(1-s)^2
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - si)) * (-1.0 / (1.0 - si) ** 2) * w[inside] / r2
        return _ret(out, scalar)

    return AnalyticField(
        label=f"bump:{c.real:g},{c.imag:g},{radius:g}",
        value_fn=value,
        dbar_fn=dbar,
        support_radius=float(radius),
        support_center=c,
    )


def holo_window(n_power: int, center: complex, radius: float) -> AnalyticField:
    """z^n times a bump; the monomial factor is killed by dbar (Leibniz)."""
    if n_power < 0 or n_power != int(n_power):
        raise ValueError(f"monomial power must be a nonnegative integer, got {n_power}")
    n_power = int(n_power)
    base = bump(center, radius)

    def value(z):
        arr, scalar = _as_array(z)
        return _ret(arr ** n_power * base.value_fn(arr), scalar)

    def dbar(z):
        arr, scalar = _as_array(z)
        return _ret(arr ** n_power * base.dbar_fn(arr), scalar)

    return AnalyticField(
        label=f"holo:{n_power},{complex(center).real:g},{complex(center).imag:g},{radius:g}",
        value_fn=value,
        dbar_fn=dbar,
        support_radius=base.support_radius,
        support_center=base.support_center,
    )


def power_weight(t: float) -> AnalyticField:
    """z^(-t) on the principal branch; holomorphic off the negative real axis.

    For t > 0 the value at z = 0 is a NaN sentinel, which sampling rejects
    with the offending grid point.  Non-integer t is flagged as discontinuous
    across the slit {x <= 0, y = 0}; tests with such weights must keep their
    supports in the right half-plane.
    """
    if t < 0:
        raise ValueError(f"weight power must be >= 0, got {t}")
    t = float(t)

    if t == 0:

        def value(z):
            arr, scalar = _as_array(z)
            return _ret(np.ones_like(arr), scalar)

    else:

        def value(z):
            arr, scalar = _as_array(z)
            out = np.full_like(arr, complex("nan"))
            nz = arr != 0
            out[nz] = arr[nz] ** (-t)
            return _ret(out, scalar)

    def dbar(z):
        arr, scalar = _as_array(z)
        return _ret(np.zeros_like(arr), scalar)

    return AnalyticField(
        label=f"zpow:{t:g}",
        value_fn=value,
        dbar_fn=dbar,
        slit_discontinuous=(t != int(t)),
    )


def gaussian(a: float) -> AnalyticField:
    """exp(-a|z|^2) with dbar = -a z exp(-a|z|^2); spectrally exact oracle."""
    if not a > 0:
        raise ValueError(f"gaussian width parameter must be positive, got {a}")
    a = float(a)

    def value(z):
        arr, scalar = _as_array(z)
        return _ret(np.exp(-a * np.abs(arr) ** 2), scalar)

    def dbar(z):
        arr, scalar = _as_array(z)
        return _ret(-a * arr * np.exp(-a * np.abs(arr) ** 2), scalar)

    return AnalyticField(label=f"gaussian:{a:g}", value_fn=value, dbar_fn=dbar)


def entire_seed(kind: str, param: float) -> AnalyticField:
    """Entire functions (dbar = 0) used as holomorphic seeds: const, z^k, e^(az)."""
    param = float(param)

    if kind == "const":

        def value(z):
            arr, scalar = _as_array(z)
            return _ret(np.full_like(arr, param), scalar)

        label = f"const:{param:g}"
    elif kind == "zpoly":
        k = int(param)
        if k < 0 or k != param:
            raise ValueError(f"polynomial power must be a nonnegative integer, got {param}")

        def value(z):
            arr, scalar = _as_array(z)
            return _ret(arr ** k, scalar)

        label = f"zpoly:{k}"
    elif kind == "expz":

        def value(z):
            arr, scalar = _as_array(z)
            return _ret(np.exp(param * arr), scalar)

        label = f"expz:{param:g}"
    else:
        raise ValueError(f"unknown entire seed kind {kind!r}")

    def dbar(z):
        arr, scalar = _as_array(z)
        return _ret(np.zeros_like(arr), scalar)

    return AnalyticField(label=label, value_fn=value, dbar_fn=dbar)


def radial_power_potential(alpha: float, radius: float, amplitude: float) -> Potential:
    """V = c|z|^(-alpha) on the disk |z| <= R, zero outside.

    alpha < 1 keeps V square integrable in 2D; the exact norm is
    c * sqrt(2 pi / (2 - 2 alpha)) * R^(1 - alpha).  For alpha > 0 the origin
    sample is assigned 0 so the midpoint quadrature drops the measure-zero
    singularity.
    """
    if not (0 <= alpha < 1):
        raise ValueError(f"alpha must lie in [0, 1) for local square-integrability, got {alpha}")
    if not radius > 0:
        raise ValueError(f"support radius must be positive, got {radius}")
    alpha, radius, amplitude = float(alpha), float(radius), float(amplitude)

    def value(z):
        arr, scalar = _as_array(z)
        r = np.abs(arr)
        out = np.zeros_like(arr)
        if alpha == 0:
            out[r <= radius] = amplitude
        else:
            inside = (r <= radius) & (r > 0)
            out[inside] = amplitude * r[inside] ** (-alpha)
        return _ret(out, scalar)

    exact = abs(amplitude) * math.sqrt(2 * math.pi / (2 - 2 * alpha)) * radius ** (1 - alpha)
    return Potential(
        label=f"vpow:{alpha:g},{radius:g},{amplitude:g}",
        value_fn=value,
        l2_norm_exact=exact,
        support_radius=radius,
    )


def ring_potential(inner: float, outer: float, amplitude: float) -> Potential:
    """Flat potential c on the annulus inner <= |z| <= outer."""
    if not (0 <= inner < outer):
        raise ValueError(f"need 0 <= inner < outer, got ({inner}, {outer})")
    inner, outer, amplitude = float(inner), float(outer), float(amplitude)

    def value(z):
        arr, scalar = _as_array(z)
        r = np.abs(arr)
        out = np.zeros_like(arr)
        out[(r >= inner) & (r <= outer)] = amplitude
        return _ret(out, scalar)

    exact = abs(amplitude) * math.sqrt(math.pi * (outer ** 2 - inner ** 2))
    return Potential(
        label=f"vring:{inner:g},{outer:g},{amplitude:g}",
        value_fn=value,
        l2_norm_exact=exact,
        support_radius=outer,
    )


# registry grammar: name:comma-separated-reals
_REGISTRY: dict[str, tuple[str, Callable[..., object]]] = {
    "bump": ("bump:cre,cim,radius", lambda cre, cim, r: bump(complex(cre, cim), r)),
    "holo": ("holo:power,cre,cim,radius", lambda p, cre, cim, r: holo_window(int(p), complex(cre, cim), r)),
    "gaussian": ("gaussian:a", gaussian),
    "zpow": ("zpow:t", power_weight),
    "const": ("const:c", lambda c: entire_seed("const", c)),
    "zpoly": ("zpoly:k", lambda k: entire_seed("zpoly", k)),
    "expz": ("expz:a", lambda a: entire_seed("expz", a)),
    "vpow": ("vpow:alpha,radius,amplitude", radial_power_potential),
    "vring": ("vring:inner,outer,amplitude", ring_potential),
}


def registry_listing() -> list[str]:
    return [usage for usage, _ in _REGISTRY.values()]


def resolve_label(label: str):
    """Parse a registry label like "bump:1,0,0.25" into a zoo object."""
    name, _, argstr = label.partition(":")
    name = name.strip()
    if name not in _REGISTRY:
        known = ", ".join(registry_listing())
        raise ValueError(f"unknown test-function label {name!r}; known: {known}")
    usage, builder = _REGISTRY[name]
    try:
        args = [float(tok) for tok in argstr.split(",") if tok.strip()]
        return builder(*args)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"could not parse {label!r} (usage: {usage}): {exc}") from exc
