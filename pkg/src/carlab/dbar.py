"""Solutions of the potential equation and the unique-continuation bootstrap.

picard_solve iterates u <- u_hol + S(V u) for the regularized inverse S of
dbar, refusing to start unless a power-iteration estimate of the composite
operator norm certifies a contraction.  uc_bootstrap then measures the
absorption margin 1/2 - C ||V||_{L^2(ball)} and the weighted interior norms
A(t) = ||(r/|z|)^t u||_{L^q(ball)} against the outer bound
2 C ||dbar u||_{L^p(complement)}; vanishing_detector converts a bounded
A-series into a certified sup bound on an inner ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractionRefusal, ConvergenceError, ExclusionZoneError
from .grid import (
    Exponents,
    Field,
    GridSpec,
    POSITION,
    fft,
    ifft,
    lp_norm,
    lp_norm_outside_ball,
    restrict_ball,
    sample,
    weighted_lp_norm,
)
from .inequalities import detect_vanishing_radius
from .reports import EmpiricalConstant
from .spectral import MultiplierSpec, apply_dbar, cauchy_solve
from .zoo import Potential


def _l2(grid: GridSpec, values: np.ndarray) -> float:
    return math.sqrt(grid.spacing ** 2 * float(np.sum(np.abs(values) ** 2)))


@dataclass
class DbarSolution:
    """Converged iterate of u = u_hol + S(V u) with its interior defects.

    residual is the interior defect of the regularized equation the solver
    targets, dbar u = dbar u_hol + (psi-filtered V u); it tracks the iteration
    tolerance.  pde_residual is the interior ||dbar u - V u|| / ||u||, which
    additionally contains the seed's non-holomorphy and the low-frequency
    content of V u removed by the cutoff (a periodic box cannot supply it).
    """

    u: Field
    potential: Potential
    u_hol: Field
    residual: float
    pde_residual: float
    interior_margin: float
    iterations: int
    converged: bool
    update_norms: list[float] = field(default_factory=list)
    contraction_estimate: float = 0.0
    seed_dbar_norm: float = 0.0


def composite_operator_norm(
    potential_values: np.ndarray,
    spec: MultiplierSpec,
    grid: GridSpec,
    rng_seed: int = 0,
    iterations: int = 25,
) -> float:
    """Power-iteration estimate of the L^2 norm of h -> S(V h).

    Multiplier operators are normal for the calibrated transform, so the
    adjoint of S is the multiplier with the conjugate symbol and the adjoint
    of V-multiplication is conj(V)-multiplication.
    """
    rng = np.random.default_rng([rng_seed, 3271])
    x = rng.standard_normal((grid.n, grid.n)) + 1j * rng.standard_normal((grid.n, grid.n))
    x /= _l2(grid, x)

    from .spectral import _inverse_symbol  # symbol of S is 2 psi / (-eta + i xi)

    symbol = 2.0 * _inverse_symbol(spec, grid)
    sym_conj = np.conj(symbol)
    vconj = np.conj(potential_values)

    def forward(vals):
        w = fft(Field(grid, potential_values * vals, POSITION))
        return ifft(Field(grid, symbol * w.values, "frequency")).values

    def adjoint(vals):
        w = fft(Field(grid, vals, POSITION))
        back = ifft(Field(grid, sym_conj * w.values, "frequency")).values
        return vconj * back

    sigma = 0.0
    for _ in range(iterations):
        y = adjoint(forward(x))
        lam = abs(np.vdot(x, y))  # Rayleigh quotient of the PSD composition
        norm_y = float(np.sqrt(np.sum(np.abs(y) ** 2)))
        if norm_y == 0:
            return 0.0
        x = y / norm_y
        sigma = math.sqrt(lam)
    return sigma


def picard_solve(
    V: Potential,
    u_hol: Field,
    spec: MultiplierSpec,
    tol: float = 1e-8,
    max_iter: int = 64,
    interior_margin: float | None = None,
    contraction_limit: float = 0.9,
    rng_seed: int = 0,
) -> DbarSolution:
    """Fixed-point iteration u <- u_hol + S(V u) from the seed u_hol.

    Refuses to start when the estimated composite operator norm exceeds the
    contraction limit; raises ConvergenceError when the step budget runs out.
    """
    grid = u_hol.grid
    if u_hol.space != POSITION:
        raise ValueError("the seed must be a position-space field")
    if interior_margin is None:
        interior_margin = grid.half_width / 4
    if not 0 < interior_margin < grid.half_width:
        raise ValueError(f"interior margin must lie in (0, L), got {interior_margin}")

    v_vals = sample(grid, V.value_fn).values

    estimate = composite_operator_norm(v_vals, spec, grid, rng_seed=rng_seed)
    if estimate > contraction_limit:
        raise ContractionRefusal(estimate, contraction_limit)

    u = u_hol
    updates: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        nxt = Field(grid, u_hol.values + cauchy_solve(Field(grid, v_vals * u.values, POSITION), spec).values, POSITION)
        change = _l2(grid, nxt.values - u.values)
        updates.append(change)
        u = nxt
        if change <= tol:
            converged = True
            break
    if not converged:
        raise ConvergenceError(
            f"no convergence after {max_iter} iterations; last update {updates[-1]:.3e}, tol {tol:.3e}"
        )

    interior = grid.rmesh <= grid.half_width - interior_margin
    dbar_u = apply_dbar(u).values
    dbar_seed = apply_dbar(u_hol).values
    vu = v_vals * u.values
    filtered_vu = ifft(
        Field(grid, spec.cutoff(grid.freq_rmesh) * fft(Field(grid, vu, POSITION)).values, "frequency")
    ).values

    u_norm = _l2(grid, u.values * interior)
    if u_norm == 0:
        residual = pde_residual = 0.0
    else:
        residual = _l2(grid, (dbar_u - dbar_seed - filtered_vu) * interior) / u_norm
        pde_residual = _l2(grid, (dbar_u - vu) * interior) / u_norm

    return DbarSolution(
        u=u,
        potential=V,
        u_hol=u_hol,
        residual=residual,
        pde_residual=pde_residual,
        interior_margin=interior_margin,
        iterations=iterations,
        converged=converged,
        update_norms=updates,
        contraction_estimate=estimate,
        seed_dbar_norm=_l2(grid, dbar_seed * interior),
    )


@dataclass
class WitnessReport:
    """Pointwise check of |dbar u| <= |V u| + slack on the interior subdomain."""

    passed: bool
    slack: float
    worst_excess: float
    worst_point: complex
    worst_lhs: float
    worst_rhs: float


def inequality_witness(
    u: Field,
    V: Potential,
    slack: float,
    interior_margin: float | None = None,
) -> WitnessReport:
    """Verify the differential inequality pointwise, reporting the worst point."""
    grid = u.grid
    if interior_margin is None:
        interior_margin = grid.half_width / 4
    interior = grid.rmesh <= grid.half_width - interior_margin
    lhs = np.abs(apply_dbar(u).values)
    rhs = np.abs(sample(grid, V.value_fn).values * u.values)
    excess = np.where(interior, lhs - rhs, -math.inf)
    iy, ix = np.unravel_index(int(excess.argmax()), excess.shape)
    worst = float(excess[iy, ix])
    return WitnessReport(
        passed=worst <= slack,
        slack=slack,
        worst_excess=worst,
        worst_point=complex(grid.zmesh[iy, ix]),
        worst_lhs=float(lhs[iy, ix]),
        worst_rhs=float(rhs[iy, ix]),
    )


def scale_transform(V: Potential, lam: float, grid: GridSpec | None = None) -> Potential:
    """The norm-preserving rescaling V_lam(z) = lam * V(lam z).

    The L^2 norm in two dimensions is exactly invariant, so the closed-form
    norm carries over.  With a grid supplied, supports growing beyond the box
    (lam < 1) are rejected.
    """
    if not lam > 0:
        raise ValueError(f"scale factor must be positive, got {lam}")
    lam = float(lam)
    if lam == 1.0:
        return V
    radius = None if V.support_radius is None else V.support_radius / lam
    if grid is not None and radius is not None:
        extent = abs(V.support_center) / lam + radius
        if extent > grid.half_width:
            raise ValueError(
                f"rescaled support reaches |z|={extent:g}, beyond the box L={grid.half_width:g}"
            )
    inner = V.value_fn

    def value(z):
        return lam * inner(np.asarray(z, dtype=np.complex128) * lam)

    return Potential(
        label=f"scale:{lam:g}({V.label})",
        value_fn=value,
        l2_norm_exact=V.l2_norm_exact,
        support_radius=radius,
        support_center=V.support_center / lam,
    )


def dyadic_rescale(f: Field) -> Field:
    """Exact resampling z -> 2z: values[j] = f(2 x_j), zero beyond the box.

    2 x_j is again a lattice point, so the map is pure index arithmetic with
    no interpolation; samples needing data outside the box are set to 0,
    which is exact for fields supported inside it.
    """
    if f.space != POSITION:
        raise ValueError("dyadic_rescale expects a position-space field")
    n = f.grid.n
    out = np.zeros_like(f.values)
    j = np.arange(n)
    src = 2 * j - n // 2
    valid = (src >= 0) & (src < n)
    jv = j[valid]
    sv = src[valid]
    out[np.ix_(jv, jv)] = f.values[np.ix_(sv, sv)]
    return Field(f.grid, out, POSITION)


@dataclass
class BootstrapTrace:
    """Absorption bookkeeping for one ball radius and one empirical constant."""

    r: float
    absorption_margin: float
    potential_ball_norm: float
    c_hat: float
    c_hat_provenance: str
    a_series: list[tuple[float, float]]
    rhs_bound: float
    bounded: bool
    r_too_large: bool
    exclusion_radius: float
    growth_ratios: list[tuple[float, float]]
    geometric_divergence: bool
    q: float
    cell_area: float


def uc_bootstrap(
    u: Field,
    V: Potential,
    exponents: Exponents,
    r: float,
    t_values: list[float],
    c_hat: EmpiricalConstant | float,
    c_hat_provenance: str = "",
    bound_slack: float = 0.1,
    divergence_ratio: float = 1.5,
    divergence_from_t: float = 6.0,
    vanish_tol: float = 1e-10,
) -> BootstrapTrace:
    """Measure the absorption margin and the weighted-norm series A(t).

    Requires u to vanish on a disk of radius >= 2h around the origin (checked,
    not assumed).  With a positive margin, records A(t) and flags whether the
    series stays below the outer bound; a geometrically growing series is the
    signature of mass inside the ball meeting the unbounded weight.
    """
    if not t_values:
        raise ValueError("empty t sweep")
    grid = u.grid
    if not 0 < r:
        raise ValueError(f"ball radius must be positive, got {r}")
    if isinstance(c_hat, EmpiricalConstant):
        c_value = c_hat.value
        provenance = c_hat_provenance or f"{c_hat.name} (witness {c_hat.witness})"
    else:
        c_value = float(c_hat)
        provenance = c_hat_provenance or "externally supplied"

    umax = float(np.abs(u.values).max())
    exclusion = detect_vanishing_radius(u, vanish_tol * max(1.0, umax))
    if exclusion < 2 * grid.spacing:
        raise ExclusionZoneError(
            f"u does not vanish near the origin: first live sample at |z|={exclusion:g}, "
            f"need a vanishing disk of radius >= 2h = {2 * grid.spacing:g}"
        )
    if math.isinf(exclusion):
        exclusion = grid.half_width

    vf = sample(grid, V.value_fn)
    v_ball = lp_norm(restrict_ball(vf, 0j, r), 2.0)
    margin = 0.5 - c_value * v_ball

    base = dict(
        r=r,
        absorption_margin=margin,
        potential_ball_norm=v_ball,
        c_hat=c_value,
        c_hat_provenance=provenance,
        exclusion_radius=exclusion,
        q=exponents.q,
        cell_area=grid.spacing ** 2,
    )
    if margin <= 0:
        return BootstrapTrace(
            a_series=[],
            rhs_bound=math.nan,
            bounded=False,
            r_too_large=True,
            growth_ratios=[],
            geometric_divergence=False,
            **base,
        )

    u_ball = restrict_ball(u, 0j, r)
    a_series = []
    live_tol = vanish_tol * max(1.0, umax)  # same mask as the vanishing check
    for t in t_values:
        a_t = r ** t * weighted_lp_norm(u_ball, exponents.q, t, exclusion, vanish_tol=live_tol)
        if not math.isfinite(a_t):
            raise ValueError(f"A(t) not finite at t={t}")
        a_series.append((float(t), float(a_t)))

    dbar_u = apply_dbar(u)
    rhs = 2.0 * c_value * lp_norm_outside_ball(dbar_u, 0j, r, exponents.p)
    amax = max(a for _, a in a_series)
    bounded = amax <= rhs * (1.0 + bound_slack)

    growth = []
    for (t0, a0), (t1, a1) in zip(a_series, a_series[1:]):
        if a0 > 0 and t1 - t0 > 0:
            growth.append((float(t1), float((a1 / a0) ** (1.0 / (t1 - t0)))))
    tail = [g for t, g in growth if t >= divergence_from_t]
    diverging = len(tail) >= 2 and all(g >= divergence_ratio for g in tail)

    return BootstrapTrace(
        a_series=a_series,
        rhs_bound=rhs,
        bounded=bounded,
        r_too_large=False,
        growth_ratios=growth,
        geometric_divergence=diverging,
        **base,
    )


def vanishing_detector(trace: BootstrapTrace, r_inner: float) -> float:
    """Certified sup bound on the inner ball implied by the A-series.

    Each recorded t gives sup |u| <= A(t) (r_inner/r)^t / h^(2/q) on
    B(0, r_inner); the strongest (smallest) bound over the trace is returned.
    """
    if not 0 < r_inner < trace.r:
        raise ValueError(f"need 0 < r_inner < r = {trace.r:g}, got {r_inner}")
    if trace.r_too_large or trace.absorption_margin <= 0:
        raise ValueError("trace has no positive absorption margin")
    if len(trace.a_series) < 3:
        raise ValueError(f"insufficient trace: need >= 3 t points, have {len(trace.a_series)}")
    shrink = r_inner / trace.r
    cell = trace.cell_area ** (1.0 / trace.q)
    bounds = [a * shrink ** t / cell for t, a in trace.a_series]
    return float(min(bounds))
