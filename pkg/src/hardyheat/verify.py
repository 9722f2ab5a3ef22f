"""Certification experiments: every numerically checkable claim as a pass/fail record.

Each experiment is a pure function ``Settings -> ExperimentResult`` registered in
``EXPERIMENTS``.  Results are deterministic in (seed, config): rerunning with the
same settings reproduces the JSON payload byte for byte.  All gates (tolerance
values, band widths, drift budgets) live on ``Settings`` — pinned defaults from
pilot runs, never inline constants — and every result records the subset of
tolerances it was judged against.

The operator images Ta, T*a are certified as molecules without ever building a
global grid at the 2^(J+1)Q scale: the annulus norms M_j come from local
midpoint lattices whose time rows align with the slab kinks of the telescoped
image, and the moments come from closed-form spatial window masses integrated
in time by Gauss panels between the same kinks.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .atoms import AtomKind, MoleculeReport, _bump_field, make_atom, make_molecule
from .decompose import (
    WHITNEY_OVERLAP_BOUND,
    Decomposition,
    Term,
    finite_norm_bound,
    hz_decompose,
    molecule_decompose,
    restrict_decompose,
)
from .grid import GridFunction, SpaceTimeGrid, lp_norm, restrict, time_reflect
from .heatop import (
    HALF_LINE_DIRICHLET,
    HALF_LINE_NEUMANN,
    WHOLE,
    KernelSpec,
    _gl_nodes,
    _operator_input,
    apply_T,
    apply_T_at,
    apply_Tstar_at,
    cell_window_mass,
    duhamel_reference,
    gauss_kernel_dt,
    spatial_quadrature_error,
    time_slabs,
    window_mass,
)
from .space import Annulus, ParabolicBall, ball, dilate, truncated_volume

# ∫_R |∂_t p_t(x)| dx at t = 1, n = 1: the integrand changes sign at |x| = √2,
# and the two lobes give 2 √2 p_1(√2) = sqrt(2/π) e^{-1/2}.
C_TSTAR = math.sqrt(2.0 / math.pi) * math.exp(-0.5)


@dataclass(frozen=True)
class Settings:
    """Pinned tolerances and sample counts for the experiment battery.

    Every statistical gate reads from here; the defaults were frozen from
    pilot runs of the same experiments.  A result stores the values it used,
    so a passing record is interpretable without this file.
    """

    seed: int = 0
    n: int = 1  # spatial dimension; only the round-trip experiment runs in 2-d

    # telescoping vs independent Duhamel quadrature
    oracle_inputs: int = 20
    oracle_rel: float = 1e-3
    oracle_factor: float = 10.0
    oracle_improvement: float = 4.0
    oracle_grid: tuple[float, ...] = (4.0, 64.0, 4.0, 16.0)  # L, nx, T, nt

    # molecule certification of Ta over random atoms
    n_atoms: int = 50
    alpha: float = 0.5
    J: int = 8
    moment_rel_tol: float = 1e-3
    uniformity_band: float = 4.0
    mean_times: int = 20
    mean_value_tol: float = 1e-3

    # adjoint images
    n_tstar_atoms: int = 10
    bfit_min: float = 1.5

    # growth counterexamples
    growth_T_values: tuple[float, ...] = (8.0, 16.0, 32.0, 64.0, 128.0)
    dyadic_spread: float = 0.20
    slope_rel_tol: float = 0.05
    c_abs_tol: float = 1e-6

    # decomposition round trips
    n_roundtrip_balls: int = 100
    n_hz_given: int = 10
    hz_residual_tol: float = 1e-12
    molecule_tail_constant: float = 1.0

    # stability probes
    l2_inputs: int = 8
    l2_drift: float = 0.10
    lp_exponents: tuple[float, ...] = (1.5, 2.0, 3.0, 4.0)
    lp_ratio_max: float = 1.1
    lp1_growth_min: float = 1.2

    # boundary dichotomy
    neumann_moment_max: float = 1e-3
    dirichlet_moment_min: float = 1e-2
    far_moment_max: float = 1e-3

    def subset(self, *names: str) -> dict:
        return {k: getattr(self, k) for k in names}


def _x0(Q: ParabolicBall) -> float:
    """Scalar spatial centre of a one-dimensional ball."""
    x = Q.center.x
    return float(x[0]) if isinstance(x, tuple) else float(x)


def _require_1d(settings: Settings, experiment: str) -> None:
    # only the round-trip battery has a 2-d variant; everything else leans on
    # the 1-d kernel evaluator and the closed-form window masses
    if settings.n != 1:
        raise ValueError(f"{experiment} is one-dimensional; run it with n=1")


def _jsonable(obj):
    """Recursively coerce numpy scalars/arrays into plain python values."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


@dataclass(frozen=True)
class ExperimentResult:
    """One experiment run: what was measured, against which tolerances, verdict.

    ``tolerances`` is the subset of Settings the verdict depends on (the
    provenance of every gate is the config, by construction).
    """

    experiment: str
    passed: bool
    parameters: dict
    measured: dict
    tolerances: dict
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "passed": bool(self.passed),
            "parameters": _jsonable(self.parameters),
            "measured": _jsonable(self.measured),
            "tolerances": _jsonable(self.tolerances),
            "notes": list(self.notes),
        }


# -- shared probes ---------------------------------------------------------------

def _smooth_field(seed: int, grid: SpaceTimeGrid) -> np.ndarray:
    """Low-order random Fourier field sampled at cell midpoints.

    The same seed on a refined grid samples the same function, which is what
    lets the oracle-gap and operator-norm probes compare resolutions.
    """
    rng = np.random.default_rng(seed)
    mesh = grid.mesh()
    tt, xx = mesh[0], mesh[1]
    out = np.zeros(grid.shape)
    span = grid.t_max - grid.t_min
    for k in range(1, 6):
        a, phi, psi = rng.standard_normal(3)
        out += (a / k**2) * np.cos(k * math.pi * xx / grid.length + phi) * np.cos(
            k * math.pi * (tt - grid.t_min) / span + psi
        )
    return out


def _window_moment(
    f: GridFunction,
    spec: KernelSpec,
    op: str,
    win: tuple[float, float],
    t_lo: float,
    t_hi: float,
    gl_order: int = 6,
) -> float:
    """∫_{t_lo}^{t_hi} ∫_{win} (Tf or T*f)(t, x) dx dt, n = 1.

    The spatial integral is closed form: exact per cell for the whole-space
    kernel, a per-cell two-point Gauss rule on the erf window mass for the
    half-line kernels.  Time panels break at every slab edge of f (the
    telescoped image has kinks there) and double geometrically past the grid
    horizon, with Gauss-Legendre nodes inside each panel.
    """
    grid = f.grid
    if grid.n != 1:
        raise ValueError("window moments are one-dimensional")
    if op not in ("T", "Tstar"):
        raise ValueError("op must be 'T' or 'Tstar'")
    g = _operator_input(f, spec)
    slabs = time_slabs(f)
    lo_e, hi_e = grid.x_edges[:-1], grid.x_edges[1:]
    d = grid.h / (2.0 * math.sqrt(3.0))
    ypts = (grid.xs - d, grid.xs + d)

    def W(u: float) -> np.ndarray:
        if spec.is_whole:
            return cell_window_mass(u, lo_e, hi_e, win[0], win[1])
        return 0.5 * grid.h * (
            window_mass(u, win[0], win[1], ypts[0], spec)
            + window_mass(u, win[0], win[1], ypts[1], spec)
        )

    def S(t: float) -> float:
        out = 0.0
        for k, sl in enumerate(slabs):
            a, b = sl.a, sl.b
            if op == "T":
                if t <= a:
                    break
                u1, u2 = t - a, max(t - b, 0.0)
            else:
                if b <= t:
                    continue
                u1, u2 = b - t, max(a - t, 0.0)
            out += float(g[k] @ (W(u1) - W(u2)))
        return out

    edges = {t_lo, t_hi}
    edges.update(float(e) for e in grid.t_edges if t_lo < e < t_hi)
    if t_hi > grid.t_max:
        e = max(grid.t_max, t_lo) * 2.0
        while e < t_hi:
            edges.add(e)
            e *= 2.0
    edges = sorted(edges)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        # the image behaves like sqrt(t - edge) just past a slab edge (and
        # like sqrt(edge - t) just before one for T*); a square-root
        # substitution at the singular end keeps the panels spectral
        ss, ws = _gl_nodes(0.0, math.sqrt(b - a), gl_order)
        if op == "T":
            total += sum(2.0 * s * w * S(a + s * s) for s, w in zip(ss, ws))
        else:
            total += sum(2.0 * s * w * S(b - s * s) for s, w in zip(ss, ws))
    return total


def _annulus_rows(outer: ParabolicBall, grid: SpaceTimeGrid, rows_target: int):
    """Midpoint time rows + weights covering the outer ball's time range.

    Rows never cross a slab edge of the grid (the image is smooth between
    kinks, so the midpoint rule keeps its order); past the grid horizon the
    panels double geometrically.
    """
    t_lo = max(0.0, outer.t0 - outer.radius**2)
    t_hi = outer.t0 + outer.radius**2
    edges = {t_lo, t_hi}
    edges.update(float(e) for e in grid.t_edges if t_lo < e < t_hi)
    if t_hi > grid.t_max:
        e = max(grid.t_max, t_lo, grid.tau) * 2.0
        while e < t_hi:
            edges.add(e)
            e *= 2.0
    edges = sorted(edges)
    span = t_hi - t_lo
    rows, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        q = max(1, round(rows_target * (b - a) / span))
        w = (b - a) / q
        rows.extend(a + (m + 0.5) * w for m in range(q))
        weights.extend([w] * q)
    return np.asarray(rows), np.asarray(weights)


def image_molecule_report(
    f: GridFunction,
    Q: ParabolicBall,
    op: str,
    alpha: float,
    J: int,
    spec: KernelSpec = WHOLE,
    nx_loc: int = 24,
    rows_target: int = 10,
) -> tuple[MoleculeReport, float]:
    """Molecule profile of Tf or T*f around Q, measured on annulus-local lattices.

    Returns the report plus the largest single-row mass sup_t ∫|image(t, ·)| dx
    seen along the way (the natural denominator for per-time mean checks).
    Half-line kernels restrict the lattice to x > 0; the volume weights keep
    only the time truncation, which shifts the constant, not the exponent.
    """
    if f.grid.n != 1:
        raise ValueError("image certification lattices are one-dimensional")
    op_at = {"T": apply_T_at, "Tstar": apply_Tstar_at}[op]
    x0 = _x0(Q)
    norms = []
    row_l1_max = 0.0
    for j in range(1, J + 1):
        ann = Annulus(Q, j)
        outer = ann.outer
        R = outer.radius
        rows, wts = _annulus_rows(outer, f.grid, rows_target)
        if j == 1:
            # the first annulus contains the support of f, where the active
            # slab leaves the cell jumps of g in the image; nodes aligned with
            # the input midpoints integrate the piecewise-constant part exactly
            hx = f.grid.h
            k_lo = math.floor((x0 - R + f.grid.length) / hx)
            k_hi = math.ceil((x0 + R + f.grid.length) / hx)
            xs = -f.grid.length + (np.arange(k_lo, k_hi) + 0.5) * hx
        else:
            hx = 2.0 * R / nx_loc
            xs = x0 - R + (np.arange(nx_loc) + 0.5) * hx
        if not spec.is_whole:
            xs = xs[xs > 0.0]
        acc = 0.0
        for t, w in zip(rows, wts):
            vals = op_at(f, float(t), xs, spec)
            msk = ann.mask(np.full(xs.shape, t), xs)
            if msk.any():
                acc += float((vals[msk] ** 2).sum()) * w * hx
            row_l1_max = max(row_l1_max, float(np.abs(vals).sum()) * hx)
        norms.append(math.sqrt(acc) * math.sqrt(truncated_volume(outer)))
    outer = dilate(Q, 2.0 ** (J + 1))
    R = outer.radius
    win = (x0 - R, x0 + R) if spec.is_whole else (0.0, x0 + R)
    moment = _window_moment(
        f, spec, op, win, max(0.0, outer.t0 - R**2), outer.t0 + R**2
    )
    report = MoleculeReport(Q, alpha, tuple(range(1, J + 1)), tuple(norms), moment)
    return report, row_l1_max


def random_hz_atom(seed: int) -> tuple[GridFunction, ParabolicBall]:
    """Random (1, ∞)-atom for the zero-extension space, on its own small grid.

    Supported in Q ∩ X with sup norm 1/ν(Q ∩ X) and vanishing mean there;
    roughly a third of the balls straddle the t = 0 face.
    """
    rng = np.random.default_rng(seed)
    r = float(rng.uniform(0.2, 0.45))
    if rng.random() < 0.35:
        t0 = float(rng.uniform(0.3, 0.9)) * r * r
    else:
        t0 = float(rng.uniform(1.0, 5.0)) * r * r
    x0 = float(rng.uniform(-0.25, 0.25))
    Q = ball(t0, x0, r)
    grid = SpaceTimeGrid(1, 0.8, 40, 0.0, 1.05 * (t0 + r * r), 14)
    mesh = grid.mesh()
    mask = Q.mask(*mesh)
    vals = _bump_field(grid, mask, rng)
    vals[mask] -= vals[mask].mean()
    peak = np.abs(vals).max()
    if peak == 0.0:
        raise ValueError("degenerate sample; use another seed")
    vals /= peak * truncated_volume(Q)
    return GridFunction(grid, vals), Q


def _moment_scale(a: GridFunction, Q: ParabolicBall) -> float:
    return math.sqrt(truncated_volume(Q)) * lp_norm(a, 2)


def certify_T_on_atom(
    a: GridFunction,
    Q: ParabolicBall,
    settings: Settings = Settings(),
    spec: KernelSpec = WHOLE,
) -> tuple[MoleculeReport, ExperimentResult]:
    """Certify Ta as a mean-zero molecule adapted to Q.

    Gates: fitted decay exponent at least settings.alpha, and the moment of
    Ta over 2^(J+1)Q ∩ X below moment_rel_tol relative to ν(Q)^(1/2) ‖a‖₂.
    The zero atom certifies trivially (its image is identically zero).
    """
    if float(np.abs(a.values).max()) == 0.0:
        report = MoleculeReport(
            Q, settings.alpha, tuple(range(1, settings.J + 1)),
            (0.0,) * settings.J, 0.0,
        )
        result = ExperimentResult(
            experiment="certify_T_on_atom",
            passed=True,
            parameters={"zero_input": True, "J": settings.J},
            measured={"fitted_alpha": report.fitted_alpha, "moment": 0.0},
            tolerances=settings.subset("alpha", "moment_rel_tol"),
            notes=("zero input: Ta vanishes identically",),
        )
        return report, result
    report, _ = image_molecule_report(a, Q, "T", settings.alpha, settings.J, spec=spec)
    mom_rel = abs(report.moment) / _moment_scale(a, Q)
    ok = report.certifies(settings.alpha) and mom_rel <= settings.moment_rel_tol
    result = ExperimentResult(
        experiment="certify_T_on_atom",
        passed=bool(ok),
        parameters={"ball": {"t0": Q.t0, "x0": Q.center.x, "radius": Q.radius},
                    "J": settings.J},
        measured={
            "fitted_alpha": report.fitted_alpha,
            "constant": report.constant,
            "moment_rel": mom_rel,
        },
        tolerances=settings.subset("alpha", "moment_rel_tol"),
    )
    return report, result


# -- experiments ------------------------------------------------------------------

def telescoping_oracle(settings: Settings = Settings()) -> ExperimentResult:
    """Telescoped evaluation of T against the independent Duhamel quadrature.

    Over random smooth inputs: the L² gap stays within oracle_factor times the
    spatial quadrature budget, the relative error is below oracle_rel, and
    halving h shrinks the gap by at least oracle_improvement (the comparison
    rule is fourth order in h).
    """
    _require_1d(settings, "telescoping_oracle")
    L, nx, T, nt = settings.oracle_grid
    grid = SpaceTimeGrid(1, L, int(nx), 0.0, T, int(nt))
    fine = SpaceTimeGrid(1, L, 2 * int(nx), 0.0, T, int(nt))
    rels, factors, improvements = [], [], []
    for i in range(settings.oracle_inputs):
        seed = settings.seed * 100003 + i
        f = GridFunction(grid, _smooth_field(seed, grid))
        ref = duhamel_reference(f)
        gap = lp_norm(apply_T(f) - ref, 2)
        rels.append(gap / lp_norm(ref, 2))
        factors.append(gap / spatial_quadrature_error(f, grid.tau / 8.0))
        f2 = GridFunction(fine, _smooth_field(seed, fine))
        gap2 = lp_norm(apply_T(f2) - duhamel_reference(f2), 2)
        improvements.append(gap / gap2 if gap2 > 0 else math.inf)
    passed = (
        max(rels) <= settings.oracle_rel
        and max(factors) <= settings.oracle_factor
        and min(improvements) >= settings.oracle_improvement
    )
    return ExperimentResult(
        experiment="telescoping_oracle",
        passed=bool(passed),
        parameters={"grid": asdict(grid), "inputs": settings.oracle_inputs,
                    "u_switch": grid.tau / 8.0},
        measured={
            "max_rel_error": max(rels),
            "max_gap_over_budget": max(factors),
            "min_refinement_gain": min(improvements),
            "rel_errors": rels,
        },
        tolerances=settings.subset("oracle_rel", "oracle_factor", "oracle_improvement"),
    )


def atom_images(settings: Settings = Settings()) -> ExperimentResult:
    """Ta is a mean-zero molecule, uniformly over random (1, ∞)-atoms.

    Per atom: fitted decay exponent ≥ alpha, moment below moment_rel_tol, and
    at mean_times sampled times the spatial mean of Ta(t, ·) below
    mean_value_tol relative to the largest single-time mass.  Across atoms the
    molecule constants stay inside a uniformity_band factor band.
    """
    _require_1d(settings, "atom_images")
    fitted, constants, moments, means = [], [], [], []
    l1_diag = []
    for i in range(settings.n_atoms):
        seed = settings.seed * 7919 + i
        a, Q = random_hz_atom(seed)
        report, row_l1 = image_molecule_report(a, Q, "T", settings.alpha, settings.J)
        fitted.append(report.fitted_alpha)
        constants.append(report.constant)
        moments.append(abs(report.moment) / _moment_scale(a, Q))
        # sampled-time spatial means, exact-in-x window masses
        rng = np.random.default_rng(seed + 1)
        grid = a.grid
        t_top = grid.t_max
        g = _operator_input(a, WHOLE)
        worst = 0.0
        for t in np.exp(rng.uniform(math.log(0.05 * t_top), math.log(2.0 * t_top),
                                    settings.mean_times)):
            reach = 0.8 + 8.0 * math.sqrt(t)
            acc = 0.0
            for k, sl in enumerate(time_slabs(a)):
                if t <= sl.a:
                    break
                u1, u2 = t - sl.a, max(t - sl.b, 0.0)
                w1 = cell_window_mass(u1, grid.x_edges[:-1], grid.x_edges[1:],
                                      -reach, reach)
                w2 = cell_window_mass(u2, grid.x_edges[:-1], grid.x_edges[1:],
                                      -reach, reach)
                acc += float(g[k] @ (w1 - w2))
            worst = max(worst, abs(acc) / row_l1 if row_l1 > 0 else 0.0)
        means.append(worst)
        if i < 5:
            l1_diag.append(row_l1 * math.sqrt(truncated_volume(Q)) /
                           _moment_scale(a, Q))
    band = max(constants) / min(constants)
    passed = (
        min(fitted) >= settings.alpha - 1e-9
        and band <= settings.uniformity_band
        and max(moments) <= settings.moment_rel_tol
        and max(means) <= settings.mean_value_tol
    )
    return ExperimentResult(
        experiment="atom_images",
        passed=bool(passed),
        parameters={"n_atoms": settings.n_atoms, "J": settings.J,
                    "mean_times": settings.mean_times},
        measured={
            "min_fitted_alpha": min(fitted),
            "constant_band": band,
            "constants": constants,
            "max_moment_rel": max(moments),
            "max_mean_rel": max(means),
            "peak_time_mass_diagnostic": l1_diag,
        },
        tolerances=settings.subset(
            "alpha", "uniformity_band", "moment_rel_tol", "mean_value_tol"
        ),
        notes=("peak_time_mass_diagnostic is reported, not gated",),
    )


def _tstar_atom(kind: AtomKind, seed: int) -> tuple[GridFunction, ParabolicBall]:
    rng = np.random.default_rng(seed)
    r = float(rng.uniform(0.15, 0.3))
    if kind is AtomKind.TYPE_A:
        t0 = float(rng.uniform(16.5, 22.0)) * r * r
    else:
        t0 = float(rng.uniform(4.4, 14.0)) * r * r
    x0 = float(rng.uniform(-0.2, 0.2))
    Q = ball(t0, x0, r)
    t_lo = max(0.0, t0 - 1.2 * r * r)
    grid = SpaceTimeGrid(1, 0.7, 36, t_lo, t0 + 1.05 * r * r, 14)
    return make_atom(grid, Q, kind, seed=seed), Q


def tstar_images(settings: Settings = Settings()) -> ExperimentResult:
    """T* sends boundary-adapted atoms to molecules, faster for the boundary kind.

    Interior atoms (4Q ⊆ X): mean-zero molecules with fitted exponent ≥ alpha.
    Boundary-band atoms (2Q ⊆ X only): fitted exponent ≥ bfit_min — the
    anticausal image dies off Gaussian-fast in the annulus index — with the
    (unforced) moment recorded.  Anticausality itself is checked exactly:
    T*a(t, ·) = 0 once t clears the support.
    """
    _require_1d(settings, "tstar_images")
    fitted_a, moments_a, fitted_b, moments_b = [], [], [], []
    anticausal_max = 0.0
    for i in range(settings.n_tstar_atoms):
        seed = settings.seed * 6007 + i
        a, Qa = _tstar_atom(AtomKind.TYPE_A, seed)
        rep, _ = image_molecule_report(a, Qa, "Tstar", settings.alpha, settings.J)
        fitted_a.append(rep.fitted_alpha)
        moments_a.append(abs(rep.moment) / _moment_scale(a, Qa))
        b, Qb = _tstar_atom(AtomKind.TYPE_B, seed)
        rep_b, _ = image_molecule_report(b, Qb, "Tstar", settings.alpha, settings.J)
        fitted_b.append(rep_b.fitted_alpha)
        moments_b.append(abs(rep_b.moment) / _moment_scale(b, Qb))
        # discrete anticausality: zero above the last slab edge carrying mass
        # (the grid smears the support top t0 + r² by at most one slab)
        t_past = max(sl.b for k, sl in enumerate(time_slabs(b))
                     if np.abs(b.values[k]).max() > 0)
        probe = apply_Tstar_at(b, t_past, np.linspace(-0.6, 0.6, 9))
        anticausal_max = max(anticausal_max, float(np.abs(probe).max()))
    passed = (
        min(fitted_a) >= settings.alpha - 1e-9
        and max(moments_a) <= settings.moment_rel_tol
        and min(fitted_b) >= settings.bfit_min
        and anticausal_max == 0.0
    )
    return ExperimentResult(
        experiment="tstar_images",
        passed=bool(passed),
        parameters={"n_atoms_per_kind": settings.n_tstar_atoms, "J": settings.J},
        measured={
            "min_fitted_interior": min(fitted_a),
            "max_moment_rel_interior": max(moments_a),
            "min_fitted_boundary": min(fitted_b),
            "max_moment_rel_boundary": max(moments_b),
            "anticausal_max": anticausal_max,
        },
        tolerances=settings.subset("alpha", "moment_rel_tol", "bfit_min"),
        notes=("boundary-kind moments are recorded, not gated",),
    )


def _box_cone_integral(a: float, b: float) -> float:
    """∫_a^b ∫_{|x| ≤ √t/2} |Tf| dx dt for f = χ_{(0,1)×(-1,1)}, closed form in x.

    For t ≥ 1 the slab is completed: Tf(t, x) = E(t, x) - E(t-1, x) with
    E(u, x) the heat mass of the unit box, single-signed (negative) on the
    cone |x| ≤ √t/2, so |Tf| integrates to the difference of window masses.
    """
    def inner(t: float) -> float:
        W = 0.5 * math.sqrt(t)
        return float(cell_window_mass(t - 1.0, -1.0, 1.0, -W, W)
                     - cell_window_mass(t, -1.0, 1.0, -W, W))

    val, _ = quad(inner, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def growth_T(settings: Settings = Settings()) -> ExperimentResult:
    """T of an indicator box leaves no Hardy-type space: logarithmic mass growth.

    I(T) = ∫_4^T ∫_{|x| ≤ √t/2} |Tf| with f = χ_{(0,1)×(-1,1)} grows like
    c log T: the dyadic increments I(2T) - I(T) are positive and level within
    dyadic_spread, the least-squares slope against log T is positive, while
    finite_norm_bound still certifies the same f with a finite bound.
    """
    _require_1d(settings, "growth_T")
    Ts = (4.0,) + tuple(settings.growth_T_values)
    I = {}
    acc = 0.0
    for a, b in zip(Ts[:-1], Ts[1:]):
        acc += _box_cone_integral(a, b)
        I[b] = acc
    vals = [I[T] for T in settings.growth_T_values]
    diffs = [b - a for a, b in zip(vals[:-1], vals[1:])]
    spread = (max(diffs) - min(diffs)) / min(diffs) if min(diffs) > 0 else math.inf
    logs = np.log([T for T in settings.growth_T_values])
    slope, intercept = np.polyfit(logs, vals, 1)
    resid = float(np.abs(np.asarray(vals) - (slope * logs + intercept)).max())
    # single-signedness spot check on the cone
    sign_max = -math.inf
    for t in np.linspace(4.0, max(Ts), 37):
        W = 0.5 * math.sqrt(t)
        for x in np.linspace(-W, W, 21):
            tf = float(window_mass(t, -1.0, 1.0, x) - window_mass(t - 1.0, -1.0, 1.0, x))
            sign_max = max(sign_max, tf)
    # the same box is certified by the odd-extension route
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 4.0, 32)
    tt, xx = grid.mesh()
    f = GridFunction(grid, ((tt < 1.0) & (np.abs(xx) < 1.0)).astype(float))
    bound = finite_norm_bound(f, strategy="r_odd")
    passed = (
        min(diffs) > 0.0
        and spread <= settings.dyadic_spread
        and slope > 0.0
        and sign_max <= 0.0
        and math.isfinite(bound.value)
    )
    return ExperimentResult(
        experiment="growth_T",
        passed=bool(passed),
        parameters={"T_values": list(settings.growth_T_values), "t_start": 4.0},
        measured={
            "growth_table": [[float(T), float(I[T])] for T in settings.growth_T_values],
            "dyadic_increments": diffs,
            "dyadic_spread": spread,
            "log_slope": float(slope),
            "fit_residual_max": resid,
            "cone_sign_max": sign_max,
            "h1r_bound": bound.value,
        },
        tolerances=settings.subset("dyadic_spread"),
        notes=("growth_table columns: T, I_T",),
    )


def growth_Tstar(settings: Settings = Settings()) -> ExperimentResult:
    """The time-derivative kernel mass diverges logarithmically under truncation.

    c = ∫|∂_t p_t(x)| dx at t = 1 by direct quadrature matches the closed form
    sqrt(2/π) e^{-1/2} to c_abs_tol; the time-truncated mass
    G(T) = ∫_1^T ∫|∂_t p_u| dx du, with the inner integral quadratured at every
    panel node, grows with slope c against log T to within slope_rel_tol.
    """
    _require_1d(settings, "growth_Tstar")
    def c_at(u: float) -> float:
        xstar = math.sqrt(2.0 * u)
        body = lambda x: abs(gauss_kernel_dt(u, x * x, 1))
        lo, _ = quad(body, 0.0, xstar, epsabs=1e-13)
        hi, _ = quad(body, xstar, xstar + 40.0 * math.sqrt(u), epsabs=1e-13)
        return 2.0 * (lo + hi)

    c_quad = c_at(1.0)
    scaling = max(abs(u * c_at(u) - c_quad) / c_quad for u in (2.0, 17.0, 230.0))
    T_values = (4.0, 16.0, 64.0, 256.0, 1024.0)
    edges = [1.0]
    while edges[-1] < T_values[-1]:
        edges.append(min(edges[-1] * 2.0, T_values[-1]))
    G, acc = {}, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        us, ws = _gl_nodes(a, b, 8)
        acc += sum(w * c_at(float(u)) for u, w in zip(us, ws))
        if b in T_values:
            G[b] = acc
    logs = np.log(T_values)
    slope, _ = np.polyfit(logs, [G[T] for T in T_values], 1)
    passed = (
        abs(c_quad - C_TSTAR) <= settings.c_abs_tol
        and abs(slope - c_quad) / c_quad <= settings.slope_rel_tol
    )
    return ExperimentResult(
        experiment="growth_Tstar",
        passed=bool(passed),
        parameters={"T_values": list(T_values), "t_min": 1.0},
        measured={
            "c_quadrature": c_quad,
            "c_closed_form": C_TSTAR,
            "c_gap": abs(c_quad - C_TSTAR),
            "scaling_defect": scaling,
            "growth_table": [[float(T), float(G[T])] for T in T_values],
            "log_slope": float(slope),
            "slope_rel_gap": abs(slope - c_quad) / c_quad,
        },
        tolerances=settings.subset("c_abs_tol", "slope_rel_tol"),
        notes=("growth_table columns: T, I_T",),
    )


def roundtrips(settings: Settings = Settings()) -> ExperimentResult:
    """Decomposition round trips at their advertised exactness.

    Restriction: zero residual and in-bound cover overlap on random straddling
    balls.  Even-extension: residual at rounding scale.  Molecule reduction:
    tail residual C 2^(-J alpha) with C logged.

    With n=2 only the restriction leg runs (bound 64 instead of 16); the
    remaining legs are one-dimensional in this battery.
    """
    if settings.n not in WHITNEY_OVERLAP_BOUND:
        raise ValueError(f"roundtrips supports n in {sorted(WHITNEY_OVERLAP_BOUND)}")
    if settings.n == 2:
        grid_N = SpaceTimeGrid(2, 1.0, 20, -0.5, 0.5, 40)
        n_balls = min(settings.n_roundtrip_balls, 20)  # 2-d covers are wide
    else:
        grid_N = SpaceTimeGrid(1, 3.0, 48, -2.0, 2.0, 64)
        n_balls = settings.n_roundtrip_balls
    overlaps, constants = [], []
    for i in range(n_balls):
        rng = np.random.default_rng(settings.seed * 4001 + i)
        if settings.n == 2:
            r = float(rng.uniform(0.15, 0.4))
            x0 = tuple(rng.uniform(-0.4, 0.4, size=2))
        else:
            r = float(rng.uniform(0.3, 0.9))
            x0 = float(rng.uniform(-2.0, 2.0))
        Q = ball(float(rng.uniform(0.15, 0.95)) * r * r, x0, r)
        A = make_atom(grid_N, Q, AtomKind.CLASSICAL_2, seed=i)
        dec = restrict_decompose(A, Q)
        if dec.residual != 0.0:
            raise AssertionError("restriction residual must be exactly zero")
        overlaps.append(dec.ledger["overlap_max"])
        constants.append(dec.ledger["coefficient_constant_raw"])
    if settings.n == 2:
        return ExperimentResult(
            experiment="roundtrips",
            passed=bool(max(overlaps) <= WHITNEY_OVERLAP_BOUND[2]),
            parameters={"n": 2, "n_balls": n_balls},
            measured={"restrict_residual_max": 0.0,
                      "overlap_max": max(overlaps),
                      "coefficient_constant_max": max(constants)},
            tolerances={"overlap_bound": WHITNEY_OVERLAP_BOUND[2]},
            notes=("restriction leg only: the even-extension and molecule legs "
                   "are one-dimensional",),
        )
    hz_resid = []
    grid_hz = SpaceTimeGrid(1, 4.0, 64, -6.0, 6.0, 96)
    for i in range(settings.n_hz_given):
        rng = np.random.default_rng(settings.seed * 5003 + i)
        terms = []
        for k in range(2):
            r = float(rng.uniform(0.6, 1.2))
            Qk = ball(float(rng.uniform(-3.0, 3.0)), float(rng.uniform(-2.5, 2.5)), r)
            Ak = make_atom(grid_hz, Qk, AtomKind.CLASSICAL_2, seed=i * 10 + k)
            c = float(rng.uniform(0.5, 2.0))
            terms.append(Term(c, Ak, Qk, AtomKind.CLASSICAL_2))
            Qm = ball(-Qk.t0, Qk.center.x, r)
            terms.append(Term(c, time_reflect(Ak), Qm, AtomKind.CLASSICAL_2))
        given = Decomposition(terms=tuple(terms), residual=0.0)
        f = restrict(given.reconstruct())
        out = hz_decompose(f, given)
        hz_resid.append(out.residual / max(1.0, lp_norm(f, 1)))
    mol_grid = SpaceTimeGrid(1, 1.8, 72, 0.0, 2.6, 104)
    mol_ball = ball(0.02, 0.0, 0.05)
    tail_constants = []
    for J in (2, 3, 4):
        m = make_molecule(mol_grid, mol_ball, alpha=settings.alpha, J=J,
                          seed=settings.seed, moment_profile="geometric")
        dec = molecule_decompose(m, mol_ball, alpha=settings.alpha, J=J)
        tail_constants.append(dec.residual * 2.0 ** (J * settings.alpha))
    passed = (
        max(overlaps) <= WHITNEY_OVERLAP_BOUND[1]
        and max(hz_resid) <= settings.hz_residual_tol
        and max(tail_constants) <= settings.molecule_tail_constant
    )
    return ExperimentResult(
        experiment="roundtrips",
        passed=bool(passed),
        parameters={"n": 1, "n_balls": settings.n_roundtrip_balls,
                    "n_hz_given": settings.n_hz_given, "alpha": settings.alpha},
        measured={
            "restrict_residual_max": 0.0,
            "overlap_max": max(overlaps),
            "coefficient_constant_max": max(constants),
            "hz_residual_max": max(hz_resid),
            "molecule_tail_constants": tail_constants,
        },
        tolerances=settings.subset("hz_residual_tol", "molecule_tail_constant"),
        notes=(f"whitney overlap bound: {WHITNEY_OVERLAP_BOUND[1]} (n = 1)",),
    )


def l2_stability(settings: Settings = Settings()) -> ExperimentResult:
    """The empirical L² operator norm of T is stable under dyadic refinement.

    The sup of ‖Tf‖₂/‖f‖₂ over smooth random inputs, recomputed on three
    dyadically refined grids, drifts by at most l2_drift between neighbours.
    """
    _require_1d(settings, "l2_stability")
    grids = [SpaceTimeGrid(1, 2.0, 24, 0.0, 2.0, 12)]
    for _ in range(2):
        grids.append(grids[-1].refine(2))
    sups = []
    for grid in grids:
        best = 0.0
        for i in range(settings.l2_inputs):
            f = GridFunction(grid, _smooth_field(settings.seed * 3001 + i, grid))
            best = max(best, lp_norm(apply_T(f), 2) / lp_norm(f, 2))
        sups.append(best)
    drifts = [abs(b - a) / a for a, b in zip(sups[:-1], sups[1:])]
    return ExperimentResult(
        experiment="l2_stability",
        passed=bool(max(drifts) <= settings.l2_drift),
        parameters={"grids": [asdict(g) for g in grids],
                    "inputs": settings.l2_inputs},
        measured={"operator_norms": sups, "max_drift": max(drifts)},
        tolerances=settings.subset("l2_drift"),
    )


def lp_probe(settings: Settings = Settings()) -> ExperimentResult:
    """Empirical Lᵖ → Lᵖ ratios: stable for p > 1, growing mass for p = 1.

    For each p the sup of ‖Tf‖ₚ/‖f‖ₚ over smooth inputs may grow by at most
    lp_ratio_max per dyadic refinement.  The p = 1 contrast drives the
    indicator box through growing time horizons at fixed resolution and wants
    strictly growing ratios (the logarithmic mass escaping any L¹ bound).
    The zero input maps to ratio zero.
    """
    _require_1d(settings, "lp_probe")
    grids = [SpaceTimeGrid(1, 2.0, 16, 0.0, 2.0, 8)]
    for _ in range(2):
        grids.append(grids[-1].refine(2))
    table: dict[float, list[float]] = {p: [] for p in settings.lp_exponents}
    for grid in grids:
        fields = [GridFunction(grid, _smooth_field(settings.seed * 2003 + i, grid))
                  for i in range(settings.l2_inputs)]
        images = [apply_T(f) for f in fields]
        for p in settings.lp_exponents:
            table[p].append(max(lp_norm(g, p) / lp_norm(f, p)
                                for f, g in zip(fields, images)))
    ratio_max = max(b / a for sups in table.values()
                    for a, b in zip(sups[:-1], sups[1:]))
    l1_ratios = []
    for t_max in (4.0, 16.0, 64.0):
        L = 2.0 * math.sqrt(t_max)
        grid = SpaceTimeGrid(1, L, int(L / 0.125), 0.0, t_max, int(t_max / 0.25))
        tt, xx = grid.mesh()
        f = GridFunction(grid, ((tt < 1.0) & (np.abs(xx) < 1.0)).astype(float))
        l1_ratios.append(lp_norm(apply_T(f), 1) / lp_norm(f, 1))
    zero = GridFunction(grids[0], np.zeros(grids[0].shape))
    zero_norm = lp_norm(apply_T(zero), 2)
    growing = all(b > a for a, b in zip(l1_ratios[:-1], l1_ratios[1:]))
    passed = (
        ratio_max <= settings.lp_ratio_max
        and growing
        and l1_ratios[-1] / l1_ratios[0] >= settings.lp1_growth_min
        and zero_norm == 0.0
    )
    return ExperimentResult(
        experiment="lp_probe",
        passed=bool(passed),
        parameters={"exponents": list(settings.lp_exponents),
                    "l1_horizons": [4.0, 16.0, 64.0]},
        measured={
            "ratio_tables": {str(p): sups for p, sups in table.items()},
            "max_refinement_ratio": ratio_max,
            "l1_contrast_ratios": l1_ratios,
            "zero_image_norm": zero_norm,
        },
        tolerances=settings.subset("lp_ratio_max", "lp1_growth_min"),
    )


def _wall_atom(x0: float, r: float, seed: int, nx: int = 48,
               length: float = 1.0) -> tuple[GridFunction, ParabolicBall]:
    """Mean-zero sup-normalised atom at distance x0 from the wall, t0 = 2r²."""
    Q = ball(2.0 * r * r, x0, r)
    grid = SpaceTimeGrid(1, length, nx, 0.0, 1.05 * (Q.t0 + r * r), 12)
    rng = np.random.default_rng(seed)
    mesh = grid.mesh()
    mask = Q.mask(*mesh) & (mesh[1] > 0.0)
    vals = _bump_field(grid, mask, rng)
    vals[mask] -= vals[mask].mean()
    vals /= np.abs(vals).max() * truncated_volume(Q)
    return GridFunction(grid, vals), Q


def boundary_dichotomy(kind: str, settings: Settings = Settings()) -> ExperimentResult:
    """Conservative vs absorbing wall: the mean of Ta survives or dies with mass.

    Neumann: the image kernel conserves mass, so every atom keeps
    |∬ Ta| ≤ neumann_moment_max relative.  Dirichlet: the atom hugging the
    wall (x0 = r) leaks mass and its moment exceeds dirichlet_moment_min,
    while an atom at x0 ≥ 20 √t_max behaves like the whole-space one.  In both
    regimes the near-wall image still certifies annulus decay.

    The moment is taken over the horizon (0, 4 t_max) × Ω: past the support
    the absorbing wall eventually drains every image to mean zero, so the
    dichotomy lives in the transient just after the atom switches off.
    """
    _require_1d(settings, "boundary_" + kind)
    if kind not in ("dirichlet", "neumann"):
        raise ValueError("kind must be 'dirichlet' or 'neumann'")
    spec = KernelSpec(
        boundary=HALF_LINE_DIRICHLET if kind == "dirichlet" else HALF_LINE_NEUMANN
    )
    r = 0.25
    near, Q_near = _wall_atom(r, r, seed=settings.seed * 11 + 1)
    mid, Q_mid = _wall_atom(3.0 * r, r, seed=settings.seed * 11 + 2)
    far_x = 20.0 * math.sqrt(1.05 * 3.0 * r * r) + r
    far, Q_far = _wall_atom(far_x, r, seed=settings.seed * 11 + 3,
                            nx=384, length=far_x + 2.0 * r)

    def moment_rel(a: GridFunction, Q: ParabolicBall) -> float:
        horizon = 4.0 * a.grid.t_max
        x0 = _x0(Q)
        win = (0.0, x0 + 2.0 * Q.radius + 8.0 * math.sqrt(horizon))
        m = _window_moment(a, spec, "T", win, 0.0, horizon)
        return abs(m) / _moment_scale(a, Q)

    rel_near = moment_rel(near, Q_near)
    rel_mid = moment_rel(mid, Q_mid)
    rel_far = moment_rel(far, Q_far)
    report, _ = image_molecule_report(near, Q_near, "T", settings.alpha,
                                      settings.J, spec=spec)
    if kind == "neumann":
        worst = max(rel_near, rel_mid, rel_far)
        passed = worst <= settings.neumann_moment_max and report.certifies(settings.alpha)
        measured = {"max_moment_rel": worst, "near_fitted_alpha": report.fitted_alpha,
                    "moment_rels": [rel_near, rel_mid, rel_far]}
        tols = settings.subset("neumann_moment_max", "alpha")
    else:
        passed = (
            rel_near >= settings.dirichlet_moment_min
            and rel_far <= settings.far_moment_max
            and report.certifies(settings.alpha)
        )
        measured = {"near_moment_rel": rel_near, "mid_moment_rel": rel_mid,
                    "far_moment_rel": rel_far,
                    "near_fitted_alpha": report.fitted_alpha}
        tols = settings.subset("dirichlet_moment_min", "far_moment_max", "alpha")
    return ExperimentResult(
        experiment=f"boundary_{kind}",
        passed=bool(passed),
        parameters={"radius": r, "near_x0": r, "far_x0": far_x,
                    "moment_horizon": 4.0 * near.grid.t_max},
        measured=measured,
        tolerances=tols,
    )


def boundary_dirichlet(settings: Settings = Settings()) -> ExperimentResult:
    """Absorbing wall: the image mean survives near the wall, dies far away."""
    return boundary_dichotomy("dirichlet", settings)


def boundary_neumann(settings: Settings = Settings()) -> ExperimentResult:
    """Conservative wall: the image mean vanishes for every atom."""
    return boundary_dichotomy("neumann", settings)


EXPERIMENTS: dict[str, Callable[[Settings], ExperimentResult]] = {
    "telescoping_oracle": telescoping_oracle,
    "atom_images": atom_images,
    "tstar_images": tstar_images,
    "growth_T": growth_T,
    "growth_Tstar": growth_Tstar,
    "roundtrips": roundtrips,
    "l2_stability": l2_stability,
    "lp_probe": lp_probe,
    "boundary_dirichlet": boundary_dirichlet,
    "boundary_neumann": boundary_neumann,
}


def run_experiment(name: str, settings: Settings = Settings()) -> ExperimentResult:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}")
    return EXPERIMENTS[name](settings)
