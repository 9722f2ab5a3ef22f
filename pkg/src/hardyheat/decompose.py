"""Constructive atomic decompositions on the parabolic half-space.

Four routes from a function (or an atom in the wrong position) to a sum of
certified atoms on X:

* ``restrict_decompose`` — restrict a classical atom to X; depending on how
  far its ball sits from the t = 0 wall this is a single type (a) or type (b)
  atom, or a Whitney-type boundary cover with one type (b) atom per cover ball.
* ``reflect_assemble`` — oddly reflect a type (b) atom through t = 0 to get a
  mean-zero classical atom on a 5x ball.
* ``hz_decompose`` — push a decomposition of the even extension back down to X
  by symmetrising and restricting each term, recentring straddling balls.
* ``molecule_decompose`` — split a certified molecule into dyadic-annulus
  atoms plus telescoping correction atoms via a finite Abel summation.

All coefficients are rounded up to the nearest power of two before the term
atom is normalised.  Division and multiplication by a power of two are exact
in binary floating point, so ``coefficient * atom`` reproduces the sliced
input values bit for bit and restriction residuals are exactly zero.  The
rounding costs at most a factor 2 in each coefficient; measured constants are
recorded in the decomposition ledger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .atoms import AtomKind, _ball_dict, molecule_report, validate_atom
from .grid import (
    GridFunction,
    SpaceTimeGrid,
    even_extend,
    integrate,
    lp_norm,
    odd_extend,
    restrict,
    time_reflect,
    write_binary,
)
from .space import (
    Annulus,
    ParabolicBall,
    ball,
    ball_volume,
    dilate,
    halfspace_flags,
    scaled_in_halfspace,
    truncated_volume,
)

#: Maximum number of cover balls sharing a point, by dimension.  The cover
#: construction yields at most 2 active layers x 2 time rows x 2^n lattice
#: cells; the bounds below leave slack for boundary effects.
WHITNEY_OVERLAP_BOUND = {1: 16, 2: 64}

_MAX_COVER_BALLS = 200_000


class DecompositionError(RuntimeError):
    """A decomposition routine could not produce certified output."""


def _pow2_at_least(s: float) -> float:
    """Smallest power of two >= s (s itself when s is one)."""
    if not (s > 0.0) or not math.isfinite(s):
        raise ValueError(f"need a positive finite scale, got {s}")
    m, e = math.frexp(s)  # s = m * 2**e with m in [0.5, 1)
    return s if m == 0.5 else math.ldexp(1.0, e)


@dataclass(frozen=True)
class Term:
    coefficient: float
    atom: GridFunction
    ball: ParabolicBall
    kind: AtomKind

    def to_json_dict(self) -> dict:
        return {
            "coefficient": float(self.coefficient),
            "kind": self.kind.value,
            "ball": _ball_dict(self.ball),
        }


@dataclass
class Decomposition:
    """A finite atomic sum approximating some input on a fixed grid.

    residual is the L1 norm of (input - sum of coefficient * atom), measured
    on the grid the routine worked on.  ledger carries measured constants the
    producing routine wants on the record; treat it as append-only.
    """

    terms: list[Term]
    residual: float
    ledger: dict = field(default_factory=dict)

    @property
    def coefficient_sum(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms))

    def reconstruct(self) -> GridFunction:
        if not self.terms:
            raise DecompositionError("cannot reconstruct from an empty decomposition")
        grid = self.terms[0].atom.grid
        acc = np.zeros(grid.shape)
        for t in self.terms:
            if t.atom.grid != grid:
                raise DecompositionError("terms live on different grids")
            acc += t.coefficient * t.atom.values
        return GridFunction(grid, acc)

    def to_json_dict(self) -> dict:
        return {
            "n_terms": len(self.terms),
            "coefficient_sum": self.coefficient_sum,
            "residual": float(self.residual),
            "ledger": self.ledger,
            "terms": [t.to_json_dict() for t in self.terms],
        }

    def spill_atoms(self, directory, prefix: str = "atom") -> list[str]:
        """Write every term atom to <directory>/<prefix>NNNNN.bin; return paths."""
        import os

        paths = []
        for i, t in enumerate(self.terms):
            p = os.path.join(os.fspath(directory), f"{prefix}{i:05d}.bin")
            write_binary(t.atom, p)
            paths.append(p)
        return paths


# -- Whitney boundary cover ----------------------------------------------------


def whitney_cover(
    Q: ParabolicBall, t_floor: float | None = None, layer_ratio: float = 4.0
) -> list[ParabolicBall]:
    """Cover Q ∩ X down to t_floor by balls with type (b) geometry.

    Layer k occupies times [A_k, B_k) with B_k = layer_ratio^(-k) * top(Q ∩ X)
    and A_k = B_k / layer_ratio.  Each layer uses balls of radius
    rho_k = sqrt(A_k) / 2: centres at time t_c in the layer then satisfy
    t_c >= 4 rho_k^2 and (for layer_ratio <= 4) t_c < 16 rho_k^2, i.e. the
    doubled ball sits in X while the quadrupled ball pokes out — exactly the
    type (b) position, for every ball, by construction.  Time rows are spaced
    rho_k^2 apart (intervals of length 2 rho_k^2, so adjacent rows overlap by
    half) and the spatial lattice has spacing rho_k.

    The advertised overlap bound is recomputed exactly and enforced on every
    call.  Balls are returned largest layer first, top row first.
    """
    if truncated_volume(Q) <= 0.0:
        raise ValueError("Q does not meet the half-space")
    two_in, _ = halfspace_flags(Q)
    if two_in:
        raise ValueError("2Q lies inside X; no boundary cover is needed")
    if not (1.0 < layer_ratio <= 4.0):
        raise ValueError("layer_ratio must lie in (1, 4]")
    r = Q.radius
    top = Q.t0 + r * r
    bottom = max(Q.t0 - r * r, 0.0)
    if t_floor is None:
        t_floor = top / 4.0**4
    if not (0.0 < t_floor < top):
        raise ValueError(f"t_floor must lie in (0, {top}), got {t_floor}")

    x0 = Q.center.x
    n = Q.n
    balls: list[ParabolicBall] = []
    k = 0
    while True:
        B_k = top * layer_ratio ** (-k)
        A_k = B_k / layer_ratio
        rho = 0.5 * math.sqrt(A_k)
        rho2 = rho * rho  # = A_k / 4
        n_rows = math.ceil((B_k - A_k) / rho2 - 0.5)
        rows = [A_k + (m + 0.5) * rho2 for m in range(n_rows)]
        rows = [t for t in rows if t + rho2 > bottom]
        reach = r + rho
        n_off = math.ceil(reach / rho)
        offs = [i * rho for i in range(-n_off, n_off + 1) if abs(i) * rho < reach]
        for t_c in rows:
            for off in product(offs, repeat=n):
                c = tuple(x0[i] + off[i] for i in range(n))
                balls.append(ball(t_c, c, rho))
                if len(balls) > _MAX_COVER_BALLS:
                    raise DecompositionError(
                        f"cover exceeds {_MAX_COVER_BALLS} balls; raise t_floor"
                    )
        if A_k <= t_floor:
            break
        k += 1

    for b in balls:
        # 2Q_j in X but 4Q_j not: guaranteed by the radius choice above
        if not scaled_in_halfspace(b, 2.0) or scaled_in_halfspace(b, 4.0):
            raise DecompositionError(f"cover ball {b} lost type (b) geometry")
    bound = WHITNEY_OVERLAP_BOUND[n]
    overlap = cover_max_overlap(balls)
    if overlap > bound:
        raise DecompositionError(f"cover overlap {overlap} exceeds the bound {bound}")
    return balls


def cover_max_overlap(cover: list[ParabolicBall]) -> int:
    """Exact maximum number of cover balls containing a common point.

    Parabolic balls are boxes in (t, x) (the spatial part is a sup-norm
    ball), so the maximum is attained on the interior of some cell of the
    endpoint arrangement; sweep elementary intervals axis by axis.
    """
    if not cover:
        return 0
    t0 = np.array([b.t0 for b in cover])
    rad = np.array([b.radius for b in cover])
    r2 = rad * rad
    X = np.array([[c for c in b.center.x] for b in cover])
    t_ev = np.unique(np.concatenate([t0 - r2, t0 + r2]))
    best = 0
    for tm in 0.5 * (t_ev[:-1] + t_ev[1:]):
        act = np.abs(tm - t0) < r2
        if int(act.sum()) <= best:
            continue
        best = _axis_overlap(X[act], rad[act], 0, best)
    return int(best)


def _axis_overlap(X: np.ndarray, rad: np.ndarray, axis: int, best: int) -> int:
    c = X[:, axis]
    ev = np.unique(np.concatenate([c - rad, c + rad]))
    mids = 0.5 * (ev[:-1] + ev[1:])
    if axis == X.shape[1] - 1:
        counts = (np.abs(mids[:, None] - c[None, :]) < rad[None, :]).sum(axis=1)
        return max(best, int(counts.max()) if counts.size else 0)
    for xm in mids:
        act = np.abs(xm - c) < rad
        if int(act.sum()) <= best:
            continue
        best = _axis_overlap(X[act], rad[act], axis + 1, best)
    return best


def cover_stats(cover: list[ParabolicBall], Q: ParabolicBall) -> dict:
    """Measured cover quality: ball count, layers, overlap, volume ratio."""
    radii = sorted({b.radius for b in cover}, reverse=True)
    vol = sum(ball_volume(b) for b in cover)
    tv = truncated_volume(Q)
    return {
        "n_balls": len(cover),
        "n_layers": len(radii),
        "overlap_max": cover_max_overlap(cover),
        "volume_sum": float(vol),
        "volume_ratio": float(vol / tv) if tv > 0 else math.inf,
    }


# -- restriction of classical atoms --------------------------------------------


def restrict_decompose(
    A: GridFunction, Q: ParabolicBall, tol: float = 1e-8
) -> Decomposition:
    """Decompose the restriction to X of a classical L2 atom.

    Three positions of Q relative to the t = 0 wall:

    * 4Q in X: the restriction is already a type (a) atom — one term.
    * 2Q in X, 4Q not: a type (b) atom — one term.
    * 2Q pokes out: Whitney cover of Q ∩ X; the cells of Q ∩ X are assigned
      to the first cover ball containing their midpoint (a disjoint partition
      refining the cover), and each slice becomes one type (b) term.  The
      reconstruction residual is exactly zero.

    The coefficient bound Cauchy–Schwarz gives — sum of coefficients over
    ||A|_X||_2 nu(Q ∩ X)^(1/2) — is measured and recorded in the ledger.
    """
    grid = A.grid
    if not grid.covers_ball(Q, clip_time=grid.over_halfspace()):
        raise DecompositionError("grid does not cover Q (clipped to X)")
    cert = validate_atom(A, Q, AtomKind.CLASSICAL_2, tol)
    if not cert.passed:
        raise DecompositionError(f"input is not a classical L2 atom: {cert.to_json_dict()}")
    if truncated_volume(Q) <= 0.0:
        raise DecompositionError("Q does not meet the half-space")

    if grid.t_min < 0.0:
        half = restrict(A)
    elif grid.over_halfspace():
        half = A
    else:
        raise DecompositionError("grid must reach t = 0 or straddle it")

    two_in, four_in = halfspace_flags(Q)
    if four_in:
        term = Term(1.0, half, Q, AtomKind.TYPE_A)
        return Decomposition([term], residual=0.0, ledger={"case": "interior"})
    if two_in:
        term = Term(1.0, half, Q, AtomKind.TYPE_B)
        return Decomposition([term], residual=0.0, ledger={"case": "boundary_band"})

    # boundary case: Whitney cover, one type (b) slice per ball
    hgrid = half.grid
    bottom = max(Q.t0 - Q.radius**2, 0.0)
    floor = max(hgrid.tau / 2.0, bottom)
    cover = whitney_cover(Q, t_floor=floor)
    mesh = hgrid.mesh()
    qmask = Q.mask(*mesh)
    unassigned = qmask.copy()
    counts = np.zeros(hgrid.shape, dtype=np.int64)
    cm = hgrid.cell_measure
    vals = half.values
    terms: list[Term] = []
    raw_sum = 0.0
    for b in cover:
        bmask = b.mask(*mesh)
        counts += bmask & qmask
        piece = bmask & unassigned
        if not piece.any():
            continue
        unassigned &= ~bmask
        w = math.sqrt(float((vals[piece] ** 2).sum()) * cm)
        if w == 0.0:
            continue
        raw = w * math.sqrt(ball_volume(b))
        raw_sum += raw
        coeff = _pow2_at_least(raw)
        av = np.zeros(hgrid.shape)
        av[piece] = vals[piece] / coeff  # exact: coeff is a power of two
        terms.append(Term(coeff, GridFunction(hgrid, av), b, AtomKind.TYPE_B))
    if unassigned.any():
        raise DecompositionError(
            f"{int(unassigned.sum())} cells of Q ∩ X escaped the cover"
        )

    dec = Decomposition(terms, residual=0.0)
    recon = dec.reconstruct() if terms else GridFunction(hgrid, np.zeros(hgrid.shape))
    dec.residual = lp_norm(half - recon, 1)
    half_l2 = lp_norm(half, 2)
    scale = half_l2 * math.sqrt(truncated_volume(Q))
    dec.ledger.update(
        {
            "case": "whitney",
            # realized bound includes the power-of-two rounding; the raw
            # Cauchy-Schwarz constant is the one stable across inputs
            "coefficient_constant": dec.coefficient_sum / scale if scale > 0 else 0.0,
            "coefficient_constant_raw": raw_sum / scale if scale > 0 else 0.0,
            "grid_overlap_max": int(counts.max()),
            **cover_stats(cover, Q),
        }
    )
    return dec


# -- reflection of type (b) atoms ----------------------------------------------


def reflect_assemble(b: GridFunction, Q: ParabolicBall, tol: float = 1e-8) -> Decomposition:
    """Odd reflection of a type (b) atom into a classical atom on a 5x ball.

    B(t, x) = b(t, x) - b(-t, x) has vanishing integral by antisymmetry and
    ||B||_2 = sqrt(2) ||b||_2; its support fits in the ball centred at
    (0, x_0) of radius 5r because type (b) geometry caps the top of Q at
    17 r^2 < 25 r^2.  The assembly constant ||B||_2 nu(5Q~)^(1/2) is recorded.
    """
    cert = validate_atom(b, Q, AtomKind.TYPE_B, tol)
    if not cert.passed:
        raise DecompositionError(f"input is not a type (b) atom: {cert.to_json_dict()}")
    B = odd_extend(b)
    Qt = ball(0.0, Q.center.x, 5.0 * Q.radius)
    c = lp_norm(B, 2) * math.sqrt(ball_volume(Qt))
    if c == 0.0:
        raise DecompositionError("zero atom")
    coeff = _pow2_at_least(c)
    a = GridFunction(B.grid, B.values / coeff)
    out = validate_atom(a, Qt, AtomKind.CLASSICAL_2, tol)
    if not out.passed:
        raise DecompositionError(f"reflected atom failed validation: {out.to_json_dict()}")
    return Decomposition(
        [Term(coeff, a, Qt, AtomKind.CLASSICAL_2)],
        residual=0.0,
        ledger={"reflect_constant": float(c), "coefficient": float(coeff)},
    )


# -- halving/symmetrisation of even-extension decompositions --------------------


def recentre_atom(
    a: GridFunction, Q: ParabolicBall, tol: float = 1e-8
) -> tuple[GridFunction, ParabolicBall, float]:
    """Re-centre a truncated-ball atom onto a ball contained in the closure of X.

    For centres with t_0 >= r^2 the ball already sits in X and nothing
    happens.  Otherwise the support lies in (0, t_0 + r^2) x B(x_0, r), which
    the recentred ball ((r^2, x_0), r) contains; dividing by the volume
    ratio factor (nu(Q~) / nu(Q ∩ X))^(1/2) <= sqrt(2) restores the size
    bound.  Returns (atom, ball, factor).
    """
    s, r = Q.t0, Q.radius
    if s <= 0.0:
        raise DecompositionError("ball centre must have positive time")
    if s >= r * r:
        return a, Q, 1.0
    Qt = ball(r * r, Q.center.x, r)
    tv = truncated_volume(Q)
    factor = math.sqrt(ball_volume(Qt) / tv)
    if factor > math.sqrt(2.0) + tol:
        raise DecompositionError(f"renormalisation factor {factor} exceeds sqrt(2)")
    return a * (1.0 / factor), Qt, factor


def hz_decompose(
    f: GridFunction,
    given: Decomposition,
    tol: float = 1e-8,
    recon_rtol: float = 1e-9,
) -> Decomposition:
    """Turn a decomposition of the even extension of f into one of f on X.

    Each given term atom A is symmetrised to (A + A(-., .)) / 2 — which
    leaves the reconstruction unchanged because the target is even — and
    restricted to X.  The output ball is the input ball when it lies in
    t >= 0, its mirror image when it lies in t <= 0, and the recentred ball
    ((r^2, x_0), r) of equal volume when it straddles.  Coefficients are kept;
    terms whose symmetrisation vanishes (odd atoms) are dropped.
    """
    if not f.grid.over_halfspace():
        raise DecompositionError("f must live on a grid over X")
    fe = even_extend(f)
    if not given.terms:
        raise DecompositionError("given decomposition has no terms")
    if given.terms[0].atom.grid != fe.grid:
        raise DecompositionError("given decomposition lives on the wrong grid")
    recon = given.reconstruct()
    scale = max(lp_norm(fe, 2), 1e-300)
    err = lp_norm(recon - fe, 2) / scale
    if err > recon_rtol:
        raise DecompositionError(
            f"given decomposition does not reconstruct the even extension "
            f"(relative L2 error {err:.3e})"
        )

    cases = {"interior": 0, "reflected": 0, "straddling": 0, "dropped": 0}
    terms: list[Term] = []
    for t in given.terms:
        if t.kind not in (AtomKind.CLASSICAL_2, AtomKind.CLASSICAL_INF):
            raise DecompositionError(f"given term of kind {t.kind} is not classical")
        sym = (t.atom + time_reflect(t.atom)) * 0.5
        a = restrict(sym)
        w = lp_norm(a, 2)
        if w <= 1e-12 * lp_norm(t.atom, 2):
            cases["dropped"] += 1
            continue
        s, r = t.ball.t0, t.ball.radius
        x0 = t.ball.center.x
        if s >= r * r:
            out_ball = t.ball
            cases["interior"] += 1
        elif s <= -r * r:
            out_ball = ball(-s, x0, r)
            cases["reflected"] += 1
        else:
            out_ball = ball(r * r, x0, r)
            cases["straddling"] += 1
        cert = validate_atom(a, out_ball, AtomKind.CLASSICAL_2, tol)
        if not cert.passed:
            raise DecompositionError(
                f"symmetrised term failed validation: {cert.to_json_dict()}"
            )
        terms.append(Term(t.coefficient, a, out_ball, AtomKind.CLASSICAL_2))

    dec = Decomposition(terms, residual=0.0, ledger={"cases": cases})
    out = dec.reconstruct() if terms else GridFunction(f.grid, np.zeros(f.grid.shape))
    dec.residual = lp_norm(f - out, 1)
    return dec


# -- molecules -> atoms ---------------------------------------------------------


def _annulus_ball(Q: ParabolicBall, j: int) -> ParabolicBall:
    """Ball in the closure of X containing 2^(j+1) Q ∩ X (recentred if needed)."""
    R = 2.0 ** (j + 1) * Q.radius
    if Q.t0 >= R * R:
        return dilate(Q, 2.0 ** (j + 1))
    return ball(R * R, Q.center.x, R)


def molecule_decompose(
    m: GridFunction,
    Q: ParabolicBall,
    alpha: float = 0.5,
    J: int = 8,
    tol: float = 1e-8,
    moment_rel: float | None = None,
) -> Decomposition:
    """Split a certified molecule into annulus atoms plus correction atoms.

    With B_j the j-th dyadic annulus of Q (B_1 = 4Q ∩ X), nu_j its *grid*
    measure and mu_j the integral of m over 2^j Q ∩ X, the finite Abel
    identity

        m 1_{2^(J+1)Q ∩ X} = sum_j lambda_j a_j + sum_{j>=2} mu_j b_j
                             + mu_{J+1} 1_{B_J} / nu_J

    holds cell-exactly, where lambda_j = 2^(-j alpha), a_j is the demeaned
    slice (m - mean_{B_j} m) 1_{B_j} / lambda_j and b_j = 1_{B_{j-1}}/nu_{j-1}
    - 1_{B_j}/nu_j.  Only the a_j and b_j become terms; the tail lands in the
    residual, which decays like 2^(-J alpha) for a certified molecule.  Each
    term atom is renormalised by a recorded power-of-two slack so it validates
    as a mean-zero L2 atom on the (recentred) ball around 2^(j+1) Q.
    """
    report = molecule_report(m, Q, alpha=alpha, J=J)
    if not report.certifies(alpha, moment_rel):
        raise DecompositionError(
            f"molecule report does not certify decay alpha={alpha}: "
            f"{report.to_json_dict()}"
        )
    grid = m.grid
    mesh = grid.mesh()
    cm = grid.cell_measure
    vals = m.values
    l1 = lp_norm(m, 1)
    drop = 1e-13 * max(l1, 1.0)

    masks = []
    nus = []
    for j in range(1, J + 1):
        msk = Annulus(Q, j).mask(*mesh)
        cnt = int(msk.sum())
        if cnt == 0:
            raise DecompositionError(f"annulus j={j} contains no grid cells")
        masks.append(msk)
        nus.append(cnt * cm)
    mu = {}
    for j in range(2, J + 2):
        mu[j] = float(vals[dilate(Q, 2.0**j).mask(*mesh)].sum() * cm)

    terms: list[Term] = []
    lambdas, a_slack, b_slack = [], [], []
    for j in range(1, J + 1):
        msk = masks[j - 1]
        lam = 2.0 ** (-j * alpha)
        bll = _annulus_ball(Q, j)
        raw = np.zeros(grid.shape)
        raw[msk] = vals[msk] - vals[msk].mean()
        w = math.sqrt(float((raw**2).sum()) * cm)
        if w * math.sqrt(ball_volume(bll)) <= drop:
            continue
        slack = max(w * math.sqrt(ball_volume(bll)) / lam, 1.0)
        coeff = _pow2_at_least(lam * slack)
        terms.append(
            Term(coeff, GridFunction(grid, raw / coeff), bll, AtomKind.CLASSICAL_2)
        )
        lambdas.append(lam)
        a_slack.append(float(coeff / lam))
        if j == 1:
            continue
        if abs(mu[j]) <= drop:
            continue
        bv = np.zeros(grid.shape)
        bv[masks[j - 2]] = 1.0 / nus[j - 2]
        bv[msk] -= 1.0 / nus[j - 1]
        wb = math.sqrt(float((bv**2).sum()) * cm)
        slack_b = max(wb * math.sqrt(ball_volume(bll)), 1.0)
        coeff_b = math.copysign(_pow2_at_least(abs(mu[j]) * slack_b), mu[j])
        terms.append(
            Term(coeff_b, GridFunction(grid, bv * (mu[j] / coeff_b)), bll, AtomKind.CLASSICAL_2)
        )
        b_slack.append(float(abs(coeff_b) / abs(mu[j])))

    dec = Decomposition(terms, residual=0.0)
    recon = dec.reconstruct() if terms else GridFunction(grid, np.zeros(grid.shape))
    dec.residual = lp_norm(m - recon, 1)
    tail = mu[J + 1]
    mu_const = max(
        (abs(mu[j]) * 2.0 ** (j * alpha) for j in range(2, J + 2)), default=0.0
    )
    dec.ledger.update(
        {
            "alpha": float(alpha),
            "J": int(J),
            "lambda": [float(v) for v in lambdas],
            "mu": {str(j): mu[j] for j in sorted(mu)},
            "a_slack": a_slack,
            "b_slack": b_slack,
            "tail_mu": float(tail),
            "mu_decay_constant": float(mu_const),
            "report": report.to_json_dict(),
        }
    )
    return dec


# -- finite norm bounds ---------------------------------------------------------


@dataclass(frozen=True)
class NormBound:
    """An upper bound for an atomic-decomposition norm, with its witness."""

    value: float
    strategy: str
    ball: ParabolicBall
    moment: float
    decomposition: Decomposition

    def to_json_dict(self) -> dict:
        return {
            "value": float(self.value),
            "strategy": self.strategy,
            "ball": _ball_dict(self.ball),
            "moment": float(self.moment),
            "n_terms": len(self.decomposition.terms),
            "residual": float(self.decomposition.residual),
        }


def _support_box(f: GridFunction):
    """(t_lo, t_hi, centre, rho) cell-edge bounding box of the support of f."""
    grid = f.grid
    idx = np.argwhere(f.values != 0.0)
    if idx.size == 0:
        raise DecompositionError("input is identically zero")
    t_lo = grid.t_edges[int(idx[:, 0].min())]
    t_hi = grid.t_edges[int(idx[:, 0].max()) + 1]
    centre = []
    rho = 0.0
    for ax in range(grid.n):
        lo = grid.x_edges[int(idx[:, 1 + ax].min())]
        hi = grid.x_edges[int(idx[:, 1 + ax].max()) + 1]
        centre.append(0.5 * (lo + hi))
        rho = max(rho, 0.5 * (hi - lo))
    return t_lo, t_hi, tuple(centre), rho


def _direct_bound(f: GridFunction, tol: float) -> NormBound | None:
    """Try to certify f itself as a multiple of a single half-space atom.

    Candidate balls around the support box: the box's own parabolic ball,
    typed by its distance to the wall, and — when that ball is deep enough
    for type (a) but f carries a moment — an inflation just large enough to
    break 4Q ⊆ X, which is type (b) and needs no moment.  The bound is the
    exact normalising coefficient — no rounding, so a unit atom scores <= 1.
    """
    t_lo, t_hi, centre, rho = _support_box(f)
    l2 = lp_norm(f, 2)
    candidates = []
    R0 = max(rho, math.sqrt(0.5 * (t_hi - t_lo)))
    t_c = 0.5 * (t_lo + t_hi)
    Qc = ball(t_c, centre, R0)
    two_in, four_in = halfspace_flags(Qc)
    if four_in:
        candidates.append((Qc, AtomKind.TYPE_A))
        Rb = (1.0 + 1e-9) * math.sqrt(t_c) / 4.0
        candidates.append((ball(t_c, centre, max(R0, Rb)), AtomKind.TYPE_B))
    elif two_in:
        candidates.append((Qc, AtomKind.TYPE_B))
    for Qc, kind in candidates:
        lam = l2 * math.sqrt(ball_volume(Qc))
        a = f * (1.0 / lam)
        cert = validate_atom(a, Qc, kind, tol)
        if cert.passed:
            dec = Decomposition(
                [Term(lam, a, Qc, kind)],
                residual=0.0,
                ledger={"certificate": cert.to_json_dict()},
            )
            dec.residual = lp_norm(f - dec.reconstruct(), 1)
            return NormBound(lam, "direct", Qc, integrate(f), dec)
    return None


def finite_norm_bound(
    f: GridFunction, strategy: str = "auto", tol: float = 1e-8
) -> NormBound:
    """Certified upper bound for the atomic norm of f on X, with a witness.

    strategy "direct" certifies f itself as a multiple of a single atom (the
    tight route when f already is one).  "hz" wraps the even extension in a
    classical atom on the enclosing ball and pushes it through
    ``hz_decompose`` — this needs the integral of f to vanish, and fails
    otherwise.  "r_odd" wraps the odd extension (whose integral always
    vanishes) and restricts it through ``restrict_decompose``.  "auto" tries
    them in that order.
    """
    if strategy not in ("auto", "direct", "hz", "r_odd"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if not f.grid.over_halfspace():
        raise DecompositionError("f must live on a grid over X")
    moment = integrate(f)

    if strategy in ("auto", "direct"):
        nb = _direct_bound(f, tol)
        if nb is not None:
            return nb
        if strategy == "direct":
            raise DecompositionError("f is not a multiple of a single atom")

    t_lo, t_hi, centre, rho = _support_box(f)
    Qh = ball(0.0, centre, max(rho, math.sqrt(t_hi)))
    vol = ball_volume(Qh)

    if strategy in ("auto", "hz"):
        fe = even_extend(f)
        l2 = lp_norm(fe, 2)
        mom_rel = abs(2.0 * moment) / (math.sqrt(vol) * l2)
        if mom_rel > tol:
            if strategy == "hz":
                raise DecompositionError(
                    "f does not have a vanishing moment; the even-extension "
                    f"route does not apply (relative moment {mom_rel:.3e})"
                )
        else:
            lam = _pow2_at_least(l2 * math.sqrt(vol))
            A = GridFunction(fe.grid, fe.values / lam)
            given = Decomposition(
                [Term(lam, A, Qh, AtomKind.CLASSICAL_2)],
                residual=0.0,
                ledger={"origin": "enclosing-ball"},
            )
            dec = hz_decompose(f, given, tol=tol)
            return NormBound(dec.coefficient_sum, "hz", Qh, moment, dec)

    F = odd_extend(f)
    lam = _pow2_at_least(lp_norm(F, 2) * math.sqrt(vol))
    A = GridFunction(F.grid, F.values / lam)
    dec = restrict_decompose(A, Qh, tol=tol)
    value = lam * dec.coefficient_sum
    dec.ledger["odd_extension_coefficient"] = float(lam)
    return NormBound(value, "r_odd", Qh, moment, dec)
