"""Decomposition routes: Whitney covers, restriction, reflection, symmetrisation,
molecule splitting, finite norm bounds."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyheat.atoms import AtomKind, make_atom, make_molecule, validate_atom
from hardyheat.decompose import (
    Decomposition,
    DecompositionError,
    Term,
    WHITNEY_OVERLAP_BOUND,
    _pow2_at_least,
    cover_max_overlap,
    cover_stats,
    finite_norm_bound,
    hz_decompose,
    molecule_decompose,
    recentre_atom,
    reflect_assemble,
    restrict_decompose,
    whitney_cover,
)
from hardyheat.grid import (
    GridFunction,
    SpaceTimeGrid,
    integrate,
    lp_norm,
    read_binary,
    restrict,
    time_reflect,
)
from hardyheat.space import (
    ball,
    ball_volume,
    halfspace_flags,
    scaled_in_halfspace,
    truncated_volume,
)

STRADDLE = ball(1.0, 0.0, 1.0)  # t0 = r^2: intersection reaches the wall


# -- power-of-two rounding ------------------------------------------------------


@pytest.mark.parametrize(
    "s,expect", [(1.0, 1.0), (0.75, 1.0), (2.0, 2.0), (2.1, 4.0), (15.81, 16.0), (0.3, 0.5)]
)
def test_pow2_values(s, expect):
    assert _pow2_at_least(s) == expect


@given(st.floats(min_value=1e-6, max_value=1e6), st.floats(min_value=1e-6, max_value=1e6))
def test_pow2_roundtrip_exact(s, x):
    # dividing and re-multiplying by a power of two is lossless
    p = _pow2_at_least(s)
    m, _ = math.frexp(p)
    assert m == 0.5 and s <= p < 2.0 * s * (1 + 1e-15)
    assert (x / p) * p == x


def test_pow2_rejects_nonpositive():
    with pytest.raises(ValueError):
        _pow2_at_least(0.0)
    with pytest.raises(ValueError):
        _pow2_at_least(math.inf)


# -- Whitney covers -------------------------------------------------------------


def test_whitney_every_ball_has_type_b_geometry():
    cover = whitney_cover(STRADDLE, t_floor=1.0 / 64)
    assert len(cover) > 100
    for b in cover:
        assert scaled_in_halfspace(b, 2.0)
        assert not scaled_in_halfspace(b, 4.0)


def test_whitney_overlap_within_bound():
    cover = whitney_cover(STRADDLE, t_floor=1.0 / 64)
    stats = cover_stats(cover, STRADDLE)
    assert stats["overlap_max"] <= WHITNEY_OVERLAP_BOUND[1]
    assert stats["n_layers"] == 4
    assert stats["volume_ratio"] < 8.0


def _probe_points(grid, Q):
    mesh = grid.mesh()
    qm = Q.mask(*mesh)
    tt = np.broadcast_to(mesh[0], grid.shape)[qm]
    xs = [np.broadcast_to(m, grid.shape)[qm] for m in mesh[1:]]
    return tt, xs


def _covered(cover, tt, xs):
    hit = np.zeros(tt.shape, dtype=bool)
    for b in cover:
        m = np.abs(tt - b.t0) < b.radius**2
        for c, x in zip(b.center.x, xs):
            m &= np.abs(x - c) < b.radius
        hit |= m
    return hit


@pytest.mark.parametrize("layer_ratio", [4.0, 2.0])
def test_whitney_covers_intersection(layer_ratio):
    # halving the layer ratio changes the cover but not the coverage
    grid = SpaceTimeGrid(1, 2.0, 64, 0.0, 2.0, 64)
    tt, xs = _probe_points(grid, STRADDLE)
    cover = whitney_cover(STRADDLE, t_floor=grid.tau / 2, layer_ratio=layer_ratio)
    assert _covered(cover, tt, xs).all()


def test_whitney_rejections():
    with pytest.raises(ValueError):
        whitney_cover(ball(20.0, 0.0, 1.0))  # 2Q already inside X
    with pytest.raises(ValueError):
        whitney_cover(ball(-5.0, 0.0, 1.0))  # no intersection with X
    with pytest.raises(ValueError):
        whitney_cover(STRADDLE, layer_ratio=5.0)
    with pytest.raises(ValueError):
        whitney_cover(STRADDLE, t_floor=10.0)


def test_cover_max_overlap_handmade():
    b = ball(1.0, 0.0, 0.5)
    assert cover_max_overlap([b, b]) == 2
    assert cover_max_overlap([b, ball(9.0, 0.0, 0.5)]) == 1
    assert cover_max_overlap([b, ball(1.0, 0.1, 0.3)]) == 2
    assert cover_max_overlap([]) == 0


@settings(max_examples=15, deadline=None)
@given(
    r=st.floats(min_value=0.5, max_value=1.5),
    frac=st.floats(min_value=-0.9, max_value=0.95),
    x0=st.floats(min_value=-2.0, max_value=2.0),
)
def test_whitney_random_balls_certified(r, frac, x0):
    Q = ball(frac * r * r, x0, r)
    cover = whitney_cover(Q, t_floor=(Q.t0 + r * r) / 30.0)
    # the overlap check runs inside whitney_cover; spot-check geometry here
    for b in cover[:: max(1, len(cover) // 17)]:
        assert scaled_in_halfspace(b, 2.0) and not scaled_in_halfspace(b, 4.0)


# -- restriction of classical atoms ---------------------------------------------


@pytest.fixture(scope="module")
def straddle_setup():
    grid = SpaceTimeGrid(1, 6.0, 96, -4.0, 12.0, 128)
    Q = ball(0.5, 0.25, 1.0)
    A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=3)
    return grid, Q, A


def test_restrict_interior_case():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 20.0, 80)
    Q = ball(17.0, 0.5, 1.0)
    A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=1)
    dec = restrict_decompose(A, Q)
    assert dec.ledger["case"] == "interior"
    (term,) = dec.terms
    assert term.kind is AtomKind.TYPE_A and term.coefficient == 1.0
    assert dec.residual == 0.0
    assert validate_atom(term.atom, Q, AtomKind.TYPE_A).passed


def test_restrict_tiebreak_at_critical_height():
    # t0 = 16 r^2 exactly counts as interior (open-ball convention)
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 20.0, 80)
    Q = ball(16.0, 0.0, 1.0)
    A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=2)
    dec = restrict_decompose(A, Q)
    assert dec.ledger["case"] == "interior"
    assert dec.terms[0].kind is AtomKind.TYPE_A


def test_restrict_band_case():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 20.0, 80)
    Q = ball(5.0, -0.5, 1.0)
    A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=4)
    dec = restrict_decompose(A, Q)
    assert dec.ledger["case"] == "boundary_band"
    (term,) = dec.terms
    assert term.kind is AtomKind.TYPE_B
    assert dec.residual == 0.0


def test_restrict_whitney_residual_exactly_zero(straddle_setup):
    _, Q, A = straddle_setup
    dec = restrict_decompose(A, Q)
    assert dec.ledger["case"] == "whitney"
    assert dec.residual == 0.0
    half = restrict(A)
    assert np.array_equal(dec.reconstruct().values, half.values)


def test_restrict_whitney_terms_validate(straddle_setup):
    _, Q, A = straddle_setup
    dec = restrict_decompose(A, Q)
    assert len(dec.terms) > 10
    for term in dec.terms:
        cert = validate_atom(term.atom, term.ball, term.kind)
        assert cert.passed, cert.to_json_dict()
        assert term.kind is AtomKind.TYPE_B


def test_restrict_whitney_ledger(straddle_setup):
    _, Q, A = straddle_setup
    dec = restrict_decompose(A, Q)
    led = dec.ledger
    assert led["grid_overlap_max"] <= WHITNEY_OVERLAP_BOUND[1]
    assert led["overlap_max"] <= WHITNEY_OVERLAP_BOUND[1]
    # Cauchy-Schwarz: coefsum <= ||A|_X|| sqrt(sum nu(Q_j)); pow2 rounding <= 2x
    assert led["coefficient_constant_raw"] <= math.sqrt(led["volume_ratio"]) + 1e-12
    assert led["coefficient_constant"] <= 2.0 * led["coefficient_constant_raw"] + 1e-12


def test_restrict_constant_bounded_across_inputs():
    grid = SpaceTimeGrid(1, 6.0, 96, -4.0, 12.0, 128)
    rng = np.random.default_rng(0)
    consts = []
    for s in range(12):
        r = float(rng.uniform(0.6, 1.4))
        Q = ball(float(rng.uniform(-0.9, 0.95)) * r * r, float(rng.uniform(-2, 2)), r)
        A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=100 + s)
        consts.append(restrict_decompose(A, Q).ledger["coefficient_constant_raw"])
    assert max(consts) <= 2.0  # bounded independently of the atom


def test_restrict_rejects_non_atom(straddle_setup):
    grid, Q, A = straddle_setup
    with pytest.raises(DecompositionError):
        restrict_decompose(3.0 * A, Q)  # size bound violated
    small = SpaceTimeGrid(1, 0.5, 8, -4.0, 12.0, 128)
    tiny = GridFunction(small, np.zeros(small.shape))
    with pytest.raises(DecompositionError):
        restrict_decompose(tiny, Q)  # grid does not cover Q


def test_restrict_whitney_2d():
    grid = SpaceTimeGrid(2, 0.8, 16, 0.0, 0.14, 14)
    Q = ball(0.09, (0.0, 0.0), 0.2)
    A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=11)
    dec = restrict_decompose(A, Q)
    assert dec.ledger["case"] == "whitney"
    assert dec.residual == 0.0
    assert dec.ledger["overlap_max"] <= WHITNEY_OVERLAP_BOUND[2]
    for term in dec.terms[:: max(1, len(dec.terms) // 7)]:
        assert validate_atom(term.atom, term.ball, term.kind).passed


# -- reflection -----------------------------------------------------------------


@pytest.fixture(scope="module")
def type_b_atom():
    grid = SpaceTimeGrid(1, 8.0, 128, 0.0, 24.0, 96)
    Q = ball(5.0, 1.0, 1.0)
    return make_atom(grid, Q, AtomKind.TYPE_B, seed=7), Q


def test_reflect_assemble_constant(type_b_atom):
    b, Q = type_b_atom
    dec = reflect_assemble(b, Q)
    # ||B||_2 = sqrt2 ||b||_2 and nu(5Q~) = 5^3 nu(Q) in n = 1
    want = math.sqrt(2.0) * 5.0**1.5
    assert dec.ledger["reflect_constant"] == pytest.approx(want, rel=1e-12)
    (term,) = dec.terms
    assert term.coefficient == 16.0  # next power of two
    assert term.ball.t0 == 0.0 and term.ball.radius == 5.0


def test_reflect_assemble_moment_and_validity(type_b_atom):
    b, Q = type_b_atom
    dec = reflect_assemble(b, Q)
    (term,) = dec.terms
    assert abs(integrate(term.atom)) <= 1e-14
    assert validate_atom(term.atom, term.ball, AtomKind.CLASSICAL_2).passed
    assert term.coefficient * lp_norm(term.atom, 2) == pytest.approx(
        math.sqrt(2.0) * lp_norm(b, 2), rel=1e-12
    )


def test_reflect_assemble_rejects_wrong_kind():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 24.0, 96)
    Q = ball(17.0, 0.0, 1.0)
    a = make_atom(grid, Q, AtomKind.TYPE_A, seed=0)
    with pytest.raises(DecompositionError):
        reflect_assemble(a, Q)  # type (a) position, not type (b)


# -- symmetrise + restrict ------------------------------------------------------


def _mirrored_given(grid, specs, seed=5):
    """Decomposition whose reconstruction is even: each atom plus its mirror."""
    rng = np.random.default_rng(seed)
    terms = []
    for t0, x0, r in specs:
        Q = ball(t0, x0, r)
        A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=int(rng.integers(10**6)))
        lam = float(rng.uniform(0.5, 2.0))
        terms.append(Term(lam, A, Q, AtomKind.CLASSICAL_2))
        terms.append(Term(lam, time_reflect(A), ball(-t0, x0, r), AtomKind.CLASSICAL_2))
    return Decomposition(terms, residual=0.0)


@pytest.fixture(scope="module")
def hz_setup():
    grid = SpaceTimeGrid(1, 6.0, 96, -9.0, 9.0, 144)
    given = _mirrored_given(grid, [(4.0, 1.0, 1.2), (0.3, -2.0, 0.9)])
    f = restrict(given.reconstruct())
    return grid, given, f


def test_hz_cases_and_residual(hz_setup):
    _, given, f = hz_setup
    out = hz_decompose(f, given)
    assert out.ledger["cases"] == {
        "interior": 1,
        "reflected": 1,
        "straddling": 2,
        "dropped": 0,
    }
    assert out.residual <= 1e-12
    assert out.coefficient_sum <= given.coefficient_sum + 1e-12


def test_hz_output_balls(hz_setup):
    _, given, f = hz_setup
    out = hz_decompose(f, given)
    for term in out.terms:
        assert term.kind is AtomKind.CLASSICAL_2
        assert term.ball.t0 >= term.ball.radius ** 2  # closure of the ball in X
        cert = validate_atom(term.atom, term.ball, AtomKind.CLASSICAL_2)
        assert cert.passed
    # the straddling input and its mirror both recentre to ((r^2, x0), r)
    strads = [t for t in out.terms if t.ball.t0 == pytest.approx(0.81)]
    assert len(strads) == 2 and all(t.ball.radius == 0.9 for t in strads)


def test_hz_moments_cell_exact(hz_setup):
    _, given, f = hz_setup
    out = hz_decompose(f, given)
    for term in out.terms:
        scale = math.sqrt(ball_volume(term.ball)) * lp_norm(term.atom, 2)
        assert abs(integrate(term.atom)) <= 1e-12 * scale


def test_hz_drops_cancelling_odd_pair():
    grid = SpaceTimeGrid(1, 6.0, 96, -9.0, 9.0, 144)
    given = _mirrored_given(grid, [(4.0, 1.0, 1.2)], seed=9)
    Q = ball(0.2, 2.0, 0.8)
    A = make_atom(grid, Q, AtomKind.CLASSICAL_2, seed=13)
    odd = GridFunction(grid, A.values - time_reflect(A).values)
    w = lp_norm(odd, 2) * math.sqrt(ball_volume(Q))
    given.terms.append(Term(w, GridFunction(grid, odd.values / w), Q, AtomKind.CLASSICAL_2))
    given.terms.append(Term(w, GridFunction(grid, -odd.values / w), Q, AtomKind.CLASSICAL_2))
    f = restrict(given.reconstruct())
    out = hz_decompose(f, given)
    assert out.ledger["cases"]["dropped"] == 2
    assert out.residual <= 1e-12


def test_hz_rejects_bad_given(hz_setup):
    grid, given, f = hz_setup
    broken = Decomposition(
        [Term(t.coefficient * 1.01, t.atom, t.ball, t.kind) for t in given.terms],
        residual=0.0,
    )
    with pytest.raises(DecompositionError):
        hz_decompose(f, broken)
    other = SpaceTimeGrid(1, 6.0, 96, 0.0, 4.0, 32)
    with pytest.raises(DecompositionError):
        hz_decompose(GridFunction(other, np.zeros(other.shape)), given)


# -- recentring -----------------------------------------------------------------


def _truncated_atom(grid, Q):
    mesh = grid.mesh()
    m = Q.mask(*mesh)
    v = np.zeros(grid.shape)
    v[m] = np.sin(np.arange(int(m.sum())))
    v[m] -= v[m].mean()
    f = GridFunction(grid, v)
    return f * (1.0 / (lp_norm(f, 2) * math.sqrt(truncated_volume(Q))))


def test_recentre_low_ball():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 4.0, 64)
    Q = ball(0.5, 0.0, 1.0)
    a = _truncated_atom(grid, Q)
    out, Qt, factor = recentre_atom(a, Q)
    assert (Qt.t0, Qt.radius) == (1.0, 1.0)
    assert factor == pytest.approx(math.sqrt(4.0 / 3.0), rel=1e-12)
    assert factor <= math.sqrt(2.0)
    assert lp_norm(out, 2) * math.sqrt(ball_volume(Qt)) <= 1.0 + 1e-9
    # the recentred ball still contains the support
    assert validate_atom(out, Qt, AtomKind.CLASSICAL_2).support_ok


def test_recentre_untouched_when_high():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 4.0, 64)
    Q = ball(1.5, 0.0, 1.0)
    a = _truncated_atom(grid, Q)
    out, Qt, factor = recentre_atom(a, Q)
    assert out is a and Qt is Q and factor == 1.0


def test_recentre_volume_ratio_at_most_two():
    # nu(Q~)/nu(Q ∩ X) = 2r^2/(s + r^2) <= 2, worst as s -> 0
    for s in (0.01, 0.3, 0.8):
        Q = ball(s, 0.0, 1.0)
        assert ball_volume(ball(1.0, 0.0, 1.0)) / truncated_volume(Q) <= 2.0 / (s + 1.0) * (1 + 1e-12)


def test_recentre_rejects_nonpositive_centre():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 4.0, 64)
    a = GridFunction(grid, np.zeros(grid.shape))
    with pytest.raises(DecompositionError):
        recentre_atom(a, ball(-0.5, 0.0, 1.0))


# -- molecules ------------------------------------------------------------------

MOL_GRID = SpaceTimeGrid(1, 1.8, 72, 0.0, 2.6, 104)
MOL_BALL = ball(0.02, 0.0, 0.05)


def test_molecule_type_a_atom_reduces_to_one_term():
    grid = SpaceTimeGrid(1, 2.2, 88, 0.0, 5.8, 116)
    Q = ball(1.7, 0.0, 0.25)
    a = make_atom(grid, Q, AtomKind.TYPE_A, seed=1)
    dec = molecule_decompose(a, Q, alpha=0.5, J=2)
    assert len(dec.terms) == 1
    assert dec.residual == 0.0


@pytest.mark.parametrize("J", [2, 3, 4])
def test_molecule_residual_tracks_tail(J):
    # worst-case moment profile: running integral c 2^(-J), residual exactly that
    m = make_molecule(MOL_GRID, MOL_BALL, alpha=1.0, J=J, seed=7, moment_profile="geometric")
    dec = molecule_decompose(m, MOL_BALL, alpha=1.0, J=J)
    assert dec.residual == pytest.approx(0.3 * 2.0**-J, rel=1e-10)
    assert dec.ledger["tail_mu"] == pytest.approx(0.3 * 2.0**-J, rel=1e-10)


def test_molecule_zero_profile_reconstructs():
    m = make_molecule(MOL_GRID, MOL_BALL, alpha=0.5, J=4, seed=3, moment_profile="zero")
    dec = molecule_decompose(m, MOL_BALL, alpha=0.5, J=4)
    assert dec.residual <= 1e-13 * lp_norm(m, 1)
    assert len(dec.terms) == 4  # a_j only; every mu_j vanishes


def test_molecule_terms_validate_and_mu_decays():
    m = make_molecule(MOL_GRID, MOL_BALL, alpha=0.5, J=4, seed=2, moment_profile="geometric")
    dec = molecule_decompose(m, MOL_BALL, alpha=0.5, J=4)
    assert len(dec.terms) == 4 + 3  # a_1..a_4 plus b_2..b_4
    for term in dec.terms:
        assert validate_atom(term.atom, term.ball, term.kind).passed
    assert dec.ledger["mu_decay_constant"] <= 0.75
    assert dec.ledger["lambda"] == [2.0 ** (-0.5 * j) for j in range(1, 5)]


def test_molecule_coefficient_sum_stable():
    sums = []
    for s in range(20):
        prof = "geometric" if s % 2 else "zero"
        m = make_molecule(MOL_GRID, MOL_BALL, alpha=0.5, J=4, seed=s, moment_profile=prof)
        sums.append(molecule_decompose(m, MOL_BALL, alpha=0.5, J=4).coefficient_sum)
    assert max(sums) / min(sums) <= 2.0
    assert max(sums) <= 8.0


def test_molecule_rejects_uncertified():
    m = make_molecule(MOL_GRID, MOL_BALL, alpha=0.25, J=4, seed=0)
    with pytest.raises(DecompositionError):
        molecule_decompose(m, MOL_BALL, alpha=0.5, J=4)


def test_molecule_rejects_uncovered_grid():
    m = make_molecule(MOL_GRID, MOL_BALL, alpha=0.5, J=4, seed=0)
    with pytest.raises(ValueError):
        molecule_decompose(m, MOL_BALL, alpha=0.5, J=7)


# -- finite norm bounds ----------------------------------------------------------


@pytest.fixture(scope="module")
def deep_atom():
    grid = SpaceTimeGrid(1, 2.2, 88, 0.0, 5.8, 116)
    return make_atom(grid, ball(1.7, 0.0, 0.25), AtomKind.TYPE_A, seed=1)


def test_bound_single_atom(deep_atom):
    nb = finite_norm_bound(deep_atom)
    assert nb.strategy == "direct"
    assert nb.value <= 1.0 + 1e-8


def test_bound_homogeneity(deep_atom):
    nb = finite_norm_bound(deep_atom)
    nb2 = finite_norm_bound(2.0 * deep_atom)
    assert nb2.value == pytest.approx(2.0 * nb.value, rel=1e-12)


@pytest.fixture(scope="module")
def box_function():
    grid = SpaceTimeGrid(1, 4.0, 64, 0.0, 4.0, 32)
    tt, xx = grid.mesh()
    return GridFunction(grid, ((tt < 1.0) & (np.abs(xx) < 1.0)).astype(float))


def test_bound_box_fails_on_even_route(box_function):
    with pytest.raises(DecompositionError, match="vanishing moment"):
        finite_norm_bound(box_function, strategy="hz")
    with pytest.raises(DecompositionError):
        finite_norm_bound(box_function, strategy="direct")


def test_bound_box_finite_via_odd_route(box_function):
    nb = finite_norm_bound(box_function, strategy="r_odd")
    assert nb.strategy == "r_odd"
    assert math.isfinite(nb.value) and 0.0 < nb.value < 10.0
    assert nb.decomposition.residual == 0.0
    auto = finite_norm_bound(box_function)
    assert auto.strategy == "r_odd" and auto.value == nb.value


def test_bound_hz_route_on_mean_zero_input(deep_atom):
    nb = finite_norm_bound(deep_atom, strategy="hz")
    assert nb.strategy == "hz"
    assert math.isfinite(nb.value)
    assert nb.decomposition.residual <= 1e-12


def test_bound_rejects():
    grid = SpaceTimeGrid(1, 1.0, 8, 0.0, 1.0, 8)
    with pytest.raises(ValueError):
        finite_norm_bound(GridFunction(grid, np.ones(grid.shape)), strategy="huh")
    with pytest.raises(DecompositionError):
        finite_norm_bound(GridFunction(grid, np.zeros(grid.shape)))


# -- container mechanics ---------------------------------------------------------


def test_decomposition_json_roundtrip(straddle_setup):
    _, Q, A = straddle_setup
    dec = restrict_decompose(A, Q)
    blob = json.dumps(dec.to_json_dict(), sort_keys=True)
    back = json.loads(blob)
    assert back["n_terms"] == len(dec.terms)
    assert back["residual"] == 0.0
    assert back["terms"][0]["kind"] == "type_b"
    assert set(back["terms"][0]["ball"]) == {"t0", "x0", "radius"}


def test_decomposition_spill_atoms(tmp_path, type_b_atom):
    b, Q = type_b_atom
    dec = reflect_assemble(b, Q)
    paths = dec.spill_atoms(tmp_path)
    assert len(paths) == 1
    back = read_binary(paths[0])
    assert np.array_equal(back.values, dec.terms[0].atom.values)


def test_reconstruct_guards():
    with pytest.raises(DecompositionError):
        Decomposition([], residual=0.0).reconstruct()
    g1 = SpaceTimeGrid(1, 1.0, 4, 0.0, 1.0, 4)
    g2 = SpaceTimeGrid(1, 1.0, 8, 0.0, 1.0, 8)
    terms = [
        Term(1.0, GridFunction(g1, np.zeros(g1.shape)), STRADDLE, AtomKind.CLASSICAL_2),
        Term(1.0, GridFunction(g2, np.zeros(g2.shape)), STRADDLE, AtomKind.CLASSICAL_2),
    ]
    with pytest.raises(DecompositionError):
        Decomposition(terms, residual=0.0).reconstruct()
